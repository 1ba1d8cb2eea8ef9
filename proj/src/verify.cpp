#include "stac/verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "stac/metrics.hpp"
#include "stac/phantom.hpp"
#include "stac/rng.hpp"
#include "stac/sdf.hpp"
#include "stac/warp.hpp"

namespace stac {

namespace {

std::string fmt(const char* format, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, format, a, b);
    return buf;
}

LabelVolume random_mask(int n, std::uint64_t seed, double density) {
    LabelVolume mask(GridShape{n, n, n, 1, 1, 1});
    for (std::size_t i = 0; i < mask.data.size(); ++i)
        mask.data[i] = uniform01(seed, i) < density ? 1 : 0;
    return mask;
}

CheckResult check_edt_vs_brute_force() {
    CheckResult r{"edt_brute_force_equivalence", true, ""};
    int tested = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const double density = 0.02 + 0.04 * static_cast<double>(seed);
        LabelVolume mask = random_mask(12, seed * 977, density);

        std::size_t fg = 0;
        for (auto v : mask.data) fg += v;
        if (fg == 0) mask.data[0] = 1;
        if (fg == mask.data.size()) mask.data[0] = 0;

        const SdfVolume fast = signed_distance(mask, {1});
        const SdfVolume slow = brute_force_sdf(mask, {1});
        for (std::size_t i = 0; i < fast.values.data.size(); ++i)
            if (fast.values.data[i] != slow.values.data[i]) {
                r.pass = false;
                r.detail = "mismatch at linear index " + std::to_string(i);
                return r;
            }
        ++tested;
    }
    r.detail = std::to_string(tested) + " random 12^3 masks, exact match";
    return r;
}

CheckResult check_sphere_sdf() {
    CheckResult r{"sphere_sdf_fidelity", false, ""};
    const Phantom ph = generate(make_preset("sphere", GridShape{64, 64, 64, 1, 1, 1}, 7));
    const SdfVolume phi = signed_distance(ph.label, {1});
    const AnalyticSdf& oracle = ph.analytic_sdf.at(1);

    double max_err = 0.0;
    const GridShape& s = ph.label.shape;
    for (int z = 0; z < s.nz; ++z)
        for (int y = 0; y < s.ny; ++y)
            for (int x = 0; x < s.nx; ++x) {
                const double want = oracle({double(x), double(y), double(z)});
                const double got = phi.values.at(x, y, z);
                max_err = std::max(max_err, std::abs(got - want));
            }
    r.pass = max_err <= 1.0;
    r.detail = fmt("max |phi - analytic| = %.4f (limit %.1f)", max_err, 1.0);
    return r;
}

CheckResult check_identity_warp() {
    CheckResult r{"identity_warp", false, ""};
    const Phantom ph =
        generate(make_preset("multi_organ", GridShape{64, 64, 64, 1, 1, 1}, 11));
    AugmentParams params;
    params.alpha = 0.0;
    const AugmentedPair out = augment_pair(ph.image, ph.label, {2}, params);
    r.pass = out.image.data == ph.image.data && out.label.data == ph.label.data;
    r.detail = r.pass ? "alpha=0 output is bit-identical to the input"
                      : "alpha=0 output differs from the input";
    return r;
}

CheckResult check_enlargement() {
    CheckResult r{"enlargement_magnitude", false, ""};
    const Phantom ph = generate(make_preset("sphere", GridShape{64, 64, 64, 1, 1, 1}, 3));
    const AugmentedPair out = augment_pair(ph.image, ph.label, {1}, AugmentParams{});

    const auto equivalent_radius = [](const LabelVolume& label) {
        std::size_t fg = 0;
        for (auto v : label.data) fg += v != 0;
        return std::cbrt(3.0 * static_cast<double>(fg) / (4.0 * std::numbers::pi));
    };
    const double gain = equivalent_radius(out.label) - equivalent_radius(ph.label);
    r.pass = std::abs(gain - 0.5671) <= 0.15;
    r.detail = fmt("equivalent radius gain %.4f voxels (expected %.4f +- 0.15)", gain, 0.5671);
    return r;
}

} // namespace

std::vector<CheckResult> run_verify_suite() {
    return {check_edt_vs_brute_force(), check_sphere_sdf(), check_identity_warp(),
            check_enlargement()};
}

} // namespace stac
