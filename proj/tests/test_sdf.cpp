#include <doctest.h>

#include <cmath>

#include "stac/phantom.hpp"
#include "stac/sdf.hpp"
#include "test_support.hpp"

using namespace stac;
using namespace stac_test;

namespace {

// Independent all-pairs oracle: squared distance to the nearest foreground
// voxel center, physical units.
ScalarVolume brute_force_edt_squared(const LabelVolume& mask) {
    const GridShape& s = mask.shape;
    struct P {
        double x, y, z;
    };
    std::vector<P> fg;
    for (int z = 0; z < s.nz; ++z)
        for (int y = 0; y < s.ny; ++y)
            for (int x = 0; x < s.nx; ++x)
                if (mask.at(x, y, z)) fg.push_back({x * s.sx, y * s.sy, z * s.sz});

    ScalarVolume out(s);
    std::size_t i = 0;
    for (int z = 0; z < s.nz; ++z)
        for (int y = 0; y < s.ny; ++y)
            for (int x = 0; x < s.nx; ++x, ++i) {
                const P p{x * s.sx, y * s.sy, z * s.sz};
                double best = 1e300;
                for (const P& q : fg) {
                    const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
                    best = std::min(best, dx * dx + dy * dy + dz * dz);
                }
                out.data[i] = static_cast<float>(best);
            }
    return out;
}

} // namespace

TEST_CASE("edt_squared matches the 1D analytic row") {
    LabelVolume mask(GridShape{5, 1, 1, 1, 1, 1});
    mask.data = {0, 0, 1, 0, 0};
    const ScalarVolume d2 = edt_squared(mask);
    const std::vector<float> want{4, 1, 0, 1, 4};
    CHECK(d2.data == want);
}

TEST_CASE("edt_squared of an all-foreground mask is all zeros") {
    LabelVolume mask(unit_grid(4), 1);
    const ScalarVolume d2 = edt_squared(mask);
    for (float v : d2.data) CHECK(v == 0.0f);
}

TEST_CASE("edt_squared rejects an empty mask") {
    LabelVolume mask(unit_grid(4));
    expect_error(Error::Kind::EmptyMask, [&] { (void)edt_squared(mask); });
}

TEST_CASE("edt_squared equals brute force exactly on random 16^3 masks") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        LabelVolume mask = random_mask(16, seed * 131, 0.01 + 0.08 * seed);
        if (foreground_count(mask) == 0) mask.data[seed] = 1;
        const ScalarVolume fast = edt_squared(mask);
        const ScalarVolume slow = brute_force_edt_squared(mask);
        CHECK(fast.data == slow.data); // integer-exact, zero tolerance
    }
}

TEST_CASE("edt_squared is exact for anisotropic spacing") {
    // single site at the center of a 3x3x3 grid with spacing (1,1,2)
    LabelVolume mask(GridShape{3, 3, 3, 1.0, 1.0, 2.0});
    mask.at(1, 1, 1) = 1;
    const ScalarVolume d2 = edt_squared(mask);
    CHECK(d2.at(0, 1, 1) == 1.0f);
    CHECK(d2.at(1, 0, 1) == 1.0f);
    CHECK(d2.at(1, 1, 0) == 4.0f); // one z step = 2 mm
    CHECK(d2.at(0, 0, 0) == 6.0f); // 1 + 1 + 4
}

TEST_CASE("signed_distance of a single voxel matches hand geometry") {
    LabelVolume label(unit_grid(3));
    label.at(0, 0, 0) = 1;
    const SdfVolume phi = signed_distance(label, {1});
    CHECK(phi.values.at(0, 0, 0) == -1.0f);
    CHECK(phi.values.at(1, 0, 0) == 1.0f);
    CHECK(phi.values.at(0, 1, 0) == 1.0f);
    CHECK(phi.values.at(1, 1, 1) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("signed_distance respects anisotropic spacing on a slab") {
    LabelVolume label(GridShape{3, 3, 3, 1.0, 1.0, 2.0});
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) label.at(x, y, 1) = 1;
    const SdfVolume phi = signed_distance(label, {1});
    CHECK(phi.values.at(1, 1, 0) == 2.0f);  // out-of-slab face neighbor in z
    CHECK(phi.values.at(1, 1, 2) == 2.0f);
    CHECK(phi.values.at(1, 1, 1) == -2.0f); // nearest outside center one z step away
}

TEST_CASE("signed_distance sign partition matches membership") {
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        LabelVolume mask = random_mask(10, seed, 0.3);
        if (foreground_count(mask) == 0) mask.data[0] = 1;
        if (foreground_count(mask) == mask.data.size()) mask.data[0] = 0;
        const SdfVolume phi = signed_distance(mask, {1});
        for (std::size_t i = 0; i < mask.data.size(); ++i) {
            if (mask.data[i])
                CHECK(phi.values.data[i] < 0.0f);
            else
                CHECK(phi.values.data[i] > 0.0f);
        }
    }
}

TEST_CASE("signed_distance flips globally when the set is complemented") {
    LabelVolume mask = random_mask(8, 42, 0.4);
    if (foreground_count(mask) == 0) mask.data[0] = 1;
    LabelVolume inverse(mask.shape);
    for (std::size_t i = 0; i < mask.data.size(); ++i) inverse.data[i] = 1 - mask.data[i];

    const SdfVolume a = signed_distance(mask, {1});
    const SdfVolume b = signed_distance(inverse, {1});
    for (std::size_t i = 0; i < a.values.data.size(); ++i)
        CHECK(a.values.data[i] == -b.values.data[i]);
}

TEST_CASE("signed_distance error cases") {
    LabelVolume empty(unit_grid(4));
    expect_error(Error::Kind::EmptyMask, [&] { (void)signed_distance(empty, {1}); });
    expect_error(Error::Kind::EmptyMask, [&] { (void)signed_distance(empty, {}); });

    LabelVolume full(unit_grid(4), 1);
    expect_error(Error::Kind::FullMask, [&] { (void)signed_distance(full, {1}); });
}

TEST_CASE("brute_force_sdf agrees exactly with signed_distance") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        LabelVolume mask = random_mask(16, seed * 7919, 0.05 + 0.1 * seed);
        if (foreground_count(mask) == 0) mask.data[0] = 1;
        if (foreground_count(mask) == mask.data.size()) mask.data[0] = 0;
        const SdfVolume fast = signed_distance(mask, {1});
        const SdfVolume slow = brute_force_sdf(mask, {1});
        CHECK(fast.values.data == slow.values.data);
    }
}

TEST_CASE("brute_force_sdf guards and error parity") {
    LabelVolume big(unit_grid(33));
    big.data[0] = 1;
    expect_error(Error::Kind::TooLarge, [&] { (void)brute_force_sdf(big, {1}); });

    LabelVolume full(unit_grid(4), 1);
    expect_error(Error::Kind::FullMask, [&] { (void)brute_force_sdf(full, {1}); });
    expect_error(Error::Kind::FullMask, [&] { (void)signed_distance(full, {1}); });
}

TEST_CASE("sphere SDF stays within one voxel of the analytic distance") {
    const Phantom ph = generate(make_preset("sphere", unit_grid(64), 42));
    const SdfVolume phi = signed_distance(ph.label, {1});
    const AnalyticSdf& oracle = ph.analytic_sdf.at(1);
    double max_err = 0.0;
    for (int z = 0; z < 64; ++z)
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) {
                const double want = oracle({double(x), double(y), double(z)});
                max_err = std::max(
                    max_err, std::abs(phi.values.at(x, y, z) - want));
            }
    CHECK(max_err <= 1.0);
}

TEST_CASE("evolve_level_set_step with zero speed is the identity") {
    const Phantom ph = generate(make_preset("sphere", unit_grid(32), 1));
    const SdfVolume phi = signed_distance(ph.label, {1});
    const ScalarVolume speed(phi.values.shape, 0.0f);
    const ScalarVolume next = evolve_level_set_step(phi, speed, 0.1);
    CHECK(next.data == phi.values.data);
}

TEST_CASE("evolve_level_set_step advances a unit ramp pointwise") {
    SdfVolume phi{ScalarVolume(unit_grid(8))};
    for (int z = 0; z < 8; ++z)
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x)
                phi.values.at(x, y, z) = static_cast<float>(x) - 3.5f;

    for (float v : {1.0f, -1.0f}) {
        const ScalarVolume speed(phi.values.shape, v);
        const double dt = 0.25;
        const ScalarVolume next = evolve_level_set_step(phi, speed, dt);
        for (std::size_t i = 0; i < next.data.size(); ++i)
            CHECK(next.data[i] ==
                  doctest::Approx(phi.values.data[i] + dt * v).epsilon(1e-6));
    }
}

TEST_CASE("evolve_level_set_step grows a sphere at the expected rate") {
    // Sampled analytic sphere SDF: continuous values near zero make the
    // voxel-counting radius estimate sensitive to a quarter-voxel motion.
    const Phantom ph = generate(make_preset("sphere", unit_grid(64), 9));
    SdfVolume phi{ScalarVolume(unit_grid(64))};
    const AnalyticSdf& sdf = ph.analytic_sdf.at(1);
    for (int z = 0; z < 64; ++z)
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                phi.values.at(x, y, z) =
                    static_cast<float>(sdf({double(x), double(y), double(z)}));

    const ScalarVolume speed(phi.values.shape, -1.0f); // d(phi)/dt = -|grad phi|
    const double dt = 0.25;
    const ScalarVolume next = evolve_level_set_step(phi, speed, dt);

    std::size_t before = 0, after = 0;
    for (float v : phi.values.data) before += v < 0.0f;
    for (float v : next.data) after += v < 0.0f;
    const double growth = equivalent_radius(after) - equivalent_radius(before);
    CHECK(after > before);
    CHECK(growth == doctest::Approx(dt).epsilon(0.4)); // voxel counting is coarse
}

TEST_CASE("evolve_level_set_step enforces the CFL bound") {
    SdfVolume phi{ScalarVolume(unit_grid(4), 1.0f)};
    const ScalarVolume speed(phi.values.shape, 2.0f);
    expect_error(Error::Kind::CflViolation,
                 [&] { (void)evolve_level_set_step(phi, speed, 0.3); }); // 0.6 > 0.5
    CHECK_NOTHROW((void)evolve_level_set_step(phi, speed, 0.25));       // 0.5 <= 0.5
}
