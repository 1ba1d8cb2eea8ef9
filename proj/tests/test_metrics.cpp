#include <doctest.h>

#include <cmath>

#include "stac/metrics.hpp"
#include "stac/phantom.hpp"
#include "stac/warp.hpp"
#include "test_support.hpp"

using namespace stac;
using namespace stac_test;

namespace {

LabelVolume ball(int n, double cx, double cy, double cz, double r, std::uint8_t cls) {
    LabelVolume out(unit_grid(n));
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy) +
                                  (z - cz) * (z - cz);
                if (d2 <= r * r) out.at(x, y, z) = cls;
            }
    return out;
}

// All-pairs oracle over 6-connectivity surface voxels.
double brute_force_asd(const LabelVolume& a, const LabelVolume& b, std::uint8_t cls) {
    const GridShape& s = a.shape;
    auto surface = [&](const LabelVolume& vol) {
        std::vector<std::array<int, 3>> out;
        for (int z = 0; z < s.nz; ++z)
            for (int y = 0; y < s.ny; ++y)
                for (int x = 0; x < s.nx; ++x) {
                    if (vol.at(x, y, z) != cls) continue;
                    const bool boundary =
                        (x > 0 && vol.at(x - 1, y, z) != cls) ||
                        (x < s.nx - 1 && vol.at(x + 1, y, z) != cls) ||
                        (y > 0 && vol.at(x, y - 1, z) != cls) ||
                        (y < s.ny - 1 && vol.at(x, y + 1, z) != cls) ||
                        (z > 0 && vol.at(x, y, z - 1) != cls) ||
                        (z < s.nz - 1 && vol.at(x, y, z + 1) != cls);
                    if (boundary) out.push_back({x, y, z});
                }
        return out;
    };
    const auto sa = surface(a);
    const auto sb = surface(b);
    auto mean_min = [](const std::vector<std::array<int, 3>>& from,
                       const std::vector<std::array<int, 3>>& to) {
        double sum = 0.0;
        for (const auto& p : from) {
            double best = 1e300;
            for (const auto& q : to) {
                const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
                best = std::min(best, dx * dx + dy * dy + dz * dz);
            }
            sum += std::sqrt(best);
        }
        return sum / static_cast<double>(from.size());
    };
    return 0.5 * (mean_min(sa, sb) + mean_min(sb, sa));
}

} // namespace

TEST_CASE("histogram of a uniform background") {
    LabelVolume label(unit_grid(4));
    const ClassStats stats = class_histogram(label);
    CHECK(stats.counts.size() == 1);
    CHECK(stats.fractions.at(0) == doctest::Approx(1.0));
    CHECK(stats.imbalance_ratio == 0.0);
}

TEST_CASE("histogram counts an 8-voxel class out of 4^3") {
    LabelVolume label(unit_grid(4));
    for (int z = 0; z < 2; ++z)
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 2; ++x) label.at(x, y, z) = 1;
    const ClassStats stats = class_histogram(label);
    CHECK(stats.counts.at(1) == 8);
    CHECK(stats.fractions.at(1) == doctest::Approx(0.125));
}

TEST_CASE("histogram conserves the voxel count and normalizes fractions") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        LabelVolume label(unit_grid(8));
        for (std::size_t i = 0; i < label.data.size(); ++i)
            label.data[i] = static_cast<std::uint8_t>(splitmix64(seed * 1000 + i) % 7);
        const ClassStats stats = class_histogram(label);
        std::uint64_t total = 0;
        double frac = 0.0;
        for (const auto& [cls, count] : stats.counts) total += count;
        for (const auto& [cls, f] : stats.fractions) frac += f;
        CHECK(total == label.shape.voxel_count());
        CHECK(frac == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("minority selection by fraction and by bottom-k") {
    LabelVolume label(GridShape{10, 10, 10, 1, 1, 1});
    // class 1: 300 voxels, class 2: 5 voxels
    for (int i = 0; i < 300; ++i) label.data[i] = 1;
    for (int i = 300; i < 305; ++i) label.data[i] = 2;
    const ClassStats stats = class_histogram(label);

    CHECK(select_minority(stats, MinorityPolicy::fraction(0.01)) ==
          std::vector<std::uint8_t>{2});
    CHECK(select_minority(stats, MinorityPolicy::bottom(1)) ==
          std::vector<std::uint8_t>{2});
    CHECK(select_minority(stats, MinorityPolicy::bottom(2)) ==
          std::vector<std::uint8_t>{1, 2});
    // bottom beyond the class count returns every foreground class
    CHECK(select_minority(stats, MinorityPolicy::bottom(10)) ==
          std::vector<std::uint8_t>{1, 2});
    // background is never selected
    CHECK(select_minority(stats, MinorityPolicy::fraction(1.0)) ==
          std::vector<std::uint8_t>{1, 2});
}

TEST_CASE("minority selection breaks count ties by ascending class ID") {
    LabelVolume label(GridShape{10, 10, 10, 1, 1, 1});
    for (int i = 0; i < 100; ++i) label.data[i] = 4;
    for (int i = 100; i < 200; ++i) label.data[i] = 1;
    const ClassStats stats = class_histogram(label);
    CHECK(select_minority(stats, MinorityPolicy::bottom(1)) ==
          std::vector<std::uint8_t>{1});
}

TEST_CASE("minority selection depends only on relative counts") {
    LabelVolume small(GridShape{4, 4, 4, 1, 1, 1});
    small.data[0] = 1;
    small.data[1] = 2;
    small.data[2] = 2;
    LabelVolume big(GridShape{8, 8, 8, 1, 1, 1});
    for (int i = 0; i < 8; ++i) big.data[i] = 1;
    for (int i = 8; i < 24; ++i) big.data[i] = 2;

    const MinorityPolicy policy = MinorityPolicy::bottom(1);
    CHECK(select_minority(class_histogram(small), policy) ==
          select_minority(class_histogram(big), policy));
}

TEST_CASE("minority selection needs a foreground class") {
    const ClassStats stats = class_histogram(LabelVolume(unit_grid(4)));
    expect_error(Error::Kind::NoForeground,
                 [&] { (void)select_minority(stats, MinorityPolicy::bottom(1)); });
}

TEST_CASE("minority policy parsing") {
    const MinorityPolicy f = MinorityPolicy::parse("fraction:0.05");
    CHECK(f.mode == MinorityPolicy::Mode::Fraction);
    CHECK(f.threshold == doctest::Approx(0.05));
    const MinorityPolicy b = MinorityPolicy::parse("bottom:3");
    CHECK(b.mode == MinorityPolicy::Mode::BottomK);
    CHECK(b.k == 3);
    expect_error(Error::Kind::InvalidArgument,
                 [] { (void)MinorityPolicy::parse("nonsense"); });
    expect_error(Error::Kind::InvalidArgument,
                 [] { (void)MinorityPolicy::parse("bottom:0"); });
    expect_error(Error::Kind::InvalidArgument,
                 [] { (void)MinorityPolicy::parse("fraction:zzz"); });
}

TEST_CASE("dice on identical, disjoint, and half-overlapping masks") {
    LabelVolume a(unit_grid(8)), b(unit_grid(8));
    // |A| = |B| = 4, |A∩B| = 2
    a.data[0] = a.data[1] = a.data[2] = a.data[3] = 1;
    b.data[2] = b.data[3] = b.data[4] = b.data[5] = 1;
    CHECK(dice(a, a, 1) == doctest::Approx(1.0));
    CHECK(dice(a, b, 1) == doctest::Approx(0.5));
    CHECK(dice(a, b, 1) == dice(b, a, 1));

    LabelVolume c(unit_grid(8)), d(unit_grid(8));
    c.data[0] = c.data[1] = c.data[2] = c.data[3] = 1;
    d.data[10] = d.data[11] = d.data[12] = d.data[13] = 1;
    CHECK(dice(c, d, 1) == doctest::Approx(0.0));

    // both empty -> 1.0 by convention
    CHECK(dice(c, d, 7) == doctest::Approx(1.0));
}

TEST_CASE("dice rejects mismatched shapes") {
    LabelVolume a(unit_grid(4)), b(unit_grid(5));
    expect_error(Error::Kind::ShapeMismatch, [&] { (void)dice(a, b, 1); });
}

TEST_CASE("ASD of a mask with itself is zero") {
    const LabelVolume a = ball(32, 16, 16, 16, 8, 1);
    CHECK(average_surface_distance(a, a, 1) == doctest::Approx(0.0));
}

TEST_CASE("ASD of two points three voxels apart is 3") {
    LabelVolume a(unit_grid(8)), b(unit_grid(8));
    a.at(2, 4, 4) = 1;
    b.at(5, 4, 4) = 1;
    CHECK(average_surface_distance(a, b, 1) == doctest::Approx(3.0));
    CHECK(average_surface_distance(b, a, 1) == doctest::Approx(3.0));
}

TEST_CASE("ASD of concentric spheres matches the brute-force oracle") {
    const LabelVolume a = ball(64, 32, 32, 32, 10, 1);
    const LabelVolume b = ball(64, 32, 32, 32, 12, 1);
    const double got = average_surface_distance(a, b, 1);
    const double oracle = brute_force_asd(a, b, 1);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(std::abs(got - 2.0) <= 0.3);
}

TEST_CASE("ASD requires both surfaces to exist") {
    const LabelVolume a = ball(16, 8, 8, 8, 4, 1);
    LabelVolume empty(unit_grid(16));
    expect_error(Error::Kind::EmptySurface,
                 [&] { (void)average_surface_distance(a, empty, 1); });
    expect_error(Error::Kind::EmptySurface,
                 [&] { (void)average_surface_distance(empty, a, 1); });
}

TEST_CASE("augmentation strictly raises the minority fraction on the phantom") {
    const Phantom ph = generate(make_preset("multi_organ", unit_grid(64), 23));
    const AugmentedPair out = augment_pair(ph.image, ph.label, {2}, AugmentParams{});
    CHECK(class_histogram(out.label).fractions.at(2) >
          class_histogram(ph.label).fractions.at(2));
}
