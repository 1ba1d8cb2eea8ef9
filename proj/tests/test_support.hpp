#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <doctest.h>

#include "stac/errors.hpp"
#include "stac/rng.hpp"
#include "stac/volume.hpp"

namespace stac_test {

/// Runs fn and checks that it throws a stac::Error of the given kind.
inline void expect_error(stac::Error::Kind kind, const std::function<void()>& fn) {
    bool threw = false;
    try {
        fn();
    } catch (const stac::Error& e) {
        threw = true;
        CHECK(e.kind() == kind);
    }
    CHECK_MESSAGE(threw, "expected a stac::Error");
}

inline stac::GridShape unit_grid(int n) { return {n, n, n, 1.0, 1.0, 1.0}; }

inline stac::LabelVolume random_mask(int n, std::uint64_t seed, double density) {
    stac::LabelVolume mask(unit_grid(n));
    for (std::size_t i = 0; i < mask.data.size(); ++i)
        mask.data[i] = stac::uniform01(seed, i) < density ? 1 : 0;
    return mask;
}

inline std::size_t foreground_count(const stac::LabelVolume& label) {
    std::size_t c = 0;
    for (auto v : label.data) c += v != 0;
    return c;
}

inline double equivalent_radius(std::size_t voxels) {
    return std::cbrt(3.0 * static_cast<double>(voxels) / (4.0 * std::numbers::pi));
}

/// Unique fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("stac_test_" + tag + "_" + std::to_string(++counter));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace stac_test
