#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "stac/volume.hpp"

namespace stac {

enum class ShapeKind { Sphere, Ellipsoid, Box };

/// One analytic shape. Centers are in voxel-index coordinates; radii,
/// semi-axes and half-extents are in millimeters, which equals voxel units
/// at unit spacing. Membership and distances are evaluated in physical
/// space, so the shape stays a true sphere/ellipsoid/box on anisotropic
/// grids.
struct PhantomShape {
    ShapeKind kind = ShapeKind::Sphere;
    std::uint8_t class_id = 1;
    std::array<double, 3> center{0, 0, 0};
    /// Sphere: extent[0] is the radius. Ellipsoid: semi-axes. Box: half-extents.
    std::array<double, 3> extent{0, 0, 0};
};

struct IntensityModel {
    double background_mean = 20.0;
    std::map<std::uint8_t, double> class_means; // absent classes default to 100
    double noise_amplitude = 5.0;

    double mean_for(std::uint8_t cls) const {
        if (cls == 0) return background_mean;
        const auto it = class_means.find(cls);
        return it == class_means.end() ? 100.0 : it->second;
    }
};

/// Deterministic synthetic volume description. The seed fully determines the
/// generated image (counter-based noise), so identical specs reproduce
/// bit-identical volumes on any platform.
struct PhantomSpec {
    GridShape grid{64, 64, 64, 1.0, 1.0, 1.0};
    std::vector<PhantomShape> shapes;
    IntensityModel intensity;
    std::uint64_t seed = 0;
};

/// Analytic signed distance (mm) of one class' shape union, evaluated at a
/// continuous index-space point. Sphere and box are closed-form; the
/// ellipsoid uses a numeric closest-point solve that is exact outside and
/// near the boundary and approximate only deep inside near the medial axis.
using AnalyticSdf = std::function<double(const GridPoint&)>;

struct Phantom {
    ScalarVolume image;
    LabelVolume label;
    std::map<std::uint8_t, AnalyticSdf> analytic_sdf;
};

/// Rasterizes a phantom: label by voxel-center membership, image as per-class
/// mean plus seeded uniform noise in [-amp, amp).
///
/// Throws SpecInvalid when a shape breaks the 2-voxel margin, has a
/// non-positive extent, uses class 0, or overlaps a shape of another class.
Phantom generate(const PhantomSpec& spec);

/// Named presets: "sphere" (R=20 class 1), "ellipsoid" (20,14,10),
/// "box" (16,12,10), "multi_organ" (R=24 class 1 + R=6 class 2 on the
/// diagonal). Geometry values hold for 64-voxel grids and scale with the
/// smallest grid axis. Throws InvalidArgument for unknown names.
PhantomSpec make_preset(const std::string& name, const GridShape& grid,
                        std::uint64_t seed);

} // namespace stac
