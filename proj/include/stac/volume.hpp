#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "stac/errors.hpp"

namespace stac {

/// Grid geometry shared by every volume type: voxel counts per axis plus the
/// physical voxel spacing in millimeters. Voxel centers sit at integer
/// coordinates in index space, so index (x,y,z) corresponds to the physical
/// location (x*sx, y*sy, z*sz). Continuous sampling happens in index units;
/// physical displacements are converted by dividing per axis by the spacing.
struct GridShape {
    int nx = 0, ny = 0, nz = 0;
    double sx = 1.0, sy = 1.0, sz = 1.0;

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nz);
    }

    /// Linear index, x-fastest order.
    std::size_t index(int x, int y, int z) const {
        return (static_cast<std::size_t>(z) * static_cast<std::size_t>(ny) +
                static_cast<std::size_t>(y)) *
                   static_cast<std::size_t>(nx) +
               static_cast<std::size_t>(x);
    }

    double min_spacing() const { return std::min(sx, std::min(sy, sz)); }

    bool operator==(const GridShape&) const = default;

    void validate() const {
        if (nx <= 0 || ny <= 0 || nz <= 0)
            fail(Error::Kind::InvalidArgument, "grid dims must be positive");
        if (!(sx > 0.0) || !(sy > 0.0) || !(sz > 0.0))
            fail(Error::Kind::InvalidArgument, "voxel spacing must be positive");
    }
};

/// Continuous location in voxel-index units (voxel centers at integers).
struct GridPoint {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Small vector for gradients and displacements, physical (mm) components.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// 3D scalar field. Values are stored as 32-bit floats; all arithmetic on
/// them accumulates in double. Houses images, signed distance fields and
/// weight fields.
struct ScalarVolume {
    GridShape shape;
    std::vector<float> data;

    ScalarVolume() = default;
    ScalarVolume(const GridShape& s, float fill = 0.0f) : shape(s) {
        shape.validate();
        data.assign(shape.voxel_count(), fill);
    }

    float at(int x, int y, int z) const { return data[shape.index(x, y, z)]; }
    float& at(int x, int y, int z) { return data[shape.index(x, y, z)]; }
};

/// 3D label field, one class ID per voxel. Background is class 0.
struct LabelVolume {
    GridShape shape;
    std::vector<std::uint8_t> data;

    LabelVolume() = default;
    LabelVolume(const GridShape& s, std::uint8_t fill = 0) : shape(s) {
        shape.validate();
        data.assign(shape.voxel_count(), fill);
    }

    std::uint8_t at(int x, int y, int z) const { return data[shape.index(x, y, z)]; }
    std::uint8_t& at(int x, int y, int z) { return data[shape.index(x, y, z)]; }
};

/// 3D field of 3-component vectors in physical (mm) units, interleaved
/// x,y,z per voxel. Houses SDF gradients and deformation maps.
struct VectorField {
    GridShape shape;
    std::vector<float> data; // 3 * voxel_count(), interleaved

    VectorField() = default;
    explicit VectorField(const GridShape& s) : shape(s) {
        shape.validate();
        data.assign(shape.voxel_count() * 3, 0.0f);
    }

    Vec3 at(int x, int y, int z) const {
        const std::size_t i = shape.index(x, y, z) * 3;
        return {data[i], data[i + 1], data[i + 2]};
    }

    void set(int x, int y, int z, const Vec3& v) {
        const std::size_t i = shape.index(x, y, z) * 3;
        data[i] = static_cast<float>(v.x);
        data[i + 1] = static_cast<float>(v.y);
        data[i + 2] = static_cast<float>(v.z);
    }
};

/// Throws ShapeMismatch unless both operands share dims and spacing.
void require_same_shape(const GridShape& a, const GridShape& b, const char* op);

/// Trilinear interpolation of the 8 voxel centers surrounding p. Coordinates
/// outside [0, n-1] per axis are clamped to the edge before interpolation.
/// Exactly reproduces stored values at integer coordinates.
double sample_trilinear(const ScalarVolume& vol, const GridPoint& p);

/// Label at the voxel center nearest to p after clamp-to-edge. Ties between
/// two centers break toward the smaller index, per axis.
std::uint8_t sample_nearest(const LabelVolume& vol, const GridPoint& p);

} // namespace stac
