#include "stac/volume.hpp"

#include <algorithm>
#include <string>

namespace stac {

void require_same_shape(const GridShape& a, const GridShape& b, const char* op) {
    if (!(a == b))
        fail(Error::Kind::ShapeMismatch,
             std::string(op) + ": operands do not share dims/spacing");
}

namespace {

inline double clamp_axis(double v, int n) {
    if (v < 0.0) return 0.0;
    const double hi = static_cast<double>(n - 1);
    return v > hi ? hi : v;
}

// Nearest index with ties toward the smaller index: 2.5 -> 2.
inline int nearest_index(double v, int n) {
    const int i = static_cast<int>(std::ceil(clamp_axis(v, n) - 0.5));
    return std::clamp(i, 0, n - 1);
}

} // namespace

double sample_trilinear(const ScalarVolume& vol, const GridPoint& p) {
    const GridShape& s = vol.shape;
    const double cx = clamp_axis(p.x, s.nx);
    const double cy = clamp_axis(p.y, s.ny);
    const double cz = clamp_axis(p.z, s.nz);

    const int x0 = static_cast<int>(cx);
    const int y0 = static_cast<int>(cy);
    const int z0 = static_cast<int>(cz);
    const double fx = cx - x0;
    const double fy = cy - y0;
    const double fz = cz - z0;

    // Integer coordinates collapse all weights onto one voxel; return the
    // stored value so the identity warp is bit-exact.
    if (fx == 0.0 && fy == 0.0 && fz == 0.0)
        return vol.data[s.index(x0, y0, z0)];

    const int x1 = std::min(x0 + 1, s.nx - 1);
    const int y1 = std::min(y0 + 1, s.ny - 1);
    const int z1 = std::min(z0 + 1, s.nz - 1);

    const double v000 = vol.data[s.index(x0, y0, z0)];
    const double v100 = vol.data[s.index(x1, y0, z0)];
    const double v010 = vol.data[s.index(x0, y1, z0)];
    const double v110 = vol.data[s.index(x1, y1, z0)];
    const double v001 = vol.data[s.index(x0, y0, z1)];
    const double v101 = vol.data[s.index(x1, y0, z1)];
    const double v011 = vol.data[s.index(x0, y1, z1)];
    const double v111 = vol.data[s.index(x1, y1, z1)];

    const double gx = 1.0 - fx, gy = 1.0 - fy, gz = 1.0 - fz;
    return v000 * gx * gy * gz + v100 * fx * gy * gz + v010 * gx * fy * gz +
           v110 * fx * fy * gz + v001 * gx * gy * fz + v101 * fx * gy * fz +
           v011 * gx * fy * fz + v111 * fx * fy * fz;
}

std::uint8_t sample_nearest(const LabelVolume& vol, const GridPoint& p) {
    const GridShape& s = vol.shape;
    const int x = nearest_index(p.x, s.nx);
    const int y = nearest_index(p.y, s.ny);
    const int z = nearest_index(p.z, s.nz);
    return vol.data[s.index(x, y, z)];
}

} // namespace stac
