#include "stac/deform.hpp"

#include <cmath>

#include "stac/parallel.hpp"

namespace stac {

VectorField gradient_field(const SdfVolume& phi) {
    const GridShape& s = phi.values.shape;
    s.validate();
    if (s.nx < 2 || s.ny < 2 || s.nz < 2)
        fail(Error::Kind::TooThin, "gradient_field: every dim must be >= 2");

    const auto& f = phi.values.data;
    VectorField grad(s);

    parallel_chunks(static_cast<std::size_t>(s.nz), [&](std::size_t z0, std::size_t z1) {
        for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y < s.ny; ++y)
                for (int x = 0; x < s.nx; ++x) {
                    double gx, gy, gz;
                    if (x == 0)
                        gx = (f[s.index(1, y, z)] - f[s.index(0, y, z)]) / s.sx;
                    else if (x == s.nx - 1)
                        gx = (f[s.index(x, y, z)] - f[s.index(x - 1, y, z)]) / s.sx;
                    else
                        gx = (f[s.index(x + 1, y, z)] - f[s.index(x - 1, y, z)]) / (2.0 * s.sx);

                    if (y == 0)
                        gy = (f[s.index(x, 1, z)] - f[s.index(x, 0, z)]) / s.sy;
                    else if (y == s.ny - 1)
                        gy = (f[s.index(x, y, z)] - f[s.index(x, y - 1, z)]) / s.sy;
                    else
                        gy = (f[s.index(x, y + 1, z)] - f[s.index(x, y - 1, z)]) / (2.0 * s.sy);

                    if (z == 0)
                        gz = (f[s.index(x, y, 1)] - f[s.index(x, y, 0)]) / s.sz;
                    else if (z == s.nz - 1)
                        gz = (f[s.index(x, y, z)] - f[s.index(x, y, z - 1)]) / s.sz;
                    else
                        gz = (f[s.index(x, y, z + 1)] - f[s.index(x, y, z - 1)]) / (2.0 * s.sz);

                    grad.set(x, y, z, {gx, gy, gz});
                }
    });
    return grad;
}

ScalarVolume weight_field(const SdfVolume& phi, const AugmentParams& params) {
    params.validate();
    ScalarVolume w(phi.values.shape);
    const std::size_t count = w.shape.voxel_count();
    for (std::size_t i = 0; i < count; ++i) {
        const double d = std::abs(static_cast<double>(phi.values.data[i]));
        w.data[i] = static_cast<float>(params.alpha * std::exp(params.beta * d));
    }
    return w;
}

VectorField deformation_map(const SdfVolume& phi, const AugmentParams& params) {
    params.validate();
    VectorField grad = gradient_field(phi);
    const GridShape& s = grad.shape;
    const double sign = params.enlarge ? -1.0 : 1.0;

    parallel_chunks(static_cast<std::size_t>(s.nz), [&](std::size_t z0, std::size_t z1) {
        for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y < s.ny; ++y)
                for (int x = 0; x < s.nx; ++x) {
                    const Vec3 g = grad.at(x, y, z);
                    const double norm = g.norm();
                    if (norm < params.epsilon) {
                        grad.set(x, y, z, {0.0, 0.0, 0.0});
                        continue;
                    }
                    const double d = std::abs(
                        static_cast<double>(phi.values.data[s.index(x, y, z)]));
                    const double w = params.alpha * std::exp(params.beta * d);
                    const double k = sign * w / std::max(norm, params.epsilon);
                    grad.set(x, y, z, {k * g.x, k * g.y, k * g.z});
                }
    });
    return grad;
}

} // namespace stac
