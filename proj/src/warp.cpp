#include "stac/warp.hpp"

#include <cmath>

#include "stac/parallel.hpp"

namespace stac {

namespace {

// Mean distance from a voxel center to its cell boundary along a uniformly
// distributed direction, in units of the voxel step: 0.5 * E[1/max|n_i|]
// over the sphere (0.5 exactly along an axis, up to 0.866 on the diagonal).
constexpr double kMeanBoundaryStep = 0.6107;

// Deformation map used by the augmentation pipeline. Same construction as
// deformation_map, except the weight is evaluated at the voxel's estimated
// distance to the label boundary rather than the center-to-center distance
// the SDF stores: the boundary of a voxelized region sits about one
// kMeanBoundaryStep along the normal inside the nearest complementary
// center, so |phi| is reduced by that much (floored at zero). Without this
// the realized boundary displacement undershoots the analytic fixed point
// w = alpha * exp(beta * w) by the half step and nearest-neighbor label
// warps never move at the default alpha=1, beta=-1.
VectorField augment_deformation(const SdfVolume& phi, const AugmentParams& params) {
    VectorField field = gradient_field(phi);
    const GridShape& s = field.shape;
    const double sign = params.enlarge ? -1.0 : 1.0;

    parallel_chunks(static_cast<std::size_t>(s.nz), [&](std::size_t z0, std::size_t z1) {
        for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y < s.ny; ++y)
                for (int x = 0; x < s.nx; ++x) {
                    const Vec3 g = field.at(x, y, z);
                    const double norm = g.norm();
                    if (norm < params.epsilon) {
                        field.set(x, y, z, {0.0, 0.0, 0.0});
                        continue;
                    }
                    const Vec3 n{g.x / norm, g.y / norm, g.z / norm};
                    const double step =
                        kMeanBoundaryStep *
                        std::sqrt(n.x * s.sx * n.x * s.sx + n.y * s.sy * n.y * s.sy +
                                  n.z * s.sz * n.z * s.sz);
                    const double center_dist =
                        std::abs(static_cast<double>(phi.values.data[s.index(x, y, z)]));
                    const double boundary_dist = std::max(center_dist - step, 0.0);
                    const double w = params.alpha * std::exp(params.beta * boundary_dist);
                    field.set(x, y, z, {sign * w * n.x, sign * w * n.y, sign * w * n.z});
                }
    });
    return field;
}

} // namespace

ScalarVolume warp_scalar(const ScalarVolume& x, const VectorField& d) {
    require_same_shape(x.shape, d.shape, "warp_scalar");
    const GridShape& s = x.shape;
    ScalarVolume out(s);

    parallel_chunks(static_cast<std::size_t>(s.nz), [&](std::size_t z0, std::size_t z1) {
        for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y < s.ny; ++y)
                for (int xi = 0; xi < s.nx; ++xi) {
                    const Vec3 v = d.at(xi, y, z);
                    const GridPoint q{xi + v.x / s.sx, y + v.y / s.sy, z + v.z / s.sz};
                    out.data[s.index(xi, y, z)] = static_cast<float>(sample_trilinear(x, q));
                }
    });
    return out;
}

LabelVolume warp_label(const LabelVolume& y, const VectorField& d) {
    require_same_shape(y.shape, d.shape, "warp_label");
    const GridShape& s = y.shape;
    LabelVolume out(s);

    parallel_chunks(static_cast<std::size_t>(s.nz), [&](std::size_t z0, std::size_t z1) {
        for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int yi = 0; yi < s.ny; ++yi)
                for (int xi = 0; xi < s.nx; ++xi) {
                    const Vec3 v = d.at(xi, yi, z);
                    const GridPoint q{xi + v.x / s.sx, yi + v.y / s.sy, z + v.z / s.sz};
                    out.data[s.index(xi, yi, z)] = sample_nearest(y, q);
                }
    });
    return out;
}

AugmentedPair augment_pair(const ScalarVolume& x, const LabelVolume& y,
                           const std::vector<std::uint8_t>& minority,
                           const AugmentParams& params) {
    require_same_shape(x.shape, y.shape, "augment_pair");
    params.validate();

    bool present = false;
    if (!minority.empty()) {
        bool lut[256] = {};
        for (std::uint8_t c : minority) lut[c] = true;
        for (std::uint8_t v : y.data)
            if (lut[v]) {
                present = true;
                break;
            }
    }
    if (!present)
        fail(Error::Kind::MinorityAbsent,
             "augment_pair: no voxel of any minority class exists in the label");

    const SdfVolume phi = signed_distance(y, minority);
    const VectorField d = augment_deformation(phi, params);

    AugmentedPair out;
    out.image = warp_scalar(x, d);
    out.label = warp_label(y, d);
    out.provenance.params = params;
    out.provenance.minority = minority;
    return out;
}

AugmentedPair augment_with_sdf(const ScalarVolume& x, const LabelVolume& y_pseudo,
                               const SdfVolume& phi_pre, const AugmentParams& params) {
    require_same_shape(x.shape, y_pseudo.shape, "augment_with_sdf");
    require_same_shape(x.shape, phi_pre.values.shape, "augment_with_sdf");
    params.validate();

    const VectorField d = augment_deformation(phi_pre, params);

    AugmentedPair out;
    out.image = warp_scalar(x, d);
    out.label = warp_label(y_pseudo, d);
    out.provenance.params = params;
    return out;
}

} // namespace stac
