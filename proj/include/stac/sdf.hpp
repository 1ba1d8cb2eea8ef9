#pragma once

#include <cstdint>
#include <vector>

#include "stac/volume.hpp"

namespace stac {

/// Scalar field of signed physical distances (mm): negative inside the organ
/// set, positive outside. Discrete two-sided convention: inside voxels carry
/// the negated distance to the nearest outside voxel center, outside voxels
/// the distance to the nearest inside voxel center, so |value| >= min(spacing)
/// whenever both sides are non-empty and no voxel sits exactly at zero. The
/// sub-voxel boundary location is recovered by interpolation.
struct SdfVolume {
    ScalarVolume values;
};

/// Exact squared Euclidean distance transform. Each output voxel holds the
/// squared physical distance from its center to the nearest foreground
/// (nonzero) voxel center. Separable lower-envelope (parabola) passes, one
/// per axis, O(n) per pass; each axis pass uses that axis' spacing, which
/// keeps the transform exact for anisotropic grids. With unit spacing the
/// outputs are exact integers.
///
/// Throws EmptyMask when the mask has no foreground voxel.
ScalarVolume edt_squared(const LabelVolume& mask);

/// Signed distance function of the organ set O = { p | label(p) in minority }.
/// phi(p) = -sqrt(edt_squared over complement)(p) for p in O,
/// phi(p) = +sqrt(edt_squared over O)(p)          otherwise.
///
/// Throws EmptyMask when O is empty and FullMask when its complement is.
SdfVolume signed_distance(const LabelVolume& label,
                          const std::vector<std::uint8_t>& minority);

/// Same contract as signed_distance via exhaustive nearest-voxel search.
/// Independent oracle for testing; throws TooLarge above 32^3 voxels.
SdfVolume brute_force_sdf(const LabelVolume& label,
                          const std::vector<std::uint8_t>& minority);

/// One explicit-Euler step of the level-set motion d(phi)/dt = V * |grad phi|
/// using the Godunov upwind gradient magnitude. Boundary faces replicate the
/// available one-sided difference. Theory-validation tool; not part of the
/// augmentation path.
///
/// Throws CflViolation when dt * max|V| > 0.5 * min(spacing).
ScalarVolume evolve_level_set_step(const SdfVolume& phi, const ScalarVolume& speed,
                                   double dt);

} // namespace stac
