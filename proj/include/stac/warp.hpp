#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stac/deform.hpp"
#include "stac/sdf.hpp"
#include "stac/volume.hpp"

namespace stac {

/// Bookkeeping attached to every augmentation result so training pipelines
/// can reproduce it: the parameters, the minority set the SDF was built
/// from (empty when an external SDF was supplied), and caller-provided
/// source identifiers.
struct Provenance {
    AugmentParams params;
    std::vector<std::uint8_t> minority;
    std::string image_id;
    std::string label_id;
    std::string sdf_id;
};

struct AugmentedPair {
    ScalarVolume image;
    LabelVolume label;
    Provenance provenance;
};

/// Backward warp of a scalar volume: out(p) = trilinear sample of x at
/// p + d(p)/spacing, the displacement converted from physical to index units
/// per axis. Clamp-to-edge beyond the bounds. A zero field is the bit-exact
/// identity.
ScalarVolume warp_scalar(const ScalarVolume& x, const VectorField& d);

/// Backward warp of a label volume with nearest-neighbor sampling. Uses the
/// same displacement convention as warp_scalar so a label stays aligned with
/// its image when both are warped by one field.
LabelVolume warp_label(const LabelVolume& y, const VectorField& d);

/// Labeled-path augmentation: derives the SDF of the minority organ set from
/// the label, builds the adaptive deformation map, and warps image and label
/// with the single shared field.
///
/// The displacement weight is evaluated at each voxel's estimated distance
/// to the label boundary, which sits a mean step of ~0.61 voxels along the
/// normal inside the center-to-center distance the SDF stores; this keeps
/// the realized boundary displacement at the analytic fixed point of
/// w = alpha * exp(beta * w).
///
/// Throws MinorityAbsent when no voxel of any minority class exists.
AugmentedPair augment_pair(const ScalarVolume& x, const LabelVolume& y,
                           const std::vector<std::uint8_t>& minority,
                           const AugmentParams& params);

/// Unlabeled-path augmentation: identical to augment_pair but driven by an
/// externally supplied SDF (e.g. one regressed by a network) instead of one
/// computed from the label. The SDF is taken as physical-unit distances.
AugmentedPair augment_with_sdf(const ScalarVolume& x, const LabelVolume& y_pseudo,
                               const SdfVolume& phi_pre, const AugmentParams& params);

} // namespace stac
