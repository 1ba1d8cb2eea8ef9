#pragma once

#include "stac/sdf.hpp"
#include "stac/volume.hpp"

namespace stac {

/// Hyperparameters of the adaptive deformation map.
///
/// The weight W(p) = alpha * exp(beta * |phi(p)|) peaks at the organ surface
/// and decays with distance, so voxels far from the enlarged organs stay
/// put. alpha is the peak displacement in physical units; beta <= 0 is the
/// decay rate per physical unit. Defaults alpha=1, beta=-1.
struct AugmentParams {
    double alpha = 1.0;
    double beta = -1.0;
    /// true: displace content outward (enlarge the organ set); false: the
    /// opposite sign, which shrinks it.
    bool enlarge = true;
    /// Gradient-normalization floor; voxels with a gradient below it get a
    /// zero displacement (SDF skeleton plateaus).
    double epsilon = 1e-8;

    void validate() const {
        if (!(alpha >= 0.0))
            fail(Error::Kind::InvalidArgument, "AugmentParams: alpha must be >= 0");
        if (!(beta <= 0.0))
            fail(Error::Kind::InvalidArgument, "AugmentParams: beta must be <= 0");
        if (!(epsilon > 0.0))
            fail(Error::Kind::InvalidArgument, "AugmentParams: epsilon must be > 0");
    }
};

/// Physical-unit gradient of the SDF: central differences in the interior,
/// one-sided on the faces, each component divided by the axis spacing. For an
/// exact SDF this is the (unnormalized) surface normal field.
///
/// Throws TooThin when any dim < 2.
VectorField gradient_field(const SdfVolume& phi);

/// Pointwise W(p) = alpha * exp(beta * |phi(p)|).
ScalarVolume weight_field(const SdfVolume& phi, const AugmentParams& params);

/// Adaptive deformation map D(p) = s * W(p) * n(p), with n the gradient
/// normalized against a floor of params.epsilon and s = -1 when
/// enlarge=true (backward-sampling offset toward the organ interior, i.e.
/// steepest descent of the SDF), s = +1 otherwise. Voxels whose gradient
/// magnitude falls below epsilon get a zero vector.
VectorField deformation_map(const SdfVolume& phi, const AugmentParams& params);

} // namespace stac
