#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stac/volume.hpp"

namespace stac {

/// Per-class voxel statistics of a label volume. The imbalance ratio is the
/// largest foreground class count divided by the smallest nonzero foreground
/// count (0 when there is no foreground). `minority` is filled by
/// select_minority and always excludes background class 0.
struct ClassStats {
    std::map<std::uint8_t, std::uint64_t> counts;
    std::map<std::uint8_t, double> fractions;
    double imbalance_ratio = 0.0;
    std::vector<std::uint8_t> minority;
};

/// How the minority set M is chosen. The selection rule is a policy knob:
/// either every foreground class whose voxel fraction is below a threshold,
/// or the k smallest foreground classes. Ties break by ascending class ID.
struct MinorityPolicy {
    enum class Mode { Fraction, BottomK };
    Mode mode = Mode::Fraction;
    double threshold = 0.01;
    std::size_t k = 1;

    static MinorityPolicy fraction(double t) { return {Mode::Fraction, t, 0}; }
    static MinorityPolicy bottom(std::size_t k) { return {Mode::BottomK, 0.0, k}; }

    /// Parses "fraction:T" or "bottom:K"; throws InvalidArgument otherwise.
    static MinorityPolicy parse(const std::string& text);
};

/// Exact voxel counts, fractions, and imbalance ratio per class ID.
ClassStats class_histogram(const LabelVolume& y);

/// Selects the minority set M under the policy. Throws NoForeground when the
/// stats contain no nonzero class.
std::vector<std::uint8_t> select_minority(const ClassStats& stats,
                                          const MinorityPolicy& policy);

/// Dice coefficient 2|A∩B| / (|A|+|B|) of the class-c masks; 1.0 when both
/// masks are empty.
double dice(const LabelVolume& a, const LabelVolume& b, std::uint8_t cls);

/// Symmetric average surface distance in mm: the mean distance from A's
/// surface voxels to B's surface, averaged with the reverse direction.
/// Surface voxels are foreground voxels with at least one face-adjacent
/// (6-connectivity) background voxel; distances are center-to-center via the
/// exact distance transform. Throws EmptySurface when either class-c surface
/// is empty.
double average_surface_distance(const LabelVolume& a, const LabelVolume& b,
                                std::uint8_t cls);

} // namespace stac
