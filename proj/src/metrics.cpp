#include "stac/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "stac/sdf.hpp"

namespace stac {

MinorityPolicy MinorityPolicy::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        fail(Error::Kind::InvalidArgument,
             "minority policy must be 'fraction:T' or 'bottom:K', got '" + text + "'");
    const std::string head = text.substr(0, colon);
    const std::string tail = text.substr(colon + 1);
    try {
        if (head == "fraction") {
            const double t = std::stod(tail);
            if (!(t > 0.0) || !(t <= 1.0))
                fail(Error::Kind::InvalidArgument, "fraction threshold must be in (0, 1]");
            return MinorityPolicy::fraction(t);
        }
        if (head == "bottom") {
            const long k = std::stol(tail);
            if (k <= 0) fail(Error::Kind::InvalidArgument, "bottom:K needs K >= 1");
            return MinorityPolicy::bottom(static_cast<std::size_t>(k));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail(Error::Kind::InvalidArgument, "malformed minority policy '" + text + "'");
    }
    fail(Error::Kind::InvalidArgument, "unknown minority policy '" + head + "'");
}

ClassStats class_histogram(const LabelVolume& y) {
    std::array<std::uint64_t, 256> counts{};
    for (std::uint8_t v : y.data) ++counts[v];

    ClassStats stats;
    const double total = static_cast<double>(y.shape.voxel_count());
    std::uint64_t fg_max = 0;
    std::uint64_t fg_min = std::numeric_limits<std::uint64_t>::max();
    for (int c = 0; c < 256; ++c) {
        if (counts[c] == 0) continue;
        const auto id = static_cast<std::uint8_t>(c);
        stats.counts[id] = counts[c];
        stats.fractions[id] = static_cast<double>(counts[c]) / total;
        if (c != 0) {
            fg_max = std::max(fg_max, counts[c]);
            fg_min = std::min(fg_min, counts[c]);
        }
    }
    stats.imbalance_ratio =
        fg_max == 0 ? 0.0 : static_cast<double>(fg_max) / static_cast<double>(fg_min);
    return stats;
}

std::vector<std::uint8_t> select_minority(const ClassStats& stats,
                                          const MinorityPolicy& policy) {
    std::vector<std::uint8_t> fg;
    for (const auto& [id, count] : stats.counts)
        if (id != 0 && count > 0) fg.push_back(id);
    if (fg.empty())
        fail(Error::Kind::NoForeground, "select_minority: label has no foreground class");

    std::vector<std::uint8_t> m;
    if (policy.mode == MinorityPolicy::Mode::Fraction) {
        for (std::uint8_t id : fg)
            if (stats.fractions.at(id) < policy.threshold) m.push_back(id);
    } else {
        // k smallest by count, ties toward the smaller class ID. fg is
        // already ID-ascending, so a stable sort by count keeps the tie rule.
        std::stable_sort(fg.begin(), fg.end(), [&](std::uint8_t a, std::uint8_t b) {
            return stats.counts.at(a) < stats.counts.at(b);
        });
        const std::size_t take = std::min(policy.k, fg.size());
        m.assign(fg.begin(), fg.begin() + static_cast<std::ptrdiff_t>(take));
        std::sort(m.begin(), m.end());
    }
    return m;
}

double dice(const LabelVolume& a, const LabelVolume& b, std::uint8_t cls) {
    require_same_shape(a.shape, b.shape, "dice");
    std::uint64_t na = 0, nb = 0, ni = 0;
    const std::size_t count = a.shape.voxel_count();
    for (std::size_t i = 0; i < count; ++i) {
        const bool ia = a.data[i] == cls;
        const bool ib = b.data[i] == cls;
        na += ia;
        nb += ib;
        ni += ia && ib;
    }
    if (na + nb == 0) return 1.0; // both agree the class is absent
    return 2.0 * static_cast<double>(ni) / static_cast<double>(na + nb);
}

namespace {

// Face-adjacent (6-connectivity) surface of the class-c mask: foreground
// voxels with at least one in-grid background neighbor.
LabelVolume surface_mask(const LabelVolume& vol, std::uint8_t cls, std::size_t& n_surface) {
    const GridShape& s = vol.shape;
    LabelVolume surf(s);
    n_surface = 0;
    for (int z = 0; z < s.nz; ++z)
        for (int y = 0; y < s.ny; ++y)
            for (int x = 0; x < s.nx; ++x) {
                if (vol.at(x, y, z) != cls) continue;
                const bool boundary =
                    (x > 0 && vol.at(x - 1, y, z) != cls) ||
                    (x < s.nx - 1 && vol.at(x + 1, y, z) != cls) ||
                    (y > 0 && vol.at(x, y - 1, z) != cls) ||
                    (y < s.ny - 1 && vol.at(x, y + 1, z) != cls) ||
                    (z > 0 && vol.at(x, y, z - 1) != cls) ||
                    (z < s.nz - 1 && vol.at(x, y, z + 1) != cls);
                if (boundary) {
                    surf.at(x, y, z) = 1;
                    ++n_surface;
                }
            }
    return surf;
}

double mean_surface_to_surface(const LabelVolume& from, const ScalarVolume& d2_to_other,
                               std::size_t n_from) {
    double sum = 0.0;
    const std::size_t count = from.shape.voxel_count();
    for (std::size_t i = 0; i < count; ++i)
        if (from.data[i])
            sum += std::sqrt(static_cast<double>(d2_to_other.data[i]));
    return sum / static_cast<double>(n_from);
}

} // namespace

double average_surface_distance(const LabelVolume& a, const LabelVolume& b,
                                std::uint8_t cls) {
    require_same_shape(a.shape, b.shape, "average_surface_distance");

    std::size_t na = 0, nb = 0;
    const LabelVolume surf_a = surface_mask(a, cls, na);
    const LabelVolume surf_b = surface_mask(b, cls, nb);
    if (na == 0 || nb == 0)
        fail(Error::Kind::EmptySurface,
             "average_surface_distance: class " + std::to_string(cls) +
                 " has an empty surface");

    const ScalarVolume d2_to_b = edt_squared(surf_b);
    const ScalarVolume d2_to_a = edt_squared(surf_a);
    const double ab = mean_surface_to_surface(surf_a, d2_to_b, na);
    const double ba = mean_surface_to_surface(surf_b, d2_to_a, nb);
    return 0.5 * (ab + ba);
}

} // namespace stac
