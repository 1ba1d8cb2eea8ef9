#include "stac/sdf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "stac/parallel.hpp"

namespace stac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared-distance transform over parabolas rooted at positions q*h with
// heights f[q] (Felzenszwalb & Huttenlocher). Parabolas with infinite height
// are skipped, so rows that have seen no foreground yet stay infinite.
// v: root index of each envelope parabola, z: envelope breakpoints.
// Returns false when the row holds no finite parabola and d is untouched.
bool dt_row(const std::vector<double>& f, std::vector<double>& d, int n, double h,
            std::vector<int>& v, std::vector<double>& z) {
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        const double xq = q * h;
        double s = -kInf;
        while (k >= 0) {
            const double xv = v[k] * h;
            s = ((f[q] + xq * xq) - (f[v[k]] + xv * xv)) / (2.0 * (xq - xv));
            if (s <= z[k])
                --k;
            else
                break;
        }
        if (k < 0) s = -kInf;
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (k < 0) return false;

    int j = 0;
    for (int i = 0; i < n; ++i) {
        const double xi = i * h;
        while (z[j + 1] < xi) ++j;
        const double dx = xi - v[j] * h;
        d[i] = dx * dx + f[v[j]];
    }
    return true;
}

// One separable pass along `axis`, updating the squared-distance buffer in
// place. Rows are independent, so they parallelize without changing results.
void edt_pass(std::vector<double>& work, const GridShape& s, int axis) {
    int len = 0;
    std::size_t stride = 0, row_count = 0;
    double h = 0.0;
    switch (axis) {
    case 0:
        len = s.nx;
        stride = 1;
        row_count = static_cast<std::size_t>(s.ny) * s.nz;
        h = s.sx;
        break;
    case 1:
        len = s.ny;
        stride = static_cast<std::size_t>(s.nx);
        row_count = static_cast<std::size_t>(s.nx) * s.nz;
        h = s.sy;
        break;
    default:
        len = s.nz;
        stride = static_cast<std::size_t>(s.nx) * s.ny;
        row_count = static_cast<std::size_t>(s.nx) * s.ny;
        h = s.sz;
        break;
    }

    parallel_chunks(row_count, [&](std::size_t begin, std::size_t end) {
        std::vector<double> f(len), d(len);
        std::vector<int> v(len);
        std::vector<double> z(len + 1);
        for (std::size_t r = begin; r < end; ++r) {
            std::size_t base = 0;
            if (axis == 0) {
                const int y = static_cast<int>(r % s.ny);
                const int zc = static_cast<int>(r / s.ny);
                base = s.index(0, y, zc);
            } else if (axis == 1) {
                const int x = static_cast<int>(r % s.nx);
                const int zc = static_cast<int>(r / s.nx);
                base = s.index(x, 0, zc);
            } else {
                const int x = static_cast<int>(r % s.nx);
                const int y = static_cast<int>(r / s.nx);
                base = s.index(x, y, 0);
            }
            for (int i = 0; i < len; ++i) f[i] = work[base + i * stride];
            if (dt_row(f, d, len, h, v, z))
                for (int i = 0; i < len; ++i) work[base + i * stride] = d[i];
        }
    });
}

std::array<bool, 256> class_lut(const std::vector<std::uint8_t>& classes) {
    std::array<bool, 256> lut{};
    for (std::uint8_t c : classes) lut[c] = true;
    return lut;
}

} // namespace

ScalarVolume edt_squared(const LabelVolume& mask) {
    mask.shape.validate();
    const std::size_t count = mask.shape.voxel_count();

    std::vector<double> work(count);
    bool any_fg = false;
    for (std::size_t i = 0; i < count; ++i) {
        if (mask.data[i] != 0) {
            work[i] = 0.0;
            any_fg = true;
        } else {
            work[i] = kInf;
        }
    }
    if (!any_fg) fail(Error::Kind::EmptyMask, "edt_squared: mask has no foreground voxel");

    for (int axis = 0; axis < 3; ++axis) edt_pass(work, mask.shape, axis);

    ScalarVolume out(mask.shape);
    for (std::size_t i = 0; i < count; ++i) out.data[i] = static_cast<float>(work[i]);
    return out;
}

SdfVolume signed_distance(const LabelVolume& label,
                          const std::vector<std::uint8_t>& minority) {
    label.shape.validate();
    const auto lut = class_lut(minority);
    const std::size_t count = label.shape.voxel_count();

    LabelVolume inside(label.shape);
    LabelVolume outside(label.shape);
    std::size_t n_in = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const bool in = lut[label.data[i]];
        inside.data[i] = in ? 1 : 0;
        outside.data[i] = in ? 0 : 1;
        n_in += in ? 1 : 0;
    }
    if (n_in == 0)
        fail(Error::Kind::EmptyMask, "signed_distance: no voxel belongs to the organ set");
    if (n_in == count)
        fail(Error::Kind::FullMask, "signed_distance: organ set covers the whole grid");

    const ScalarVolume d2_to_inside = edt_squared(inside);   // read outside O
    const ScalarVolume d2_to_outside = edt_squared(outside); // read inside O

    SdfVolume phi{ScalarVolume(label.shape)};
    for (std::size_t i = 0; i < count; ++i) {
        if (inside.data[i])
            phi.values.data[i] =
                -static_cast<float>(std::sqrt(static_cast<double>(d2_to_outside.data[i])));
        else
            phi.values.data[i] =
                static_cast<float>(std::sqrt(static_cast<double>(d2_to_inside.data[i])));
    }
    return phi;
}

SdfVolume brute_force_sdf(const LabelVolume& label,
                          const std::vector<std::uint8_t>& minority) {
    label.shape.validate();
    const std::size_t count = label.shape.voxel_count();
    if (count > 32u * 32u * 32u)
        fail(Error::Kind::TooLarge, "brute_force_sdf: volume exceeds the 32^3 size guard");

    const auto lut = class_lut(minority);
    const GridShape& s = label.shape;

    struct Site {
        double px, py, pz;
    };
    std::vector<Site> in_sites, out_sites;
    for (int z = 0; z < s.nz; ++z)
        for (int y = 0; y < s.ny; ++y)
            for (int x = 0; x < s.nx; ++x) {
                const Site site{x * s.sx, y * s.sy, z * s.sz};
                if (lut[label.at(x, y, z)])
                    in_sites.push_back(site);
                else
                    out_sites.push_back(site);
            }
    if (in_sites.empty())
        fail(Error::Kind::EmptyMask, "brute_force_sdf: no voxel belongs to the organ set");
    if (out_sites.empty())
        fail(Error::Kind::FullMask, "brute_force_sdf: organ set covers the whole grid");

    auto min_sq = [](const Site& p, const std::vector<Site>& sites) {
        double best = kInf;
        for (const Site& q : sites) {
            const double dx = p.px - q.px;
            const double dy = p.py - q.py;
            const double dz = p.pz - q.pz;
            const double d2 = dx * dx + dy * dy + dz * dz;
            if (d2 < best) best = d2;
        }
        return best;
    };

    SdfVolume phi{ScalarVolume(s)};
    std::size_t i = 0;
    for (int z = 0; z < s.nz; ++z)
        for (int y = 0; y < s.ny; ++y)
            for (int x = 0; x < s.nx; ++x, ++i) {
                const Site p{x * s.sx, y * s.sy, z * s.sz};
                if (lut[label.data[i]])
                    phi.values.data[i] = -static_cast<float>(std::sqrt(min_sq(p, out_sites)));
                else
                    phi.values.data[i] = static_cast<float>(std::sqrt(min_sq(p, in_sites)));
            }
    return phi;
}

ScalarVolume evolve_level_set_step(const SdfVolume& phi, const ScalarVolume& speed,
                                   double dt) {
    const GridShape& s = phi.values.shape;
    require_same_shape(s, speed.shape, "evolve_level_set_step");

    double max_abs_v = 0.0;
    for (float v : speed.data) max_abs_v = std::max(max_abs_v, std::abs(static_cast<double>(v)));
    if (dt * max_abs_v > 0.5 * s.min_spacing())
        fail(Error::Kind::CflViolation,
             "evolve_level_set_step: dt * max|V| exceeds 0.5 * min(spacing)");

    ScalarVolume out(s);
    const auto& f = phi.values.data;

    parallel_chunks(static_cast<std::size_t>(s.nz), [&](std::size_t z0, std::size_t z1) {
        for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z)
            for (int y = 0; y < s.ny; ++y)
                for (int x = 0; x < s.nx; ++x) {
                    const std::size_t i = s.index(x, y, z);
                    const double v = speed.data[i];
                    if (v == 0.0) {
                        out.data[i] = f[i];
                        continue;
                    }
                    const double c = f[i];

                    // One-sided differences; faces replicate the interior side.
                    double bx = 0, fxd = 0, by = 0, fyd = 0, bz = 0, fzd = 0;
                    if (s.nx > 1) {
                        bx = x > 0 ? (c - f[s.index(x - 1, y, z)]) / s.sx : 0;
                        fxd = x < s.nx - 1 ? (f[s.index(x + 1, y, z)] - c) / s.sx : 0;
                        if (x == 0) bx = fxd;
                        if (x == s.nx - 1) fxd = bx;
                    }
                    if (s.ny > 1) {
                        by = y > 0 ? (c - f[s.index(x, y - 1, z)]) / s.sy : 0;
                        fyd = y < s.ny - 1 ? (f[s.index(x, y + 1, z)] - c) / s.sy : 0;
                        if (y == 0) by = fyd;
                        if (y == s.ny - 1) fyd = by;
                    }
                    if (s.nz > 1) {
                        bz = z > 0 ? (c - f[s.index(x, y, z - 1)]) / s.sz : 0;
                        fzd = z < s.nz - 1 ? (f[s.index(x, y, z + 1)] - c) / s.sz : 0;
                        if (z == 0) bz = fzd;
                        if (z == s.nz - 1) fzd = bz;
                    }

                    // Godunov selection for phi_t = V|grad phi|: speeds moving the
                    // front along +normal (V>0) take the nabla- stencil, the
                    // opposite motion takes nabla+.
                    double g2;
                    if (v >= 0.0) {
                        g2 = std::max(fxd, 0.0) * std::max(fxd, 0.0) +
                             std::min(bx, 0.0) * std::min(bx, 0.0) +
                             std::max(fyd, 0.0) * std::max(fyd, 0.0) +
                             std::min(by, 0.0) * std::min(by, 0.0) +
                             std::max(fzd, 0.0) * std::max(fzd, 0.0) +
                             std::min(bz, 0.0) * std::min(bz, 0.0);
                    } else {
                        g2 = std::max(bx, 0.0) * std::max(bx, 0.0) +
                             std::min(fxd, 0.0) * std::min(fxd, 0.0) +
                             std::max(by, 0.0) * std::max(by, 0.0) +
                             std::min(fyd, 0.0) * std::min(fyd, 0.0) +
                             std::max(bz, 0.0) * std::max(bz, 0.0) +
                             std::min(fzd, 0.0) * std::min(fzd, 0.0);
                    }
                    out.data[i] = static_cast<float>(c + dt * v * std::sqrt(g2));
                }
    });
    return out;
}

} // namespace stac
