#include "stac/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stac/rng.hpp"

namespace stac {

namespace {

std::array<double, 3> physical_offset(const GridPoint& p, const PhantomShape& shape,
                                      const GridShape& grid) {
    return {(p.x - shape.center[0]) * grid.sx, (p.y - shape.center[1]) * grid.sy,
            (p.z - shape.center[2]) * grid.sz};
}

bool inside_shape(const PhantomShape& shape, const std::array<double, 3>& y) {
    switch (shape.kind) {
    case ShapeKind::Sphere: {
        const double r = shape.extent[0];
        return y[0] * y[0] + y[1] * y[1] + y[2] * y[2] <= r * r;
    }
    case ShapeKind::Ellipsoid: {
        const double u = y[0] / shape.extent[0];
        const double v = y[1] / shape.extent[1];
        const double w = y[2] / shape.extent[2];
        return u * u + v * v + w * w <= 1.0;
    }
    case ShapeKind::Box:
        return std::abs(y[0]) <= shape.extent[0] && std::abs(y[1]) <= shape.extent[1] &&
               std::abs(y[2]) <= shape.extent[2];
    }
    return false;
}

double sphere_sdf(const std::array<double, 3>& y, double r) {
    return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) - r;
}

double box_sdf(const std::array<double, 3>& y, const std::array<double, 3>& h) {
    const double qx = std::abs(y[0]) - h[0];
    const double qy = std::abs(y[1]) - h[1];
    const double qz = std::abs(y[2]) - h[2];
    const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0), oz = std::max(qz, 0.0);
    const double outside = std::sqrt(ox * ox + oy * oy + oz * oz);
    const double inside = std::min(std::max(qx, std::max(qy, qz)), 0.0);
    return outside + inside;
}

// Point-to-ellipsoid distance by root-finding. The closest boundary point of
// a query y solves x_i = a_i^2 y_i / (t + a_i^2) with
// F(t) = sum (a_i y_i / (t + a_i^2))^2 - 1 = 0; F is strictly decreasing on
// (max_i{-a_i^2 : y_i != 0}, inf), so bisection is unconditionally stable.
// Components with y_i = 0 are kept at 0, which is exact outside and near the
// boundary; only deep-interior medial-axis points are approximated.
double ellipsoid_sdf(const std::array<double, 3>& y, const std::array<double, 3>& a) {
    const double k2 = (y[0] / a[0]) * (y[0] / a[0]) + (y[1] / a[1]) * (y[1] / a[1]) +
                      (y[2] / a[2]) * (y[2] / a[2]);

    double t_low = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int i = 0; i < 3; ++i)
        if (y[i] != 0.0) {
            t_low = std::max(t_low, -a[i] * a[i]);
            any = true;
        }
    if (!any) return -*std::min_element(a.begin(), a.end()); // exact center

    const auto F = [&](double t) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            if (y[i] == 0.0) continue;
            const double r = a[i] * y[i] / (t + a[i] * a[i]);
            s += r * r;
        }
        return s - 1.0;
    };

    const double scale = std::max(a[0], std::max(a[1], a[2]));
    double step = 1e-8 * scale * scale;
    double lo = t_low + step;
    while (F(lo) < 0.0 && step > 1e-300) {
        step *= 0.5;
        lo = t_low + step;
    }
    double hi = std::max(lo, 0.0) + scale * scale;
    while (F(hi) > 0.0) hi = 2.0 * hi + scale * scale;

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (F(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double t = 0.5 * (lo + hi);

    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double xi = y[i] == 0.0 ? 0.0 : a[i] * a[i] * y[i] / (t + a[i] * a[i]);
        d2 += (xi - y[i]) * (xi - y[i]);
    }
    const double d = std::sqrt(d2);
    return k2 <= 1.0 ? -d : d;
}

double shape_sdf(const PhantomShape& shape, const std::array<double, 3>& y) {
    switch (shape.kind) {
    case ShapeKind::Sphere:
        return sphere_sdf(y, shape.extent[0]);
    case ShapeKind::Ellipsoid:
        return ellipsoid_sdf(y, shape.extent);
    case ShapeKind::Box:
        return box_sdf(y, shape.extent);
    }
    return 0.0;
}

// Index-space half extents of the shape's bounding box, for margin checks.
std::array<double, 3> index_half_extent(const PhantomShape& shape, const GridShape& grid) {
    std::array<double, 3> e{};
    const std::array<double, 3> spacing{grid.sx, grid.sy, grid.sz};
    for (int i = 0; i < 3; ++i) {
        const double phys = shape.kind == ShapeKind::Sphere ? shape.extent[0] : shape.extent[i];
        e[i] = phys / spacing[i];
    }
    return e;
}

void validate_spec(const PhantomSpec& spec) {
    spec.grid.validate();
    if (spec.shapes.empty())
        fail(Error::Kind::SpecInvalid, "phantom spec declares no shapes");
    if (!(spec.intensity.noise_amplitude >= 0.0))
        fail(Error::Kind::SpecInvalid, "noise amplitude must be >= 0");

    const std::array<int, 3> dims{spec.grid.nx, spec.grid.ny, spec.grid.nz};
    for (const PhantomShape& shape : spec.shapes) {
        if (shape.class_id == 0)
            fail(Error::Kind::SpecInvalid, "phantom shapes may not use background class 0");
        const int needed = shape.kind == ShapeKind::Sphere ? 1 : 3;
        for (int i = 0; i < needed; ++i)
            if (!(shape.extent[i] > 0.0))
                fail(Error::Kind::SpecInvalid, "phantom shape extent must be positive");

        const auto e = index_half_extent(shape, spec.grid);
        const std::array<double, 3> c = shape.center;
        for (int i = 0; i < 3; ++i) {
            if (c[i] - e[i] < 2.0 || c[i] + e[i] > static_cast<double>(dims[i] - 1) - 2.0)
                fail(Error::Kind::SpecInvalid,
                     "phantom shape breaks the 2-voxel margin along axis " +
                         std::to_string(i));
        }
    }
}

} // namespace

Phantom generate(const PhantomSpec& spec) {
    validate_spec(spec);
    const GridShape& s = spec.grid;

    Phantom out;
    out.label = LabelVolume(s);
    out.image = ScalarVolume(s);

    for (int z = 0; z < s.nz; ++z)
        for (int y = 0; y < s.ny; ++y)
            for (int x = 0; x < s.nx; ++x) {
                const GridPoint p{static_cast<double>(x), static_cast<double>(y),
                                  static_cast<double>(z)};
                std::uint8_t owner = 0;
                for (const PhantomShape& shape : spec.shapes) {
                    if (!inside_shape(shape, physical_offset(p, shape, s))) continue;
                    if (owner != 0 && owner != shape.class_id)
                        fail(Error::Kind::SpecInvalid,
                             "phantom shapes of different classes overlap");
                    owner = shape.class_id;
                }
                out.label.at(x, y, z) = owner;
            }

    const std::size_t count = s.voxel_count();
    const double amp = spec.intensity.noise_amplitude;
    for (std::size_t i = 0; i < count; ++i) {
        const double mean = spec.intensity.mean_for(out.label.data[i]);
        out.image.data[i] = static_cast<float>(mean + amp * uniform_signed(spec.seed, i));
    }

    // Per-class analytic SDF: min over that class' shapes.
    std::map<std::uint8_t, std::vector<PhantomShape>> by_class;
    for (const PhantomShape& shape : spec.shapes) by_class[shape.class_id].push_back(shape);
    for (auto& [cls, shapes] : by_class) {
        const GridShape grid = s;
        std::vector<PhantomShape> owned = shapes;
        out.analytic_sdf[cls] = [owned, grid](const GridPoint& p) {
            double best = std::numeric_limits<double>::infinity();
            for (const PhantomShape& shape : owned)
                best = std::min(best, shape_sdf(shape, physical_offset(p, shape, grid)));
            return best;
        };
    }
    return out;
}

PhantomSpec make_preset(const std::string& name, const GridShape& grid,
                        std::uint64_t seed) {
    grid.validate();
    PhantomSpec spec;
    spec.grid = grid;
    spec.seed = seed;

    const double m = static_cast<double>(std::min(grid.nx, std::min(grid.ny, grid.nz)));
    const double scale = m / 64.0;
    const std::array<double, 3> mid{grid.nx * 0.5, grid.ny * 0.5, grid.nz * 0.5};

    if (name == "sphere") {
        spec.shapes.push_back({ShapeKind::Sphere, 1, mid, {20.0 * scale, 0, 0}});
        spec.intensity.class_means[1] = 100.0;
    } else if (name == "ellipsoid") {
        spec.shapes.push_back(
            {ShapeKind::Ellipsoid, 1, mid, {20.0 * scale, 14.0 * scale, 10.0 * scale}});
        spec.intensity.class_means[1] = 100.0;
    } else if (name == "box") {
        spec.shapes.push_back(
            {ShapeKind::Box, 1, mid, {16.0 * scale, 12.0 * scale, 10.0 * scale}});
        spec.intensity.class_means[1] = 100.0;
    } else if (name == "multi_organ") {
        const std::array<double, 3> c1{grid.nx * 0.4375, grid.ny * 0.4375,
                                       grid.nz * 0.4375};
        const std::array<double, 3> c2{grid.nx * 0.8125, grid.ny * 0.8125,
                                       grid.nz * 0.8125};
        spec.shapes.push_back({ShapeKind::Sphere, 1, c1, {24.0 * scale, 0, 0}});
        spec.shapes.push_back({ShapeKind::Sphere, 2, c2, {6.0 * scale, 0, 0}});
        spec.intensity.class_means[1] = 100.0;
        spec.intensity.class_means[2] = 160.0;
    } else {
        fail(Error::Kind::InvalidArgument, "unknown phantom preset '" + name + "'");
    }
    return spec;
}

} // namespace stac
