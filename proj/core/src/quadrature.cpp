#include "igabem/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "igabem/error.hpp"

namespace igabem {

namespace {

constexpr int kMaxGaussOrder = 64;

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on the Legendre polynomial P_n; roots come in
    // symmetric pairs.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::abs(step) <= 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

void accumulate_point(double s, double t, double weight, const Eigen::Vector3d& source,
                      const IntegrationContext& ctx, BlockIntegrals& acc) {
    const SurfaceFrame f = ctx.surface->frame(s, t);
    const Eigen::Vector3d x = ctx.image * f.position;
    const Eigen::Vector3d n = ctx.image * f.unit_normal;
    const double w = weight * f.area_element;

    Eigen::Matrix3d U;
    Eigen::Matrix3d T;
    kelvin_pair(source, x, n, *ctx.material, U, T);

    if (ctx.traction) {
        acc.load += w * (U * ctx.traction(x, n));
    }
    acc.kernel_total += w * T;
    if (!ctx.want_field) {
        return;
    }

    const BasisSpace& bu = ctx.field->u;
    const BasisSpace& bv = ctx.field->v;
    const int pu = bu.degree();
    const int pv = bv.degree();
    const int su = bu.find_span(s);
    const int sv = bv.find_span(t);
    std::array<double, 32> nu{};
    std::array<double, 32> nv{};
    bu.nonzero_basis(su, bu.clamp(s), nu);
    bv.nonzero_basis(sv, bv.clamp(t), nv);
    const int count_u = bu.size();
    for (int j = 0; j <= pv; ++j) {
        const int b = sv - pv + j;
        for (int i = 0; i <= pu; ++i) {
            const int a = su - pu + i;
            acc.field[a + count_u * b] += (w * nu[i] * nv[j]) * T;
        }
    }
}

}  // namespace

const GaussRule& gauss_rule(int order) {
    if (order < 1 || order > kMaxGaussOrder) {
        throw InvalidArgument(
            fmt::format("Gauss order {} outside supported range [1, {}]", order, kMaxGaussOrder));
    }
    static const std::array<GaussRule, kMaxGaussOrder + 1> rules = [] {
        std::array<GaussRule, kMaxGaussOrder + 1> r;
        for (int n = 1; n <= kMaxGaussOrder; ++n) {
            r[n] = build_rule(n);
        }
        return r;
    }();
    return rules[order];
}

bool IntegrationRegion::contains(const Eigen::Vector2d& p, double tol) const {
    return p.x() >= u0 - tol && p.x() <= u1 + tol && p.y() >= v0 - tol && p.y() <= v1 + tol;
}

std::vector<IntegrationRegion> region_partition(std::span<const double> lines_u,
                                                std::span<const double> lines_v) {
    auto cuts = [](std::span<const double> lines) {
        std::vector<double> c{0.0, 1.0};
        for (double x : lines) {
            if (x > 0.0 && x < 1.0) {
                c.push_back(x);
            }
        }
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                c.end());
        return c;
    };
    const std::vector<double> cu = cuts(lines_u);
    const std::vector<double> cv = cuts(lines_v);
    std::vector<IntegrationRegion> regions;
    regions.reserve((cu.size() - 1) * (cv.size() - 1));
    for (std::size_t j = 0; j + 1 < cv.size(); ++j) {
        for (std::size_t i = 0; i + 1 < cu.size(); ++i) {
            regions.push_back({cu[i], cu[i + 1], cv[j], cv[j + 1], 0});
        }
    }
    return regions;
}

std::vector<IntegrationRegion> region_partition(const FieldSpaces& field,
                                                std::span<const double> extra_u,
                                                std::span<const double> extra_v) {
    auto lines = [](const BasisSpace& space, std::span<const double> extra) {
        std::vector<double> l;
        if (space.degree() > 0) {
            l = greville_abscissae(space);
        }
        const auto& k = space.knots().values();
        l.insert(l.end(), k.begin(), k.end());
        l.insert(l.end(), extra.begin(), extra.end());
        return l;
    };
    const std::vector<double> lu = lines(field.u, extra_u);
    const std::vector<double> lv = lines(field.v, extra_v);
    return region_partition(lu, lv);
}

QuadtreeResult quadtree_refine(std::span<const IntegrationRegion> regions,
                               const Eigen::Vector3d& source, const Surface& surface,
                               const QuadtreeOptions& options,
                               std::span<const Eigen::Vector2d> source_params,
                               const Eigen::Matrix3d& image) {
    if (!(options.threshold > 0.0)) {
        throw InvalidArgument("quadtree threshold must be positive");
    }
    QuadtreeResult result;
    std::vector<IntegrationRegion> stack(regions.rbegin(), regions.rend());
    while (!stack.empty()) {
        const IntegrationRegion r = stack.back();
        stack.pop_back();

        const bool holds_source =
            std::any_of(source_params.begin(), source_params.end(),
                        [&](const Eigen::Vector2d& p) { return r.contains(p); });
        if (holds_source) {
            result.regions.push_back(r);
            continue;
        }

        std::array<Eigen::Vector3d, 9> x;
        const double us[3] = {r.u0, 0.5 * (r.u0 + r.u1), r.u1};
        const double vs[3] = {r.v0, 0.5 * (r.v0 + r.v1), r.v1};
        double dist = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                x[i + 3 * j] = image * surface.point(us[i], vs[j]);
                dist = std::min(dist, (x[i + 3 * j] - source).norm());
            }
        }
        const double size = std::max({(x[0] - x[2]).norm(), (x[2] - x[8]).norm(),
                                      (x[8] - x[6]).norm(), (x[6] - x[0]).norm()});
        if (!(size > options.threshold * dist)) {
            result.regions.push_back(r);
            continue;
        }
        if (r.depth >= options.max_depth) {
            ++result.depth_cap_hits;
            result.regions.push_back(r);
            continue;
        }
        const double um = 0.5 * (r.u0 + r.u1);
        const double vm = 0.5 * (r.v0 + r.v1);
        const int d = r.depth + 1;
        // pushed in reverse so children come out in (u, v) order
        stack.push_back({um, r.u1, vm, r.v1, d});
        stack.push_back({r.u0, um, vm, r.v1, d});
        stack.push_back({um, r.u1, r.v0, vm, d});
        stack.push_back({r.u0, um, r.v0, vm, d});
    }
    return result;
}

std::vector<ParamPoint> regular_points(const IntegrationRegion& region, int gauss_order) {
    const GaussRule& g = gauss_rule(gauss_order);
    const double hu = 0.5 * (region.u1 - region.u0);
    const double hv = 0.5 * (region.v1 - region.v0);
    const double mu = 0.5 * (region.u1 + region.u0);
    const double mv = 0.5 * (region.v1 + region.v0);
    std::vector<ParamPoint> pts;
    pts.reserve(static_cast<std::size_t>(g.order()) * g.order());
    for (int j = 0; j < g.order(); ++j) {
        for (int i = 0; i < g.order(); ++i) {
            pts.push_back({mu + hu * g.nodes[i], mv + hv * g.nodes[j],
                           g.weights[i] * g.weights[j] * hu * hv});
        }
    }
    return pts;
}

std::vector<ParamPoint> singular_points(const IntegrationRegion& region,
                                        const Eigen::Vector2d& source_param, int gauss_order) {
    if (!region.contains(source_param)) {
        throw InvalidArgument("singular integration needs the source inside the region");
    }
    const GaussRule& g = gauss_rule(gauss_order);
    const Eigen::Vector2d p(std::clamp(source_param.x(), region.u0, region.u1),
                            std::clamp(source_param.y(), region.v0, region.v1));
    const std::array<Eigen::Vector2d, 4> c = {
        Eigen::Vector2d(region.u0, region.v0), Eigen::Vector2d(region.u1, region.v0),
        Eigen::Vector2d(region.u1, region.v1), Eigen::Vector2d(region.u0, region.v1)};

    std::vector<ParamPoint> pts;
    for (int e = 0; e < 4; ++e) {
        const Eigen::Vector2d& a = c[e];
        const Eigen::Vector2d& b = c[(e + 1) % 4];
        const Eigen::Vector2d pa = a - p;
        const Eigen::Vector2d ab = b - a;
        const double twice_area = pa.x() * ab.y() - pa.y() * ab.x();
        if (std::abs(twice_area) <= 1e-14 * region.area()) {
            continue;
        }
        for (int j = 0; j < g.order(); ++j) {
            const double eta = 0.5 * (g.nodes[j] + 1.0);
            for (int i = 0; i < g.order(); ++i) {
                const double xi = 0.5 * (g.nodes[i] + 1.0);
                const Eigen::Vector2d q = p + xi * (pa + eta * ab);
                const double w = 0.25 * g.weights[i] * g.weights[j] * xi * std::abs(twice_area);
                pts.push_back({q.x(), q.y(), w});
            }
        }
    }
    return pts;
}

void integrate_block(const IntegrationRegion& region, const Eigen::Vector3d& source,
                     const IntegrationContext& ctx, BlockIntegrals& acc) {
    for (const ParamPoint& q : regular_points(region, ctx.gauss_order)) {
        accumulate_point(q.s, q.t, q.weight, source, ctx, acc);
    }
}

void integrate_singular(const IntegrationRegion& region, const Eigen::Vector3d& source,
                        const Eigen::Vector2d& source_param, const IntegrationContext& ctx,
                        BlockIntegrals& acc) {
    for (const ParamPoint& q : singular_points(region, source_param, ctx.gauss_order)) {
        accumulate_point(q.s, q.t, q.weight, source, ctx, acc);
    }
}

}  // namespace igabem
