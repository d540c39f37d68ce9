#include "igabem/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <fmt/format.h>

#include "igabem/error.hpp"

namespace igabem {

namespace {

constexpr int kTrimCheckSamples = 16;

void check_unit_square(double s, double t) {
    constexpr double slack = 1e-12;
    if (!(s >= -slack && s <= 1.0 + slack && t >= -slack && t <= 1.0 + slack)) {
        throw DomainError(fmt::format("parameters ({}, {}) outside the unit square", s, t));
    }
}

SurfaceFrame make_frame(const Eigen::Vector3d& x, const Eigen::Vector3d& xs,
                        const Eigen::Vector3d& xt) {
    const Eigen::Vector3d n = xs.cross(xt);
    const double area = n.norm();
    if (!(area > 1e-13 * xs.norm() * xt.norm()) || area == 0.0) {
        throw SingularFrameError(
            fmt::format("degenerate surface frame at ({}, {}, {})", x.x(), x.y(), x.z()));
    }
    return SurfaceFrame{x, xs, xt, n / area, area};
}

}  // namespace

NurbsPatch::NurbsPatch(BasisSpace space_u, BasisSpace space_v,
                       std::vector<Eigen::Vector3d> control_points, std::vector<double> weights)
    : space_u_(space_u.knots().rescaled(0.0, 1.0), space_u.degree()),
      space_v_(space_v.knots().rescaled(0.0, 1.0), space_v.degree()),
      points_(std::move(control_points)),
      weights_(std::move(weights)) {
    const auto expected = static_cast<std::size_t>(count_u()) * count_v();
    if (points_.size() != expected) {
        throw InvalidArgument(fmt::format("patch needs {}x{} = {} control points, got {}",
                                          count_u(), count_v(), expected, points_.size()));
    }
    if (weights_.size() != expected) {
        throw InvalidArgument(
            fmt::format("patch needs {} weights, got {}", expected, weights_.size()));
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
            throw InvalidArgument(fmt::format("weight {} is not positive ({})", i, weights_[i]));
        }
    }
}

void NurbsPatch::derivatives(double u, double v, Eigen::Vector3d& x, Eigen::Vector3d& xu,
                             Eigen::Vector3d& xv) const {
    const int pu = space_u_.degree();
    const int pv = space_v_.degree();
    const int su = space_u_.find_span(u);
    const int sv = space_v_.find_span(v);
    const Eigen::MatrixXd du = space_u_.nonzero_derivs(su, space_u_.clamp(u), 1);
    const Eigen::MatrixXd dv = space_v_.nonzero_derivs(sv, space_v_.clamp(v), 1);

    Eigen::Vector3d a = Eigen::Vector3d::Zero();
    Eigen::Vector3d au = Eigen::Vector3d::Zero();
    Eigen::Vector3d av = Eigen::Vector3d::Zero();
    double w = 0.0;
    double wu = 0.0;
    double wv = 0.0;
    for (int j = 0; j <= pv; ++j) {
        const int b = sv - pv + j;
        for (int i = 0; i <= pu; ++i) {
            const int ai = su - pu + i;
            const double wt = weight(ai, b);
            const Eigen::Vector3d& p = control_point(ai, b);
            const double n = du(0, i) * dv(0, j) * wt;
            const double nu = du(1, i) * dv(0, j) * wt;
            const double nv = du(0, i) * dv(1, j) * wt;
            a += n * p;
            au += nu * p;
            av += nv * p;
            w += n;
            wu += nu;
            wv += nv;
        }
    }
    x = a / w;
    xu = (au - wu * x) / w;
    xv = (av - wv * x) / w;
}

Eigen::Vector3d NurbsPatch::point(double u, double v) const {
    check_unit_square(u, v);
    Eigen::Vector3d x, xu, xv;
    derivatives(u, v, x, xu, xv);
    return x;
}

SurfaceFrame NurbsPatch::frame(double u, double v) const {
    check_unit_square(u, v);
    Eigen::Vector3d x, xu, xv;
    derivatives(u, v, x, xu, xv);
    return make_frame(x, xu, xv);
}

TrimmingCurve::TrimmingCurve(BasisSpace space, std::vector<Eigen::Vector2d> control_points)
    : space_(BasisSpace(space.knots().rescaled(0.0, 1.0), space.degree())),
      points_(std::move(control_points)) {
    if (static_cast<int>(points_.size()) != space_.size()) {
        throw InvalidArgument(fmt::format("trimming curve needs {} control points, got {}",
                                          space_.size(), points_.size()));
    }
    constexpr double slack = 1e-12;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!(p.x() >= -slack && p.x() <= 1 + slack && p.y() >= -slack && p.y() <= 1 + slack)) {
            throw InvalidArgument(fmt::format(
                "trimming control point {} ({}, {}) outside the parameter square", i, p.x(),
                p.y()));
        }
    }
}

Eigen::Vector2d TrimmingCurve::point(double t) const {
    return bspline_curve_point(space_, points_, t);
}

Eigen::Vector2d TrimmingCurve::derivative(double t) const {
    const int span = space_.find_span(t);
    const Eigen::MatrixXd d = space_.nonzero_derivs(span, space_.clamp(t), 1);
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (int j = 0; j <= space_.degree(); ++j) {
        out += d(1, j) * points_[span - space_.degree() + j];
    }
    return out;
}

TrimmingCurve TrimmingCurve::reversed() const {
    const auto& k = space_.knots().values();
    std::vector<double> knots(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        knots[i] = 1.0 - k[k.size() - 1 - i];
    }
    std::vector<Eigen::Vector2d> pts(points_.rbegin(), points_.rend());
    return TrimmingCurve(BasisSpace(KnotVector(std::move(knots)), space_.degree()),
                         std::move(pts));
}

TrimmedPatch::TrimmedPatch(NurbsPatch base, TrimmingCurve first, TrimmingCurve second)
    : base_(std::move(base)), first_(std::move(first)), second_(std::move(second)) {
    const double same = (first_.point(0) - second_.point(0)).norm() +
                        (first_.point(1) - second_.point(1)).norm();
    const double crossed = (first_.point(0) - second_.point(1)).norm() +
                           (first_.point(1) - second_.point(0)).norm();
    if (crossed < same) {
        second_ = second_.reversed();
        reversed_ = true;
    }

    for (int j = 0; j < kTrimCheckSamples; ++j) {
        const double t = (j + 0.5) / kTrimCheckSamples;
        if ((first_.point(t) - second_.point(t)).norm() < 1e-12) {
            throw DegenerateTrimError(
                fmt::format("trimming curves meet at interior curve parameter {}", t));
        }
        for (int i = 0; i < kTrimCheckSamples; ++i) {
            const double s = (i + 0.5) / kTrimCheckSamples;
            const double det = trim_jacobian(s, t).determinant();
            if (!(det > 0.0)) {
                throw DegenerateTrimError(fmt::format(
                    "trim Jacobian determinant {} at ({}, {}); the first curve must lie on "
                    "the side where the map keeps orientation",
                    det, s, t));
            }
        }
    }
}

Eigen::Vector2d TrimmedPatch::trim_map(double s, double t) const {
    check_unit_square(s, t);
    return (1.0 - s) * first_.point(t) + s * second_.point(t);
}

Eigen::Matrix2d TrimmedPatch::trim_jacobian(double s, double t) const {
    check_unit_square(s, t);
    Eigen::Matrix2d j;
    j.col(0) = second_.point(t) - first_.point(t);
    j.col(1) = (1.0 - s) * first_.derivative(t) + s * second_.derivative(t);
    return j;
}

Eigen::Vector3d TrimmedPatch::point(double s, double t) const {
    const Eigen::Vector2d uv = trim_map(s, t);
    return base_.point(std::clamp(uv.x(), 0.0, 1.0), std::clamp(uv.y(), 0.0, 1.0));
}

SurfaceFrame TrimmedPatch::frame(double s, double t) const {
    const Eigen::Vector2d uv = trim_map(s, t);
    const Eigen::Matrix2d j = trim_jacobian(s, t);
    const double det = j.determinant();
    if (!(det > 0.0)) {
        throw DegenerateTrimError(
            fmt::format("trim Jacobian determinant {} at ({}, {})", det, s, t));
    }
    Eigen::Vector3d x, xu, xv;
    base_.derivatives(std::clamp(uv.x(), 0.0, 1.0), std::clamp(uv.y(), 0.0, 1.0), x, xu, xv);
    const Eigen::Vector3d xs = xu * j(0, 0) + xv * j(1, 0);
    const Eigen::Vector3d xt = xu * j(0, 1) + xv * j(1, 1);
    return make_frame(x, xs, xt);
}

Surface::Surface(NurbsPatch patch, bool flip_normal)
    : geometry_(std::move(patch)), flip_(flip_normal) {}

Surface::Surface(TrimmedPatch patch, bool flip_normal)
    : geometry_(std::move(patch)), flip_(flip_normal) {}

const NurbsPatch& Surface::base() const {
    if (const auto* t = trimmed()) {
        return t->base();
    }
    return std::get<NurbsPatch>(geometry_);
}

Eigen::Vector2d Surface::base_parameters(double s, double t) const {
    if (const auto* tp = trimmed()) {
        return tp->trim_map(s, t);
    }
    check_unit_square(s, t);
    return {s, t};
}

Eigen::Vector3d Surface::point(double s, double t) const {
    return std::visit([&](const auto& g) { return g.point(s, t); }, geometry_);
}

SurfaceFrame Surface::frame(double s, double t) const {
    SurfaceFrame f = std::visit([&](const auto& g) { return g.frame(s, t); }, geometry_);
    if (flip_) {
        f.unit_normal = -f.unit_normal;
    }
    return f;
}

NurbsPatch build_quarter_cylinder(double radius, double length, ArcWeights weights) {
    if (!(radius > 0.0) || !(length > 0.0)) {
        throw InvalidArgument("quarter cylinder needs positive radius and length");
    }
    const double mid = weights == ArcWeights::exact ? std::sqrt(0.5) : 0.7;
    const double r = radius;
    std::vector<Eigen::Vector3d> pts;
    std::vector<double> w;
    for (double z : {0.0, length}) {
        pts.emplace_back(r, 0.0, z);
        pts.emplace_back(r, r, z);
        pts.emplace_back(0.0, r, z);
        w.insert(w.end(), {1.0, mid, 1.0});
    }
    return NurbsPatch(BasisSpace(KnotVector({0, 0, 0, 1, 1, 1}), 2),
                      BasisSpace(KnotVector({0, 0, 1, 1}), 1), std::move(pts), std::move(w));
}

NurbsPatch build_bilinear_patch(const Eigen::Vector3d& p00, const Eigen::Vector3d& p10,
                                const Eigen::Vector3d& p01, const Eigen::Vector3d& p11) {
    const BasisSpace linear(KnotVector({0, 0, 1, 1}), 1);
    return NurbsPatch(linear, linear, {p00, p10, p01, p11}, {1, 1, 1, 1});
}

TrimmingCurve straight_trimming_curve(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return TrimmingCurve(BasisSpace(KnotVector({0, 0, 1, 1}), 1), {a, b});
}

}  // namespace igabem
