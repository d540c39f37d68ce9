#include "igabem/splines.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>
#include <fmt/format.h>

#include "igabem/error.hpp"

namespace igabem {

namespace {

constexpr double kRangeSlack = 1e-12;

}  // namespace

KnotVector::KnotVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw InvalidArgument("knot vector is empty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument(fmt::format("knot {} is not finite", i));
        }
        if (i > 0 && values_[i] < values_[i - 1]) {
            throw InvalidArgument(fmt::format("knot vector decreases at index {} ({} < {})", i,
                                              values_[i], values_[i - 1]));
        }
    }
    if (values_.front() == values_.back()) {
        throw InvalidArgument("knot vector has zero length");
    }
}

KnotVector KnotVector::open_uniform(int degree, int spans) {
    if (degree < 0 || spans < 1) {
        throw InvalidArgument("open_uniform needs degree >= 0 and spans >= 1");
    }
    std::vector<double> interior;
    for (int s = 1; s < spans; ++s) {
        interior.push_back(static_cast<double>(s) / spans);
    }
    return open(degree, interior);
}

KnotVector KnotVector::open(int degree, std::span<const double> interior, double first,
                            double last) {
    std::vector<double> v(static_cast<std::size_t>(degree) + 1, first);
    v.insert(v.end(), interior.begin(), interior.end());
    v.insert(v.end(), static_cast<std::size_t>(degree) + 1, last);
    return KnotVector(std::move(v));
}

bool KnotVector::is_open(int degree) const {
    const auto need = static_cast<std::size_t>(degree) + 1;
    if (values_.size() < 2 * need) {
        return false;
    }
    return multiplicity(front()) >= degree + 1 && multiplicity(back()) >= degree + 1;
}

int KnotVector::multiplicity(double u) const {
    return static_cast<int>(std::count(values_.begin(), values_.end(), u));
}

std::vector<double> KnotVector::distinct() const {
    std::vector<double> d;
    for (double k : values_) {
        if (d.empty() || k != d.back()) {
            d.push_back(k);
        }
    }
    return d;
}

KnotVector KnotVector::rescaled(double lo, double hi) const {
    const double a = front();
    const double b = back();
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = lo + (values_[i] - a) / (b - a) * (hi - lo);
    }
    // pin the ends so open-ness survives roundoff
    for (std::size_t i = 0; i < v.size() && values_[i] == a; ++i) {
        v[i] = lo;
    }
    for (std::size_t i = v.size(); i-- > 0 && values_[i] == b;) {
        v[i] = hi;
    }
    return KnotVector(std::move(v));
}

BasisSpace::BasisSpace(KnotVector knots, int degree) : knots_(std::move(knots)), degree_(degree) {
    if (degree_ < 0 || degree_ > 30) {
        throw InvalidArgument(fmt::format("degree {} outside supported range [0, 30]", degree_));
    }
    if (static_cast<int>(knots_.size()) - degree_ - 1 < degree_ + 1) {
        throw InvalidArgument(fmt::format("knot vector of length {} too short for degree {}",
                                          knots_.size(), degree_));
    }
    if (!knots_.is_open(degree_)) {
        throw InvalidArgument(
            fmt::format("knot vector is not open for degree {} (end knots need multiplicity {})",
                        degree_, degree_ + 1));
    }
    for (std::size_t i = 0; i + degree_ + 1 < knots_.size(); ++i) {
        if (knots_[i + degree_ + 1] == knots_[i]) {
            throw InvalidArgument(
                fmt::format("interior knot multiplicity exceeds degree+1 at index {}", i));
        }
    }
}

double BasisSpace::clamp(double u) const {
    const double slack = kRangeSlack * (last() - first());
    if (!(u >= first() - slack && u <= last() + slack)) {
        throw DomainError(
            fmt::format("parameter {} outside knot range [{}, {}]", u, first(), last()));
    }
    return std::clamp(u, first(), last());
}

int BasisSpace::find_span(double u) const {
    u = clamp(u);
    const int n = size();
    if (u >= knots_[n]) {
        return n - 1;
    }
    const auto& v = knots_.values();
    // first knot strictly greater than u, minus one
    auto it = std::upper_bound(v.begin() + degree_, v.begin() + n + 1, u);
    return static_cast<int>(it - v.begin()) - 1;
}

void BasisSpace::nonzero_basis(int span, double u, std::span<double> out) const {
    const int p = degree_;
    double left[32];
    double right[32];
    out[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = u - knots_[span + 1 - j];
        right[j] = knots_[span + j] - u;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tmp = out[r] / (right[r + 1] + left[j - r]);
            out[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out[j] = saved;
    }
}

Eigen::MatrixXd BasisSpace::nonzero_derivs(int span, double u, int max_order) const {
    const int p = degree_;
    const int n = std::min(max_order, p);
    Eigen::MatrixXd ndu(p + 1, p + 1);
    Eigen::MatrixXd a(2, p + 1);
    std::vector<double> left(p + 1), right(p + 1);

    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = u - knots_[span + 1 - j];
        right[j] = knots_[span + j] - u;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];  // lower triangle: knot differences
            const double tmp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu(j, j) = saved;
    }

    Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(max_order + 1, p + 1);
    for (int j = 0; j <= p; ++j) {
        ders(0, j) = ndu(j, p);
    }
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= n; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            ders(k, r) = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= n; ++k) {
        ders.row(k) *= factor;
        factor *= (p - k);
    }
    return ders;
}

Eigen::VectorXd BasisSpace::basis(double u) const {
    const int span = find_span(u);
    u = clamp(u);
    Eigen::VectorXd all = Eigen::VectorXd::Zero(size());
    std::vector<double> local(degree_ + 1);
    nonzero_basis(span, u, local);
    for (int j = 0; j <= degree_; ++j) {
        all[span - degree_ + j] = local[j];
    }
    return all;
}

Eigen::MatrixXd BasisSpace::basis_derivs(double u, int max_order) const {
    if (max_order < 0) {
        throw InvalidArgument("derivative order must be non-negative");
    }
    const int span = find_span(u);
    u = clamp(u);
    const Eigen::MatrixXd local = nonzero_derivs(span, u, max_order);
    Eigen::MatrixXd all = Eigen::MatrixXd::Zero(max_order + 1, size());
    all.middleCols(span - degree_, degree_ + 1) = local;
    return all;
}

std::vector<double> greville_abscissae(const BasisSpace& space) {
    const int p = space.degree();
    if (p == 0) {
        throw UnsupportedError("Greville abscissae are undefined for degree 0");
    }
    const auto& k = space.knots();
    std::vector<double> g(space.size());
    for (int i = 0; i < space.size(); ++i) {
        double sum = 0.0;
        for (int j = 1; j <= p; ++j) {
            sum += k[i + j];
        }
        g[i] = sum / p;
    }
    // exact end points for open knot vectors
    g.front() = space.first();
    g.back() = space.last();
    return g;
}

Eigen::RowVectorXd evaluate(const BasisSpace& space, const Eigen::MatrixXd& coeffs, double u) {
    if (coeffs.rows() != space.size()) {
        throw InvalidArgument(fmt::format("{} coefficients for a basis of size {}", coeffs.rows(),
                                          space.size()));
    }
    const int span = space.find_span(u);
    std::vector<double> local(space.degree() + 1);
    space.nonzero_basis(span, space.clamp(u), local);
    Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(coeffs.cols());
    for (int j = 0; j <= space.degree(); ++j) {
        out += local[j] * coeffs.row(span - space.degree() + j);
    }
    return out;
}

SplineData knot_insert(const BasisSpace& space, const Eigen::MatrixXd& coeffs, double u_new) {
    const int p = space.degree();
    const int n = space.size();
    if (coeffs.rows() != n) {
        throw InvalidArgument(
            fmt::format("{} coefficients for a basis of size {}", coeffs.rows(), n));
    }
    if (!(u_new > space.first() && u_new < space.last())) {
        throw DomainError(fmt::format("inserted knot {} is not strictly inside ({}, {})", u_new,
                                      space.first(), space.last()));
    }
    const int mult = space.knots().multiplicity(u_new);
    if (mult + 1 > p) {
        throw InvalidArgument(fmt::format(
            "inserting {} would raise its multiplicity to {} > degree {}", u_new, mult + 1, p));
    }
    const int k = space.find_span(u_new);
    const auto& kv = space.knots();

    Eigen::MatrixXd out(n + 1, coeffs.cols());
    for (int i = 0; i <= k - p; ++i) {
        out.row(i) = coeffs.row(i);
    }
    for (int i = k - p + 1; i <= k; ++i) {
        const double alpha = (u_new - kv[i]) / (kv[i + p] - kv[i]);
        out.row(i) = alpha * coeffs.row(i) + (1.0 - alpha) * coeffs.row(i - 1);
    }
    for (int i = k + 1; i <= n; ++i) {
        out.row(i) = coeffs.row(i - 1);
    }

    std::vector<double> knots = kv.values();
    knots.insert(knots.begin() + k + 1, u_new);
    return {BasisSpace(KnotVector(std::move(knots)), p), std::move(out)};
}

BasisSpace elevated_space(const BasisSpace& space, int new_degree) {
    if (new_degree <= space.degree()) {
        throw InvalidArgument(fmt::format("new degree {} must exceed current degree {}",
                                          new_degree, space.degree()));
    }
    const int t = new_degree - space.degree();
    std::vector<double> knots;
    for (double u : space.knots().distinct()) {
        const int m = space.knots().multiplicity(u) + t;
        knots.insert(knots.end(), m, u);
    }
    return BasisSpace(KnotVector(std::move(knots)), new_degree);
}

SplineData degree_elevate(const BasisSpace& space, const Eigen::MatrixXd& coeffs,
                          int new_degree) {
    if (coeffs.rows() != space.size()) {
        throw InvalidArgument(fmt::format("{} coefficients for a basis of size {}", coeffs.rows(),
                                          space.size()));
    }
    BasisSpace target = elevated_space(space, new_degree);

    // The old space is a subspace of the new one, so interpolation at any
    // Schoenberg-Whitney point set recovers the exact coefficients. Greville
    // points of the target satisfy that condition.
    const std::vector<double> g = greville_abscissae(target);
    const int m = target.size();
    Eigen::MatrixXd colloc(m, m);
    Eigen::MatrixXd rhs(m, coeffs.cols());
    for (int i = 0; i < m; ++i) {
        colloc.row(i) = target.basis(g[i]).transpose();
        rhs.row(i) = evaluate(space, coeffs, g[i]);
    }
    Eigen::MatrixXd elevated = colloc.partialPivLu().solve(rhs);
    return {std::move(target), std::move(elevated)};
}

Eigen::Vector2d bspline_curve_point(const BasisSpace& space,
                                    std::span<const Eigen::Vector2d> control_points, double t) {
    if (static_cast<int>(control_points.size()) != space.size()) {
        throw InvalidArgument(fmt::format("{} control points for a basis of size {}",
                                          control_points.size(), space.size()));
    }
    const int span = space.find_span(t);
    std::vector<double> local(space.degree() + 1);
    space.nonzero_basis(span, space.clamp(t), local);
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    for (int j = 0; j <= space.degree(); ++j) {
        x += local[j] * control_points[span - space.degree() + j];
    }
    return x;
}

}  // namespace igabem
