#pragma once

// B-spline bases on open (clamped) knot vectors.
//
// Indexing is 0-based throughout: basis function i has support
// [knots[i], knots[i+degree+1]). The classical 1-based textbook index a
// maps to i = a - 1, and the Greville formula with 0-based i reads
// g_i = (knots[i+1] + ... + knots[i+degree]) / degree.

#include <span>
#include <vector>

#include <Eigen/Core>

namespace igabem {

class KnotVector {
public:
    KnotVector() = default;
    /// Throws InvalidArgument when values are decreasing or empty.
    explicit KnotVector(std::vector<double> values);

    /// Open knot vector on [0,1] with the given interior knots (each listed
    /// once per multiplicity).
    static KnotVector open_uniform(int degree, int spans);
    static KnotVector open(int degree, std::span<const double> interior, double first = 0.0,
                           double last = 1.0);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }
    const std::vector<double>& values() const { return values_; }

    /// True when the first and last knots are repeated at least degree+1 times.
    bool is_open(int degree) const;
    int multiplicity(double u) const;
    /// Distinct knot values in increasing order.
    std::vector<double> distinct() const;

    /// Affine map of all knots onto [lo, hi].
    KnotVector rescaled(double lo, double hi) const;

    friend bool operator==(const KnotVector&, const KnotVector&) = default;

private:
    std::vector<double> values_;
};

/// Knot vector plus degree. Only open knot vectors are accepted.
class BasisSpace {
public:
    BasisSpace() = default;
    BasisSpace(KnotVector knots, int degree);

    const KnotVector& knots() const { return knots_; }
    int degree() const { return degree_; }
    /// Number of basis functions.
    int size() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    double first() const { return knots_.front(); }
    double last() const { return knots_.back(); }

    /// Index of the knot span containing u, i.e. knots[span] <= u < knots[span+1].
    /// u == last() maps to the last non-empty span. Throws DomainError outside
    /// the knot range (a relative slack of 1e-12 is clamped).
    int find_span(double u) const;

    /// The degree+1 non-zero basis values at u, for functions span-degree..span.
    void nonzero_basis(int span, double u, std::span<double> out) const;

    /// Values and derivatives of the non-zero functions: row k holds the k-th
    /// derivative, column j belongs to basis function span-degree+j.
    Eigen::MatrixXd nonzero_derivs(int span, double u, int max_order) const;

    /// All basis values at u (length size()).
    Eigen::VectorXd basis(double u) const;
    /// Row k = k-th derivative of every basis function at u.
    Eigen::MatrixXd basis_derivs(double u, int max_order) const;

    /// Clamps u into the knot range if it lies within the evaluation slack.
    double clamp(double u) const;

    friend bool operator==(const BasisSpace&, const BasisSpace&) = default;

private:
    KnotVector knots_;
    int degree_ = 0;
};

/// Greville abscissae, one per basis function. Degree 0 is unsupported.
std::vector<double> greville_abscissae(const BasisSpace& space);

/// A basis together with coefficients (one row per basis function).
struct SplineData {
    BasisSpace space;
    Eigen::MatrixXd coeffs;
};

/// Evaluates sum_i N_i(u) * coeffs.row(i).
Eigen::RowVectorXd evaluate(const BasisSpace& space, const Eigen::MatrixXd& coeffs, double u);

/// Boehm knot insertion. The multiplicity of u_new after insertion must not
/// exceed the degree.
SplineData knot_insert(const BasisSpace& space, const Eigen::MatrixXd& coeffs, double u_new);

/// Raises the degree while keeping the represented function unchanged. Every
/// distinct knot gains (new_degree - degree) in multiplicity so continuity is
/// preserved.
SplineData degree_elevate(const BasisSpace& space, const Eigen::MatrixXd& coeffs, int new_degree);

/// The elevated space alone, as used for field spaces that carry no
/// coefficients yet.
BasisSpace elevated_space(const BasisSpace& space, int new_degree);

Eigen::Vector2d bspline_curve_point(const BasisSpace& space,
                                    std::span<const Eigen::Vector2d> control_points, double t);

}  // namespace igabem
