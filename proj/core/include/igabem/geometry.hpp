#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "igabem/splines.hpp"

namespace igabem {

/// Local frame of a surface point. `tangent_u`/`tangent_v` are derivatives
/// with respect to whichever parameters the frame was evaluated in.
struct SurfaceFrame {
    Eigen::Vector3d position;
    Eigen::Vector3d tangent_u;
    Eigen::Vector3d tangent_v;
    Eigen::Vector3d unit_normal;
    double area_element = 0.0;
};

/// Tensor-product rational patch over the unit square (knot vectors are
/// rescaled to [0,1] on construction). Control points and weights are stored
/// with the u index running fastest: entry (a, b) lives at a + A*b.
class NurbsPatch {
public:
    NurbsPatch() = default;
    NurbsPatch(BasisSpace space_u, BasisSpace space_v, std::vector<Eigen::Vector3d> control_points,
               std::vector<double> weights);

    const BasisSpace& space_u() const { return space_u_; }
    const BasisSpace& space_v() const { return space_v_; }
    int count_u() const { return space_u_.size(); }
    int count_v() const { return space_v_.size(); }
    const std::vector<Eigen::Vector3d>& control_points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    const Eigen::Vector3d& control_point(int a, int b) const { return points_[a + count_u() * b]; }
    double weight(int a, int b) const { return weights_[a + count_u() * b]; }

    Eigen::Vector3d point(double u, double v) const;
    /// Frame with normal oriented as tangent_u x tangent_v. Throws
    /// SingularFrameError where the tangents are parallel.
    SurfaceFrame frame(double u, double v) const;

    /// Position and first partial derivatives, without the degeneracy check.
    void derivatives(double u, double v, Eigen::Vector3d& x, Eigen::Vector3d& xu,
                     Eigen::Vector3d& xv) const;

    friend bool operator==(const NurbsPatch&, const NurbsPatch&) = default;

private:
    BasisSpace space_u_;
    BasisSpace space_v_;
    std::vector<Eigen::Vector3d> points_;
    std::vector<double> weights_;
};

/// B-spline curve in the (u,v) parameter square of a patch. The curve
/// parameter range is normalized to [0,1] on construction.
class TrimmingCurve {
public:
    TrimmingCurve() = default;
    TrimmingCurve(BasisSpace space, std::vector<Eigen::Vector2d> control_points);

    const BasisSpace& space() const { return space_; }
    const std::vector<Eigen::Vector2d>& control_points() const { return points_; }

    Eigen::Vector2d point(double t) const;
    Eigen::Vector2d derivative(double t) const;
    /// Same curve traversed from t=1 to t=0.
    TrimmingCurve reversed() const;

    friend bool operator==(const TrimmingCurve&, const TrimmingCurve&) = default;

private:
    BasisSpace space_;
    std::vector<Eigen::Vector2d> points_;
};

/// A patch restricted to the region between two trimming curves.
///
/// The retained region is parameterized over a unit square (s,t):
/// s=0 runs along the first curve, s=1 along the second, and
///   (u,v) = (1-s) * C_first(t) + s * C_second(t).
/// Geometry is then evaluated through the base patch, so every frame
/// carries the product of both Jacobians.
class TrimmedPatch {
public:
    TrimmedPatch() = default;
    /// Reverses `second` when that makes the curves run the same way, then
    /// validates the blend: curves must not meet at interior samples and the
    /// Jacobian determinant must be positive at the interior check points.
    /// Throws DegenerateTrimError otherwise.
    TrimmedPatch(NurbsPatch base, TrimmingCurve first, TrimmingCurve second);

    const NurbsPatch& base() const { return base_; }
    const TrimmingCurve& first() const { return first_; }
    const TrimmingCurve& second() const { return second_; }
    bool second_was_reversed() const { return reversed_; }

    Eigen::Vector2d trim_map(double s, double t) const;
    /// d(u,v)/d(s,t); columns are the s and t derivatives.
    Eigen::Matrix2d trim_jacobian(double s, double t) const;
    Eigen::Vector3d point(double s, double t) const;
    /// Frame of the composite map (s,t) -> (u,v) -> x.
    SurfaceFrame frame(double s, double t) const;

    /// Compares the geometry; whether `second` was reversed on input is ignored.
    friend bool operator==(const TrimmedPatch& a, const TrimmedPatch& b) {
        return a.base_ == b.base_ && a.first_ == b.first_ && a.second_ == b.second_;
    }

private:
    NurbsPatch base_;
    TrimmingCurve first_;
    TrimmingCurve second_;
    bool reversed_ = false;
};

/// A boundary surface as seen by the analysis: either a whole patch or a
/// trimmed one, always parameterized over [0,1]^2, plus the orientation flag
/// that decides whether the outward normal is x_s x x_t or its negative.
class Surface {
public:
    Surface() = default;
    explicit Surface(NurbsPatch patch, bool flip_normal = false);
    explicit Surface(TrimmedPatch patch, bool flip_normal = false);

    bool is_trimmed() const { return std::holds_alternative<TrimmedPatch>(geometry_); }
    const NurbsPatch& base() const;
    const TrimmedPatch* trimmed() const { return std::get_if<TrimmedPatch>(&geometry_); }
    bool flip_normal() const { return flip_; }

    /// Maps analysis parameters to base-patch parameters.
    Eigen::Vector2d base_parameters(double s, double t) const;
    Eigen::Vector3d point(double s, double t) const;
    /// Oriented frame (normal flipped when requested).
    SurfaceFrame frame(double s, double t) const;

    friend bool operator==(const Surface&, const Surface&) = default;

private:
    std::variant<NurbsPatch, TrimmedPatch> geometry_;
    bool flip_ = false;
};

enum class ArcWeights {
    as_printed,  ///< middle weight 0.7
    exact,       ///< middle weight sqrt(2)/2, a true circular arc
};

/// Quarter cylinder: quadratic arc of the given radius in the x-y plane from
/// (r,0) to (0,r), extruded along z over [0, length]. Knots (0,0,0,1,1,1) by
/// (0,0,1,1).
NurbsPatch build_quarter_cylinder(double radius, double length,
                                  ArcWeights weights = ArcWeights::as_printed);

/// Bilinear patch through four corners given in (u,v) order
/// (0,0), (1,0), (0,1), (1,1).
NurbsPatch build_bilinear_patch(const Eigen::Vector3d& p00, const Eigen::Vector3d& p10,
                                const Eigen::Vector3d& p01, const Eigen::Vector3d& p11);

/// Straight degree-1 trimming curve from a to b.
TrimmingCurve straight_trimming_curve(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

}  // namespace igabem
