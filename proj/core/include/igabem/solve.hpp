#pragma once

#include <array>
#include <functional>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "igabem/assembly.hpp"
#include "igabem/model.hpp"

namespace igabem {

struct Solution {
    /// Displacement coefficients, three per node.
    Eigen::VectorXd coefficients;
    DofMap dofs;
    int field_degree_u = 0;
    int field_degree_v = 0;
    /// ||A u - F|| / ||F|| of the system actually solved (absolute when F = 0).
    double residual = 0.0;

    int dof_count() const { return static_cast<int>(coefficients.size()); }
};

/// LU factorization with partial pivoting of a dense square matrix.
class DenseLU {
public:
    /// Throws SingularMatrixError (carrying the pivot column) when a pivot
    /// falls below `rel_tol` times the largest entry of the matrix.
    explicit DenseLU(Eigen::MatrixXd matrix, double rel_tol = 1e-14);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    int size() const { return static_cast<int>(lu_.rows()); }

private:
    Eigen::MatrixXd lu_;
    std::vector<int> perm_;
};

/// Solves the collocated system. Throws SingularMatrixError for numerically
/// singular matrices and InvalidArgument for non-square or non-finite input.
Solution solve(const DenseSystem& system);

/// One pinned displacement component (node, axis), used to remove the
/// rigid-body null space of interior pure-traction problems.
struct Pin {
    int node = 0;
    int axis = 0;
};

/// Six pins in a 3-2-1 pattern: all components at one node, two at the node
/// farthest from it, one at the node farthest from the line through both.
std::vector<Pin> choose_rigid_body_pins(const CollocationSet& colloc);

/// Replaces the pinned equations by u_pin = 0.
void apply_pins(DenseSystem& system, const std::vector<Pin>& pins);

/// Least-squares rigid motion a + w x X fitted to `values` at `points`
/// (one 3-vector per point), returned as values at the same points.
Eigen::VectorXd best_fit_rigid_motion(const std::vector<Eigen::Vector3d>& points,
                                      const Eigen::VectorXd& values);

struct ModelSolution {
    CollocationSet colloc;
    Solution solution;
};

/// Collocation, assembly and solve. Interior domains are pure traction
/// problems: six components are pinned and the reported coefficients have
/// their best-fit rigid motion removed.
ModelSolution solve_model(const BoundaryModel& model);

/// u(s,t) = sum R_ab(s,t) d_ab on the given patch.
Eigen::Vector3d evaluate_displacement(const BoundaryModel& model, const Solution& solution,
                                      int patch, double s, double t);

/// Raises every patch's field spaces to the given degree in both
/// directions. Geometry is copied untouched.
BoundaryModel elevate_model_order(const BoundaryModel& model, int new_degree);

struct StudyRow {
    int order = 0;
    int dof_count = 0;
    double functional = 0.0;
    double residual = 0.0;
};

using Functional = std::function<double(const BoundaryModel&, const ModelSolution&)>;

/// Displacement component at the model's probe (or the centre of patch 0,
/// z component, without one).
double probe_functional(const BoundaryModel& model, const ModelSolution& result);

/// Solves at each field order in `orders` (strictly increasing, each above
/// or equal to the current order) and records the functional.
std::vector<StudyRow> refinement_study(const BoundaryModel& model, const std::vector<int>& orders,
                                       const Functional& functional = probe_functional);

/// CSV with header "order,dof_count,functional,residual".
void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows);

}  // namespace igabem
