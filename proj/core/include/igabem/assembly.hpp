#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "igabem/model.hpp"

namespace igabem {

/// Global numbering of the vector-valued field coefficients. Coefficients of
/// different patches whose collocation points coincide share one node; node
/// k owns equations and unknowns 3k, 3k+1, 3k+2.
struct DofMap {
    /// patch -> local coefficient (a + count_u*b) -> global node
    std::vector<std::vector<int>> local_to_node;
    int node_count = 0;

    int dof_count() const { return 3 * node_count; }
    friend bool operator==(const DofMap&, const DofMap&) = default;
};

struct Occurrence {
    int patch = 0;
    Eigen::Vector2d param = Eigen::Vector2d::Zero();
    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct CollocationNode {
    Eigen::Vector3d point = Eigen::Vector3d::Zero();
    /// Every (patch, analysis parameter) pair that produced this node.
    std::vector<Occurrence> occurrences;
    friend bool operator==(const CollocationNode&, const CollocationNode&) = default;
};

struct CollocationSet {
    std::vector<CollocationNode> nodes;
    DofMap dofs;
    /// Near misses between points that look like they should have merged.
    std::vector<std::string> diagnostics;

    std::size_t size() const { return nodes.size(); }
};

/// Greville points of each patch's field spaces, mapped through the trim and
/// the geometry, merged across patches when closer than the model merge
/// tolerance (transitively). Node order follows the first occurrence in
/// patch order, then local coefficient order.
CollocationSet collocation_points(const BoundaryModel& model);

/// Non-zero global basis values (node, value) at each collocation point.
struct SourceBasis {
    std::vector<std::pair<int, double>> terms;
};
std::vector<SourceBasis> source_basis_values(const BoundaryModel& model,
                                             const CollocationSet& colloc);

struct DenseSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
};

/// Per-row quadrature output before the free-term closure: row n holds
/// the integrals of T R_m for every node m, with symmetry images folded in,
/// and the kernel integral used by the closure.
struct RawRows {
    Eigen::MatrixXd matrix;
    std::vector<Eigen::Matrix3d> kernel_totals;
    Eigen::VectorXd rhs;
    int depth_cap_hits = 0;
};

RawRows integrate_rows(const BoundaryModel& model, const CollocationSet& colloc,
                       bool want_matrix, bool want_rhs);

/// Completes the strongly singular part and the free term through rigid-body
/// translation. With c(P) + PV integral of T dS equal to 0 (interior) or I
/// (exterior), the row for source P_n becomes
///   sum_m [ integral of T R_m - R_m(P_n) integral of T ] d_m (+ u(P_n) if exterior)
/// so a constant displacement produces a zero (interior) row. When the basis
/// interpolates at P_n this is exactly diag := -(sum of the other blocks).
void free_term_rigid_body(Eigen::MatrixXd& matrix, const std::vector<Eigen::Matrix3d>& kernel_totals,
                          const std::vector<SourceBasis>& source_basis, DomainKind domain);

/// sum over patches of integral of U(P_n, Q) t(Q) dS with t = sigma n
/// (negated when excavation_sign is set).
Eigen::VectorXd neumann_rhs(const BoundaryModel& model, const CollocationSet& colloc);

/// Collocated system [T]{u} = {F}.
DenseSystem assemble(const BoundaryModel& model, const CollocationSet& colloc);

}  // namespace igabem
