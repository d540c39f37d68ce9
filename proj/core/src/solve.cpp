#include "igabem/solve.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "igabem/error.hpp"

namespace igabem {

DenseLU::DenseLU(Eigen::MatrixXd matrix, double rel_tol) : lu_(std::move(matrix)) {
    if (lu_.rows() != lu_.cols()) {
        throw InvalidArgument(
            fmt::format("matrix is {}x{}, expected square", lu_.rows(), lu_.cols()));
    }
    if (!lu_.allFinite()) {
        throw InvalidArgument("matrix has non-finite entries");
    }
    const int n = static_cast<int>(lu_.rows());
    perm_.resize(n);
    for (int i = 0; i < n; ++i) {
        perm_[i] = i;
    }
    const double scale = n > 0 ? lu_.cwiseAbs().maxCoeff() : 0.0;
    for (int k = 0; k < n; ++k) {
        Eigen::Index p = 0;
        const double pivot = lu_.col(k).tail(n - k).cwiseAbs().maxCoeff(&p);
        p += k;
        if (!(pivot > rel_tol * scale)) {
            throw SingularMatrixError(
                fmt::format("matrix is numerically singular at pivot {} (|pivot| = {:.3e})", k,
                            pivot),
                static_cast<std::size_t>(k));
        }
        if (p != k) {
            lu_.row(k).swap(lu_.row(p));
            std::swap(perm_[k], perm_[p]);
        }
        const double inv = 1.0 / lu_(k, k);
        lu_.col(k).tail(n - k - 1) *= inv;
        lu_.bottomRightCorner(n - k - 1, n - k - 1).noalias() -=
            lu_.col(k).tail(n - k - 1) * lu_.row(k).tail(n - k - 1);
    }
}

Eigen::VectorXd DenseLU::solve(const Eigen::VectorXd& rhs) const {
    const int n = size();
    if (rhs.size() != n) {
        throw InvalidArgument(fmt::format("rhs of size {} for a {}x{} system", rhs.size(), n, n));
    }
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = rhs[perm_[i]];
    }
    for (int i = 0; i < n; ++i) {
        x[i] -= lu_.row(i).head(i).dot(x.head(i));
    }
    for (int i = n - 1; i >= 0; --i) {
        x[i] = (x[i] - lu_.row(i).tail(n - i - 1).dot(x.tail(n - i - 1))) / lu_(i, i);
    }
    return x;
}

Solution solve(const DenseSystem& system) {
    if (system.rhs.size() != system.matrix.rows()) {
        throw InvalidArgument("right-hand side size does not match the matrix");
    }
    if (!system.rhs.allFinite()) {
        throw InvalidArgument("right-hand side has non-finite entries");
    }
    const DenseLU lu(system.matrix);
    Solution sol;
    sol.coefficients = lu.solve(system.rhs);
    const double r = (system.matrix * sol.coefficients - system.rhs).norm();
    const double f = system.rhs.norm();
    sol.residual = f > 0.0 ? r / f : r;
    return sol;
}

std::vector<Pin> choose_rigid_body_pins(const CollocationSet& colloc) {
    if (colloc.size() < 3) {
        throw InvalidArgument("at least three collocation nodes are needed to pin rigid motion");
    }
    const auto& nodes = colloc.nodes;
    const Eigen::Vector3d x0 = nodes[0].point;
    int n1 = 0;
    double best = -1.0;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        const double d = (nodes[i].point - x0).norm();
        if (d > best) {
            best = d;
            n1 = i;
        }
    }
    const Eigen::Vector3d dir = (nodes[n1].point - x0).normalized();
    int n2 = 0;
    best = -1.0;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        const double d = (nodes[i].point - x0).cross(dir).norm();
        if (d > best) {
            best = d;
            n2 = i;
        }
    }
    const Eigen::Vector3d normal = dir.cross(nodes[n2].point - x0);

    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(dir[a]) < std::abs(dir[b]); });
    int axis2 = 0;
    normal.cwiseAbs().maxCoeff(&axis2);

    return {{0, 0}, {0, 1}, {0, 2}, {n1, order[0]}, {n1, order[1]}, {n2, axis2}};
}

void apply_pins(DenseSystem& system, const std::vector<Pin>& pins) {
    for (const Pin& p : pins) {
        const int r = 3 * p.node + p.axis;
        system.matrix.row(r).setZero();
        system.matrix(r, r) = 1.0;
        system.rhs[r] = 0.0;
    }
}

Eigen::VectorXd best_fit_rigid_motion(const std::vector<Eigen::Vector3d>& points,
                                      const Eigen::VectorXd& values) {
    const int n = static_cast<int>(points.size());
    Eigen::MatrixXd a(3 * n, 6);
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector3d& x = points[i];
        a.block<3, 3>(3 * i, 0).setIdentity();
        // w x X = -[X]x w
        Eigen::Matrix3d skew;
        skew << 0.0, x.z(), -x.y(),  //
            -x.z(), 0.0, x.x(),      //
            x.y(), -x.x(), 0.0;
        a.block<3, 3>(3 * i, 3) = skew;
    }
    const Eigen::VectorXd params = a.colPivHouseholderQr().solve(values);
    return a * params;
}

ModelSolution solve_model(const BoundaryModel& model) {
    ModelSolution out;
    out.colloc = collocation_points(model);
    DenseSystem system = assemble(model, out.colloc);
    const bool interior = model.domain == DomainKind::interior;
    if (interior) {
        apply_pins(system, choose_rigid_body_pins(out.colloc));
    }
    out.solution = solve(system);
    out.solution.dofs = out.colloc.dofs;
    for (const auto& p : model.patches) {
        out.solution.field_degree_u = std::max(out.solution.field_degree_u, p.field.u.degree());
        out.solution.field_degree_v = std::max(out.solution.field_degree_v, p.field.v.degree());
    }
    if (interior) {
        std::vector<Eigen::Vector3d> points;
        for (const auto& node : out.colloc.nodes) {
            points.push_back(node.point);
        }
        out.solution.coefficients -= best_fit_rigid_motion(points, out.solution.coefficients);
    }
    return out;
}

Eigen::Vector3d evaluate_displacement(const BoundaryModel& model, const Solution& solution,
                                      int patch, double s, double t) {
    if (patch < 0 || patch >= static_cast<int>(model.patches.size()) ||
        patch >= static_cast<int>(solution.dofs.local_to_node.size())) {
        throw InvalidArgument(fmt::format("unknown patch id {}", patch));
    }
    const FieldSpaces& field = model.patches[patch].field;
    const auto& map = solution.dofs.local_to_node[patch];
    const Eigen::VectorXd nu = field.u.basis(s);
    const Eigen::VectorXd nv = field.v.basis(t);
    Eigen::Vector3d u = Eigen::Vector3d::Zero();
    for (int b = 0; b < field.v.size(); ++b) {
        for (int a = 0; a < field.u.size(); ++a) {
            const double r = nu[a] * nv[b];
            if (r != 0.0) {
                u += r * solution.coefficients.segment<3>(3 * map[a + field.u.size() * b]);
            }
        }
    }
    return u;
}

BoundaryModel elevate_model_order(const BoundaryModel& model, int new_degree) {
    BoundaryModel out = model;
    for (auto& p : out.patches) {
        if (p.field.u.degree() >= new_degree || p.field.v.degree() >= new_degree) {
            throw InvalidArgument(fmt::format(
                "field order {} is not above the current orders ({}, {})", new_degree,
                p.field.u.degree(), p.field.v.degree()));
        }
        p.field.u = elevated_space(p.field.u, new_degree);
        p.field.v = elevated_space(p.field.v, new_degree);
    }
    return out;
}

double probe_functional(const BoundaryModel& model, const ModelSolution& result) {
    const Probe probe = model.probe.value_or(Probe{});
    return evaluate_displacement(model, result.solution, probe.patch, probe.s,
                                 probe.t)[probe.component];
}

std::vector<StudyRow> refinement_study(const BoundaryModel& model, const std::vector<int>& orders,
                                       const Functional& functional) {
    if (!std::is_sorted(orders.begin(), orders.end()) ||
        std::adjacent_find(orders.begin(), orders.end()) != orders.end()) {
        throw InvalidArgument("refinement orders must be strictly increasing");
    }
    std::vector<StudyRow> rows;
    for (int order : orders) {
        bool already = true;
        for (const auto& p : model.patches) {
            already = already && p.field.u.degree() == order && p.field.v.degree() == order;
        }
        const BoundaryModel m = already ? model : elevate_model_order(model, order);
        const ModelSolution result = solve_model(m);
        rows.push_back({order, result.solution.dof_count(), functional(m, result),
                        result.solution.residual});
    }
    return rows;
}

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows) {
    out << "order,dof_count,functional,residual\n";
    for (const auto& r : rows) {
        fmt::print(out, "{},{},{:.17g},{:.17g}\n", r.order, r.dof_count, r.functional,
                   r.residual);
    }
}

}  // namespace igabem
