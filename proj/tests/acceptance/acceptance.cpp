// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "fixtures.hpp"
#include "igabem/assembly.hpp"
#include "igabem/error.hpp"
#include "igabem/kernels.hpp"
#include "igabem/quadrature.hpp"
#include "igabem/solve.hpp"
#include "oracles.hpp"

using namespace igabem;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double patch_test_error(const BoundaryModel& m, const ModelSolution& r) {
    const Eigen::Matrix3d sigma = m.load.stress_tensor();
    std::vector<Eigen::Vector3d> X;
    std::vector<Eigen::Vector3d> uh;
    for (int k = 0; k < static_cast<int>(m.patches.size()); ++k) {
        for (int j = 0; j <= 8; ++j) {
            for (int i = 0; i <= 8; ++i) {
                X.push_back(m.patches[k].surface.point(i / 8.0, j / 8.0));
                uh.push_back(evaluate_displacement(m, r.solution, k, i / 8.0, j / 8.0));
            }
        }
    }
    Eigen::VectorXd diff(3 * X.size());
    Eigen::VectorXd exact(3 * X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        const Eigen::Vector3d ue = oracle::uniform_stress_displacement(
            X[i], sigma, m.material.youngs_modulus(), m.material.poisson_ratio());
        exact.segment<3>(3 * i) = ue;
        diff.segment<3>(3 * i) = uh[i] - ue;
    }
    return oracle::remove_rigid_motion(X, diff).cwiseAbs().maxCoeff() /
           oracle::remove_rigid_motion(X, exact).cwiseAbs().maxCoeff();
}

Outcome spline_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> degree(1, 5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double pou = 0.0;
    double negative = 0.0;
    double outside = 0.0;
    double vs_oracle = 0.0;
    for (int c = 0; c < 1000; ++c) {
        const int p = degree(rng);
        const std::vector<double> U = oracle::random_open_knots(rng, p, 8);
        const BasisSpace space(KnotVector(U), p);
        const double r = unit(rng);
        double u = U.front() + r * (U.back() - U.front());
        if (c % 50 == 0) {
            u = U.back();
        } else if (c % 50 == 1) {
            u = U[p + 1];
        }
        const Eigen::VectorXd N = space.basis(u);
        pou = std::max(pou, std::abs(N.sum() - 1.0));
        for (int i = 0; i < N.size(); ++i) {
            negative = std::max(negative, -N[i]);
            const bool in_support =
                (u >= U[i] && u < U[i + p + 1]) || (u == U.back() && U[i + p + 1] == U.back() && U[i] < u);
            if (!in_support) {
                outside = std::max(outside, std::abs(N[i]));
            }
            vs_oracle = std::max(vs_oracle, std::abs(N[i] - oracle::basis(U, i, p, u)));
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = pou < 1e-12 && negative < 1e-12 && outside < 1e-12 && vs_oracle < 1e-12 &&
                    secs < 5.0;
    return {ok, fmt::format("1000 cases, sum-1 {:.2e}, min {:.2e}, off-support {:.2e}, "
                            "vs recursion {:.2e}, {:.3f} s",
                            pou, -negative, outside, vs_oracle, secs)};
}

Outcome quarter_cylinder() {
    const NurbsPatch printed = build_quarter_cylinder(1.0, 2.0, ArcWeights::as_printed);
    const NurbsPatch exact = build_quarter_cylinder(1.0, 2.0, ArcWeights::exact);
    bool layout = printed.space_u().knots().values() == std::vector<double>{0, 0, 0, 1, 1, 1} &&
                  printed.space_v().knots().values() == std::vector<double>{0, 0, 1, 1} &&
                  printed.weights() == std::vector<double>{1, 0.7, 1, 1, 0.7, 1};
    auto radius = [](const NurbsPatch& p, double u, double v) {
        const Eigen::Vector3d x = p.point(u, v);
        return std::hypot(x.x(), x.y());
    };
    double exact_err = 0.0;
    for (double v : {0.0, 0.5, 1.0}) {
        exact_err = std::max(exact_err, std::abs(radius(exact, 0.5, v) - 1.0));
    }
    double worst_exact = 0.0;
    for (int i = 0; i <= 100; ++i) {
        worst_exact = std::max(worst_exact, std::abs(radius(exact, i / 100.0, 0.3) - 1.0));
    }
    const double deviation = radius(printed, 0.5, 0.0) - 1.0;
    // rational quadratic with end weights 1 and middle weight w through the
    // corner (1,1): mid point is (1/2 + w) / (1 + w) * (1,1)
    const double predicted = std::sqrt(2.0) * (0.5 + 0.7) / (1.0 + 0.7) - 1.0;
    const bool ok = layout && exact_err < 1e-12 && worst_exact < 1e-12 && deviation != 0.0 &&
                    std::abs(deviation - predicted) < 1e-14;
    return {ok, fmt::format("exact-arc mid radius error {:.2e} (max over arc {:.2e}), "
                            "printed 0.7 mid radius deviation {:+.6e}",
                            exact_err, worst_exact, deviation)};
}

Outcome trimming_map() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // straight trims of a flat 2 x 3 rectangle
    const NurbsPatch flat =
        build_bilinear_patch({0, 0, 0}, {2, 0, 0}, {0, 3, 0}, {2, 3, 0});
    double area_err = 0.0;
    auto check_area = [&](Eigen::Vector2d a0, Eigen::Vector2d a1, Eigen::Vector2d b0,
                          Eigen::Vector2d b1) {
        const TrimmedPatch t(flat, straight_trimming_curve(a0, a1), straight_trimming_curve(b0, b1));
        double area = 0.0;
        for (const ParamPoint& q : regular_points(IntegrationRegion{}, 6)) {
            area += q.weight * t.frame(q.s, q.t).area_element;
        }
        std::vector<Eigen::Vector2d> poly{a0, b0, b1, a1};
        for (auto& x : poly) {
            x = Eigen::Vector2d(2.0 * x.x(), 3.0 * x.y());
        }
        area_err = std::max(area_err, std::abs(area - oracle::polygon_area(poly)));
    };
    check_area({0, 0}, {1, 1}, {1, 0}, {1, 1});
    check_area({0, 0}, {0, 1}, {0, 0}, {1, 1});
    for (int i = 0; i < 50; ++i) {
        check_area({0.4 * unit(rng), 0.3 * unit(rng)}, {0.4 * unit(rng), 0.7 + 0.3 * unit(rng)},
                   {0.6 + 0.4 * unit(rng), 0.3 * unit(rng)},
                   {0.6 + 0.4 * unit(rng), 0.7 + 0.3 * unit(rng)});
    }

    // identity trim through assembly and solve
    const BoundaryModel m = fixture::cube_model(2, 1000.0, 0.3);
    const BoundaryModel id = fixture::identity_trimmed(m);
    const CollocationSet cm = collocation_points(m);
    const CollocationSet ci = collocation_points(id);
    const DenseSystem sm = assemble(m, cm);
    const DenseSystem si = assemble(id, ci);
    double identity_err = 1.0;
    if (sm.matrix.rows() == si.matrix.rows()) {
        const Eigen::VectorXd um = solve_model(m).solution.coefficients;
        const Eigen::VectorXd ui = solve_model(id).solution.coefficients;
        identity_err = std::max({(sm.matrix - si.matrix).cwiseAbs().maxCoeff(),
                                 (sm.rhs - si.rhs).cwiseAbs().maxCoeff(),
                                 (um - ui).cwiseAbs().maxCoeff()});
    }

    // curved trims on a curved patch against central differences
    const BasisSpace quad(KnotVector({0, 0, 0, 1, 1, 1}), 2);
    const TrimmedPatch curved(build_quarter_cylinder(1.0, 2.0, ArcWeights::exact),
                              TrimmingCurve(quad, {{0.1, 0.05}, {0.3, 0.5}, {0.15, 0.95}}),
                              TrimmingCurve(quad, {{0.9, 0.1}, {0.7, 0.5}, {0.85, 0.9}}));
    const double h = 1e-6;
    double jac_err = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double s = 0.01 + 0.98 * unit(rng);
        const double t = 0.01 + 0.98 * unit(rng);
        Eigen::Matrix2d fd;
        fd.col(0) = (curved.trim_map(s + h, t) - curved.trim_map(s - h, t)) / (2 * h);
        fd.col(1) = (curved.trim_map(s, t + h) - curved.trim_map(s, t - h)) / (2 * h);
        const Eigen::Matrix2d J = curved.trim_jacobian(s, t);
        jac_err = std::max(jac_err, (J - fd).norm() / J.norm());
        const SurfaceFrame f = curved.frame(s, t);
        const Eigen::Vector3d xs = (curved.point(s + h, t) - curved.point(s - h, t)) / (2 * h);
        const Eigen::Vector3d xt = (curved.point(s, t + h) - curved.point(s, t - h)) / (2 * h);
        jac_err = std::max(jac_err, (f.tangent_u - xs).norm() / f.tangent_u.norm());
        jac_err = std::max(jac_err, (f.tangent_v - xt).norm() / f.tangent_v.norm());
    }
    const bool ok = area_err < 1e-10 && identity_err < 1e-10 && jac_err < 1e-5;
    return {ok, fmt::format("area error {:.2e} over 52 trims, identity trim change {:.2e}, "
                            "Jacobian vs FD {:.2e} at 100 points",
                            area_err, identity_err, jac_err)};
}

Outcome kernel_identity() {
    const Material mat(1000.0, 0.3);
    double closure = 0.0;
    int cap_hits = 0;
    for (const BoundaryModel& m : {fixture::cube_model(2, 1000.0, 0.3),
                                   fixture::trimmed_cube_model(2, 1000.0, 0.3)}) {
        for (const Eigen::Vector3d& source :
             {Eigen::Vector3d(0.5, 0.5, 0.5), Eigen::Vector3d(0.3, 0.6, 0.45),
              Eigen::Vector3d(0.5, 0.4, 0.98), Eigen::Vector3d(0.03, 0.04, 0.05)}) {
            Eigen::Matrix3d total = Eigen::Matrix3d::Zero();
            for (const auto& p : m.patches) {
                const QuadtreeResult q =
                    quadtree_refine(region_partition(p.field), source, p.surface, {1.0, 6});
                cap_hits += q.depth_cap_hits;
                IntegrationContext ctx;
                ctx.surface = &p.surface;
                ctx.field = &p.field;
                ctx.material = &mat;
                ctx.want_field = false;
                BlockIntegrals acc;
                for (const auto& r : q.regions) {
                    integrate_block(r, source, ctx, acc);
                }
                total += acc.kernel_total;
            }
            closure = std::max(closure, (total + Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
        }
    }

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double sym = 0.0;
    double scaling = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Eigen::Vector3d x(d(rng), d(rng), d(rng));
        const Eigen::Vector3d y(d(rng), d(rng), d(rng));
        const Eigen::Matrix3d U = kelvin_U(x, y, mat);
        const double n = U.norm();
        sym = std::max(sym, (U - U.transpose()).norm() / n);
        sym = std::max(sym, (U - kelvin_U(y, x, mat)).norm() / n);
        const double lambda = 0.25 + 4.0 * std::abs(d(rng));
        const Eigen::Matrix3d Us = kelvin_U(x, x + lambda * (y - x), mat);
        scaling = std::max(scaling, (lambda * Us - U).norm() / n);
        const Material stiffer(3.0 * mat.youngs_modulus(), mat.poisson_ratio());
        scaling = std::max(scaling, (3.0 * kelvin_U(x, y, stiffer) - U).norm() / n);
    }
    const bool ok = closure < 1e-4 && sym < 1e-12 && scaling < 1e-12;
    return {ok, fmt::format("closed-cube integral of T + I {:.2e} (8 sources, {} depth-cap cells), "
                            "U symmetry {:.2e}, scaling {:.2e}",
                            closure, cap_hits, sym, scaling)};
}

Outcome rigid_body_closure() {
    double worst = 0.0;
    for (const BoundaryModel& m : {fixture::cube_model(2, 1000.0, 0.0),
                                   fixture::cube_model(3, 1000.0, 0.3)}) {
        const DenseSystem sys = assemble(m, collocation_points(m));
        for (int axis = 0; axis < 3; ++axis) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(sys.matrix.cols());
            for (Eigen::Index i = axis; i < c.size(); i += 3) {
                c[i] = 1.0;
            }
            worst = std::max(worst, (sys.matrix * c).cwiseAbs().maxCoeff());
        }
    }
    return {worst < 1e-8, fmt::format("max |[T] e_i| {:.2e}", worst)};
}

Outcome patch_test(const BoundaryModel& m) {
    const auto t0 = std::chrono::steady_clock::now();
    const ModelSolution r = solve_model(m);
    const double err = patch_test_error(m, r);
    const double secs = seconds_since(t0);
    const int probe = m.probe ? m.probe->patch : 1;
    const Eigen::Vector3d top = evaluate_displacement(m, r.solution, probe, 0.5, 0.5);
    const bool ok = err < 0.01 && secs < 60.0 && r.solution.residual < 1e-10;
    return {ok, fmt::format("{} dofs, relative error {:.2e}, u_z spread top-bottom {:.9f} "
                            "(exact 0.001), residual {:.1e}, {:.2f} s",
                            r.solution.dof_count(), err,
                            top.z() - evaluate_displacement(m, r.solution, 0, 0.5, 0.5).z(),
                            r.solution.residual, secs)};
}

Outcome refinement_behavior() {
    const BoundaryModel base = fixture::cube_model(2);
    std::vector<double> errors;
    bool counts = true;
    std::string detail;
    for (int p : {2, 3, 4}) {
        const BoundaryModel m = p == 2 ? base : elevate_model_order(base, p);
        const std::vector<double> knots = KnotVector::open_uniform(p, 1).values();
        for (const auto& patch : m.patches) {
            counts = counts && patch.field.u.knots().values() == knots &&
                     patch.field.v.knots().values() == knots && patch.field.size() == (p + 1) * (p + 1);
        }
        const ModelSolution r = solve_model(m);
        const int nodes = 8 + 12 * (p - 1) + 6 * (p - 1) * (p - 1);
        counts = counts && r.solution.dof_count() == 3 * nodes;
        errors.push_back(patch_test_error(m, r));
        detail += fmt::format("{}p={} dofs {} error {:.3e}", detail.empty() ? "" : ", ", p,
                              r.solution.dof_count(), errors.back());
    }
    const bool monotone = errors[1] <= errors[0] && errors[2] <= errors[1];
    return {monotone && counts, detail};
}

std::vector<double> geometric_samples(const BoundaryModel& m, int per_patch) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> out;
    for (const auto& p : m.patches) {
        for (int i = 0; i < per_patch; ++i) {
            const double s = unit(rng);
            const double t = unit(rng);
            const SurfaceFrame f = p.surface.frame(s, t);
            const Eigen::Vector2d uv = p.surface.base_parameters(s, t);
            for (const Eigen::Vector3d* v : {&f.position, &f.tangent_u, &f.tangent_v, &f.unit_normal}) {
                out.insert(out.end(), v->data(), v->data() + 3);
            }
            out.push_back(f.area_element);
            out.push_back(uv.x());
            out.push_back(uv.y());
        }
    }
    return out;
}

Outcome decoupling() {
    BoundaryModel m = fixture::trimmed_cube_model(2, 1000.0, 0.3);
    m.patches.push_back({Surface(build_quarter_cylinder(1.0, 2.0)), single_span_field(2)});
    const std::vector<double> before = geometric_samples(m, 100);

    std::vector<BoundaryModel> refined{elevate_model_order(m, 3), elevate_model_order(m, 4)};
    BoundaryModel h = m;
    for (auto& p : h.patches) {
        p.field = FieldSpaces{BasisSpace(KnotVector::open_uniform(2, 3), 2),
                              BasisSpace(KnotVector::open_uniform(2, 2), 2)};
    }
    refined.push_back(h);

    double worst = 0.0;
    bool field_changed = true;
    for (const BoundaryModel& r : refined) {
        const std::vector<double> after = geometric_samples(r, 100);
        if (after.size() != before.size()) {
            return {false, "sample count changed"};
        }
        for (std::size_t i = 0; i < after.size(); ++i) {
            worst = std::max(worst, std::abs(after[i] - before[i]));
        }
        field_changed = field_changed && r.patches[0].field.size() != m.patches[0].field.size();
    }
    return {worst < 1e-14 && field_changed && before.size() >= 10000,
            fmt::format("{} quantities x 3 refinements, max change {:.1e}", before.size(), worst)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "igabem_acceptance_determinism";
    fs::remove_all(root);
    const fs::path model = fs::path(IGABEM_MODELS_DIR) / "cube_trimmed.json";
    std::vector<fs::path> outs{root / "a", root / "b"};
    for (const auto& out : outs) {
        const std::string cmd = fmt::format(
            "\"{}\" solve \"{}\" --out \"{}\" --trace 5:trim1 --trace 6:trim2:x --trace 0:s0:y "
            "--trace 3:t1 --samples 101 > /dev/null",
            IGABEM_CLI, model.string(), out.string());
        const int raw = std::system(cmd.c_str());
        if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) {
            return {false, "solve run failed"};
        }
    }
    int files = 0;
    for (const auto& entry : fs::directory_iterator(outs[0])) {
        if (entry.path().extension() != ".csv") {
            continue;
        }
        ++files;
        const std::string a = slurp(entry.path());
        const std::string b = slurp(outs[1] / entry.path().filename());
        if (a.empty() || a != b) {
            return {false, fmt::format("{} differs", entry.path().filename().string())};
        }
    }
    fs::remove_all(root);
    return {files == 5, fmt::format("{} CSV files byte-identical across two runs", files)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"spline correctness", spline_correctness},
        {"quarter cylinder fixture", quarter_cylinder},
        {"trimming map", trimming_map},
        {"kernel identity", kernel_identity},
        {"rigid-body closure", rigid_body_closure},
        {"patch test", [] { return patch_test(fixture::cube_model(2)); }},
        {"trimmed patch test",
         [] {
             BoundaryModel m = fixture::trimmed_cube_model(2);
             m.probe = Probe{5, 1.0, 0.5, 2};
             return patch_test(m);
         }},
        {"refinement behavior", refinement_behavior},
        {"geometry/field decoupling", decoupling},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        fmt::print("{} {:2} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
