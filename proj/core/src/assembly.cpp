#include "igabem/assembly.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "igabem/error.hpp"
#include "igabem/quadrature.hpp"

namespace igabem {

namespace {

struct Candidate {
    int patch;
    int local;
    Eigen::Vector2d param;
    Eigen::Vector3d point;
};

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

template <class RowFn>
void for_each_row(int rows, int threads, RowFn&& fn) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(rows, 1));
    if (workers == 1) {
        for (int n = 0; n < rows; ++n) {
            fn(n);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int n = next++; n < rows; n = next++) {
                try {
                    fn(n);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                    next = rows;
                }
            }
        });
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

CollocationSet collocation_points(const BoundaryModel& model) {
    std::vector<Candidate> cand;
    for (int k = 0; k < static_cast<int>(model.patches.size()); ++k) {
        const auto& patch = model.patches[k];
        const std::vector<double> gu = greville_abscissae(patch.field.u);
        const std::vector<double> gv = greville_abscissae(patch.field.v);
        for (int b = 0; b < static_cast<int>(gv.size()); ++b) {
            for (int a = 0; a < static_cast<int>(gu.size()); ++a) {
                const Eigen::Vector2d param(gu[a], gv[b]);
                cand.push_back({k, a + static_cast<int>(gu.size()) * b, param,
                                patch.surface.point(param.x(), param.y())});
            }
        }
    }

    const double tol = model.merge_tolerance();
    CollocationSet set;
    std::vector<int> parent(cand.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
            const double d = (cand[i].point - cand[j].point).norm();
            if (d < tol) {
                const int ri = find_root(parent, static_cast<int>(i));
                const int rj = find_root(parent, static_cast<int>(j));
                parent[std::max(ri, rj)] = std::min(ri, rj);
            } else if (d < 10.0 * tol) {
                set.diagnostics.push_back(fmt::format(
                    "collocation points of patch {} and patch {} differ by {:.3e} (merge "
                    "tolerance {:.3e}); trimming-curve parameterizations may not match",
                    cand[i].patch, cand[j].patch, d, tol));
            }
        }
    }
    for (const auto& msg : set.diagnostics) {
        spdlog::warn("{}", msg);
    }

    set.dofs.local_to_node.resize(model.patches.size());
    for (std::size_t k = 0; k < model.patches.size(); ++k) {
        set.dofs.local_to_node[k].assign(model.patches[k].field.size(), -1);
    }
    std::vector<int> root_to_node(cand.size(), -1);
    for (std::size_t i = 0; i < cand.size(); ++i) {
        const int root = find_root(parent, static_cast<int>(i));
        if (root_to_node[root] < 0) {
            root_to_node[root] = static_cast<int>(set.nodes.size());
            set.nodes.push_back({cand[i].point, {}});
        }
        const int node = root_to_node[root];
        set.nodes[node].occurrences.push_back({cand[i].patch, cand[i].param});
        set.dofs.local_to_node[cand[i].patch][cand[i].local] = node;
    }
    set.dofs.node_count = static_cast<int>(set.nodes.size());
    return set;
}

std::vector<SourceBasis> source_basis_values(const BoundaryModel& model,
                                             const CollocationSet& colloc) {
    std::vector<SourceBasis> out(colloc.size());
    for (std::size_t n = 0; n < colloc.size(); ++n) {
        const Occurrence& occ = colloc.nodes[n].occurrences.front();
        const FieldSpaces& field = model.patches[occ.patch].field;
        const Eigen::VectorXd nu = field.u.basis(occ.param.x());
        const Eigen::VectorXd nv = field.v.basis(occ.param.y());
        std::map<int, double> acc;
        for (int b = 0; b < field.v.size(); ++b) {
            for (int a = 0; a < field.u.size(); ++a) {
                const double r = nu[a] * nv[b];
                if (r != 0.0) {
                    acc[colloc.dofs.local_to_node[occ.patch][a + field.u.size() * b]] += r;
                }
            }
        }
        out[n].terms.assign(acc.begin(), acc.end());
    }
    return out;
}

RawRows integrate_rows(const BoundaryModel& model, const CollocationSet& colloc,
                       bool want_matrix, bool want_rhs) {
    const int nodes = static_cast<int>(colloc.size());
    const int ndof = 3 * nodes;
    const double tol = model.merge_tolerance();

    std::vector<Eigen::Matrix3d> images = model.symmetry_images();
    images.insert(images.begin(), Eigen::Matrix3d::Identity());

    std::vector<std::vector<IntegrationRegion>> base_regions;
    for (const auto& patch : model.patches) {
        base_regions.push_back(
            region_partition(patch.field, patch.extra_lines_u, patch.extra_lines_v));
    }

    const QuadtreeOptions qt{model.config.quadtree_threshold, model.config.quadtree_max_depth};
    const double sign = model.config.excavation_sign ? -1.0 : 1.0;
    const LoadState load = model.load;
    TractionFunction traction;
    if (want_rhs) {
        traction = [load, sign](const Eigen::Vector3d&, const Eigen::Vector3d& n) {
            return Eigen::Vector3d(sign * load.traction(n));
        };
    }

    RawRows raw;
    if (want_matrix) {
        raw.matrix = Eigen::MatrixXd::Zero(ndof, ndof);
    }
    raw.kernel_totals.assign(nodes, Eigen::Matrix3d::Zero());
    raw.rhs = Eigen::VectorXd::Zero(ndof);
    std::atomic<int> cap_hits{0};

    for_each_row(nodes, model.config.threads, [&](int n) {
        const CollocationNode& node = colloc.nodes[n];
        const Eigen::Vector3d& source = node.point;
        Eigen::MatrixXd row = Eigen::MatrixXd::Zero(3, want_matrix ? ndof : 0);
        Eigen::Matrix3d kernel_total = Eigen::Matrix3d::Zero();
        Eigen::Vector3d load_row = Eigen::Vector3d::Zero();

        for (std::size_t g = 0; g < images.size(); ++g) {
            const Eigen::Matrix3d& image = images[g];
            const bool fixed = g == 0 || (image * source - source).norm() < tol;
            for (int k = 0; k < static_cast<int>(model.patches.size()); ++k) {
                const BoundaryPatch& patch = model.patches[k];
                std::vector<Eigen::Vector2d> params;
                if (fixed) {
                    for (const auto& occ : node.occurrences) {
                        if (occ.patch == k) {
                            params.push_back(occ.param);
                        }
                    }
                }
                const QuadtreeResult regions =
                    quadtree_refine(base_regions[k], source, patch.surface, qt, params, image);
                cap_hits += regions.depth_cap_hits;

                IntegrationContext ctx;
                ctx.surface = &patch.surface;
                ctx.field = &patch.field;
                ctx.material = &model.material;
                ctx.image = image;
                ctx.traction = traction;
                ctx.want_field = want_matrix;
                ctx.gauss_order = model.config.gauss_order;
                BlockIntegrals acc(want_matrix ? patch.field.size() : 0);

                for (const IntegrationRegion& region : regions.regions) {
                    try {
                        const auto hit = std::find_if(
                            params.begin(), params.end(),
                            [&](const Eigen::Vector2d& p) { return region.contains(p); });
                        if (hit != params.end()) {
                            integrate_singular(region, source, *hit, ctx, acc);
                        } else {
                            integrate_block(region, source, ctx, acc);
                        }
                    } catch (const Error& e) {
                        throw Error(e.code(),
                                    fmt::format("patch {} region [{}, {}]x[{}, {}]: {}", k,
                                                region.u0, region.u1, region.v0, region.v1,
                                                e.what()));
                    }
                }

                if (want_matrix) {
                    const auto& map = colloc.dofs.local_to_node[k];
                    for (std::size_t a = 0; a < map.size(); ++a) {
                        row.middleCols<3>(3 * map[a]) += acc.field[a] * image;
                    }
                }
                kernel_total += fixed ? Eigen::Matrix3d(acc.kernel_total * image)
                                      : acc.kernel_total;
                load_row += acc.load;
            }
        }

        if (want_matrix) {
            raw.matrix.middleRows<3>(3 * n) = row;
        }
        raw.kernel_totals[n] = kernel_total;
        raw.rhs.segment<3>(3 * n) = load_row;
    });

    raw.depth_cap_hits = cap_hits;
    if (raw.depth_cap_hits > 0) {
        spdlog::warn("quadtree depth cap {} reached in {} cells; near-singular integrals may be "
                     "inaccurate",
                     model.config.quadtree_max_depth, raw.depth_cap_hits);
    }
    return raw;
}

void free_term_rigid_body(Eigen::MatrixXd& matrix,
                          const std::vector<Eigen::Matrix3d>& kernel_totals,
                          const std::vector<SourceBasis>& source_basis, DomainKind domain) {
    const double jump = domain == DomainKind::exterior ? 1.0 : 0.0;
    for (std::size_t n = 0; n < source_basis.size(); ++n) {
        for (const auto& [m, r] : source_basis[n].terms) {
            matrix.block<3, 3>(3 * n, 3 * m) -= r * kernel_totals[n];
            matrix.block<3, 3>(3 * n, 3 * m).diagonal().array() += r * jump;
        }
    }
}

Eigen::VectorXd neumann_rhs(const BoundaryModel& model, const CollocationSet& colloc) {
    return integrate_rows(model, colloc, false, true).rhs;
}

DenseSystem assemble(const BoundaryModel& model, const CollocationSet& colloc) {
    check_closure(model);
    RawRows raw = integrate_rows(model, colloc, true, true);
    free_term_rigid_body(raw.matrix, raw.kernel_totals, source_basis_values(model, colloc),
                         model.domain);
    return {std::move(raw.matrix), std::move(raw.rhs)};
}

}  // namespace igabem
