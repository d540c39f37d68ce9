#include "igabem/model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "igabem/error.hpp"
#include "igabem/quadrature.hpp"

namespace igabem {

FieldSpaces single_span_field(int degree) {
    const BasisSpace space(KnotVector::open_uniform(degree, 1), degree);
    return {space, space};
}

Eigen::Matrix3d LoadState::stress_tensor() const {
    const auto& s = virgin_stress;
    Eigen::Matrix3d m;
    m << s[0], s[3], s[5],  //
        s[3], s[1], s[4],   //
        s[5], s[4], s[2];
    return m;
}

Eigen::Vector3d LoadState::traction(const Eigen::Vector3d& normal) const {
    return stress_tensor() * normal;
}

Eigen::Matrix3d reflection(SymmetryPlane plane) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    switch (plane) {
        case SymmetryPlane::yz: m(0, 0) = -1.0; break;
        case SymmetryPlane::zx: m(1, 1) = -1.0; break;
        case SymmetryPlane::xy: m(2, 2) = -1.0; break;
    }
    return m;
}

double BoundaryModel::bounding_diagonal() const {
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector3d hi = -lo;
    for (const auto& p : patches) {
        for (const auto& x : p.surface.base().control_points()) {
            lo = lo.cwiseMin(x);
            hi = hi.cwiseMax(x);
        }
    }
    return patches.empty() ? 0.0 : (hi - lo).norm();
}

double BoundaryModel::merge_tolerance() const {
    return config.merge_tol.value_or(1e-8 * bounding_diagonal());
}

std::vector<Eigen::Matrix3d> BoundaryModel::symmetry_images() const {
    std::vector<Eigen::Matrix3d> images;
    const std::size_t k = symmetry_planes.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (std::size_t{1} << i)) {
                g = g * reflection(symmetry_planes[i]);
            }
        }
        images.push_back(g);
    }
    return images;
}

ClosureReport closure_report(const BoundaryModel& model, int gauss_order) {
    std::vector<Eigen::Matrix3d> images = model.symmetry_images();
    images.insert(images.begin(), Eigen::Matrix3d::Identity());

    ClosureReport report;
    Eigen::Vector3d vector_area = Eigen::Vector3d::Zero();
    for (const auto& patch : model.patches) {
        const auto regions = region_partition(patch.field, patch.extra_lines_u,
                                              patch.extra_lines_v);
        for (const auto& region : regions) {
            for (const ParamPoint& q : regular_points(region, gauss_order)) {
                const SurfaceFrame f = patch.surface.frame(q.s, q.t);
                const double w = q.weight * f.area_element;
                for (const auto& g : images) {
                    const Eigen::Vector3d n = g * f.unit_normal;
                    const Eigen::Vector3d x = g * f.position;
                    report.area += w;
                    vector_area += w * n;
                    report.signed_volume += w * x.dot(n) / 3.0;
                }
            }
        }
    }
    report.vector_area_ratio = report.area > 0.0 ? vector_area.norm() / report.area : 0.0;
    return report;
}

void check_closure(const BoundaryModel& model) {
    const ClosureReport r = closure_report(model);
    if (r.vector_area_ratio > 1e-6) {
        throw UnsupportedError(fmt::format(
            "boundary is not closed (|integral of n dS| / area = {:.3e}); open models need "
            "symmetry planes that complete them",
            r.vector_area_ratio));
    }
    const bool interior = model.domain == DomainKind::interior;
    if (interior && !(r.signed_volume > 0.0)) {
        throw UnsupportedError(fmt::format(
            "normals point into the body (signed volume {:.6g}); flip patch orientation or "
            "declare an exterior domain",
            r.signed_volume));
    }
    if (!interior && !(r.signed_volume < 0.0)) {
        throw UnsupportedError(fmt::format(
            "exterior domain needs normals pointing into the cavity (signed volume {:.6g})",
            r.signed_volume));
    }
}

}  // namespace igabem
