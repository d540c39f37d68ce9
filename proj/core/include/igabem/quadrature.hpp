#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "igabem/geometry.hpp"
#include "igabem/kernels.hpp"
#include "igabem/model.hpp"

namespace igabem {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int order() const { return static_cast<int>(nodes.size()); }
};

/// Cached rule of the given order, 1 <= order <= 64. Safe to call from
/// several threads.
const GaussRule& gauss_rule(int order);

/// Axis-aligned cell of the analysis square.
struct IntegrationRegion {
    double u0 = 0.0;
    double u1 = 1.0;
    double v0 = 0.0;
    double v1 = 1.0;
    int depth = 0;

    double area() const { return (u1 - u0) * (v1 - v0); }
    bool contains(const Eigen::Vector2d& p, double tol = 1e-12) const;

    friend bool operator==(const IntegrationRegion&, const IntegrationRegion&) = default;
};

/// Grid of cells cut by lines through every interior Greville abscissa and
/// every interior knot of the field spaces, plus the extra lines given.
std::vector<IntegrationRegion> region_partition(const FieldSpaces& field,
                                                std::span<const double> extra_u = {},
                                                std::span<const double> extra_v = {});

/// Lines through interior points only, no knot lines.
std::vector<IntegrationRegion> region_partition(std::span<const double> lines_u,
                                                std::span<const double> lines_v);

struct QuadtreeOptions {
    double threshold = 1.0;
    int max_depth = 6;
};

struct QuadtreeResult {
    std::vector<IntegrationRegion> regions;
    /// Number of cells that still failed the ratio test at the depth cap.
    int depth_cap_hits = 0;
};

/// Splits regions that are large compared with their distance to `source`
/// (size > threshold * distance) into four children, recursively. The
/// geometry of each cell is sampled on a 3x3 grid and mapped through `image`.
/// Cells containing one of `source_params` are left alone; they go to the
/// singular integration path.
QuadtreeResult quadtree_refine(std::span<const IntegrationRegion> regions,
                               const Eigen::Vector3d& source, const Surface& surface,
                               const QuadtreeOptions& options,
                               std::span<const Eigen::Vector2d> source_params = {},
                               const Eigen::Matrix3d& image = Eigen::Matrix3d::Identity());

/// Everything integrated over a patch (or part of one) for one source point.
struct BlockIntegrals {
    /// integral of U t dS
    Eigen::Vector3d load = Eigen::Vector3d::Zero();
    /// integral of T R_a dS, one 3x3 block per local field basis function
    std::vector<Eigen::Matrix3d> field;
    /// integral of T dS
    Eigen::Matrix3d kernel_total = Eigen::Matrix3d::Zero();

    explicit BlockIntegrals(int field_size = 0)
        : field(static_cast<std::size_t>(field_size), Eigen::Matrix3d::Zero()) {}
};

using TractionFunction =
    std::function<Eigen::Vector3d(const Eigen::Vector3d& position, const Eigen::Vector3d& normal)>;

/// What is integrated: the surface (with optional reflection image applied to
/// positions and normals), its field basis, the material and the load.
struct IntegrationContext {
    const Surface* surface = nullptr;
    const FieldSpaces* field = nullptr;
    const Material* material = nullptr;
    Eigen::Matrix3d image = Eigen::Matrix3d::Identity();
    /// Empty when no load integral is needed.
    TractionFunction traction;
    bool want_field = true;
    int gauss_order = 8;
};

/// Tensor Gauss rule over a region that does not contain the source.
void integrate_block(const IntegrationRegion& region, const Eigen::Vector3d& source,
                     const IntegrationContext& ctx, BlockIntegrals& acc);

/// Region containing the source image at `source_param`: the region is cut
/// into triangles with apex at the source, each mapped from the unit square
/// by a collapsed (Duffy) map whose Jacobian vanishes linearly at the apex and
/// cancels the 1/r singularity. Triangles of zero area (source on an edge or
/// corner) are dropped.
void integrate_singular(const IntegrationRegion& region, const Eigen::Vector3d& source,
                        const Eigen::Vector2d& source_param, const IntegrationContext& ctx,
                        BlockIntegrals& acc);

/// Quadrature points of the singular scheme, for testing and for
/// integrating user functions: (s, t, weight including the parameter
/// Jacobian).
struct ParamPoint {
    double s;
    double t;
    double weight;
};
std::vector<ParamPoint> singular_points(const IntegrationRegion& region,
                                        const Eigen::Vector2d& source_param, int gauss_order);
std::vector<ParamPoint> regular_points(const IntegrationRegion& region, int gauss_order);

}  // namespace igabem
