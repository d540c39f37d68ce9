#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "igabem/geometry.hpp"
#include "igabem/kernels.hpp"
#include "igabem/splines.hpp"

namespace igabem {

/// Basis pair approximating the displacement on one patch, defined over the
/// analysis square [0,1]^2 and independent of the geometry bases.
struct FieldSpaces {
    BasisSpace u;
    BasisSpace v;

    int size() const { return u.size() * v.size(); }
    friend bool operator==(const FieldSpaces&, const FieldSpaces&) = default;
};

/// Single-span field spaces of the given degree in both directions.
FieldSpaces single_span_field(int degree);

struct BoundaryPatch {
    Surface surface;
    FieldSpaces field;
    /// User subdivision lines in the analysis square, added to the automatic
    /// ones through collocation points.
    std::vector<double> extra_lines_u;
    std::vector<double> extra_lines_v;

    friend bool operator==(const BoundaryPatch&, const BoundaryPatch&) = default;
};

/// Which side of the boundary the elastic body occupies. For `exterior`
/// (excavations) the normals point out of the material, i.e. into the cavity.
enum class DomainKind { interior, exterior };

/// Symmetry planes through the origin, named by the axes they contain.
enum class SymmetryPlane { xy, yz, zx };

/// Virgin stress as the pseudo-vector (sxx, syy, szz, sxy, syz, szx).
struct LoadState {
    std::array<double, 6> virgin_stress{};

    Eigen::Matrix3d stress_tensor() const;
    /// sigma * n
    Eigen::Vector3d traction(const Eigen::Vector3d& normal) const;

    friend bool operator==(const LoadState&, const LoadState&) = default;
};

struct AnalysisConfig {
    int gauss_order = 8;
    double quadtree_threshold = 1.0;
    int quadtree_max_depth = 6;
    /// Collocation merge distance; defaults to 1e-8 of the bounding-box diagonal.
    std::optional<double> merge_tol;
    /// Apply -sigma*n instead of sigma*n (traction released by excavation).
    bool excavation_sign = false;
    /// Assembly worker threads; 0 picks the hardware concurrency.
    int threads = 0;

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// Point at which scalar results (reports, refinement studies) are read.
struct Probe {
    int patch = 0;
    double s = 0.5;
    double t = 0.5;
    int component = 2;

    friend bool operator==(const Probe&, const Probe&) = default;
};

struct BoundaryModel {
    std::vector<BoundaryPatch> patches;
    Material material;
    LoadState load;
    DomainKind domain = DomainKind::interior;
    std::vector<SymmetryPlane> symmetry_planes;
    AnalysisConfig config;
    std::optional<Probe> probe;

    /// Diagonal of the control-point bounding box, symmetry images excluded.
    double bounding_diagonal() const;
    double merge_tolerance() const;
    /// Reflections generated by the symmetry planes, identity excluded.
    std::vector<Eigen::Matrix3d> symmetry_images() const;

    friend bool operator==(const BoundaryModel&, const BoundaryModel&) = default;
};

Eigen::Matrix3d reflection(SymmetryPlane plane);

/// Closedness and orientation summary of the (symmetry-completed) boundary.
struct ClosureReport {
    double area = 0.0;
    /// |integral of n dS| / area; zero for a closed surface.
    double vector_area_ratio = 0.0;
    /// (1/3) integral of x.n dS; positive when normals point away from the
    /// enclosed volume.
    double signed_volume = 0.0;
};

ClosureReport closure_report(const BoundaryModel& model, int gauss_order = 8);

/// Throws UnsupportedError when the boundary is open, or when the normal
/// orientation does not match the domain kind.
void check_closure(const BoundaryModel& model);

}  // namespace igabem
