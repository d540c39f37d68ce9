#pragma once

#include <array>
#include <vector>

#include "igabem/model.hpp"

namespace fixture {

/// Corners (p00, p10, p01, p11) of the six faces of [lo, hi]^3 with
/// outward normals.
inline std::vector<std::array<Eigen::Vector3d, 4>> cube_faces(double lo = 0.0, double hi = 1.0) {
    auto P = [&](int x, int y, int z) {
        return Eigen::Vector3d(x ? hi : lo, y ? hi : lo, z ? hi : lo);
    };
    return {
        {P(0, 0, 0), P(0, 1, 0), P(1, 0, 0), P(1, 1, 0)},  // z = lo
        {P(0, 0, 1), P(1, 0, 1), P(0, 1, 1), P(1, 1, 1)},  // z = hi
        {P(0, 0, 0), P(1, 0, 0), P(0, 0, 1), P(1, 0, 1)},  // y = lo
        {P(0, 1, 0), P(0, 1, 1), P(1, 1, 0), P(1, 1, 1)},  // y = hi
        {P(0, 0, 0), P(0, 0, 1), P(0, 1, 0), P(0, 1, 1)},  // x = lo
        {P(1, 0, 0), P(1, 1, 0), P(1, 0, 1), P(1, 1, 1)},  // x = hi
    };
}

inline igabem::NurbsPatch face_patch(const std::array<Eigen::Vector3d, 4>& c) {
    return igabem::build_bilinear_patch(c[0], c[1], c[2], c[3]);
}

/// Unit cube under uniaxial stress sigma_z, field order `order`.
inline igabem::BoundaryModel cube_model(int order = 2, double E = 1000.0, double nu = 0.0,
                                        double sigma = 1.0) {
    igabem::BoundaryModel m;
    m.material = igabem::Material(E, nu);
    m.load.virgin_stress = {0, 0, sigma, 0, 0, 0};
    for (const auto& f : cube_faces()) {
        m.patches.push_back({igabem::Surface(face_patch(f)), igabem::single_span_field(order)});
    }
    return m;
}

/// The top face replaced by two triangles split along its diagonal, each a
/// trimmed copy of the full face bounded by two straight trimming curves.
inline igabem::BoundaryModel trimmed_cube_model(int order = 2, double E = 1000.0,
                                                double nu = 0.0, double sigma = 1.0) {
    igabem::BoundaryModel m = cube_model(order, E, nu, sigma);
    const igabem::NurbsPatch top = face_patch(cube_faces()[1]);
    m.patches.erase(m.patches.begin() + 1);
    using igabem::straight_trimming_curve;
    const igabem::TrimmedPatch lower(top, straight_trimming_curve({0, 0}, {1, 1}),
                                     straight_trimming_curve({1, 0}, {1, 1}));
    const igabem::TrimmedPatch upper(top, straight_trimming_curve({0, 0}, {0, 1}),
                                     straight_trimming_curve({0, 0}, {1, 1}));
    m.patches.push_back({igabem::Surface(lower), igabem::single_span_field(order)});
    m.patches.push_back({igabem::Surface(upper), igabem::single_span_field(order)});
    return m;
}

/// Every face wrapped in the identity trim (left and right parameter edges).
inline igabem::BoundaryModel identity_trimmed(const igabem::BoundaryModel& model) {
    igabem::BoundaryModel m = model;
    for (auto& p : m.patches) {
        const igabem::TrimmedPatch t(p.surface.base(),
                                     igabem::straight_trimming_curve({0, 0}, {0, 1}),
                                     igabem::straight_trimming_curve({1, 0}, {1, 1}));
        p.surface = igabem::Surface(t, p.surface.flip_normal());
    }
    return m;
}

}  // namespace fixture
