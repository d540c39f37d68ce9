#include "igabem/kernels.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "igabem/error.hpp"

namespace igabem {

namespace {

double checked_distance(const Eigen::Vector3d& source, const Eigen::Vector3d& field,
                        Eigen::Vector3d& dir) {
    const Eigen::Vector3d d = field - source;
    const double r = d.norm();
    if (!(r > 0.0)) {
        throw SingularityError(fmt::format("kernel evaluated at coincident points ({}, {}, {})",
                                           source.x(), source.y(), source.z()));
    }
    dir = d / r;
    return r;
}

Eigen::Matrix3d displacement(const Eigen::Vector3d& dir, double r, const Material& mat) {
    const double nu = mat.poisson_ratio();
    const double c = 1.0 / (16.0 * std::numbers::pi * mat.shear_modulus() * (1.0 - nu) * r);
    Eigen::Matrix3d u = dir * dir.transpose();
    u.diagonal().array() += 3.0 - 4.0 * nu;
    return c * u;
}

Eigen::Matrix3d traction(const Eigen::Vector3d& dir, double r, const Eigen::Vector3d& n,
                         const Material& mat) {
    const double nu = mat.poisson_ratio();
    const double c = -1.0 / (8.0 * std::numbers::pi * (1.0 - nu) * r * r);
    const double c3 = 1.0 - 2.0 * nu;
    const double drdn = dir.dot(n);
    Eigen::Matrix3d t = (3.0 * drdn) * (dir * dir.transpose());
    t.diagonal().array() += c3 * drdn;
    t -= c3 * (dir * n.transpose() - n * dir.transpose());
    return c * t;
}

}  // namespace

Material::Material(double youngs_modulus, double poisson_ratio)
    : e_(youngs_modulus), nu_(poisson_ratio) {
    if (!(e_ > 0.0) || !std::isfinite(e_)) {
        throw InvalidArgument(fmt::format("Young's modulus must be positive, got {}", e_));
    }
    if (!(nu_ > -1.0 && nu_ < 0.5)) {
        throw InvalidArgument(fmt::format("Poisson ratio must lie in (-1, 0.5), got {}", nu_));
    }
}

Eigen::Matrix3d kelvin_U(const Eigen::Vector3d& source, const Eigen::Vector3d& field,
                         const Material& mat) {
    Eigen::Vector3d dir;
    const double r = checked_distance(source, field, dir);
    return displacement(dir, r, mat);
}

Eigen::Matrix3d kelvin_T(const Eigen::Vector3d& source, const Eigen::Vector3d& field,
                         const Eigen::Vector3d& normal, const Material& mat) {
    Eigen::Vector3d dir;
    const double r = checked_distance(source, field, dir);
    return traction(dir, r, normal, mat);
}

void kelvin_pair(const Eigen::Vector3d& source, const Eigen::Vector3d& field,
                 const Eigen::Vector3d& normal, const Material& mat, Eigen::Matrix3d& U,
                 Eigen::Matrix3d& T) {
    Eigen::Vector3d dir;
    const double r = checked_distance(source, field, dir);
    U = displacement(dir, r, mat);
    T = traction(dir, r, normal, mat);
}

}  // namespace igabem
