#pragma once

#include <Eigen/Core>

namespace igabem {

/// Isotropic linear-elastic material. Units follow the model (e.g. MPa).
class Material {
public:
    Material() = default;
    /// Throws InvalidArgument unless E > 0 and -1 < nu < 0.5.
    Material(double youngs_modulus, double poisson_ratio);

    double youngs_modulus() const { return e_; }
    double poisson_ratio() const { return nu_; }
    double shear_modulus() const { return e_ / (2.0 * (1.0 + nu_)); }

    friend bool operator==(const Material&, const Material&) = default;

private:
    double e_ = 1.0;
    double nu_ = 0.0;
};

/// Kelvin displacement kernel: U(i,j) is the j-displacement at `field` due to
/// a unit point force in direction i at `source`.
///   U_ij = [(3-4nu) d_ij + r_i r_j] / (16 pi G (1-nu) r)
/// Throws SingularityError when the points coincide.
Eigen::Matrix3d kelvin_U(const Eigen::Vector3d& source, const Eigen::Vector3d& field,
                         const Material& mat);

/// Kelvin traction kernel on a surface with unit normal `normal` at `field`:
///   T_ij = -1/(8 pi (1-nu) r^2) { dr/dn [(1-2nu) d_ij + 3 r_i r_j]
///                                 - (1-2nu) (r_i n_j - r_j n_i) }
/// with r = field - source and r_i the unit direction components.
Eigen::Matrix3d kelvin_T(const Eigen::Vector3d& source, const Eigen::Vector3d& field,
                         const Eigen::Vector3d& normal, const Material& mat);

/// Both kernels from one distance computation (hot path of the assembly).
void kelvin_pair(const Eigen::Vector3d& source, const Eigen::Vector3d& field,
                 const Eigen::Vector3d& normal, const Material& mat, Eigen::Matrix3d& U,
                 Eigen::Matrix3d& T);

}  // namespace igabem
