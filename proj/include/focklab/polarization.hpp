#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace focklab {

// Transverse polarization frames for three-dimensional wave vectors.  The
// north frame is smooth away from the negative z-axis, the south frame away
// from the positive one; each is obtained by parallel transport of the
// equatorial frame along the geodesic from its pole to the direction of k.

enum class PolarSystem { north, south };

struct PolarizationBasis {
    Eigen::Vector3d e1, e2;  // orthonormal, both orthogonal to k
};

// Throws std::domain_error when k lies inside the excluded cone of the chosen
// system (opening half-angle `excluded_angle` around the bad pole) or k = 0.
PolarizationBasis polarization_basis(const Eigen::Vector3d& k, PolarSystem system,
                                     double excluded_angle = 0.2);

// Change of frame R with north_l = sum_m south_m R(m, l); orthogonal 2 x 2.
Eigen::Matrix2d polarization_change(const Eigen::Vector3d& k, double excluded_angle = 0.2);

// Gluing isometry f -> (j_north f, R j_south f): checks that the two scalar
// profiles square-sum to one outside the mass-scale ball, that each profile
// vanishes inside the excluded cone of its own system, and that the frames
// stay orthonormal.  Throws std::domain_error on a support violation.
struct NorthSouthCheck {
    double partition_defect;  // max | j_N^2 + j_S^2 - 1 | over samples with |k| > mass_scale
    double frame_defect;      // max || R^T R - 1 || over admissible samples
    int samples;
};
NorthSouthCheck north_south_isometry(
    const std::vector<Eigen::Vector3d>& ks,
    const std::function<double(const Eigen::Vector3d&)>& j_north,
    const std::function<double(const Eigen::Vector3d&)>& j_south, double mass_scale,
    double excluded_angle = 0.2);

}  // namespace focklab
