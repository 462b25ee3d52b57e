#include "focklab/polarization.hpp"

#include <cmath>
#include <stdexcept>

namespace focklab {

namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;

// Rotation taking `from` to `to` along the shortest arc (both unit vectors).
Matrix3d arc_rotation(const Vector3d& from, const Vector3d& to) {
    Vector3d axis = from.cross(to);
    double s = axis.norm();
    double c = from.dot(to);
    if (s < 1e-14) {
        if (c > 0.0) return Matrix3d::Identity();
        // Antipodal: no shortest arc; callers exclude this cone.
        throw std::domain_error("arc_rotation: antipodal direction");
    }
    Matrix3d k;
    k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    return Matrix3d::Identity() + k + k * k * ((1.0 - c) / (s * s));
}

Vector3d bad_pole(PolarSystem system) {
    return system == PolarSystem::north ? Vector3d(0, 0, -1) : Vector3d(0, 0, 1);
}

}  // namespace

PolarizationBasis polarization_basis(const Eigen::Vector3d& k, PolarSystem system,
                                     double excluded_angle) {
    double norm = k.norm();
    if (norm < 1e-300) throw std::domain_error("polarization_basis: k = 0");
    Vector3d khat = k / norm;
    if (khat.dot(bad_pole(system)) > std::cos(excluded_angle))
        throw std::domain_error("polarization_basis: k inside the excluded cone");
    Vector3d pole = -bad_pole(system);
    Matrix3d r = arc_rotation(pole, khat);
    return {r * Vector3d(1, 0, 0), r * Vector3d(0, 1, 0)};
}

Eigen::Matrix2d polarization_change(const Eigen::Vector3d& k, double excluded_angle) {
    auto n = polarization_basis(k, PolarSystem::north, excluded_angle);
    auto s = polarization_basis(k, PolarSystem::south, excluded_angle);
    Eigen::Matrix2d r;
    r << s.e1.dot(n.e1), s.e1.dot(n.e2), s.e2.dot(n.e1), s.e2.dot(n.e2);
    return r;
}

NorthSouthCheck north_south_isometry(
    const std::vector<Eigen::Vector3d>& ks,
    const std::function<double(const Eigen::Vector3d&)>& j_north,
    const std::function<double(const Eigen::Vector3d&)>& j_south, double mass_scale,
    double excluded_angle) {
    NorthSouthCheck out{0.0, 0.0, 0};
    for (const auto& k : ks) {
        double jn = j_north(k), js = j_south(k);
        double norm = k.norm();
        if (norm < 1e-300) continue;
        Eigen::Vector3d khat = k / norm;
        bool in_zs = khat.dot(bad_pole(PolarSystem::north)) > std::cos(excluded_angle);
        bool in_zn = khat.dot(bad_pole(PolarSystem::south)) > std::cos(excluded_angle);
        if (std::abs(jn) > 1e-12 && in_zs)
            throw std::domain_error("north_south_isometry: north profile meets the south zone");
        if (std::abs(js) > 1e-12 && in_zn)
            throw std::domain_error("north_south_isometry: south profile meets the north zone");
        if (norm > mass_scale)
            out.partition_defect =
                std::max(out.partition_defect, std::abs(jn * jn + js * js - 1.0));
        if (!in_zs && !in_zn) {
            Eigen::Matrix2d r = polarization_change(k, excluded_angle);
            out.frame_defect = std::max(
                out.frame_defect,
                (r.transpose() * r - Eigen::Matrix2d::Identity()).norm());
        }
        ++out.samples;
    }
    return out;
}

}  // namespace focklab
