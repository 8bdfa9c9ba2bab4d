#pragma once

#include "rpmcf/common.hpp"
#include "rpmcf/rng.hpp"

#include <vector>

namespace rpmcf {

inline constexpr double kApHeight = 12.5;
inline constexpr double kRisHeight = 30.0;
inline constexpr double kUeHeight = 1.5;
inline constexpr double kRisOffset = 10.0;

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct NetworkGeometry {
    std::vector<Point3> ap_positions;
    std::vector<Point3> ris_positions;
    std::vector<Point3> ue_positions;
    double area_side = 1000.0;
    int M = 0;
    int U = 0;
};

struct ShadowParams {
    double delta_f = 0.5;
    double delta_sf = 8.0; // dB
    double d_dc = 100.0;   // m
};

// All gains linear. Matrices are indexed (m, u).
struct LargeScaleParams {
    RMat beta;  // UE-AP
    RMat xi;    // UE-RIS
    RMat iota;  // Rician factor UE-RIS
    RVec alpha; // RIS-AP
    RVec kappa; // Rician factor RIS-AP
    RMat shadow_F;      // dB, UE-AP
    RMat shadow_ue_ris; // dB, UE-RIS
    RVec shadow_ris_ap; // dB, RIS-AP
};

NetworkGeometry generate_geometry(int M, int U, double area_side, Rng& rng);

// Shortest displacement q - p on the horizontal torus; vertical is absolute.
Point3 wrap_displacement(const Point3& p, const Point3& q, double area_side);
double wrap_distance(const Point3& p, const Point3& q, double area_side);

// Linear gain of -34.53 - 38 log10(d) + F dB.
double path_loss_nlos(double d, double shadow_db);

double rician_factor(double d);

// Zero-mean Gaussian field with cov(i, j) = delta_sf^2 2^(-d_ij / d_dc).
RVec correlated_gaussian_field(const std::vector<Point3>& nodes, double area_side,
                               double delta_sf, double d_dc, Rng& rng);

// F(m, u) = sqrt(delta_f) a_u + sqrt(1 - delta_f) b_m for the UE-AP links.
RMat correlated_shadow_fading(const NetworkGeometry& geo, double delta_f, double delta_sf,
                              double d_dc, Rng& rng);

// Draws one UE field, one AP field and one RIS field and composes all three
// link types: UE-AP (a_u, b_m), UE-RIS (a_u, r_m), RIS-AP (r_m, b_m).
LargeScaleParams large_scale_params(const NetworkGeometry& geo, const ShadowParams& sp, Rng& rng);

} // namespace rpmcf
