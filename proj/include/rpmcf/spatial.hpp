#pragma once

#include "rpmcf/common.hpp"

#include <utility>
#include <vector>

namespace rpmcf {

// Geometry of the RIS plane in units of the carrier wavelength.
inline constexpr double kWavelength = 1.0;
inline constexpr double kRisSpacing = 0.25; // d_H = d_V = wavelength / 4
inline constexpr double kApSpacing = 0.5;

// Unit-modulus ULA response: exp(-i 2 pi spacing j sin(angle)).
CVec ula_steering(int J, double angle, double spacing);
// Same, scaled by 1/sqrt(P) as used for the columns of the AP correlation basis.
CVec ula_steering_normalized(int J, double angle, double spacing, int P);

// Grid index of physical element l on the sqrt(L) x sqrt(L) plane.
std::pair<int, int> uspa_grid_index(int l, int L);

// Planar response over the active elements (physical positions kept):
// exp(i 2 pi spacing (h sin(az) cos(el) + v sin(el))).
CVec uspa_steering(int L, const std::vector<int>& active, double az, double el, double spacing);

// R = R~ R~^H, R~ = d^(PL/2) [A 0], columns of A at -pi/2 + p pi / P.
CMat ap_correlation(int J, int P, double d, double pl);

// Element positions (meters) of the active elements.
std::vector<std::pair<double, double>> ris_element_positions(int L, const std::vector<int>& active,
                                                             double d_h, double d_v);

// d_H d_V sinc(2 |u_l - u_l'| / lambda), sinc(x) = sin(pi x)/(pi x).
RMat ris_correlation(const std::vector<std::pair<double, double>>& positions, double d_h,
                     double d_v, double wavelength);

// Physicists' Gauss-Hermite rule by Golub-Welsch.
std::pair<RVec, RVec> gauss_hermite(int n);

// Gaussian local scattering around nominal_angle with angular spread asd.
// Starts at 30 nodes and doubles until two consecutive rules agree to 1e-8.
CMat local_scattering_correlation(int J, double nominal_angle, double asd, double beta,
                                  double spacing);

// (R_AP^T kron R_RIS) / (J L_A).
CMat full_ris_ap_correlation(const CMat& r_ap, const CMat& r_ris);

double sinc(double x);

} // namespace rpmcf
