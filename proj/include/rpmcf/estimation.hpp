#pragma once

#include "rpmcf/common.hpp"
#include "rpmcf/rng.hpp"
#include "rpmcf/scenario.hpp"

#include <vector>

namespace rpmcf {

struct PilotBook {
    int tau_p = 1;
    std::vector<int> assignment;           // t_u
    std::vector<std::vector<int>> cohorts; // UEs per pilot index
    RVec powers;                           // p_u, noise-normalized

    const std::vector<int>& cohort_of(int u) const { return cohorts[assignment[u]]; }
    bool shares_pilot(int u, int k) const { return assignment[u] == assignment[k]; }
};

// Round robin: t_u = u mod tau_p.
PilotBook assign_pilots(int U, int tau_p, const RVec& powers);

struct EstimationMatrices {
    CMat Psi;
    CMat Gamma;
    CMat Lambda;
    CMat Cbar;
    CMat gain; // sqrt(p_u) R^h Psi^-1
};

// Psi = sum over the cohort of p_k tau_p R^h_k, plus I.
CMat psi_matrix(const std::vector<const CMat*>& cohort_rh, const std::vector<double>& cohort_p, int tau_p);

EstimationMatrices estimation_matrices(const CMat& r_h, const CMat& psi, double p_u, int tau_p);

// Projected pilot signal at one AP for the pilot of UE u; noise ~ CN(0, tau_p I).
CVec pilot_projection(const CMat& H_m, const PilotBook& book, int u, Rng& rng);
CVec pilot_projection(const CMat& H_m, const PilotBook& book, int u, const CVec& white_noise);

// ybar = sum over the cohort of sqrt(p_k) tau_p hbar_k.
CVec pilot_mean(const std::vector<const CVec*>& cohort_hbar, const std::vector<double>& cohort_p, int tau_p);

CVec lmmse_estimate(const CVec& y_p, const CVec& h_bar, const CVec& y_bar, const EstimationMatrices& em);

// All (m, u) matrices for one pattern's statistics: [m * U + u].
struct EstimationSet {
    std::vector<EstimationMatrices> mats;
    std::vector<CVec> y_bar; // [m * tau_p + t]
};

EstimationSet estimate_all(const Scenario& sc, const PilotBook& book,
                           const std::vector<AggregatedChannelStats>& stats);

} // namespace rpmcf
