#pragma once

#include "rpmcf/common.hpp"
#include "rpmcf/scenario.hpp"

#include <cstdint>
#include <vector>

namespace rpmcf {

// Traffic-dependent terms are in Watt per bit/s (0.25 W/Gbps = 0.25e-9).
struct PowerModel {
    double rho_ap = 0.25e-9;
    double rho_bh = 0.25e-9;
    double p_ap_fix = 6.0;
    double p_ap_antenna = 0.15;
    double p_bh_fix = 0.8;
    double p_ris_element = 0.01; // P(b), 10 dBm
    double alpha_ue = 0.4;
    double p_ue_fix = 0.01;
    double bandwidth = 20e6;

    double rho_total() const { return rho_ap + rho_bh; }
    void validate() const;
};

// mean over draws of log2 det(I_J + H diag(pbar) H^H / sigma2).
double capacity_from_draws(const std::vector<CMat>& draws, const RVec& pbar, double sigma2);

// Per-AP capacity for a phase configuration using pre-drawn channel inputs.
RVec capacity_per_ap(const Scenario& sc, const RMat& theta, const std::vector<ChannelNoise>& draws);

// Fresh draws, one substream per trial.
std::vector<ChannelNoise> draw_capacity_noise(const Scenario& sc, int n_trials, std::uint64_t seed);

// P_fix + sum_u pbar_u / alpha_ue + M L_A P(b) + B (tau_u / tau_c) sum_m C_m rho.
// pbar_w is the per-UE transmit power in Watt.
double total_power(const PowerModel& pm, const RVec& pbar_w, const RVec& capacities, int L_A, int M, int J, int U,
                   int tau_u, int tau_c);

// B * sum_se / P_tot, bit/Joule.
double energy_efficiency(double sum_se, double p_tot, double bandwidth);

} // namespace rpmcf
