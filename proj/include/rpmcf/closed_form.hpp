#pragma once

#include "rpmcf/common.hpp"
#include "rpmcf/estimation.hpp"
#include "rpmcf/rng.hpp"
#include "rpmcf/scenario.hpp"

#include <cstdint>
#include <vector>

namespace rpmcf {

// Single-AP expectations under MR combining.

// E{hhat^H hhat} = |hbar|^2 + p tau tr(Gamma).
double desired_signal(const CVec& h_bar, const CMat& gamma, double p_u, int tau_p);

// mu = p tau tr(Gamma_u R_k) + hbar_u^H R_k hbar_u + p tau hbar_k^H Gamma_u hbar_k + |hbar_u^H hbar_k|^2.
// Pass p_k for the compact form, p_u for the case-table form.
double noncoherent_interference(const CVec& h_bar_u, const CMat& gamma_u, const CVec& h_bar_k,
                                const CMat& r_h_k, double p, int tau_p);

// w = tr(R_k Psi_u^-1 R_u).
cd coherent_trace(const CMat& r_h_k, const CMat& psi_u, const CMat& r_h_u);

// L_uk = p_u p_k tau^2 |tr(C_u W_uk)|^2 = p_u p_k tau^2 |sum_m c_m w_m|^2.
double coherent_interference(const CVec& w, const CVec& c, double p_u, double p_k, int tau_p);

// E{|hhat_u^H h_u|^2}.
double second_moment_self(const CVec& h_bar, const CMat& r_h, const CMat& gamma, double p_u, int tau_p);

// E{|hhat_u^H h_k|^2} for a co-pilot k. with_los_cross adds
// 2 sqrt(p_u p_k) tau Re(conj(hbar_u^H hbar_k) w), which the case table drops.
double second_moment_copilot(const CVec& h_bar_u, const CMat& gamma_u, const CMat& r_h_u, const CVec& h_bar_k,
                             const CMat& r_h_k, const CMat& psi, double p_u, double p_k, int tau_p,
                             bool with_los_cross);

// E{|hhat_u^H h_k|^2} for k on another pilot (hhat_u independent of h_k).
double second_moment_other(const CVec& h_bar_u, const CMat& gamma_u, const CVec& h_bar_k, const CMat& r_h_k,
                           double p_u, int tau_p);

// E{hhat_u^H hhat_k} for a co-pilot k.
cd copilot_inner_mean(const CVec& h_bar_u, const CVec& h_bar_k, const CMat& r_h_u, const CMat& r_h_k,
                      const CMat& psi, double p_u, double p_k, int tau_p, bool with_los);

// Pattern-averaged terms for one UE u. Every RIS draws its pattern uniformly
// and independently, so per-AP quantities are mixtures over that AP's patterns.
struct SinrBreakdown {
    int u = 0;
    int M = 0;
    int U = 0;
    RVec xi_bar;             // E{g_uu}
    RVec delta2;             // |hbar|^4 term, less the pattern variance of xi_bar
    std::vector<RVec> mu;    // [k], compact-form mu_uk (p_k), pattern variance of w folded in
    std::vector<CVec> w;     // [k], mean of w_uk; zero unless k shares u's pilot
    std::vector<bool> copilot; // [k], k in P_u minus u
    // Case-table inputs.
    std::vector<RVec> second_moment; // [k], E{|g_uk(m)|^2} per the case split
    std::vector<CVec> mean;          // [k], case-table E{g_uk(m)} (conjugated convention)
};

std::vector<SinrBreakdown> sinr_breakdowns(const Scenario& sc, const SystemStats& stats,
                                           const std::vector<EstimationSet>& est, const PilotBook& book);

// Compact denominator matrix: sum_k pbar_k T_uk + co-pilot L_uk terms + sigma2 Upsilon - pbar_u Delta^2.
CMat closed_form_denominator(const SinrBreakdown& b, const RVec& p, const RVec& pbar, double sigma2, int tau_p);

double closed_form_sinr(const SinrBreakdown& b, const CVec& c, const RVec& p, const RVec& pbar, double sigma2,
                        int tau_p);

// Case-by-case assembly of the same denominator for a given c.
double case_table_denominator(const SinrBreakdown& b, const CVec& c, const RVec& pbar, double sigma2);

CVec closed_form_optimal_weights(const SinrBreakdown& b, const RVec& p, const RVec& pbar, double sigma2, int tau_p);
double closed_form_optimal_sinr(const SinrBreakdown& b, const RVec& p, const RVec& pbar, double sigma2, int tau_p);

struct ClosedFormResult {
    RVec sinr;
    RVec se;
};

// MR + optimal LSFD, pattern averaged.
ClosedFormResult closed_form_se(const Scenario& sc, const RMat& theta);

// Monte Carlo checks of the two auxiliary matrix identities; both return the
// maximum relative error against the analytic value.
double lemma1_check(int rows, int cols, double variance, const CMat& A, long n_samples, Rng& rng);
double lemma2_check(const CMat& r_a, const CMat& W, long n_samples, Rng& rng);

} // namespace rpmcf
