#pragma once

#include "rpmcf/common.hpp"
#include "rpmcf/estimation.hpp"
#include "rpmcf/scenario.hpp"

#include <cstdint>
#include <vector>

namespace rpmcf {

enum class CombinerKind { mr, lmmse };

CVec mr_combiner(const CVec& h_hat);

// Column u: pbar_u [sum_k pbar_k (hhat_k hhat_k^H + Lambda_k) + sigma2 I_J]^-1 hhat_u.
CMat lmmse_combiners(const CMat& h_hat, const std::vector<const CMat*>& lambdas, const RVec& pbar,
                     double sigma2);

// Monte Carlo LSFD statistics. Omega[u * U + k](m, n) = E{g_uk(m) conj(g_uk(n))}.
struct LsfdStatistics {
    int M = 0;
    int U = 0;
    long n_trials = 0;
    std::vector<CVec> g_mean; // [u], E{g_uu}
    std::vector<CMat> Omega;  // [u * U + k]
    std::vector<RVec> V;      // [u], diagonal of V_u

    const CMat& omega(int u, int k) const { return Omega[u * U + k]; }
};

// Every RIS draws its pattern uniformly per coherence block. Trials are
// processed in fixed-size blocks reduced in block order.
LsfdStatistics lsfd_statistics(const Scenario& sc, const RMat& theta, CombinerKind kind, long n_trials,
                               std::uint64_t seed, unsigned threads = 0);

// sum_k pbar_k Omega_uk - pbar_u E{g}E{g}^H + sigma2 V_u.
CMat lsfd_denominator(const LsfdStatistics& st, int u, const RVec& pbar, double sigma2);

double lsfd_sinr(const LsfdStatistics& st, int u, const CVec& c, const RVec& pbar, double sigma2);

CVec optimal_lsfd_weights(const LsfdStatistics& st, int u, const RVec& pbar, double sigma2);

// Maximum SINR, pbar_u E{g}^H c_opt.
double optimal_lsfd_sinr(const LsfdStatistics& st, int u, const RVec& pbar, double sigma2);

double se_from_sinr(double delta, int tau_u, int tau_c);

// Per-UE SE with optimal LSFD weights.
RVec monte_carlo_se(const LsfdStatistics& st, const Scenario& sc);

} // namespace rpmcf
