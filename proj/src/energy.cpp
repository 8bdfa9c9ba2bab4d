#include "rpmcf/energy.hpp"

namespace rpmcf {

void PowerModel::validate() const
{
    require(rho_ap >= 0 && rho_bh >= 0 && p_ap_fix >= 0 && p_ap_antenna >= 0 && p_bh_fix >= 0 &&
                p_ris_element >= 0 && p_ue_fix >= 0 && bandwidth >= 0,
            "power model: entries must be nonnegative");
    require(alpha_ue > 0.0 && alpha_ue <= 1.0, "power model: alpha_ue must lie in (0, 1]");
}

double capacity_from_draws(const std::vector<CMat>& draws, const RVec& pbar, double sigma2)
{
    require(!draws.empty(), "capacity_from_draws: need at least one draw");
    require(sigma2 > 0.0, "capacity_from_draws: sigma2 must be positive");
    double acc = 0.0;
    for (const CMat& h : draws) {
        require(h.cols() == pbar.size(), "capacity_from_draws: one power per column required");
        CMat a = CMat::Identity(h.rows(), h.rows());
        a.noalias() += h * pbar.cast<cd>().asDiagonal() * h.adjoint() / sigma2;
        Eigen::LLT<CMat> llt(hermitian_part(a));
        if (llt.info() != Eigen::Success) throw numeric_failure("capacity_from_draws: I + HPH^H not positive definite");
        const CMat& l = llt.matrixLLT();
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += 2.0 * std::log2(std::real(l(i, i)));
        acc += logdet;
    }
    return acc / static_cast<double>(draws.size());
}

RVec capacity_per_ap(const Scenario& sc, const RMat& theta, const std::vector<ChannelNoise>& draws)
{
    require(!draws.empty(), "capacity_per_ap: need at least one draw");
    const int M = sc.cfg.M;
    std::vector<std::vector<CMat>> per_ap(M);
    for (const ChannelNoise& n : draws) {
        std::vector<CMat> H = synthesize_channels(sc, theta, n);
        for (int m = 0; m < M; ++m) per_ap[m].push_back(std::move(H[m]));
    }
    RVec c(M);
    for (int m = 0; m < M; ++m) c(m) = capacity_from_draws(per_ap[m], sc.pbar, sc.sigma2);
    return c;
}

std::vector<ChannelNoise> draw_capacity_noise(const Scenario& sc, int n_trials, std::uint64_t seed)
{
    require(n_trials >= 1, "draw_capacity_noise: n_trials must be at least 1");
    std::vector<ChannelNoise> out;
    out.reserve(n_trials);
    for (int t = 0; t < n_trials; ++t) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
        out.push_back(draw_channel_noise(sc, rng));
    }
    return out;
}

double total_power(const PowerModel& pm, const RVec& pbar_w, const RVec& capacities, int L_A, int M, int J, int U,
                   int tau_u, int tau_c)
{
    pm.validate();
    require(pbar_w.size() == U && capacities.size() == M, "total_power: inconsistent counts");
    require(tau_c > 0 && tau_u >= 0 && tau_u <= tau_c, "total_power: invalid block lengths");
    const double p_fix = M * (pm.p_ap_fix + J * pm.p_ap_antenna + pm.p_bh_fix) + U * pm.p_ue_fix;
    const double ue = pbar_w.sum() / pm.alpha_ue;
    const double ris = static_cast<double>(M) * L_A * pm.p_ris_element;
    const double traffic = pm.bandwidth * static_cast<double>(tau_u) / tau_c * capacities.sum() * pm.rho_total();
    return p_fix + ue + ris + traffic;
}

double energy_efficiency(double sum_se, double p_tot, double bandwidth)
{
    require(p_tot > 0.0, "energy_efficiency: total power must be positive");
    return bandwidth * sum_se / p_tot;
}

} // namespace rpmcf
