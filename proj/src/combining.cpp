#include "rpmcf/combining.hpp"

#include "rpmcf/parallel.hpp"

namespace rpmcf {

namespace {

constexpr long kBlockTrials = 64;
constexpr long kWaveBlocks = 32;

struct Accumulator {
    std::vector<CVec> g_mean;
    std::vector<CMat> Omega;
    std::vector<RVec> V;

    Accumulator(int M, int U)
        : g_mean(U, CVec::Zero(M)), Omega(U * U, CMat::Zero(M, M)), V(U, RVec::Zero(M))
    {
    }

    void add(const Accumulator& o)
    {
        for (std::size_t i = 0; i < g_mean.size(); ++i) g_mean[i] += o.g_mean[i];
        for (std::size_t i = 0; i < Omega.size(); ++i) Omega[i] += o.Omega[i];
        for (std::size_t i = 0; i < V.size(); ++i) V[i] += o.V[i];
    }
};

CMat solve_hpd(const CMat& a, const CVec& b, const char* who)
{
    Eigen::LLT<CMat> llt(hermitian_part(a));
    if (llt.info() != Eigen::Success) throw numeric_failure(std::string(who) + ": matrix not positive definite");
    return llt.solve(b);
}

} // namespace

CVec mr_combiner(const CVec& h_hat) { return h_hat; }

CMat lmmse_combiners(const CMat& h_hat, const std::vector<const CMat*>& lambdas, const RVec& pbar,
                     double sigma2)
{
    const auto J = h_hat.rows();
    const auto U = h_hat.cols();
    require(static_cast<Eigen::Index>(lambdas.size()) == U && pbar.size() == U,
            "lmmse_combiners: one Lambda and one power per UE required");
    CMat a = sigma2 * CMat::Identity(J, J);
    for (Eigen::Index k = 0; k < U; ++k)
        a += pbar(k) * (h_hat.col(k) * h_hat.col(k).adjoint() + *lambdas[k]);
    Eigen::LLT<CMat> llt(hermitian_part(a));
    if (llt.info() != Eigen::Success) throw numeric_failure("lmmse_combiners: system not positive definite");
    CMat v = llt.solve(h_hat);
    for (Eigen::Index u = 0; u < U; ++u) v.col(u) *= pbar(u);
    return v;
}

LsfdStatistics lsfd_statistics(const Scenario& sc, const RMat& theta, CombinerKind kind, long n_trials,
                               std::uint64_t seed, unsigned threads)
{
    require(n_trials >= 1, "lsfd_statistics: need at least one trial");
    const int M = sc.cfg.M, U = sc.cfg.U, tp = sc.cfg.tau_p;
    const SystemStats stats = compute_stats(sc, theta);
    const PilotBook book = assign_pilots(U, tp, sc.p);
    std::vector<EstimationSet> est;
    for (const auto& s : stats) est.push_back(estimate_all(sc, book, s));

    auto run_block = [&](long first, long last, Accumulator& acc) {
        std::vector<CMat> g(U * U, CMat(M, 1));
        for (long t = first; t < last; ++t) {
            Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
            const ChannelNoise noise = draw_channel_noise(sc, rng);
            const std::vector<CMat> H = synthesize_channels(sc, theta, noise);
            std::vector<CMat> gm(U * U);
            for (int m = 0; m < M; ++m) {
                const int c = noise.rp[m];
                CMat h_hat(sc.cfg.J, U);
                for (int t_p = 0; t_p < tp; ++t_p) {
                    const auto& cohort = book.cohorts[t_p];
                    if (cohort.empty()) continue;
                    const CVec y = pilot_projection(H[m], book, cohort.front(), rng);
                    for (int k : cohort)
                        h_hat.col(k) = lmmse_estimate(y, stats[c][sc.idx(m, k)].h_bar, est[c].y_bar[m * tp + t_p],
                                                      est[c].mats[sc.idx(m, k)]);
                }
                CMat v;
                if (kind == CombinerKind::mr) {
                    v = h_hat;
                } else {
                    std::vector<const CMat*> lam;
                    for (int k = 0; k < U; ++k) lam.push_back(&est[c].mats[sc.idx(m, k)].Lambda);
                    v = lmmse_combiners(h_hat, lam, sc.pbar, sc.sigma2);
                }
                const CMat gk = v.adjoint() * H[m]; // (u, k) = v_u^H h_k
                for (int u = 0; u < U; ++u) {
                    acc.g_mean[u](m) += gk(u, u);
                    acc.V[u](m) += v.col(u).squaredNorm();
                    for (int k = 0; k < U; ++k) g[u * U + k](m, 0) = gk(u, k);
                }
            }
            for (int i = 0; i < U * U; ++i) acc.Omega[i] += g[i] * g[i].adjoint();
        }
    };

    const long n_blocks = (n_trials + kBlockTrials - 1) / kBlockTrials;
    Accumulator total(M, U);
    for (long w0 = 0; w0 < n_blocks; w0 += kWaveBlocks) {
        const long nb = std::min(kWaveBlocks, n_blocks - w0);
        std::vector<Accumulator> parts(nb, Accumulator(M, U));
        parallel_for(
            static_cast<std::size_t>(nb),
            [&](std::size_t i) {
                const long b = w0 + static_cast<long>(i);
                run_block(b * kBlockTrials, std::min(n_trials, (b + 1) * kBlockTrials), parts[i]);
            },
            threads);
        for (const auto& p : parts) total.add(p);
    }

    LsfdStatistics st;
    st.M = M;
    st.U = U;
    st.n_trials = n_trials;
    const double inv = 1.0 / static_cast<double>(n_trials);
    for (auto& x : total.g_mean) st.g_mean.push_back(x * inv);
    for (auto& x : total.Omega) st.Omega.push_back(hermitian_part(x * inv));
    for (auto& x : total.V) st.V.push_back(x * inv);
    return st;
}

CMat lsfd_denominator(const LsfdStatistics& st, int u, const RVec& pbar, double sigma2)
{
    CMat d = sigma2 * CMat(st.V[u].cast<cd>().asDiagonal());
    for (int k = 0; k < st.U; ++k) d += pbar(k) * st.omega(u, k);
    d -= pbar(u) * st.g_mean[u] * st.g_mean[u].adjoint();
    return hermitian_part(d);
}

double lsfd_sinr(const LsfdStatistics& st, int u, const CVec& c, const RVec& pbar, double sigma2)
{
    const double num = pbar(u) * std::norm(c.dot(st.g_mean[u]));
    const double den = std::real(c.dot(lsfd_denominator(st, u, pbar, sigma2) * c));
    if (!(den > 0.0)) throw numeric_failure("lsfd_sinr: nonpositive denominator");
    return num / den;
}

CVec optimal_lsfd_weights(const LsfdStatistics& st, int u, const RVec& pbar, double sigma2)
{
    return solve_hpd(lsfd_denominator(st, u, pbar, sigma2), st.g_mean[u], "optimal_lsfd_weights");
}

double optimal_lsfd_sinr(const LsfdStatistics& st, int u, const RVec& pbar, double sigma2)
{
    const CVec c = optimal_lsfd_weights(st, u, pbar, sigma2);
    return pbar(u) * std::real(st.g_mean[u].dot(c));
}

double se_from_sinr(double delta, int tau_u, int tau_c)
{
    require(delta >= 0.0, "se_from_sinr: SINR must be nonnegative");
    require(tau_c > 0 && tau_u >= 0 && tau_u <= tau_c, "se_from_sinr: invalid block lengths");
    return static_cast<double>(tau_u) / tau_c * std::log2(1.0 + delta);
}

RVec monte_carlo_se(const LsfdStatistics& st, const Scenario& sc)
{
    RVec se(st.U);
    for (int u = 0; u < st.U; ++u)
        se(u) = se_from_sinr(optimal_lsfd_sinr(st, u, sc.pbar, sc.sigma2), sc.cfg.tau_u(), sc.cfg.tau_c);
    return se;
}

} // namespace rpmcf
