#include "rpmcf/closed_form.hpp"

#include "rpmcf/combining.hpp"

namespace rpmcf {

double desired_signal(const CVec& h_bar, const CMat& gamma, double p_u, int tau_p)
{
    return h_bar.squaredNorm() + p_u * tau_p * std::real(gamma.trace());
}

double noncoherent_interference(const CVec& h_bar_u, const CMat& gamma_u, const CVec& h_bar_k,
                                const CMat& r_h_k, double p, int tau_p)
{
    return p * tau_p * std::real((gamma_u * r_h_k).trace()) + std::real(h_bar_u.dot(r_h_k * h_bar_u)) +
           p * tau_p * std::real(h_bar_k.dot(gamma_u * h_bar_k)) + std::norm(h_bar_u.dot(h_bar_k));
}

cd coherent_trace(const CMat& r_h_k, const CMat& psi_u, const CMat& r_h_u)
{
    Eigen::LLT<CMat> llt(psi_u);
    if (llt.info() != Eigen::Success) throw numeric_failure("coherent_trace: Psi not positive definite");
    return (r_h_k * llt.solve(r_h_u)).trace();
}

double coherent_interference(const CVec& w, const CVec& c, double p_u, double p_k, int tau_p)
{
    require(w.size() == c.size(), "coherent_interference: dimension mismatch");
    const cd s = (c.array() * w.array()).sum();
    return p_u * p_k * tau_p * tau_p * std::norm(s);
}

double second_moment_self(const CVec& h_bar, const CMat& r_h, const CMat& gamma, double p_u, int tau_p)
{
    const double pt = p_u * tau_p;
    const double a = h_bar.squaredNorm();
    const double tg = std::real(gamma.trace());
    return a * a + 2.0 * pt * a * tg + pt * std::real(h_bar.dot(gamma * h_bar)) +
           std::real(h_bar.dot(r_h * h_bar)) + pt * pt * tg * tg + pt * std::real((r_h * gamma).trace());
}

double second_moment_copilot(const CVec& h_bar_u, const CMat& gamma_u, const CMat& r_h_u, const CVec& h_bar_k,
                             const CMat& r_h_k, const CMat& psi, double p_u, double p_k, int tau_p,
                             bool with_los_cross)
{
    const cd w = coherent_trace(r_h_k, psi, r_h_u);
    double v = noncoherent_interference(h_bar_u, gamma_u, h_bar_k, r_h_k, p_u, tau_p) +
               p_u * p_k * tau_p * tau_p * std::norm(w);
    if (with_los_cross)
        v += 2.0 * std::sqrt(p_u * p_k) * tau_p * std::real(std::conj(h_bar_u.dot(h_bar_k)) * w);
    return v;
}

double second_moment_other(const CVec& h_bar_u, const CMat& gamma_u, const CVec& h_bar_k, const CMat& r_h_k,
                           double p_u, int tau_p)
{
    return noncoherent_interference(h_bar_u, gamma_u, h_bar_k, r_h_k, p_u, tau_p);
}

cd copilot_inner_mean(const CVec& h_bar_u, const CVec& h_bar_k, const CMat& r_h_u, const CMat& r_h_k,
                      const CMat& psi, double p_u, double p_k, int tau_p, bool with_los)
{
    cd v = std::sqrt(p_u * p_k) * static_cast<double>(tau_p) * coherent_trace(r_h_k, psi, r_h_u);
    if (with_los) v += h_bar_u.dot(h_bar_k);
    return v;
}

std::vector<SinrBreakdown> sinr_breakdowns(const Scenario& sc, const SystemStats& stats,
                                           const std::vector<EstimationSet>& est, const PilotBook& book)
{
    const int M = sc.cfg.M, U = sc.cfg.U, C = sc.cb.C, tp = book.tau_p;
    const RVec& p = book.powers;
    const double invC = 1.0 / C;
    std::vector<SinrBreakdown> out(U);
    for (int u = 0; u < U; ++u) {
        SinrBreakdown& b = out[u];
        b.u = u;
        b.M = M;
        b.U = U;
        b.xi_bar = RVec::Zero(M);
        b.delta2 = RVec::Zero(M);
        b.mu.assign(U, RVec::Zero(M));
        b.w.assign(U, CVec::Zero(M));
        b.second_moment.assign(U, RVec::Zero(M));
        b.mean.assign(U, CVec::Zero(M));
        b.copilot.assign(U, false);
        for (int k = 0; k < U; ++k) b.copilot[k] = k != u && book.shares_pilot(u, k);

        for (int m = 0; m < M; ++m) {
            double xi_sq = 0.0;
            std::vector<double> w_sq(U, 0.0);
            for (int c = 0; c < C; ++c) {
                const AggregatedChannelStats& su = stats[c][sc.idx(m, u)];
                const EstimationMatrices& eu = est[c].mats[sc.idx(m, u)];
                const double xi = desired_signal(su.h_bar, eu.Gamma, p(u), tp);
                const double a = su.h_bar.squaredNorm();
                b.xi_bar(m) += invC * xi;
                xi_sq += invC * xi * xi;
                b.delta2(m) += invC * a * a;
                for (int k = 0; k < U; ++k) {
                    const AggregatedChannelStats& sk = stats[c][sc.idx(m, k)];
                    b.mu[k](m) += invC * noncoherent_interference(su.h_bar, eu.Gamma, sk.h_bar, sk.R_h, p(k), tp);
                    if (k == u) {
                        b.second_moment[k](m) += invC * second_moment_self(su.h_bar, su.R_h, eu.Gamma, p(u), tp);
                    } else if (b.copilot[k]) {
                        const cd w = coherent_trace(sk.R_h, eu.Psi, su.R_h);
                        b.w[k](m) += invC * w;
                        w_sq[k] += invC * std::norm(w);
                        b.second_moment[k](m) += invC * second_moment_copilot(su.h_bar, eu.Gamma, su.R_h, sk.h_bar,
                                                                              sk.R_h, eu.Psi, p(u), p(k), tp, false);
                    } else {
                        b.second_moment[k](m) +=
                            invC * second_moment_other(su.h_bar, eu.Gamma, sk.h_bar, sk.R_h, p(u), tp);
                    }
                }
            }
            b.delta2(m) -= xi_sq - b.xi_bar(m) * b.xi_bar(m);
            b.mean[u](m) = b.xi_bar(m);
            for (int k = 0; k < U; ++k) {
                if (!b.copilot[k]) continue;
                const double pk = p(u) * p(k) * tp * tp;
                b.mu[k](m) += pk * (w_sq[k] - std::norm(b.w[k](m)));
                b.mean[k](m) = std::sqrt(p(u) * p(k)) * static_cast<double>(tp) * b.w[k](m);
            }
        }
    }
    return out;
}

CMat closed_form_denominator(const SinrBreakdown& b, const RVec& p, const RVec& pbar, double sigma2, int tau_p)
{
    const int u = b.u;
    RVec diag = sigma2 * b.xi_bar - pbar(u) * b.delta2;
    for (int k = 0; k < b.U; ++k) diag += pbar(k) * b.mu[k];
    CMat a = diag.cast<cd>().asDiagonal();
    for (int k = 0; k < b.U; ++k) {
        if (!b.copilot[k]) continue;
        // c^H conj(w) w^T c = |sum_m c_m w_m|^2
        a += pbar(k) * p(u) * p(k) * tau_p * tau_p * (b.w[k].conjugate() * b.w[k].transpose());
    }
    return a;
}

double closed_form_sinr(const SinrBreakdown& b, const CVec& c, const RVec& p, const RVec& pbar, double sigma2,
                        int tau_p)
{
    const double num = pbar(b.u) * std::norm(c.dot(b.xi_bar.cast<cd>()));
    const double den = std::real(c.dot(closed_form_denominator(b, p, pbar, sigma2, tau_p) * c));
    if (!(den > 0.0)) throw numeric_failure("closed_form_sinr: nonpositive denominator");
    return num / den;
}

double case_table_denominator(const SinrBreakdown& b, const CVec& c, const RVec& pbar, double sigma2)
{
    const int M = b.M, u = b.u;
    double total = 0.0;
    for (int k = 0; k < b.U; ++k) {
        const bool shares = k == u || b.copilot[k];
        cd acc{0.0, 0.0};
        for (int m = 0; m < M; ++m) {
            for (int n = 0; n < M; ++n) {
                if (m == n) {
                    acc += std::norm(c(m)) * b.second_moment[k](m);
                } else if (shares) {
                    // Estimates at different APs are independent: product of means.
                    acc += c(m) * std::conj(c(n)) * b.mean[k](m) * std::conj(b.mean[k](n));
                }
                // Different pilot and different AP: zero.
            }
        }
        total += pbar(k) * std::real(acc);
    }
    cd coh{0.0, 0.0};
    double noise = 0.0;
    for (int m = 0; m < M; ++m) {
        coh += c(m) * b.xi_bar(m);
        noise += std::norm(c(m)) * b.xi_bar(m);
    }
    return total - pbar(u) * std::norm(coh) + sigma2 * noise;
}

CVec closed_form_optimal_weights(const SinrBreakdown& b, const RVec& p, const RVec& pbar, double sigma2, int tau_p)
{
    Eigen::LLT<CMat> llt(hermitian_part(closed_form_denominator(b, p, pbar, sigma2, tau_p)));
    if (llt.info() != Eigen::Success)
        throw numeric_failure("closed_form_optimal_weights: denominator not positive definite");
    return llt.solve(b.xi_bar.cast<cd>());
}

double closed_form_optimal_sinr(const SinrBreakdown& b, const RVec& p, const RVec& pbar, double sigma2, int tau_p)
{
    const CVec c = closed_form_optimal_weights(b, p, pbar, sigma2, tau_p);
    return pbar(b.u) * std::real(b.xi_bar.cast<cd>().dot(c));
}

ClosedFormResult closed_form_se(const Scenario& sc, const RMat& theta)
{
    const SystemStats stats = compute_stats(sc, theta);
    const PilotBook book = assign_pilots(sc.cfg.U, sc.cfg.tau_p, sc.p);
    std::vector<EstimationSet> est;
    est.reserve(stats.size());
    for (const auto& s : stats) est.push_back(estimate_all(sc, book, s));
    const auto bd = sinr_breakdowns(sc, stats, est, book);
    ClosedFormResult r;
    r.sinr.resize(sc.cfg.U);
    r.se.resize(sc.cfg.U);
    for (int u = 0; u < sc.cfg.U; ++u) {
        r.sinr(u) = closed_form_optimal_sinr(bd[u], sc.p, sc.pbar, sc.sigma2, sc.cfg.tau_p);
        r.se(u) = se_from_sinr(r.sinr(u), sc.cfg.tau_u(), sc.cfg.tau_c);
    }
    return r;
}

double lemma1_check(int rows, int cols, double variance, const CMat& A, long n_samples, Rng& rng)
{
    require(rows >= 1 && cols >= 1, "lemma1_check: dimensions must be positive");
    require(A.rows() == cols && A.cols() == cols, "lemma1_check: A must be cols x cols");
    require(n_samples >= 1 && variance >= 0.0, "lemma1_check: invalid sample count or variance");
    const double sd = std::sqrt(variance);
    CMat acc = CMat::Zero(rows, rows);
    for (long s = 0; s < n_samples; ++s) {
        const CMat z = sd * rng.cnormal_mat(rows, cols);
        acc.noalias() += z * A * z.adjoint();
    }
    acc /= static_cast<double>(n_samples);
    const CMat ref = variance * A.trace() * CMat::Identity(rows, rows);
    const double err = (acc - ref).cwiseAbs().maxCoeff();
    const double scale = std::abs(variance * A.trace());
    return scale > 0.0 ? err / scale : err;
}

double lemma2_check(const CMat& r_a, const CMat& W, long n_samples, Rng& rng)
{
    require(r_a.rows() == W.rows() && W.rows() == W.cols(), "lemma2_check: dimension mismatch");
    require(n_samples >= 1, "lemma2_check: need at least one sample");
    const CMat s = psd_sqrt(r_a);
    double acc = 0.0;
    for (long i = 0; i < n_samples; ++i) {
        const CVec a = sample_cn(s, rng);
        acc += std::norm(a.dot(W * a));
    }
    acc /= static_cast<double>(n_samples);
    const double ref = std::norm((r_a * W).trace()) + std::real((r_a * W * r_a * W.adjoint()).trace());
    return ref > 0.0 ? std::abs(acc - ref) / ref : std::abs(acc - ref);
}

} // namespace rpmcf
