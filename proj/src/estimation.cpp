#include "rpmcf/estimation.hpp"

namespace rpmcf {

PilotBook assign_pilots(int U, int tau_p, const RVec& powers)
{
    require(tau_p >= 1, "assign_pilots: tau_p must be at least 1");
    require(U >= 1, "assign_pilots: U must be at least 1");
    require(powers.size() == U, "assign_pilots: one power per UE required");
    PilotBook b;
    b.tau_p = tau_p;
    b.powers = powers;
    b.cohorts.resize(tau_p);
    for (int u = 0; u < U; ++u) {
        b.assignment.push_back(u % tau_p);
        b.cohorts[u % tau_p].push_back(u);
    }
    return b;
}

CMat psi_matrix(const std::vector<const CMat*>& cohort_rh, const std::vector<double>& cohort_p, int tau_p)
{
    require(!cohort_rh.empty() && cohort_rh.size() == cohort_p.size(), "psi_matrix: cohort mismatch");
    const auto J = cohort_rh.front()->rows();
    CMat psi = CMat::Identity(J, J);
    for (std::size_t i = 0; i < cohort_rh.size(); ++i) psi += cohort_p[i] * tau_p * *cohort_rh[i];
    return hermitian_part(psi);
}

EstimationMatrices estimation_matrices(const CMat& r_h, const CMat& psi, double p_u, int tau_p)
{
    require(r_h.rows() == psi.rows(), "estimation_matrices: dimension mismatch");
    Eigen::LLT<CMat> llt(psi);
    if (llt.info() != Eigen::Success) throw numeric_failure("estimation_matrices: Psi not positive definite");
    const CMat x = llt.solve(r_h); // Psi^-1 R^h
    EstimationMatrices em;
    em.Psi = psi;
    em.Gamma = hermitian_part(r_h * x);
    em.Cbar = p_u * tau_p * em.Gamma;
    em.Lambda = hermitian_part(r_h - em.Cbar);
    em.gain = std::sqrt(p_u) * x.adjoint();
    return em;
}

CVec pilot_projection(const CMat& H_m, const PilotBook& book, int u, const CVec& white_noise)
{
    const double tau = book.tau_p;
    CVec y = std::sqrt(tau) * white_noise;
    for (int k : book.cohort_of(u)) y += std::sqrt(book.powers(k)) * tau * H_m.col(k);
    return y;
}

CVec pilot_projection(const CMat& H_m, const PilotBook& book, int u, Rng& rng)
{
    return pilot_projection(H_m, book, u, rng.cnormal_vec(H_m.rows()));
}

CVec pilot_mean(const std::vector<const CVec*>& cohort_hbar, const std::vector<double>& cohort_p, int tau_p)
{
    require(!cohort_hbar.empty() && cohort_hbar.size() == cohort_p.size(), "pilot_mean: cohort mismatch");
    CVec y = CVec::Zero(cohort_hbar.front()->size());
    for (std::size_t i = 0; i < cohort_hbar.size(); ++i) y += std::sqrt(cohort_p[i]) * tau_p * *cohort_hbar[i];
    return y;
}

CVec lmmse_estimate(const CVec& y_p, const CVec& h_bar, const CVec& y_bar, const EstimationMatrices& em)
{
    return h_bar + em.gain * (y_p - y_bar);
}

EstimationSet estimate_all(const Scenario& sc, const PilotBook& book,
                           const std::vector<AggregatedChannelStats>& stats)
{
    const int M = sc.cfg.M, U = sc.cfg.U, tp = book.tau_p;
    EstimationSet es;
    es.mats.resize(M * U);
    es.y_bar.resize(M * tp);
    for (int m = 0; m < M; ++m) {
        for (int t = 0; t < tp; ++t) {
            const auto& cohort = book.cohorts[t];
            if (cohort.empty()) {
                es.y_bar[m * tp + t] = CVec::Zero(sc.cfg.J);
                continue;
            }
            std::vector<const CMat*> rh;
            std::vector<const CVec*> hb;
            std::vector<double> pw;
            for (int k : cohort) {
                rh.push_back(&stats[sc.idx(m, k)].R_h);
                hb.push_back(&stats[sc.idx(m, k)].h_bar);
                pw.push_back(book.powers(k));
            }
            const CMat psi = psi_matrix(rh, pw, tp);
            es.y_bar[m * tp + t] = pilot_mean(hb, pw, tp);
            for (int k : cohort)
                es.mats[sc.idx(m, k)] = estimation_matrices(stats[sc.idx(m, k)].R_h, psi, book.powers(k), tp);
        }
    }
    return es;
}

} // namespace rpmcf
