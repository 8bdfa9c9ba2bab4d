#include "helpers.hpp"

#include <doctest.h>

using namespace rpmcf;
using namespace testutil;

TEST_CASE("single-term oracles")
{
    CHECK(desired_signal(CVec::Zero(2), CMat::Zero(2, 2), 3.0, 2) == 0.0);
    const CVec hu = (CVec(2) << cd(1, 2), cd(0, -1)).finished();
    const CVec hk = (CVec(2) << cd(-1, 0.5), cd(2, 1)).finished();
    const CMat z = CMat::Zero(2, 2);
    CHECK(noncoherent_interference(hu, z, hk, z, 5.0, 2) == doctest::Approx(std::norm(hu.dot(hk))));
    CHECK(noncoherent_interference(hu, z, CVec::Zero(2), z, 5.0, 2) == 0.0);

    const CVec w = CVec::Constant(1, cd(0.3, -0.4));
    CHECK(coherent_interference(w, CVec::Ones(1), 2.0, 3.0, 2) == doctest::Approx(2.0 * 3.0 * 4.0 * 0.25));
}

TEST_CASE("lemma checks")
{
    Rng rng(1);
    CHECK(lemma1_check(3, 4, 1.0, CMat::Identity(4, 4), 200000, rng) < 0.02);
    CHECK(lemma1_check(3, 4, 1.0, CMat::Zero(4, 4), 10, rng) == 0.0);
    CHECK(lemma2_check(CMat::Identity(1, 1), CMat::Zero(1, 1), 10, rng) == 0.0);
    // E|a|^4 = 2 for a ~ CN(0, 1).
    CHECK(lemma2_check(CMat::Identity(1, 1), CMat::Identity(1, 1), 400000, rng) < 0.02);
}

TEST_CASE("self second moment agrees with the compact decomposition")
{
    const Scenario sc = boosted_scenario(desk_config(), 3, 1e7);
    Rng rng(5);
    const RMat th = random_phases(sc, rng);
    const Pipeline p = make_pipeline(sc, th);
    const int tp = sc.cfg.tau_p;
    for (int c = 0; c < sc.cb.C; ++c)
        for (int m = 0; m < sc.cfg.M; ++m)
            for (int u = 0; u < sc.cfg.U; ++u) {
                const auto& s = p.stats[c][sc.idx(m, u)];
                const auto& e = p.est[c].mats[sc.idx(m, u)];
                const double xi = desired_signal(s.h_bar, e.Gamma, sc.p(u), tp);
                const double mu = noncoherent_interference(s.h_bar, e.Gamma, s.h_bar, s.R_h, sc.p(u), tp);
                const double d2 = std::pow(s.h_bar.squaredNorm(), 2);
                const double sm = second_moment_self(s.h_bar, s.R_h, e.Gamma, sc.p(u), tp);
                CHECK(sm == doctest::Approx(mu - d2 + xi * xi).epsilon(1e-12));
            }
}

TEST_CASE("per-AP expectations match brute force")
{
    const SystemConfig cfg = desk_config();
    const Scenario sc = boosted_scenario(cfg, 11, 1e7);
    Rng prng(6);
    const RMat th = random_phases(sc, prng);
    const Pipeline p = make_pipeline(sc, th);
    const int m = 2, c = 1, u = 0, kc = 2, ko = 1, tp = cfg.tau_p;
    const auto& su = p.stats[c][sc.idx(m, u)];
    const auto& sk = p.stats[c][sc.idx(m, kc)];
    const auto& so = p.stats[c][sc.idx(m, ko)];
    const auto& eu = p.est[c].mats[sc.idx(m, u)];

    RealAcc g_self, m_self, m_co, m_other, mean_hh;
    ComplexAcc inner_co;
    Rng rng(77);
    for (int t = 0; t < 30000; ++t) {
        const ApDraw d = draw_at_ap(sc, th, p, m, c, rng);
        const CVec hu = d.Hhat.col(u);
        mean_hh.add(hu.squaredNorm());
        const cd gs = hu.dot(d.H.col(u));
        g_self.add(gs.real());
        m_self.add(std::norm(gs));
        const cd gc = hu.dot(d.H.col(kc));
        m_co.add(std::norm(gc));
        inner_co.add(gc);
        m_other.add(std::norm(hu.dot(d.H.col(ko))));
    }
    const double xi = desired_signal(su.h_bar, eu.Gamma, sc.p(u), tp);
    CHECK(mean_hh.z(xi) < 4.0);
    CHECK(g_self.z(xi) < 4.0);
    CHECK(m_self.z(second_moment_self(su.h_bar, su.R_h, eu.Gamma, sc.p(u), tp)) < 4.0);
    CHECK(m_co.z(second_moment_copilot(su.h_bar, eu.Gamma, su.R_h, sk.h_bar, sk.R_h, eu.Psi, sc.p(u), sc.p(kc), tp,
                                       true)) < 4.0);
    CHECK(inner_co.z(copilot_inner_mean(su.h_bar, sk.h_bar, su.R_h, sk.R_h, eu.Psi, sc.p(u), sc.p(kc), tp, true)) <
          4.0);
    CHECK(m_other.z(second_moment_other(su.h_bar, eu.Gamma, so.h_bar, so.R_h, sc.p(u), tp)) < 4.0);
}

TEST_CASE("compact form equals the case table")
{
    for (std::uint64_t seed : {1, 2, 3}) {
        for (double boost : {1.0, 1e7}) {
            const Scenario sc = boosted_scenario(desk_config(), seed, boost);
            Rng rng(seed);
            const RMat th = random_phases(sc, rng);
            const Pipeline p = make_pipeline(sc, th);
            for (int u = 0; u < sc.cfg.U; ++u)
                for (int t = 0; t < 10; ++t) {
                    const CVec cvec = rng.cnormal_vec(sc.cfg.M);
                    const double compact = std::real(
                        cvec.dot(closed_form_denominator(p.bd[u], sc.p, sc.pbar, sc.sigma2, sc.cfg.tau_p) * cvec));
                    const double table = case_table_denominator(p.bd[u], cvec, sc.pbar, sc.sigma2);
                    CHECK(compact == doctest::Approx(table).epsilon(1e-9));
                }
        }
    }
}

TEST_CASE("closed-form SINR properties")
{
    const Scenario sc = build_scenario(desk_config(), 4);
    Rng rng(4);
    const RMat th = random_phases(sc, rng);
    const Pipeline p = make_pipeline(sc, th);
    const int tp = sc.cfg.tau_p;
    for (int u = 0; u < sc.cfg.U; ++u) {
        const auto& b = p.bd[u];
        for (int m = 0; m < sc.cfg.M; ++m) {
            CHECK(b.xi_bar(m) >= 0.0);
            // Difference of two pattern averages; allow round-off.
            CHECK(b.delta2(m) >= -1e-12 * b.xi_bar(m) * b.xi_bar(m));
        }
        const CVec copt = closed_form_optimal_weights(b, sc.p, sc.pbar, sc.sigma2, tp);
        const double best = closed_form_sinr(b, copt, sc.p, sc.pbar, sc.sigma2, tp);
        CHECK(best == doctest::Approx(closed_form_optimal_sinr(b, sc.p, sc.pbar, sc.sigma2, tp)).epsilon(1e-9));
        CHECK(closed_form_sinr(b, CVec::Ones(sc.cfg.M), sc.p, sc.pbar, sc.sigma2, tp) <= best * (1 + 1e-9));
        RVec silent = sc.pbar;
        silent(u) = 0.0;
        CHECK(closed_form_sinr(b, copt, sc.p, silent, sc.sigma2, tp) == 0.0);
        double prev = std::numeric_limits<double>::infinity();
        for (double s2 : {0.01, 0.1, 1.0, 10.0, 100.0}) {
            const double d = closed_form_optimal_sinr(b, sc.p, sc.pbar, s2, tp);
            CHECK(d <= prev);
            CHECK(std::isfinite(d));
            prev = d;
        }
    }
}

TEST_CASE("closed form tracks Monte Carlo at nominal gains")
{
    SystemConfig cfg = desk_config();
    cfg.K = 4;
    const Scenario sc = build_scenario(cfg, 12);
    Rng rng(12);
    const RMat th = random_phases(sc, rng);
    const ClosedFormResult cf = closed_form_se(sc, th);
    const RVec mc = monte_carlo_se(lsfd_statistics(sc, th, CombinerKind::mr, 20000, 5, 0), sc);
    for (int u = 0; u < sc.cfg.U; ++u) CHECK(std::abs(cf.se(u) - mc(u)) / mc(u) < 0.03);
}

TEST_CASE("shared RIS-AP channel correlates co-located UEs")
{
    // The analytic model treats UEs as uncorrelated; the shared NLoS RIS-AP
    // channel times the LoS UE-RIS paths correlates them. Boosted so the
    // effect is visible.
    const Scenario sc = boosted_scenario(desk_config(), 12, 1e7);
    Rng prng(12);
    const RMat th = random_phases(sc, prng);
    const Pipeline p = make_pipeline(sc, th);
    const int m = 8, c = 0;
    ComplexAcc cross;
    Rng rng(3);
    for (int t = 0; t < 20000; ++t) {
        ChannelNoise n = draw_channel_noise(sc, rng);
        n.rp[m] = c;
        const CMat H = synthesize_channels(sc, th, n)[m];
        const CVec a = H.col(2) - p.stats[c][sc.idx(m, 2)].h_bar;
        const CVec b = H.col(0) - p.stats[c][sc.idx(m, 0)].h_bar;
        cross.add(a(0) * std::conj(b(0)));
    }
    CHECK(cross.z(0.0) > 6.0);
}
