#pragma once

#include "rpmcf/closed_form.hpp"
#include "rpmcf/combining.hpp"
#include "rpmcf/estimation.hpp"
#include "rpmcf/rpm_channel.hpp"
#include "rpmcf/scenario.hpp"
#include "rpmcf/spatial.hpp"
#include "rpmcf/topology.hpp"

#include <cmath>
#include <vector>

namespace testutil {

using namespace rpmcf;

// Welford running mean with standard error.
struct RealAcc {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        n += 1.0;
        const double d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    double se() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
    // |mean - ref| within k standard errors; a relative floor guards zero-variance quantities.
    bool within(double ref, double k = 3.0) const
    {
        return std::abs(mean - ref) <= k * se() + 1e-12 * std::max(std::abs(ref), std::abs(mean));
    }
    double z(double ref) const { return se() > 0.0 ? std::abs(mean - ref) / se() : 0.0; }
};

struct ComplexAcc {
    RealAcc re;
    RealAcc im;
    void add(cd x)
    {
        re.add(x.real());
        im.add(x.imag());
    }
    bool within(cd ref, double k = 3.0) const { return re.within(ref.real(), k) && im.within(ref.imag(), k); }
    double z(cd ref) const { return std::max(re.z(ref.real()), im.z(ref.imag())); }
};

// Entrywise sample second moment of zero-mean vectors against a reference.
struct CovAcc {
    std::vector<ComplexAcc> e;
    Eigen::Index J = 0;
    explicit CovAcc(Eigen::Index dim) : e(dim * dim), J(dim) {}
    void add(const CVec& x)
    {
        for (Eigen::Index i = 0; i < J; ++i)
            for (Eigen::Index j = 0; j < J; ++j) e[i * J + j].add(x(i) * std::conj(x(j)));
    }
    double max_z(const CMat& ref) const
    {
        double z = 0.0;
        for (Eigen::Index i = 0; i < J; ++i)
            for (Eigen::Index j = 0; j < J; ++j) z = std::max(z, e[i * J + j].z(ref(i, j)));
        return z;
    }
    bool within(const CMat& ref, double k = 3.0) const
    {
        for (Eigen::Index i = 0; i < J; ++i)
            for (Eigen::Index j = 0; j < J; ++j)
                if (!e[i * J + j].within(ref(i, j), k)) return false;
        return true;
    }
};

inline SystemConfig desk_config()
{
    SystemConfig c;
    c.M = 10;
    c.J = 2;
    c.U = 4;
    c.L = 16;
    c.G = 4;
    c.K = 2;
    return c;
}

// Same geometry draw as build_scenario(cfg, seed) with the RIS-AP gain scaled,
// so cascaded terms carry a visible share of the aggregate channel.
inline Scenario boosted_scenario(const SystemConfig& cfg, std::uint64_t seed, double boost)
{
    Rng rng(seed);
    const NetworkGeometry geo = generate_geometry(cfg.M, cfg.U, cfg.area_side, rng);
    LargeScaleParams ls = large_scale_params(geo, cfg.shadow, rng);
    ls.alpha *= boost;
    return build_scenario(cfg, geo, ls);
}

// A single link with O(1) gains on every component.
inline LinkModel strong_link(int J, int L, const std::vector<int>& active, FadingMode mode, double alpha = 0.6,
                             double xi = 0.8, double kappa = 2.0, double iota = 1.5)
{
    LinkModel lk;
    lk.w = cascade_weights(alpha, kappa, xi, iota, mode);
    lk.a_ap = ula_steering(J, 0.4, kApSpacing);
    lk.a_ris_ap = uspa_steering(L, active, -0.7, 0.3, kRisSpacing);
    lk.z_bar = uspa_steering(L, active, 1.1, -0.2, kRisSpacing);
    lk.R_mu = local_scattering_correlation(J, 0.2, 15.0 * kPi / 180.0, 1.0, kApSpacing);
    lk.R_ris = ris_correlation(ris_element_positions(L, active, kRisSpacing, kRisSpacing), kRisSpacing, kRisSpacing,
                               kWavelength);
    lk.R_ap = ap_correlation(J, std::max(1, J / 2), 20.0, 1.0);
    return lk;
}

inline std::vector<int> iota_vec(int n)
{
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

// Full-system bundle for one phase configuration.
struct Pipeline {
    SystemStats stats;
    PilotBook book;
    std::vector<EstimationSet> est;
    std::vector<SinrBreakdown> bd;
};

inline Pipeline make_pipeline(const Scenario& sc, const RMat& theta)
{
    Pipeline p;
    p.stats = compute_stats(sc, theta);
    p.book = assign_pilots(sc.cfg.U, sc.cfg.tau_p, sc.p);
    for (const auto& s : p.stats) p.est.push_back(estimate_all(sc, p.book, s));
    p.bd = sinr_breakdowns(sc, p.stats, p.est, p.book);
    return p;
}

// One coherence block at AP m with pattern c forced: true channels and LMMSE estimates (J x U).
struct ApDraw {
    CMat H;
    CMat Hhat;
};

inline ApDraw draw_at_ap(const Scenario& sc, const RMat& theta, const Pipeline& p, int m, int c, Rng& rng)
{
    ChannelNoise n = draw_channel_noise(sc, rng);
    n.rp[m] = c;
    ApDraw d;
    d.H = synthesize_channels(sc, theta, n)[m];
    d.Hhat.resize(sc.cfg.J, sc.cfg.U);
    for (int t = 0; t < p.book.tau_p; ++t) {
        const auto& cohort = p.book.cohorts[t];
        if (cohort.empty()) continue;
        const CVec y = pilot_projection(d.H, p.book, cohort.front(), rng);
        for (int k : cohort)
            d.Hhat.col(k) = lmmse_estimate(y, p.stats[c][sc.idx(m, k)].h_bar, p.est[c].y_bar[m * p.book.tau_p + t],
                                           p.est[c].mats[sc.idx(m, k)]);
    }
    return d;
}

} // namespace testutil
