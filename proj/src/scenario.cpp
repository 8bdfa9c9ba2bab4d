#include "rpmcf/scenario.hpp"

#include "rpmcf/spatial.hpp"

namespace rpmcf {

namespace {

struct Angles {
    double az;
    double el;
};

Angles angles_to(const Point3& from, const Point3& to, double side)
{
    const Point3 d = wrap_displacement(from, to, side);
    return {std::atan2(d.y, d.x), std::atan2(d.z, std::hypot(d.x, d.y))};
}

} // namespace

void SystemConfig::validate() const
{
    require(M >= 1 && U >= 1 && J >= 1, "config: M, U and J must be at least 1");
    require(G >= 1 && L >= 1 && L % G == 0, "config: L must be divisible by G");
    require(K >= 1 && K <= G, "config: need 1 <= K <= G");
    require(tau_p >= 1 && tau_p < tau_c, "config: need 1 <= tau_p < tau_c");
    require(area_side > 0.0, "config: area_side must be positive");
    require(p_pilot_w >= 0.0 && p_data_w >= 0.0, "config: powers must be nonnegative");
    require(asd_deg > 0.0, "config: asd must be positive");
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(L))));
    require(s * s == L, "config: L must be a perfect square");
}

Scenario build_scenario(const SystemConfig& cfg, const NetworkGeometry& geo, const LargeScaleParams& ls)
{
    cfg.validate();
    require(geo.M == cfg.M && geo.U == cfg.U, "build_scenario: geometry does not match config");
    Scenario sc;
    sc.cfg = cfg;
    sc.geo = geo;
    sc.ls = ls;
    sc.cb = build_rp_codebook(cfg.G, cfg.K, cfg.L / cfg.G);
    const double noise_w = dbm_to_watt(cfg.sigma2_dbm);
    sc.p = RVec::Constant(cfg.U, cfg.p_pilot_w / noise_w);
    sc.pbar = RVec::Constant(cfg.U, cfg.p_data_w / noise_w);
    sc.sigma2 = 1.0;

    const int M = cfg.M, U = cfg.U, J = cfg.J;
    const int P = std::max(1, J / 2);
    const double asd = cfg.asd_deg * kPi / 180.0;
    const double side = geo.area_side;

    std::vector<CMat> r_mu(M * U);
    std::vector<CMat> r_ap(M);
    std::vector<CVec> a_ap(M);
    for (int m = 0; m < M; ++m) {
        const Point3& ap = geo.ap_positions[m];
        const Point3& ris = geo.ris_positions[m];
        r_ap[m] = ap_correlation(J, P, wrap_distance(ris, ap, side), ls.alpha(m));
        a_ap[m] = ula_steering(J, angles_to(ap, ris, side).az, kApSpacing);
        sc.sqrt_r_ap.push_back(psd_sqrt(r_ap[m]));
        for (int u = 0; u < U; ++u) {
            const double theta = angles_to(ap, geo.ue_positions[u], side).az;
            r_mu[m * U + u] = local_scattering_correlation(J, theta, asd, ls.beta(m, u), kApSpacing);
            sc.sqrt_r_mu.push_back(psd_sqrt(r_mu[m * U + u]));
        }
    }

    sc.links.resize(sc.cb.C);
    for (int c = 0; c < sc.cb.C; ++c) {
        const auto& active = sc.cb.element_sets[c];
        const RMat r_ris = ris_correlation(ris_element_positions(cfg.L, active, kRisSpacing, kRisSpacing),
                                           kRisSpacing, kRisSpacing, kWavelength);
        sc.sqrt_r_ris.push_back(psd_sqrt(r_ris));
        for (int m = 0; m < M; ++m) {
            const Point3& ris = geo.ris_positions[m];
            const Angles to_ap = angles_to(ris, geo.ap_positions[m], side);
            const CVec a_ris_ap = uspa_steering(cfg.L, active, to_ap.az, to_ap.el, kRisSpacing);
            for (int u = 0; u < U; ++u) {
                const Angles to_ue = angles_to(ris, geo.ue_positions[u], side);
                LinkModel lk;
                if (cfg.ris_enabled)
                    lk.w = cascade_weights(ls.alpha(m), ls.kappa(m), ls.xi(m, u), ls.iota(m, u), cfg.fading);
                lk.a_ap = a_ap[m];
                lk.a_ris_ap = a_ris_ap;
                lk.z_bar = uspa_steering(cfg.L, active, to_ue.az, to_ue.el, kRisSpacing);
                lk.R_mu = r_mu[m * U + u];
                lk.R_ris = r_ris;
                lk.R_ap = r_ap[m];
                sc.links[c].push_back(std::move(lk));
            }
        }
    }
    return sc;
}

Scenario build_scenario(const SystemConfig& cfg, std::uint64_t seed)
{
    cfg.validate();
    Rng rng(seed);
    const NetworkGeometry geo = generate_geometry(cfg.M, cfg.U, cfg.area_side, rng);
    const LargeScaleParams ls = large_scale_params(geo, cfg.shadow, rng);
    return build_scenario(cfg, geo, ls);
}

SystemStats compute_stats(const Scenario& sc, const RMat& theta)
{
    require(theta.rows() == sc.cfg.M && theta.cols() == sc.cb.L_A, "compute_stats: theta must be M x L_A");
    SystemStats out(sc.cb.C);
    for (int c = 0; c < sc.cb.C; ++c) {
        out[c].reserve(sc.links[c].size());
        for (int m = 0; m < sc.cfg.M; ++m) {
            const RVec th = theta.row(m).transpose();
            for (int u = 0; u < sc.cfg.U; ++u) out[c].push_back(aggregated_stats(sc.link(c, m, u), th));
        }
    }
    return out;
}

ChannelNoise draw_channel_noise(const Scenario& sc, Rng& rng)
{
    const int M = sc.cfg.M, U = sc.cfg.U, J = sc.cfg.J, la = sc.cb.L_A;
    ChannelNoise n;
    n.rp.resize(M);
    for (int m = 0; m < M; ++m)
        n.rp[m] = sc.cb.C == 1 ? 0 : static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(sc.cb.C));
    n.f.reserve(M * U);
    n.z.reserve(M * U);
    for (int i = 0; i < M * U; ++i) {
        n.f.push_back(rng.cnormal_vec(J));
        n.z.push_back(rng.cnormal_vec(la));
    }
    for (int m = 0; m < M; ++m) n.g.push_back(rng.cnormal_mat(J, la));
    return n;
}

std::vector<CMat> synthesize_channels(const Scenario& sc, const RMat& theta, const ChannelNoise& n)
{
    const int M = sc.cfg.M, U = sc.cfg.U, J = sc.cfg.J;
    std::vector<CMat> H(M, CMat(J, U));
    for (int m = 0; m < M; ++m) {
        const int c = n.rp[m];
        const RMat& s_ris = sc.sqrt_r_ris[c];
        const CMat g_t = ris_ap_nlos(sc.sqrt_r_ap[m], s_ris, n.g[m]);
        CVec u_ph(theta.cols());
        for (Eigen::Index l = 0; l < theta.cols(); ++l) u_ph(l) = std::polar(1.0, theta(m, l));
        for (int u = 0; u < U; ++u) {
            const LinkModel& lk = sc.link(c, m, u);
            const CVec f = sc.sqrt_r_mu[sc.idx(m, u)] * n.f[sc.idx(m, u)];
            const CVec z = lk.w.z_los * lk.z_bar + lk.w.z_nlos * (s_ris.cast<cd>() * n.z[sc.idx(m, u)]);
            const CVec pz = u_ph.cwiseProduct(z);
            // G Phi z with G = g_los a_ap a_ris_ap^H + g_nlos G~.
            H[m].col(u) = f + lk.w.g_los * lk.a_ap * lk.a_ris_ap.dot(pz) + lk.w.g_nlos * (g_t * pz);
        }
    }
    return H;
}

RMat zero_phases(const Scenario& sc) { return RMat::Zero(sc.cfg.M, sc.cb.L_A); }

RMat random_phases(const Scenario& sc, Rng& rng)
{
    RMat t(sc.cfg.M, sc.cb.L_A);
    for (int m = 0; m < sc.cfg.M; ++m)
        for (int l = 0; l < sc.cb.L_A; ++l) t(m, l) = rng.uniform(-kPi, kPi);
    return t;
}

} // namespace rpmcf
