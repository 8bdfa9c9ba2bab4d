#include "rpmcf/rpm_channel.hpp"

#include "rpmcf/spatial.hpp"

#include <bit>

namespace rpmcf {

std::uint64_t binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

ReflectionPatternCodebook build_rp_codebook(int G, int K, int N)
{
    require(G >= 1 && K >= 1 && K <= G, "build_rp_codebook: need 1 <= K <= G");
    require(N >= 1, "build_rp_codebook: N must be at least 1");
    require(G <= 62, "build_rp_codebook: G too large");

    ReflectionPatternCodebook cb;
    cb.G = G;
    cb.K = K;
    cb.N = N;
    cb.L_A = N * K;
    const std::uint64_t total = binomial(G, K);
    cb.L1 = std::bit_width(total) - 1;
    cb.C = 1 << cb.L1;

    // Lexicographic enumeration; only the first 2^L1 combinations are kept.
    std::vector<int> comb(K);
    for (int i = 0; i < K; ++i) comb[i] = i;
    while (static_cast<int>(cb.patterns.size()) < cb.C) {
        cb.patterns.push_back(comb);
        std::vector<int> elems;
        elems.reserve(cb.L_A);
        for (int g : comb)
            for (int n = 0; n < N; ++n) elems.push_back(g * N + n);
        cb.element_sets.push_back(std::move(elems));

        int i = K - 1;
        while (i >= 0 && comb[i] == G - K + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < K; ++j) comb[j] = comb[j - 1] + 1;
    }
    return cb;
}

int map_bits_to_rp(std::uint64_t word, const ReflectionPatternCodebook& cb)
{
    require(word < static_cast<std::uint64_t>(cb.C), "map_bits_to_rp: word outside codebook");
    return static_cast<int>(word);
}

CascadeWeights cascade_weights(double alpha, double kappa, double xi, double iota, FadingMode mode)
{
    require(alpha >= 0.0 && xi >= 0.0, "cascade_weights: path losses must be nonnegative");
    require(kappa >= 0.0 && iota >= 0.0, "cascade_weights: Rician factors must be nonnegative");
    CascadeWeights w;
    switch (mode) {
    case FadingMode::rician:
        w.g_los = std::sqrt(alpha * kappa / (kappa + 1.0));
        w.g_nlos = std::sqrt(alpha / (kappa + 1.0));
        w.z_los = std::sqrt(xi * iota / (iota + 1.0));
        w.z_nlos = std::sqrt(xi / (iota + 1.0));
        break;
    case FadingMode::rayleigh:
        w.g_nlos = std::sqrt(alpha);
        w.z_nlos = std::sqrt(xi);
        break;
    case FadingMode::pure_los:
        w.g_los = std::sqrt(alpha);
        w.z_los = std::sqrt(xi);
        break;
    }
    return w;
}

CMat phase_matrix(const RVec& theta)
{
    CVec d(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) d(i) = std::polar(1.0, theta(i));
    return d.asDiagonal();
}

CMat los_cascade(const LinkModel& link) { return link.a_ap * link.a_ris_ap.adjoint(); }

namespace {

void check_dims(const LinkModel& link, const RVec& theta)
{
    const auto la = link.z_bar.size();
    require(theta.size() == la, "aggregated_stats: phase vector does not match the pattern");
    require(link.a_ris_ap.size() == la && link.R_ris.rows() == la && link.R_ris.cols() == la,
            "aggregated_stats: RIS dimensions do not match the pattern");
    const auto J = link.a_ap.size();
    require(link.R_mu.rows() == J && link.R_ap.rows() == J, "aggregated_stats: AP dimensions differ");
}

CVec unit_phasors(const RVec& theta)
{
    CVec u(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) u(i) = std::polar(1.0, theta(i));
    return u;
}

} // namespace

AggregatedChannelStats aggregated_stats(const LinkModel& link, const RVec& theta)
{
    check_dims(link, theta);
    const auto J = link.a_ap.size();
    const auto la = link.z_bar.size();
    const double jla = static_cast<double>(J * la);
    const CascadeWeights& w = link.w;
    const CVec u = unit_phasors(theta);
    const CVec x = u.cwiseProduct(link.z_bar);                     // Phi zbar
    const CVec y = u.conjugate().cwiseProduct(link.a_ris_ap);      // Phi^H a_ris_ap
    const CMat R = link.R_ris.cast<cd>();

    AggregatedChannelStats s;
    s.b = std::pow(w.g_nlos * w.z_nlos, 2);
    s.h_bar = (w.g_los * w.z_los) * link.a_ap * link.a_ris_ap.dot(x);
    const double q1 = std::real(y.dot(R * y));
    s.term1 = (w.g_los * w.g_los * w.z_nlos * w.z_nlos * q1) * (link.a_ap * link.a_ap.adjoint());
    const double q_pi = std::real(x.dot(R * x));
    const CMat rsq = link.R_ris.cwiseProduct(link.R_ris).cast<cd>();
    const double q_xi = std::real(u.dot(rsq * u));
    const CMat r_ap_t = link.R_ap.transpose();
    s.Pi = (w.g_nlos * w.g_nlos * w.z_los * w.z_los * q_pi / jla) * r_ap_t;
    s.Xi = (w.g_nlos * w.g_nlos * w.z_nlos * w.z_nlos * q_xi / jla) * r_ap_t;
    s.R_h = hermitian_part(s.term1 + link.R_mu + s.Pi + s.Xi);
    return s;
}

AggregatedChannelStats aggregated_stats_blockwise(const LinkModel& link, const RVec& theta)
{
    check_dims(link, theta);
    const auto J = link.a_ap.size();
    const auto la = link.z_bar.size();
    const CascadeWeights& w = link.w;
    const CMat phi = phase_matrix(theta);
    const CMat gbar = los_cascade(link);
    const CMat R = link.R_ris.cast<cd>();
    const CMat full = full_ris_ap_correlation(link.R_ap, R);
    const CVec x = phi * link.z_bar;
    const CMat B = x * x.adjoint();
    const CMat Bt = phi * R * phi.adjoint();

    AggregatedChannelStats s;
    s.b = std::pow(w.g_nlos * w.z_nlos, 2);
    s.h_bar = (w.g_los * w.z_los) * gbar * x;
    s.term1 = (w.g_los * w.g_los * w.z_nlos * w.z_nlos) * gbar * Bt * gbar.adjoint();
    s.Pi = CMat::Zero(J, J);
    s.Xi = CMat::Zero(J, J);
    for (Eigen::Index j = 0; j < J; ++j)
        for (Eigen::Index k = 0; k < J; ++k) {
            const auto blk = full.block(j * la, k * la, la, la);
            s.Pi(j, k) = (w.g_nlos * w.g_nlos * w.z_los * w.z_los) * (B * blk).trace();
            s.Xi(j, k) = (w.g_nlos * w.g_nlos * w.z_nlos * w.z_nlos) * (Bt * blk).trace();
        }
    s.R_h = hermitian_part(s.term1 + link.R_mu + s.Pi + s.Xi);
    return s;
}

CMat ris_ap_nlos(const CMat& sqrt_r_ap, const RMat& sqrt_r_ris, const CMat& white)
{
    const double jla = static_cast<double>(sqrt_r_ap.rows() * sqrt_r_ris.rows());
    return sqrt_r_ap.conjugate() * white * sqrt_r_ris.transpose().cast<cd>() / std::sqrt(jla);
}

LinkRealization sample_link(const LinkModel& link, const RVec& theta, Rng& rng)
{
    check_dims(link, theta);
    const auto J = link.a_ap.size();
    const auto la = link.z_bar.size();
    const CMat s_mu = psd_sqrt(link.R_mu);
    const RMat s_ris = psd_sqrt(link.R_ris);
    const CMat s_ap = psd_sqrt(link.R_ap);

    LinkRealization r;
    r.f = sample_cn(s_mu, rng);
    const CVec z_t = s_ris.cast<cd>() * rng.cnormal_vec(la);
    const CMat g_t = ris_ap_nlos(s_ap, s_ris, rng.cnormal_mat(J, la));
    r.G = link.w.g_los * los_cascade(link) + link.w.g_nlos * g_t;
    r.z = link.w.z_los * link.z_bar + link.w.z_nlos * z_t;
    r.h = r.f + r.G * (unit_phasors(theta).cwiseProduct(r.z));
    return r;
}

} // namespace rpmcf
