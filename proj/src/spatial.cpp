#include "rpmcf/spatial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <set>

namespace rpmcf {

namespace {

constexpr int kMinHermiteNodes = 30;
constexpr int kMaxHermiteNodes = 480;
constexpr double kQuadratureTol = 1e-8;

int grid_side(int L)
{
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(L))));
    require(s * s == L, "RIS element count must be a perfect square");
    return s;
}

CMat local_scattering_rule(int J, double theta, double asd, double beta, double spacing,
                           const RVec& x, const RVec& w)
{
    // E_chi[exp(i 2 pi d k sin(theta + chi))] for each lag k, chi ~ N(0, asd^2).
    CVec lag(J);
    for (int k = 0; k < J; ++k) {
        cd acc{0.0, 0.0};
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double chi = std::sqrt(2.0) * asd * x(i);
            acc += w(i) * std::polar(1.0, 2.0 * kPi * spacing * k * std::sin(theta + chi));
        }
        lag(k) = beta * acc / std::sqrt(kPi);
    }
    CMat r(J, J);
    for (int p = 0; p < J; ++p)
        for (int q = 0; q < J; ++q)
            r(p, q) = p >= q ? lag(p - q) : std::conj(lag(q - p));
    for (int p = 0; p < J; ++p) r(p, p) = beta;
    return r;
}

} // namespace

double sinc(double x)
{
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

CVec ula_steering(int J, double angle, double spacing)
{
    require(J >= 1, "ula_steering: J must be at least 1");
    CVec a(J);
    for (int j = 0; j < J; ++j) a(j) = std::polar(1.0, -2.0 * kPi * spacing * j * std::sin(angle));
    return a;
}

CVec ula_steering_normalized(int J, double angle, double spacing, int P)
{
    require(P >= 1, "ula_steering_normalized: P must be at least 1");
    return ula_steering(J, angle, spacing) / std::sqrt(static_cast<double>(P));
}

std::pair<int, int> uspa_grid_index(int l, int L)
{
    const int s = grid_side(L);
    return {l % s, l / s};
}

CVec uspa_steering(int L, const std::vector<int>& active, double az, double el, double spacing)
{
    std::set<int> seen;
    CVec a(static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) {
        const int l = active[i];
        require(l >= 0 && l < L, "uspa_steering: element index out of range");
        require(seen.insert(l).second, "uspa_steering: duplicate element index");
        const auto [h, v] = uspa_grid_index(l, L);
        a(static_cast<Eigen::Index>(i)) =
            std::polar(1.0, 2.0 * kPi * spacing * (h * std::sin(az) * std::cos(el) + v * std::sin(el)));
    }
    return a;
}

CMat ap_correlation(int J, int P, double d, double pl)
{
    require(P >= 1 && P <= J, "ap_correlation: need 1 <= P <= J");
    CMat rt = CMat::Zero(J, J);
    for (int p = 0; p < P; ++p)
        rt.col(p) = ula_steering_normalized(J, -kPi / 2.0 + p * kPi / P, kApSpacing, P);
    rt *= std::pow(d, pl / 2.0);
    return hermitian_part(rt * rt.adjoint());
}

std::vector<std::pair<double, double>> ris_element_positions(int L, const std::vector<int>& active,
                                                             double d_h, double d_v)
{
    std::vector<std::pair<double, double>> pos;
    pos.reserve(active.size());
    for (int l : active) {
        require(l >= 0 && l < L, "ris_element_positions: element index out of range");
        const auto [h, v] = uspa_grid_index(l, L);
        pos.emplace_back(h * d_h, v * d_v);
    }
    return pos;
}

RMat ris_correlation(const std::vector<std::pair<double, double>>& positions, double d_h,
                     double d_v, double wavelength)
{
    require(wavelength > 0.0, "ris_correlation: wavelength must be positive");
    const auto n = static_cast<Eigen::Index>(positions.size());
    RMat r(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double dx = positions[i].first - positions[j].first;
            const double dy = positions[i].second - positions[j].second;
            r(i, j) = d_h * d_v * sinc(2.0 * std::hypot(dx, dy) / wavelength);
        }
    return r;
}

std::pair<RVec, RVec> gauss_hermite(int n)
{
    require(n >= 1, "gauss_hermite: need at least one node");
    RMat jac = RMat::Zero(n, n);
    for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<RMat> es(jac);
    if (es.info() != Eigen::Success) throw numeric_failure("gauss_hermite: eigensolver failed");
    RVec w = std::sqrt(kPi) * es.eigenvectors().row(0).transpose().array().square();
    return {es.eigenvalues(), w};
}

CMat local_scattering_correlation(int J, double nominal_angle, double asd, double beta,
                                  double spacing)
{
    require(J >= 1, "local_scattering_correlation: J must be at least 1");
    require(asd > 0.0, "local_scattering_correlation: asd must be positive");
    auto [x, w] = gauss_hermite(kMinHermiteNodes);
    CMat prev = local_scattering_rule(J, nominal_angle, asd, beta, spacing, x, w);
    const double scale = std::max(std::abs(beta), 1e-300);
    for (int n = 2 * kMinHermiteNodes; n <= kMaxHermiteNodes; n *= 2) {
        std::tie(x, w) = gauss_hermite(n);
        CMat next = local_scattering_rule(J, nominal_angle, asd, beta, spacing, x, w);
        const double change = (next - prev).cwiseAbs().maxCoeff() / scale;
        if (change <= kQuadratureTol) return next;
        prev = std::move(next);
    }
    throw numeric_failure("local_scattering_correlation: quadrature did not converge");
}

CMat full_ris_ap_correlation(const CMat& r_ap, const CMat& r_ris)
{
    require(r_ap.rows() == r_ap.cols() && r_ris.rows() == r_ris.cols(),
            "full_ris_ap_correlation: inputs must be square");
    const Eigen::Index J = r_ap.rows(), la = r_ris.rows();
    require(J >= 1 && la >= 1, "full_ris_ap_correlation: empty input");
    CMat out(J * la, J * la);
    for (Eigen::Index j = 0; j < J; ++j)
        for (Eigen::Index k = 0; k < J; ++k)
            out.block(j * la, k * la, la, la) = r_ap(k, j) * r_ris;
    return out / static_cast<double>(J * la);
}

} // namespace rpmcf
