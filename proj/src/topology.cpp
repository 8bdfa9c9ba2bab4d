#include "rpmcf/topology.hpp"

#include <Eigen/Eigenvalues>

namespace rpmcf {

namespace {

double wrap_coord(double v, double side)
{
    v = std::fmod(v, side);
    if (v < 0.0) v += side;
    return v;
}

double torus_delta(double d, double side)
{
    d = std::fmod(d, side);
    if (d > 0.5 * side) d -= side;
    if (d < -0.5 * side) d += side;
    return d;
}

} // namespace

NetworkGeometry generate_geometry(int M, int U, double area_side, Rng& rng)
{
    require(M >= 1, "generate_geometry: M must be at least 1");
    require(U >= 1, "generate_geometry: U must be at least 1");
    require(area_side > 0.0, "generate_geometry: area_side must be positive");

    NetworkGeometry g;
    g.area_side = area_side;
    g.M = M;
    g.U = U;
    for (int m = 0; m < M; ++m) {
        Point3 ap{rng.uniform(0.0, area_side), rng.uniform(0.0, area_side), kApHeight};
        const double phi = rng.uniform(-kPi, kPi);
        Point3 ris{wrap_coord(ap.x + kRisOffset * std::cos(phi), area_side),
                   wrap_coord(ap.y + kRisOffset * std::sin(phi), area_side), kRisHeight};
        g.ap_positions.push_back(ap);
        g.ris_positions.push_back(ris);
    }
    for (int u = 0; u < U; ++u)
        g.ue_positions.push_back({rng.uniform(0.0, area_side), rng.uniform(0.0, area_side), kUeHeight});
    return g;
}

Point3 wrap_displacement(const Point3& p, const Point3& q, double area_side)
{
    return {torus_delta(q.x - p.x, area_side), torus_delta(q.y - p.y, area_side), q.z - p.z};
}

double wrap_distance(const Point3& p, const Point3& q, double area_side)
{
    const Point3 d = wrap_displacement(p, q, area_side);
    return std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
}

double path_loss_nlos(double d, double shadow_db)
{
    require(d > 0.0, "path_loss_nlos: distance must be positive");
    return db_to_linear(-34.53 - 38.0 * std::log10(d) + shadow_db);
}

double rician_factor(double d)
{
    require(d >= 0.0, "rician_factor: distance must be nonnegative");
    return std::pow(10.0, 1.3 - 0.003 * d);
}

RVec correlated_gaussian_field(const std::vector<Point3>& nodes, double area_side,
                               double delta_sf, double d_dc, Rng& rng)
{
    require(d_dc > 0.0, "correlated_gaussian_field: d_dc must be positive");
    const auto n = static_cast<Eigen::Index>(nodes.size());
    RMat cov(n, n);
    const double var = delta_sf * delta_sf;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            cov(i, j) = var * std::exp2(-wrap_distance(nodes[i], nodes[j], area_side) / d_dc);

    // Torus distances do not guarantee an exactly PSD kernel; round-off
    // negative eigenvalues are clamped, large ones are an error.
    Eigen::SelfAdjointEigenSolver<RMat> es(cov);
    if (es.info() != Eigen::Success) throw numeric_failure("correlated_gaussian_field: factorization failed");
    if (n > 0 && es.eigenvalues().minCoeff() < -1e-6 * es.eigenvalues().maxCoeff())
        throw numeric_failure("correlated_gaussian_field: covariance not PSD");
    const RVec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const RMat s = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    RVec w(n);
    for (Eigen::Index i = 0; i < n; ++i) w(i) = rng.normal();
    return s * w;
}

RMat correlated_shadow_fading(const NetworkGeometry& geo, double delta_f, double delta_sf,
                              double d_dc, Rng& rng)
{
    require(delta_f >= 0.0 && delta_f <= 1.0, "correlated_shadow_fading: delta_f outside [0,1]");
    const RVec a = correlated_gaussian_field(geo.ue_positions, geo.area_side, delta_sf, d_dc, rng);
    const RVec b = correlated_gaussian_field(geo.ap_positions, geo.area_side, delta_sf, d_dc, rng);
    RMat f(geo.M, geo.U);
    for (int m = 0; m < geo.M; ++m)
        for (int u = 0; u < geo.U; ++u)
            f(m, u) = std::sqrt(delta_f) * a(u) + std::sqrt(1.0 - delta_f) * b(m);
    return f;
}

LargeScaleParams large_scale_params(const NetworkGeometry& geo, const ShadowParams& sp, Rng& rng)
{
    require(sp.delta_f >= 0.0 && sp.delta_f <= 1.0, "large_scale_params: delta_f outside [0,1]");
    const RVec a = correlated_gaussian_field(geo.ue_positions, geo.area_side, sp.delta_sf, sp.d_dc, rng);
    const RVec b = correlated_gaussian_field(geo.ap_positions, geo.area_side, sp.delta_sf, sp.d_dc, rng);
    const RVec r = correlated_gaussian_field(geo.ris_positions, geo.area_side, sp.delta_sf, sp.d_dc, rng);
    const double wt = std::sqrt(sp.delta_f);
    const double wr = std::sqrt(1.0 - sp.delta_f);

    LargeScaleParams p;
    const int M = geo.M, U = geo.U;
    p.beta.resize(M, U);
    p.xi.resize(M, U);
    p.iota.resize(M, U);
    p.shadow_F.resize(M, U);
    p.shadow_ue_ris.resize(M, U);
    p.alpha.resize(M);
    p.kappa.resize(M);
    p.shadow_ris_ap.resize(M);
    for (int m = 0; m < M; ++m) {
        const double d_ra = wrap_distance(geo.ris_positions[m], geo.ap_positions[m], geo.area_side);
        p.shadow_ris_ap(m) = wt * r(m) + wr * b(m);
        p.alpha(m) = path_loss_nlos(d_ra, p.shadow_ris_ap(m));
        p.kappa(m) = rician_factor(d_ra);
        for (int u = 0; u < U; ++u) {
            const double d_ua = wrap_distance(geo.ue_positions[u], geo.ap_positions[m], geo.area_side);
            const double d_ur = wrap_distance(geo.ue_positions[u], geo.ris_positions[m], geo.area_side);
            p.shadow_F(m, u) = wt * a(u) + wr * b(m);
            p.shadow_ue_ris(m, u) = wt * a(u) + wr * r(m);
            p.beta(m, u) = path_loss_nlos(d_ua, p.shadow_F(m, u));
            p.xi(m, u) = path_loss_nlos(d_ur, p.shadow_ue_ris(m, u));
            p.iota(m, u) = rician_factor(d_ur);
        }
    }
    return p;
}

} // namespace rpmcf
