#include "helpers.hpp"

#include <doctest.h>

using namespace rpmcf;

TEST_CASE("ULA steering")
{
    const CVec a0 = ula_steering(4, 0.0, 0.5);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(a0(j) - cd(1.0, 0.0)) < 1e-15);
    const CVec n0 = ula_steering_normalized(4, 0.0, 0.5, 2);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(n0(j) - cd(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);

    const CVec a = ula_steering(2, kPi / 2, 0.5);
    CHECK(std::abs(a(0) - cd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a(1) - std::polar(1.0, -kPi)) < 1e-14);

    const CVec p = ula_steering(5, 0.37, 0.5), m = ula_steering(5, -0.37, 0.5);
    CHECK((p.conjugate() - m).norm() < 1e-14);
    for (int j = 0; j < 5; ++j) CHECK(std::abs(p(j)) == doctest::Approx(1.0));
}

TEST_CASE("USPA steering")
{
    const CVec ones = uspa_steering(16, testutil::iota_vec(16), 0.0, 0.0, kRisSpacing);
    CHECK(ones.size() == 16);
    CHECK((ones - CVec::Ones(16)).norm() < 1e-14);

    // Blocks {0} and {1} of a 4-block, 16-element RIS: same formula at shifted grid positions.
    const std::vector<int> b0{0, 1, 2, 3}, b1{4, 5, 6, 7};
    const double az = 0.6, el = -0.3;
    const CVec v0 = uspa_steering(16, b0, az, el, kRisSpacing);
    const CVec v1 = uspa_steering(16, b1, az, el, kRisSpacing);
    for (int i = 0; i < 4; ++i) {
        for (const auto& [vec, l] : {std::pair{v0, b0[i]}, std::pair{v1, b1[i]}}) {
            const auto [h, v] = uspa_grid_index(l, 16);
            const cd ref = std::polar(1.0, 2 * kPi * kRisSpacing * (h * std::sin(az) * std::cos(el) + v * std::sin(el)));
            CHECK(std::abs(vec(i) - ref) < 1e-14);
        }
    }
    CHECK_THROWS_AS(uspa_steering(16, {0, 0}, 0, 0, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(uspa_steering(16, {16}, 0, 0, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(uspa_grid_index(0, 15), std::invalid_argument);
}

TEST_CASE("AP correlation")
{
    const CMat r1 = ap_correlation(2, 1, 1.0, 1.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(r1);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) > 0.1);
    for (int J : {2, 4, 8}) {
        const CMat r = ap_correlation(J, J / 2, 1.0, 1.0);
        CHECK(std::real(r.trace()) == doctest::Approx(J).epsilon(1e-12));
        CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    }
    // Trace scales with d^PL.
    CHECK(std::real(ap_correlation(4, 2, 20.0, 1e-3).trace()) ==
          doctest::Approx(4.0 * std::pow(20.0, 1e-3)).epsilon(1e-12));
    CHECK_THROWS_AS(ap_correlation(2, 3, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ap_correlation(2, 0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("RIS correlation sinc model")
{
    CHECK(sinc(0.0) == 1.0);
    CHECK(sinc(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(sinc(0.5) == doctest::Approx(2.0 / kPi).epsilon(1e-15));

    const std::vector<std::pair<double, double>> pos{{0, 0}, {0.5, 0}, {0.25, 0}};
    const RMat r = ris_correlation(pos, 1.0, 1.0, 1.0);
    CHECK(r(0, 0) == 1.0);
    CHECK(std::abs(r(0, 1)) < 1e-15);
    CHECK(r(0, 2) == doctest::Approx(2.0 / kPi));

    const RMat s = ris_correlation(ris_element_positions(16, testutil::iota_vec(16), 0.25, 0.25), 0.25, 0.25, 1.0);
    CHECK(s(0, 0) == doctest::Approx(0.0625));
    CHECK(s(0, 1) == doctest::Approx(0.0625 * 2.0 / kPi));
    Eigen::SelfAdjointEigenSolver<RMat> es(s);
    CHECK(es.eigenvalues().minCoeff() > -1e-10 * s.trace() / 16);
}

TEST_CASE("Gauss-Hermite rule integrates polynomials exactly")
{
    const auto [x, w] = gauss_hermite(30);
    CHECK(w.sum() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK((w.array() * x.array().square()).sum() == doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-12));
    CHECK((w.array() * x.array().pow(4)).sum() == doctest::Approx(3 * std::sqrt(kPi) / 4).epsilon(1e-12));
}

TEST_CASE("local scattering correlation")
{
    const double asd = 15.0 * kPi / 180.0;
    const CMat r = local_scattering_correlation(4, 0.5, asd, 2.5, 0.5);
    for (int j = 0; j < 4; ++j) CHECK(r(j, j) == cd(2.5, 0.0));
    CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::real(r.trace()) / 4 == doctest::Approx(2.5).epsilon(1e-9));

    // Narrow spread approaches the plane-wave outer product.
    const CMat n = local_scattering_correlation(3, 0.4, 1e-6, 1.0, 0.5);
    const cd pw = std::polar(1.0, 2 * kPi * 0.5 * std::sin(0.4));
    CHECK(std::abs(n(1, 0) - pw) < 1e-6);
    CHECK(std::abs(n(2, 0) - pw * pw) < 1e-6);
}

TEST_CASE("local scattering quadrature matches Monte Carlo integration")
{
    const double asd = 15.0 * kPi / 180.0;
    auto mc_entry = [&](double theta, int dpq, std::uint64_t seed) {
        Rng rng(seed);
        cd acc{0, 0};
        const int n = 1000000;
        for (int i = 0; i < n; ++i)
            acc += std::polar(1.0, 2 * kPi * 0.5 * dpq * std::sin(theta + asd * rng.normal()));
        return acc / static_cast<double>(n);
    };
    const CMat r = local_scattering_correlation(2, kPi / 6, asd, 1.0, 0.5);
    CHECK(std::abs(r(1, 0) - mc_entry(kPi / 6, 1, 1)) < 1e-3);

    Rng pick(8);
    for (int t = 0; t < 20; ++t) {
        const double theta = pick.uniform(-kPi / 2, kPi / 2);
        const int dpq = 1 + static_cast<int>(pick.next_u64() % 3);
        const CMat q = local_scattering_correlation(dpq + 1, theta, asd, 1.0, 0.5);
        Rng rng(100 + t);
        cd acc{0, 0};
        const int n = 200000;
        for (int i = 0; i < n; ++i)
            acc += std::polar(1.0, 2 * kPi * 0.5 * dpq * std::sin(theta + asd * rng.normal()));
        // 2e5 samples: standard error below 1.6e-3 per component.
        CHECK(std::abs(q(dpq, 0) - acc / static_cast<double>(n)) < 6e-3);
    }
}

TEST_CASE("Kronecker correlation")
{
    const CMat id = full_ris_ap_correlation(CMat::Identity(2, 2), CMat::Identity(3, 3));
    CHECK((id - CMat::Identity(6, 6) / 6.0).norm() < 1e-15);

    Rng rng(3);
    const CMat a0 = rng.cnormal_mat(3, 3), b0 = rng.cnormal_mat(4, 4);
    const CMat a = a0 * a0.adjoint(), b = b0 * b0.adjoint();
    const CMat k = full_ris_ap_correlation(a, b);
    CHECK(std::abs(k.trace() - a.trace() * b.trace() / 12.0) < 1e-10 * std::abs(k.trace()));
    CHECK((k - k.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    // Block (j, j') equals a(j', j) b / (J L_A).
    CHECK((k.block(4, 0, 4, 4) - a(0, 1) * b / 12.0).norm() < 1e-12);

    const CMat s = full_ris_ap_correlation(CMat::Constant(1, 1, 2.0), CMat::Constant(1, 1, 3.0));
    CHECK(std::abs(s(0, 0) - 6.0) < 1e-15);
}
