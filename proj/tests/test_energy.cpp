#include "helpers.hpp"

#include "rpmcf/energy.hpp"

#include <doctest.h>

using namespace rpmcf;

TEST_CASE("capacity oracles")
{
    CHECK(capacity_from_draws({CMat::Zero(2, 3)}, RVec::Ones(3), 1.0) == 0.0);
    CHECK(capacity_from_draws({CMat::Ones(1, 1)}, RVec::Ones(1), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(capacity_from_draws({CMat::Ones(1, 2)}, RVec::Ones(2), 1.0) == doctest::Approx(std::log2(3.0)).epsilon(1e-15));
    // Mean over draws.
    CHECK(capacity_from_draws({CMat::Ones(1, 1), CMat::Zero(1, 1)}, RVec::Ones(1), 1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(capacity_from_draws({}, RVec::Ones(1), 1.0), std::invalid_argument);
}

TEST_CASE("total power oracle")
{
    const PowerModel pm; // 10 dBm per element
    const double p = total_power(pm, RVec::Constant(1, 0.2), RVec::Zero(1), 16, 1, 4, 1, 198, 200);
    CHECK(p == doctest::Approx(8.07).epsilon(1e-12));

    PowerModel wide = pm;
    wide.bandwidth = 1e9; // 1 Gbps at one bit/s/Hz, rho = 0.5 W/Gbps
    const double q = total_power(wide, RVec::Constant(1, 0.2), RVec::Ones(1), 16, 1, 4, 1, 198, 200);
    CHECK(q - p == doctest::Approx(0.495).epsilon(1e-12));

    const double full = total_power(pm, RVec::Constant(3, 0.2), RVec::Zero(5), 32, 5, 4, 3, 198, 200);
    const double half = total_power(pm, RVec::Constant(3, 0.2), RVec::Zero(5), 16, 5, 4, 3, 198, 200);
    CHECK(full - half == doctest::Approx(5 * 16 * pm.p_ris_element).epsilon(1e-12));
    CHECK(pm.p_ris_element == doctest::Approx(dbm_to_watt(10.0)));
}

TEST_CASE("energy efficiency")
{
    CHECK(energy_efficiency(0.0, 10.0, 20e6) == 0.0);
    CHECK(energy_efficiency(1.0, 10.0, 20e6) == doctest::Approx(2e6));
    CHECK(energy_efficiency(1.0, 10.0, 40e6) == doctest::Approx(2.0 * energy_efficiency(1.0, 10.0, 20e6)));
    CHECK_THROWS_AS(energy_efficiency(1.0, 0.0, 20e6), std::invalid_argument);
    CHECK_THROWS_AS(energy_efficiency(1.0, -2.0, 20e6), std::invalid_argument);
}

TEST_CASE("power model validation")
{
    PowerModel pm;
    pm.alpha_ue = 0.0;
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument);
    pm.alpha_ue = 1.0;
    CHECK_NOTHROW(pm.validate());
    pm.p_ap_fix = -1.0;
    CHECK_THROWS_AS(pm.validate(), std::invalid_argument);
}

TEST_CASE("capacity is nondecreasing in transmit power")
{
    Rng rng(3);
    std::vector<CMat> draws;
    for (int i = 0; i < 8; ++i) draws.push_back(rng.cnormal_mat(4, 3));
    double prev = -1.0;
    for (double p = 0.0; p <= 10.0; p += 0.5) {
        const double c = capacity_from_draws(draws, RVec::Constant(3, p), 1.0);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("per-AP capacity from scenario draws")
{
    const Scenario sc = build_scenario(testutil::desk_config(), 2);
    const auto noise = draw_capacity_noise(sc, 4, 9);
    const RVec c = capacity_per_ap(sc, zero_phases(sc), noise);
    CHECK(c.size() == sc.cfg.M);
    for (int m = 0; m < sc.cfg.M; ++m) CHECK(c(m) > 0.0);
    const RVec again = capacity_per_ap(sc, zero_phases(sc), draw_capacity_noise(sc, 4, 9));
    CHECK((c - again).norm() == 0.0);
}
