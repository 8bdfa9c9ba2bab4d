#pragma once

#include "rpmcf/common.hpp"
#include "rpmcf/rng.hpp"
#include "rpmcf/rpm_channel.hpp"
#include "rpmcf/topology.hpp"

#include <cstdint>
#include <vector>

namespace rpmcf {

struct SystemConfig {
    int M = 20;
    int J = 4;
    int U = 5;
    int L = 64;
    int G = 4;
    int K = 2;
    int tau_c = 200;
    int tau_p = 2;
    double area_side = 1000.0;
    double p_pilot_w = 0.2;
    double p_data_w = 0.2;
    double sigma2_dbm = -94.0;
    double asd_deg = 15.0;
    FadingMode fading = FadingMode::rician;
    bool ris_enabled = true;
    ShadowParams shadow;

    int tau_u() const { return tau_c - tau_p; }
    void validate() const;
};

// Geometry plus every phase-independent statistic. Powers are normalized by
// the noise power, so sigma2 = 1 and p, pbar are transmit SNRs.
struct Scenario {
    SystemConfig cfg;
    NetworkGeometry geo;
    LargeScaleParams ls;
    ReflectionPatternCodebook cb;
    RVec p;
    RVec pbar;
    double sigma2 = 1.0;

    // links[c][m * U + u]
    std::vector<std::vector<LinkModel>> links;
    // Square roots for sampling.
    std::vector<CMat> sqrt_r_mu; // [m * U + u]
    std::vector<CMat> sqrt_r_ap; // [m]
    std::vector<RMat> sqrt_r_ris; // [c]

    int idx(int m, int u) const { return m * cfg.U + u; }
    const LinkModel& link(int c, int m, int u) const { return links[c][idx(m, u)]; }
};

Scenario build_scenario(const SystemConfig& cfg, const NetworkGeometry& geo, const LargeScaleParams& ls);
Scenario build_scenario(const SystemConfig& cfg, std::uint64_t seed);

// Per-pattern statistics for a phase configuration theta (M x L_A).
using SystemStats = std::vector<std::vector<AggregatedChannelStats>>; // [c][m * U + u]
SystemStats compute_stats(const Scenario& sc, const RMat& theta);

// White inputs for one coherence block; channels follow deterministically.
struct ChannelNoise {
    std::vector<int> rp;      // pattern per RIS
    std::vector<CVec> f;      // [m * U + u], J
    std::vector<CVec> z;      // [m * U + u], L_A
    std::vector<CMat> g;      // [m], J x L_A
};

ChannelNoise draw_channel_noise(const Scenario& sc, Rng& rng);

// H[m] is J x U with column u the aggregated channel of UE u at AP m.
std::vector<CMat> synthesize_channels(const Scenario& sc, const RMat& theta, const ChannelNoise& n);

RMat zero_phases(const Scenario& sc);
RMat random_phases(const Scenario& sc, Rng& rng);

} // namespace rpmcf
