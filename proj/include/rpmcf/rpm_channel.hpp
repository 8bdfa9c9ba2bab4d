#pragma once

#include "rpmcf/common.hpp"
#include "rpmcf/rng.hpp"

#include <cstdint>
#include <vector>

namespace rpmcf {

struct ReflectionPatternCodebook {
    int G = 0;
    int K = 0;
    int N = 0;  // elements per block
    int L1 = 0; // bits per pattern
    int C = 0;  // usable patterns, 2^L1
    int L_A = 0;
    std::vector<std::vector<int>> patterns;     // active block indices
    std::vector<std::vector<int>> element_sets; // active element indices, ascending
};

ReflectionPatternCodebook build_rp_codebook(int G, int K, int N);
int map_bits_to_rp(std::uint64_t word, const ReflectionPatternCodebook& cb);
std::uint64_t binomial(int n, int k);

enum class FadingMode { rician, rayleigh, pure_los };

// Amplitude weights of the LoS and NLoS parts of G = g_los Gbar + g_nlos G~ and
// z = z_los zbar + z_nlos z~. Rician: g_los^2 = alpha kappa/(kappa+1), etc.
struct CascadeWeights {
    double g_los = 0.0;
    double g_nlos = 0.0;
    double z_los = 0.0;
    double z_nlos = 0.0;
};

CascadeWeights cascade_weights(double alpha, double kappa, double xi, double iota, FadingMode mode);

// Phase-independent description of one UE-RIS-AP link under a fixed pattern.
struct LinkModel {
    CascadeWeights w;
    CVec a_ap;     // J, unit modulus, AP response toward the RIS
    CVec a_ris_ap; // L_A, RIS response toward the AP
    CVec z_bar;    // L_A, RIS response toward the UE
    CMat R_mu;     // J x J, direct UE-AP correlation
    RMat R_ris;    // L_A x L_A, RIS-side correlation (also the UE-RIS NLoS covariance)
    CMat R_ap;     // J x J, AP-side correlation of the RIS-AP NLoS part
};

struct AggregatedChannelStats {
    CVec h_bar;
    CMat R_h;
    CMat term1; // b kappa Gbar Phi R~ Phi^H Gbar^H
    CMat Pi;
    CMat Xi;
    double b = 0.0;
};

CMat phase_matrix(const RVec& theta);
CMat los_cascade(const LinkModel& link); // Gbar = a_ap a_ris_ap^H

// Production path: exploits the Kronecker structure of the RIS-AP correlation.
AggregatedChannelStats aggregated_stats(const LinkModel& link, const RVec& theta);

// Reference path: block traces against the explicit (J L_A)^2 correlation.
AggregatedChannelStats aggregated_stats_blockwise(const LinkModel& link, const RVec& theta);

// One draw of the NLoS components of a single link, retained for oracle tests.
struct LinkRealization {
    CVec h;
    CVec f;
    CMat G;
    CVec z;
};

// Sample G~ with E[G~_jl conj(G~_j'l')] = R_ap(j', j) R_ris(l, l') / (J L_A),
// i.e. the block (j, j') of the full correlation, from white CN(0,1) input.
CMat ris_ap_nlos(const CMat& sqrt_r_ap, const RMat& sqrt_r_ris, const CMat& white);

LinkRealization sample_link(const LinkModel& link, const RVec& theta, Rng& rng);

} // namespace rpmcf
