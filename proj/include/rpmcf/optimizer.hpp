#pragma once

#include "rpmcf/common.hpp"
#include "rpmcf/energy.hpp"
#include "rpmcf/rng.hpp"
#include "rpmcf/scenario.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rpmcf {

struct SwarmConfig {
    int I = 20;
    int T_max = 100;
    int T_check = 2;
    double c1 = 1.496;
    double c2 = 1.496;
    double omega_min = 0.4;
    double omega_max = 0.9;
    double omega_fixed = 0.7298;
    double v_max = 4.0;
    int N_i = 10;
    double epsilon = 0.0; // <= 0 selects 1e-4 x initial gbest fitness
    double mu_tilde = 4.0;
    unsigned threads = 0;

    void validate() const;
};

struct SwarmState {
    RMat positions;  // I x dim
    RMat velocities; // I x dim
    RVec fitness;    // current
    RVec prev_fitness;
    RMat pbest;
    RVec pbest_fitness;
    RVec gbest;
    double gbest_fitness = 0.0;
    std::vector<int> stall;
    int n_conv = 0;
};

struct TraceRow {
    int iteration = 0;
    double gbest = 0.0;
    double mean = 0.0;
    double omega = 0.0;
};

struct SwarmResult {
    RVec best_position;
    double best_fitness = 0.0;
    std::vector<TraceRow> trace;
    int iterations = 0;
    double seconds = 0.0;
};

using Objective = std::function<double(const RVec&)>;

// Wraps into [-pi, pi).
double wrap_phase(double x);
double logistic_map(double k, double mu_tilde = 4.0);

RMat chaotic_init(int I, int dim, Rng& rng, double mu_tilde = 4.0);
double adaptive_inertia(int t, int T_max, double omega_min, double omega_max);
void velocity_update(SwarmState& s, double omega, double c1, double c2, double v_max, Rng& rng);
void position_update(SwarmState& s);
// Returns the mutated particle index, or -1 when I < 2.
int mutate_worst(SwarmState& s, int t, int T_max, Rng& rng);
// Returns the indices of the particles that were reset.
std::vector<int> reset_stalled(SwarmState& s, int T_check, Rng& rng);

SwarmResult run_csa_pso(const Objective& f, int dim, const SwarmConfig& cfg, std::uint64_t seed);
SwarmResult run_pso(const Objective& f, int dim, const SwarmConfig& cfg, std::uint64_t seed);
// Fitness of one uniformly random position.
double random_phase_fitness(const Objective& f, int dim, std::uint64_t seed);

struct EeEvaluation {
    double ee = 0.0;
    double sum_se = 0.0;
    double p_tot = 0.0;
    RVec se;
};

// Total EE of a phase configuration: closed-form SE (MR + optimal LSFD) over
// a power model whose traffic term uses a fixed set of channel draws.
class EeObjective {
public:
    EeObjective(Scenario sc, PowerModel pm, int capacity_draws, std::uint64_t seed, double eta_min = 0.0);

    EeEvaluation evaluate(const RMat& theta) const;
    // Fitness of a flattened (row-major M x L_A) position, with QoS penalty.
    double operator()(const RVec& position) const;
    // Penalty = 1e3 x mean EE of 10 random configurations.
    void calibrate_penalty(std::uint64_t seed);

    int dim() const { return sc_.cfg.M * sc_.cb.L_A; }
    RMat to_theta(const RVec& position) const;
    const Scenario& scenario() const { return sc_; }
    double penalty() const { return penalty_; }

private:
    Scenario sc_;
    PowerModel pm_;
    std::vector<ChannelNoise> draws_;
    double eta_min_;
    double penalty_ = 0.0;
};

} // namespace rpmcf
