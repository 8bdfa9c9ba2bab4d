#include "rpmcf/optimizer.hpp"

#include "rpmcf/closed_form.hpp"
#include "rpmcf/parallel.hpp"

#include <algorithm>
#include <chrono>

namespace rpmcf {

void SwarmConfig::validate() const
{
    require(I >= 1, "swarm: I must be at least 1");
    require(T_max >= 1 && T_check >= 1 && N_i >= 1, "swarm: T_max, T_check and N_i must be at least 1");
    require(0.0 < omega_min && omega_min < omega_max && omega_max < 1.0, "swarm: need 0 < omega_min < omega_max < 1");
    require(v_max > 0.0, "swarm: v_max must be positive");
    require(c1 >= 0.0 && c2 >= 0.0, "swarm: acceleration constants must be nonnegative");
}

double wrap_phase(double x)
{
    const double two_pi = 2.0 * kPi;
    double y = x - two_pi * std::floor((x + kPi) / two_pi);
    if (y >= kPi) y -= two_pi; // rounding at the seam
    if (y < -kPi) y = -kPi;
    return y;
}

double logistic_map(double k, double mu_tilde) { return mu_tilde * k * (1.0 - k); }

RMat chaotic_init(int I, int dim, Rng& rng, double mu_tilde)
{
    require(I >= 1 && dim >= 1, "chaotic_init: I and dim must be positive");
    static constexpr double kForbidden[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    RMat pos(I, dim);
    for (int i = 0; i < I; ++i) {
        double k = 0.0;
        int tries = 0;
        for (;;) {
            k = rng.uniform();
            const bool bad = std::any_of(std::begin(kForbidden), std::end(kForbidden),
                                         [k](double f) { return std::abs(k - f) < 1e-9; });
            if (!bad) break;
            if (++tries >= 100) throw numeric_failure("chaotic_init: no admissible logistic seed");
        }
        for (int d = 0; d < dim; ++d) {
            pos(i, d) = -kPi + 2.0 * kPi * k;
            k = logistic_map(k, mu_tilde);
        }
    }
    return pos;
}

double adaptive_inertia(int t, int T_max, double omega_min, double omega_max)
{
    require(T_max >= 1 && t >= 0 && t <= T_max, "adaptive_inertia: need 0 <= t <= T_max");
    const double zeta = static_cast<double>(T_max - t) / T_max;
    return omega_min + (omega_max - omega_min) * (2.0 / (1.0 + std::exp(-5.0 * zeta)) - 1.0);
}

void velocity_update(SwarmState& s, double omega, double c1, double c2, double v_max, Rng& rng)
{
    for (Eigen::Index i = 0; i < s.positions.rows(); ++i) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        s.velocities.row(i) = omega * s.velocities.row(i) + c1 * r1 * (s.pbest.row(i) - s.positions.row(i)) +
                              c2 * r2 * (s.gbest.transpose() - s.positions.row(i));
    }
    s.velocities = s.velocities.cwiseMax(-v_max).cwiseMin(v_max);
}

void position_update(SwarmState& s)
{
    s.positions = (s.positions + s.velocities).unaryExpr([](double x) { return wrap_phase(x); });
}

int mutate_worst(SwarmState& s, int t, int T_max, Rng& rng)
{
    const auto I = s.positions.rows();
    if (I < 2) return -1;
    Eigen::Index best = 0;
    s.pbest_fitness.maxCoeff(&best);
    Eigen::Index worst = -1;
    for (Eigen::Index i = 0; i < I; ++i) {
        if (i == best) continue;
        if (worst < 0 || s.fitness(i) < s.fitness(worst)) worst = i;
    }
    const double sigma = 2.0 * kPi * (1.0 - static_cast<double>(t) / T_max);
    for (Eigen::Index d = 0; d < s.positions.cols(); ++d)
        s.positions(worst, d) = wrap_phase(s.gbest(d) + sigma * rng.normal());
    return static_cast<int>(worst);
}

std::vector<int> reset_stalled(SwarmState& s, int T_check, Rng& rng)
{
    std::vector<int> out;
    for (Eigen::Index i = 0; i < s.positions.rows(); ++i) {
        if (s.stall[i] <= T_check) continue;
        for (Eigen::Index d = 0; d < s.positions.cols(); ++d) {
            const double diff = s.gbest(d) - s.pbest(i, d);
            s.positions(i, d) = wrap_phase(rng.normal(0.5 * diff, std::abs(diff)));
        }
        s.stall[i] = 0;
        out.push_back(static_cast<int>(i));
    }
    return out;
}

namespace {

void evaluate_all(const Objective& f, SwarmState& s, unsigned threads, int iteration)
{
    const auto I = static_cast<std::size_t>(s.positions.rows());
    try {
        parallel_for(
            I, [&](std::size_t i) { s.fitness(static_cast<Eigen::Index>(i)) = f(s.positions.row(i).transpose()); },
            threads);
    } catch (const std::exception& e) {
        throw std::runtime_error("objective failed at iteration " + std::to_string(iteration) + ": " + e.what());
    }
}

void update_bests(SwarmState& s)
{
    for (Eigen::Index i = 0; i < s.positions.rows(); ++i) {
        if (s.fitness(i) > s.pbest_fitness(i)) {
            s.pbest_fitness(i) = s.fitness(i);
            s.pbest.row(i) = s.positions.row(i);
        }
        if (s.pbest_fitness(i) > s.gbest_fitness) {
            s.gbest_fitness = s.pbest_fitness(i);
            s.gbest = s.pbest.row(i).transpose();
        }
    }
}

SwarmResult run_swarm(const Objective& f, int dim, const SwarmConfig& cfg, std::uint64_t seed, bool csa)
{
    cfg.validate();
    require(dim >= 1, "swarm: dimension must be positive");
    Rng rng(seed);
    SwarmState s;
    if (csa) {
        s.positions = chaotic_init(cfg.I, dim, rng, cfg.mu_tilde);
    } else {
        s.positions.resize(cfg.I, dim);
        for (int i = 0; i < cfg.I; ++i)
            for (int d = 0; d < dim; ++d) s.positions(i, d) = rng.uniform(-kPi, kPi);
    }
    s.velocities = RMat::Zero(cfg.I, dim);
    s.fitness = RVec::Zero(cfg.I);
    evaluate_all(f, s, cfg.threads, 0);
    s.pbest = s.positions;
    s.pbest_fitness = s.fitness;
    Eigen::Index b = 0;
    s.gbest_fitness = s.fitness.maxCoeff(&b);
    s.gbest = s.positions.row(b).transpose();
    s.prev_fitness = s.fitness;
    s.stall.assign(cfg.I, 0);

    const double eps = cfg.epsilon > 0.0 ? cfg.epsilon : 1e-4 * std::abs(s.gbest_fitness);
    SwarmResult r;
    const double omega0 = csa ? adaptive_inertia(0, cfg.T_max, cfg.omega_min, cfg.omega_max) : cfg.omega_fixed;
    r.trace.push_back({0, s.gbest_fitness, s.fitness.mean(), omega0});

    const auto start = std::chrono::steady_clock::now();
    double prev_g = s.gbest_fitness;
    for (int t = 0; t < cfg.T_max; ++t) {
        const double omega = csa ? adaptive_inertia(t, cfg.T_max, cfg.omega_min, cfg.omega_max) : cfg.omega_fixed;
        std::vector<int> fixed;
        if (csa) {
            fixed = reset_stalled(s, cfg.T_check, rng);
            const int w = mutate_worst(s, t, cfg.T_max, rng);
            if (w >= 0) fixed.push_back(w);
        }
        // Mutated and reset particles are evaluated where they were placed.
        std::vector<RVec> keep;
        for (int i : fixed) keep.push_back(s.positions.row(i).transpose());
        velocity_update(s, omega, cfg.c1, cfg.c2, cfg.v_max, rng);
        position_update(s);
        for (std::size_t j = 0; j < fixed.size(); ++j) s.positions.row(fixed[j]) = keep[j].transpose();

        evaluate_all(f, s, cfg.threads, t + 1);
        for (int i = 0; i < cfg.I; ++i) {
            const double scale = std::max(1.0, std::abs(s.prev_fitness(i)));
            s.stall[i] = std::abs(s.fitness(i) - s.prev_fitness(i)) < 1e-12 * scale ? s.stall[i] + 1 : 0;
        }
        s.prev_fitness = s.fitness;
        update_bests(s);
        r.trace.push_back({t + 1, s.gbest_fitness, s.fitness.mean(), omega});
        r.iterations = t + 1;

        s.n_conv = std::abs(s.gbest_fitness - prev_g) < eps ? s.n_conv + 1 : 0;
        prev_g = s.gbest_fitness;
        if (s.n_conv >= cfg.N_i) break;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.best_position = s.gbest;
    r.best_fitness = s.gbest_fitness;
    return r;
}

} // namespace

SwarmResult run_csa_pso(const Objective& f, int dim, const SwarmConfig& cfg, std::uint64_t seed)
{
    return run_swarm(f, dim, cfg, seed, true);
}

SwarmResult run_pso(const Objective& f, int dim, const SwarmConfig& cfg, std::uint64_t seed)
{
    return run_swarm(f, dim, cfg, seed, false);
}

double random_phase_fitness(const Objective& f, int dim, std::uint64_t seed)
{
    require(dim >= 1, "random_phase_fitness: dimension must be positive");
    Rng rng(seed);
    RVec x(dim);
    for (int d = 0; d < dim; ++d) x(d) = rng.uniform(-kPi, kPi);
    return f(x);
}

EeObjective::EeObjective(Scenario sc, PowerModel pm, int capacity_draws, std::uint64_t seed, double eta_min)
    : sc_(std::move(sc)), pm_(pm), eta_min_(eta_min)
{
    pm_.validate();
    require(eta_min >= 0.0, "EeObjective: eta_min must be nonnegative");
    draws_ = draw_capacity_noise(sc_, capacity_draws, seed);
}

RMat EeObjective::to_theta(const RVec& position) const
{
    require(position.size() == dim(), "EeObjective: position has wrong dimension");
    RMat theta(sc_.cfg.M, sc_.cb.L_A);
    for (int m = 0; m < sc_.cfg.M; ++m)
        for (int l = 0; l < sc_.cb.L_A; ++l) theta(m, l) = position(m * sc_.cb.L_A + l);
    return theta;
}

EeEvaluation EeObjective::evaluate(const RMat& theta) const
{
    const auto& cfg = sc_.cfg;
    EeEvaluation ev;
    ev.se = closed_form_se(sc_, theta).se;
    ev.sum_se = ev.se.sum();
    const RVec caps = capacity_per_ap(sc_, theta, draws_);
    ev.p_tot = total_power(pm_, RVec::Constant(cfg.U, cfg.p_data_w), caps, sc_.cb.L_A, cfg.M, cfg.J, cfg.U,
                           cfg.tau_u(), cfg.tau_c);
    ev.ee = energy_efficiency(ev.sum_se, ev.p_tot, pm_.bandwidth);
    return ev;
}

double EeObjective::operator()(const RVec& position) const
{
    const EeEvaluation ev = evaluate(to_theta(position));
    double shortfall = 0.0;
    for (Eigen::Index u = 0; u < ev.se.size(); ++u) shortfall += std::max(0.0, eta_min_ - ev.se(u));
    return ev.ee - penalty_ * shortfall;
}

void EeObjective::calibrate_penalty(std::uint64_t seed)
{
    Rng rng(seed);
    double acc = 0.0;
    for (int i = 0; i < 10; ++i) acc += evaluate(random_phases(sc_, rng)).ee;
    penalty_ = 1e3 * acc / 10.0;
}

} // namespace rpmcf
