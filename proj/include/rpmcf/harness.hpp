#pragma once

#include "rpmcf/combining.hpp"
#include "rpmcf/energy.hpp"
#include "rpmcf/optimizer.hpp"
#include "rpmcf/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpmcf {

// Parse failures carry the offending line (0 when not from a file) and field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(int line, const std::string& field, const std::string& what);
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

enum class PhaseMode { random, zero };
enum class SeMethod { monte_carlo, closed_form };

struct ExperimentConfig {
    std::string kind = "se-cdf";
    SystemConfig sys;
    PowerModel power;
    SwarmConfig swarm;
    std::uint64_t seed = 1;
    long trials = 2000;
    int geometries = 20;
    CombinerKind combiner = CombinerKind::mr;
    SeMethod method = SeMethod::monte_carlo;
    PhaseMode phases = PhaseMode::random;
    std::vector<int> k_values{1, 2, 4};
    std::vector<double> x_values;
    int capacity_draws = 8;
    double eta_min = 0.0;
    int opt_seeds = 10;
    unsigned threads = 0;
    std::string output;

    void validate() const;
};

// Sectioned key = value text. Sections: [experiment], [system], [power], [optimizer].
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Applies "section.key" = value; used by the CLI flags as well.
void set_config_value(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& value, int line = 0);

FadingMode parse_fading(const std::string& s);
CombinerKind parse_combiner(const std::string& s);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table run_experiment(const ExperimentConfig& cfg);
void write_csv(const Table& t, std::ostream& out);
std::string format_number(double x);

// Geometry draw g of a sweep; identical across K and combiners for paired comparisons.
std::uint64_t geometry_seed(std::uint64_t seed, int g);

// Per-UE SE over `geometries` draws, geometry-major.
std::vector<double> se_samples(const SystemConfig& sys, int geometries, long trials, CombinerKind combiner,
                               SeMethod method, PhaseMode phases, std::uint64_t seed, unsigned threads = 0);

// Mean total EE over geometry draws with closed-form SE (MR + optimal LSFD).
double average_ee(const SystemConfig& sys, const PowerModel& pm, int geometries, int capacity_draws,
                  PhaseMode phases, std::uint64_t seed);

struct OptimizerComparison {
    double csa_pso = 0.0;
    double pso = 0.0;
    double random = 0.0;
    SwarmResult csa_run;
    SwarmResult pso_run;
};

// One geometry: EE of CSA-PSO, PSO and a random phase configuration.
OptimizerComparison compare_optimizers(const SystemConfig& sys, const PowerModel& pm, const SwarmConfig& swarm,
                                       int capacity_draws, double eta_min, std::uint64_t seed);

} // namespace rpmcf
