#include "rpmcf/harness.hpp"

#include "rpmcf/closed_form.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rpmcf {

ConfigError::ConfigError(int line, const std::string& field, const std::string& what)
    : std::invalid_argument(line > 0 ? "config line " + std::to_string(line) + ", field '" + field + "': " + what
                                     : "field '" + field + "': " + what),
      line_(line), field_(field)
{
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& field)
{
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(line, field, "not a number: " + v);
    return x;
}

long to_long(const std::string& v, int line, const std::string& field)
{
    long x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(line, field, "not an integer: " + v);
    return x;
}

int to_int(const std::string& v, int line, const std::string& field)
{
    const long x = to_long(v, line, field);
    if (x < -2147483647L || x > 2147483647L) throw ConfigError(line, field, "out of range: " + v);
    return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& v, int line, const std::string& field)
{
    std::uint64_t x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw ConfigError(line, field, "not an unsigned integer: " + v);
    return x;
}

bool to_bool(const std::string& v, int line, const std::string& field)
{
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(line, field, "expected true or false: " + v);
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

const std::vector<std::string> kKinds{"se-cdf",  "se-vs-m",   "se-vs-u",  "se-vs-j",      "ee-vs-m",
                                      "ee-vs-u", "ee-vs-rho", "optimize", "oracle-suite", "timing"};

const char* combiner_name(CombinerKind k) { return k == CombinerKind::mr ? "mr" : "lmmse"; }

const char* fading_name(FadingMode f)
{
    switch (f) {
    case FadingMode::rician: return "rician";
    case FadingMode::rayleigh: return "rayleigh";
    case FadingMode::pure_los: return "pure-los";
    }
    return "?";
}

const std::vector<std::string> kHeader{"experiment", "method", "k",   "combiner", "fading",
                                       "seed",       "run",    "x",   "metric",   "value"};

struct RowWriter {
    Table& t;
    const ExperimentConfig& cfg;

    void add(const std::string& method, int k, const std::string& run, double x, const std::string& metric,
             double value)
    {
        t.rows.push_back({cfg.kind, method, std::to_string(k), combiner_name(cfg.combiner),
                          fading_name(cfg.sys.fading), std::to_string(cfg.seed), run, format_number(x), metric,
                          format_number(value)});
    }
};

std::string method_name(SeMethod m) { return m == SeMethod::monte_carlo ? "monte-carlo" : "closed-form"; }

RMat phases_for(const Scenario& sc, PhaseMode mode, std::uint64_t gseed)
{
    if (mode == PhaseMode::zero) return zero_phases(sc);
    Rng rng = Rng::substream(gseed, 1);
    return random_phases(sc, rng);
}

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::vector<double> default_x(const std::string& kind)
{
    if (kind == "se-vs-m" || kind == "ee-vs-m") return {5, 10, 15, 20};
    if (kind == "se-vs-u" || kind == "ee-vs-u") return {2, 4, 6, 8};
    if (kind == "se-vs-j") return {1, 2, 4};
    if (kind == "ee-vs-rho") return {0.25, 0.5, 1.0, 2.0};
    return {};
}

void run_se_cdf(const ExperimentConfig& cfg, RowWriter& w)
{
    for (int k : cfg.k_values) {
        SystemConfig sys = cfg.sys;
        sys.K = k;
        std::vector<double> s =
            se_samples(sys, cfg.geometries, cfg.trials, cfg.combiner, cfg.method, cfg.phases, cfg.seed, cfg.threads);
        std::sort(s.begin(), s.end());
        const double n = static_cast<double>(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            w.add(method_name(cfg.method), k, "", (static_cast<double>(i) + 0.5) / n, "se", s[i]);
    }
}

void run_se_sweep(const ExperimentConfig& cfg, RowWriter& w, char var)
{
    const std::vector<double> xs = cfg.x_values.empty() ? default_x(cfg.kind) : cfg.x_values;
    for (double x : xs) {
        for (int k : cfg.k_values) {
            SystemConfig sys = cfg.sys;
            sys.K = k;
            const int xi = static_cast<int>(std::lround(x));
            if (var == 'm') sys.M = xi;
            if (var == 'u') sys.U = xi;
            if (var == 'j') sys.J = xi;
            const auto s =
                se_samples(sys, cfg.geometries, cfg.trials, cfg.combiner, cfg.method, cfg.phases, cfg.seed,
                           cfg.threads);
            w.add(method_name(cfg.method), k, "", x, "avg_se", mean_of(s));
        }
    }
}

void run_ee_sweep(const ExperimentConfig& cfg, RowWriter& w, char var)
{
    const std::vector<double> xs = cfg.x_values.empty() ? default_x(cfg.kind) : cfg.x_values;
    for (double x : xs) {
        for (int k : cfg.k_values) {
            SystemConfig sys = cfg.sys;
            sys.K = k;
            PowerModel pm = cfg.power;
            if (var == 'm') sys.M = static_cast<int>(std::lround(x));
            if (var == 'u') sys.U = static_cast<int>(std::lround(x));
            if (var == 'r') pm.rho_ap = pm.rho_bh = 0.5 * x * 1e-9; // x in W/Gbps, split evenly
            w.add("closed-form", k, "", x, "avg_ee",
                  average_ee(sys, pm, cfg.geometries, cfg.capacity_draws, cfg.phases, cfg.seed));
        }
    }
}

void run_optimize(const ExperimentConfig& cfg, RowWriter& w)
{
    for (int k : cfg.k_values) {
        SystemConfig sys = cfg.sys;
        sys.K = k;
        for (int s = 0; s < cfg.opt_seeds; ++s) {
            const OptimizerComparison r =
                compare_optimizers(sys, cfg.power, cfg.swarm, cfg.capacity_draws, cfg.eta_min, geometry_seed(cfg.seed, s));
            const std::string run = std::to_string(s);
            w.add("csa-pso", k, run, 0, "final_ee", r.csa_pso);
            w.add("pso", k, run, 0, "final_ee", r.pso);
            w.add("random", k, run, 0, "final_ee", r.random);
            for (const TraceRow& t : r.csa_run.trace) {
                w.add("csa-pso", k, run, t.iteration, "gbest_ee", t.gbest);
                w.add("csa-pso", k, run, t.iteration, "mean_ee", t.mean);
                w.add("csa-pso", k, run, t.iteration, "omega", t.omega);
            }
            for (const TraceRow& t : r.pso_run.trace) {
                w.add("pso", k, run, t.iteration, "gbest_ee", t.gbest);
                w.add("pso", k, run, t.iteration, "mean_ee", t.mean);
                w.add("pso", k, run, t.iteration, "omega", t.omega);
            }
        }
    }
}

void run_oracle_suite(const ExperimentConfig& cfg, RowWriter& w)
{
    const SystemConfig& sys = cfg.sys;
    for (int g = 0; g < cfg.geometries; ++g) {
        const std::uint64_t gs = geometry_seed(cfg.seed, g);
        const Scenario sc = build_scenario(sys, gs);
        const RMat theta = phases_for(sc, cfg.phases, gs);
        const ClosedFormResult cf = closed_form_se(sc, theta);
        const LsfdStatistics st = lsfd_statistics(sc, theta, CombinerKind::mr, cfg.trials,
                                                  Rng::substream(gs, 2).next_u64(), cfg.threads);
        const RVec mc = monte_carlo_se(st, sc);
        const std::string run = std::to_string(g);
        for (int u = 0; u < sys.U; ++u) {
            w.add("closed-form", sys.K, run, u, "se", cf.se(u));
            w.add("monte-carlo", sys.K, run, u, "se", mc(u));
            w.add("closed-form", sys.K, run, u, "se_rel_err", std::abs(cf.se(u) - mc(u)) / mc(u));
        }
        // Case table vs compact form at the optimal and uniform weights.
        const SystemStats stats = compute_stats(sc, theta);
        const PilotBook book = assign_pilots(sys.U, sys.tau_p, sc.p);
        std::vector<EstimationSet> est;
        for (const auto& s : stats) est.push_back(estimate_all(sc, book, s));
        const auto bd = sinr_breakdowns(sc, stats, est, book);
        double worst = 0.0;
        for (int u = 0; u < sys.U; ++u) {
            for (const CVec& c : {closed_form_optimal_weights(bd[u], sc.p, sc.pbar, sc.sigma2, sys.tau_p),
                                  CVec(CVec::Ones(sys.M))}) {
                const double compact =
                    std::real(c.dot(closed_form_denominator(bd[u], sc.p, sc.pbar, sc.sigma2, sys.tau_p) * c));
                const double table = case_table_denominator(bd[u], c, sc.pbar, sc.sigma2);
                worst = std::max(worst, std::abs(compact - table) / std::abs(table));
            }
        }
        w.add("closed-form", sys.K, run, 0, "case_table_rel_diff", worst);
    }
    Rng rng(Rng::substream(cfg.seed, 99).next_u64());
    const CMat a = rng.cnormal_mat(3, 3);
    w.add("monte-carlo", sys.K, "", 0, "lemma1_rel_err", lemma1_check(2, 3, 1.5, a, cfg.trials, rng));
    const CMat b = rng.cnormal_mat(3, 3);
    w.add("monte-carlo", sys.K, "", 0, "lemma2_rel_err", lemma2_check(b * b.adjoint(), a, cfg.trials, rng));
}

void run_timing(const ExperimentConfig& cfg, RowWriter& w)
{
    for (int k : cfg.k_values) {
        SystemConfig sys = cfg.sys;
        sys.K = k;
        const Scenario sc = build_scenario(sys, geometry_seed(cfg.seed, 0));
        EeObjective obj(sc, cfg.power, cfg.capacity_draws, Rng::substream(cfg.seed, 3).next_u64(), cfg.eta_min);
        obj.calibrate_penalty(Rng::substream(cfg.seed, 4).next_u64());
        const Objective f = [&obj](const RVec& x) { return obj(x); };
        SwarmConfig sw = cfg.swarm;
        sw.N_i = sw.T_max + 1; // fixed iteration count
        const SwarmResult pso = run_pso(f, obj.dim(), sw, cfg.seed);
        const SwarmResult csa = run_csa_pso(f, obj.dim(), sw, cfg.seed);
        const double tp = pso.seconds / pso.iterations;
        const double tc = csa.seconds / csa.iterations;
        w.add("pso", k, "", sc.cb.L_A, "sec_per_iter", tp);
        w.add("csa-pso", k, "", sc.cb.L_A, "sec_per_iter", tc);
        w.add("csa-pso", k, "", sc.cb.L_A, "ratio_to_pso", tc / tp);
    }
}

} // namespace

FadingMode parse_fading(const std::string& s)
{
    if (s == "rician") return FadingMode::rician;
    if (s == "rayleigh") return FadingMode::rayleigh;
    if (s == "pure-los") return FadingMode::pure_los;
    throw ConfigError(0, "fading", "expected rayleigh, rician or pure-los: " + s);
}

CombinerKind parse_combiner(const std::string& s)
{
    if (s == "mr") return CombinerKind::mr;
    if (s == "lmmse") return CombinerKind::lmmse;
    throw ConfigError(0, "combiner", "expected mr or lmmse: " + s);
}

void set_config_value(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                      const std::string& v, int line)
{
    const std::string f = section + "." + key;
    auto D = [&] { return to_double(v, line, f); };
    auto I = [&] { return to_int(v, line, f); };
    try {
        if (section == "experiment") {
            if (key == "kind") {
                if (std::find(kKinds.begin(), kKinds.end(), v) == kKinds.end())
                    throw ConfigError(line, f, "unknown experiment kind: " + v);
                cfg.kind = v;
            } else if (key == "seed") cfg.seed = to_u64(v, line, f);
            else if (key == "trials") cfg.trials = to_long(v, line, f);
            else if (key == "geometries") cfg.geometries = I();
            else if (key == "combiner") cfg.combiner = parse_combiner(v);
            else if (key == "method") {
                if (v == "monte-carlo") cfg.method = SeMethod::monte_carlo;
                else if (v == "closed-form") cfg.method = SeMethod::closed_form;
                else throw ConfigError(line, f, "expected monte-carlo or closed-form: " + v);
            } else if (key == "phases") {
                if (v == "random") cfg.phases = PhaseMode::random;
                else if (v == "zero") cfg.phases = PhaseMode::zero;
                else throw ConfigError(line, f, "expected random or zero: " + v);
            } else if (key == "k_values") {
                cfg.k_values.clear();
                for (const auto& s : split_list(v)) cfg.k_values.push_back(to_int(s, line, f));
            } else if (key == "x_values") {
                cfg.x_values.clear();
                for (const auto& s : split_list(v)) cfg.x_values.push_back(to_double(s, line, f));
            } else if (key == "capacity_draws") cfg.capacity_draws = I();
            else if (key == "eta_min") cfg.eta_min = D();
            else if (key == "opt_seeds") cfg.opt_seeds = I();
            else if (key == "threads") cfg.threads = static_cast<unsigned>(std::max(0, I()));
            else if (key == "output") cfg.output = v;
            else throw ConfigError(line, f, "unknown key");
        } else if (section == "system") {
            SystemConfig& s = cfg.sys;
            if (key == "M") s.M = I();
            else if (key == "J") s.J = I();
            else if (key == "U") s.U = I();
            else if (key == "L") s.L = I();
            else if (key == "G") s.G = I();
            else if (key == "K") s.K = I();
            else if (key == "tau_c") s.tau_c = I();
            else if (key == "tau_p") s.tau_p = I();
            else if (key == "area_side") s.area_side = D();
            else if (key == "p_pilot_w") s.p_pilot_w = D();
            else if (key == "p_data_w") s.p_data_w = D();
            else if (key == "sigma2_dbm") s.sigma2_dbm = D();
            else if (key == "asd_deg") s.asd_deg = D();
            else if (key == "fading") s.fading = parse_fading(v);
            else if (key == "ris_enabled") s.ris_enabled = to_bool(v, line, f);
            else if (key == "delta_f") s.shadow.delta_f = D();
            else if (key == "delta_sf_db") s.shadow.delta_sf = D();
            else if (key == "d_decorr") s.shadow.d_dc = D();
            else throw ConfigError(line, f, "unknown key");
        } else if (section == "power") {
            PowerModel& p = cfg.power;
            if (key == "rho_ap_w_per_gbps") p.rho_ap = D() * 1e-9;
            else if (key == "rho_bh_w_per_gbps") p.rho_bh = D() * 1e-9;
            else if (key == "p_ap_fix") p.p_ap_fix = D();
            else if (key == "p_ap_antenna") p.p_ap_antenna = D();
            else if (key == "p_bh_fix") p.p_bh_fix = D();
            else if (key == "p_ris_dbm") p.p_ris_element = dbm_to_watt(D());
            else if (key == "alpha_ue") p.alpha_ue = D();
            else if (key == "p_ue_fix") p.p_ue_fix = D();
            else if (key == "bandwidth") p.bandwidth = D();
            else throw ConfigError(line, f, "unknown key");
        } else if (section == "optimizer") {
            SwarmConfig& s = cfg.swarm;
            if (key == "I") s.I = I();
            else if (key == "T_max") s.T_max = I();
            else if (key == "T_check") s.T_check = I();
            else if (key == "c1") s.c1 = D();
            else if (key == "c2") s.c2 = D();
            else if (key == "omega_min") s.omega_min = D();
            else if (key == "omega_max") s.omega_max = D();
            else if (key == "omega_fixed") s.omega_fixed = D();
            else if (key == "v_max") s.v_max = D();
            else if (key == "N_i") s.N_i = I();
            else if (key == "epsilon") s.epsilon = D();
            else throw ConfigError(line, f, "unknown key");
        } else {
            throw ConfigError(line, section, "unknown section");
        }
    } catch (const ConfigError& e) {
        if (e.line() == 0 && line > 0) throw ConfigError(line, f, e.what());
        throw;
    }
}

void ExperimentConfig::validate() const
{
    sys.validate();
    power.validate();
    swarm.validate();
    require(trials >= 1, "experiment: trials must be at least 1");
    require(geometries >= 1, "experiment: geometries must be at least 1");
    require(capacity_draws >= 1, "experiment: capacity_draws must be at least 1");
    require(opt_seeds >= 1, "experiment: opt_seeds must be at least 1");
    require(!k_values.empty(), "experiment: k_values must not be empty");
    for (int k : k_values) require(k >= 1 && k <= sys.G, "experiment: every K must satisfy 1 <= K <= G");
    require(!(method == SeMethod::closed_form && combiner == CombinerKind::lmmse),
            "experiment: the closed form exists for MR only");
}

ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig cfg;
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, s, "malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "experiment" && section != "system" && section != "power" && section != "optimizer")
                throw ConfigError(line, section, "unknown section");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, s, "expected key = value");
        if (section.empty()) throw ConfigError(line, s, "key outside of any section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (value.empty()) throw ConfigError(line, section + "." + key, "missing value");
        set_config_value(cfg, section, key, value, line);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_csv(const Table& t, std::ostream& out)
{
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
}

std::uint64_t geometry_seed(std::uint64_t seed, int g)
{
    return Rng::substream(seed, static_cast<std::uint64_t>(g)).next_u64();
}

std::vector<double> se_samples(const SystemConfig& sys, int geometries, long trials, CombinerKind combiner,
                               SeMethod method, PhaseMode phases, std::uint64_t seed, unsigned threads)
{
    require(geometries >= 1, "se_samples: need at least one geometry");
    require(!(method == SeMethod::closed_form && combiner == CombinerKind::lmmse),
            "se_samples: the closed form exists for MR only");
    std::vector<double> out;
    for (int g = 0; g < geometries; ++g) {
        const std::uint64_t gs = geometry_seed(seed, g);
        const Scenario sc = build_scenario(sys, gs);
        const RMat theta = phases_for(sc, phases, gs);
        RVec se;
        if (method == SeMethod::closed_form) {
            se = closed_form_se(sc, theta).se;
        } else {
            const LsfdStatistics st =
                lsfd_statistics(sc, theta, combiner, trials, Rng::substream(gs, 2).next_u64(), threads);
            se = monte_carlo_se(st, sc);
        }
        for (Eigen::Index u = 0; u < se.size(); ++u) out.push_back(se(u));
    }
    return out;
}

double average_ee(const SystemConfig& sys, const PowerModel& pm, int geometries, int capacity_draws,
                  PhaseMode phases, std::uint64_t seed)
{
    require(geometries >= 1, "average_ee: need at least one geometry");
    double acc = 0.0;
    for (int g = 0; g < geometries; ++g) {
        const std::uint64_t gs = geometry_seed(seed, g);
        const Scenario sc = build_scenario(sys, gs);
        const RMat theta = phases_for(sc, phases, gs);
        const EeObjective obj(sc, pm, capacity_draws, Rng::substream(gs, 3).next_u64());
        acc += obj.evaluate(theta).ee;
    }
    return acc / geometries;
}

OptimizerComparison compare_optimizers(const SystemConfig& sys, const PowerModel& pm, const SwarmConfig& swarm,
                                       int capacity_draws, double eta_min, std::uint64_t seed)
{
    EeObjective obj(build_scenario(sys, seed), pm, capacity_draws, Rng::substream(seed, 3).next_u64(), eta_min);
    obj.calibrate_penalty(Rng::substream(seed, 4).next_u64());
    const Objective f = [&obj](const RVec& x) { return obj(x); };
    OptimizerComparison r;
    r.csa_run = run_csa_pso(f, obj.dim(), swarm, Rng::substream(seed, 5).next_u64());
    r.pso_run = run_pso(f, obj.dim(), swarm, Rng::substream(seed, 6).next_u64());
    r.csa_pso = r.csa_run.best_fitness;
    r.pso = r.pso_run.best_fitness;
    r.random = random_phase_fitness(f, obj.dim(), Rng::substream(seed, 7).next_u64());
    return r;
}

Table run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    Table t;
    t.header = kHeader;
    RowWriter w{t, cfg};
    const std::string& k = cfg.kind;
    if (k == "se-cdf") run_se_cdf(cfg, w);
    else if (k == "se-vs-m") run_se_sweep(cfg, w, 'm');
    else if (k == "se-vs-u") run_se_sweep(cfg, w, 'u');
    else if (k == "se-vs-j") run_se_sweep(cfg, w, 'j');
    else if (k == "ee-vs-m") run_ee_sweep(cfg, w, 'm');
    else if (k == "ee-vs-u") run_ee_sweep(cfg, w, 'u');
    else if (k == "ee-vs-rho") run_ee_sweep(cfg, w, 'r');
    else if (k == "optimize") run_optimize(cfg, w);
    else if (k == "oracle-suite") run_oracle_suite(cfg, w);
    else if (k == "timing") run_timing(cfg, w);
    else throw ConfigError(0, "experiment.kind", "unknown experiment kind: " + k);
    return t;
}

} // namespace rpmcf
