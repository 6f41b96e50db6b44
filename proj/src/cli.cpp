#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swiptpep/harness.hpp"

namespace swiptpep::harness {

namespace {

// Flat key=value configuration files. The file is applied before the command
// line, and any flag given on the command line wins over the file value.
const std::map<std::string, std::vector<std::string>>& config_key_flags() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"env", {"--env"}},           {"scheme", {"--scheme"}},
        {"eh", {"--eh"}},             {"spatial", {"--spatial"}},
        {"d_sr1", {"--d_sr1"}},       {"d_sr2", {"--d_sr2"}},
        {"theta1", {"--theta1"}},     {"theta2", {"--theta2"}},
        {"eta1", {"--eta1"}},         {"eta2", {"--eta2"}},
        {"lambda", {"--lambda"}},     {"Ps", {"--Ps"}},
        {"M", {"--M"}},               {"snr_db", {"--snr_db", "--snr"}},
        {"trials", {"--trials"}},     {"seed", {"--seed"}},
        {"out", {"--out"}},           {"workers", {"--workers"}},
        {"kind", {"--kind"}},         {"noise_model", {"--noise-model"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return std::string();
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::pair<std::string, std::string>> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config file '" + path + "'");
    }
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config " + path + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (config_key_flags().find(key) == config_key_flags().end()) {
            throw std::runtime_error("config " + path + ": unknown key '" + key + "'");
        }
        entries.emplace_back(key, value);
    }
    return entries;
}

// Pulls --config out of the raw arguments and splices the file's settings in
// as flags, skipping every key the user already passed explicitly.
std::vector<std::string> apply_config_file(const std::vector<std::string>& raw) {
    std::vector<std::string> args;
    std::string config_path;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const std::string& a = raw[i];
        if (a == "--config") {
            if (i + 1 >= raw.size()) throw std::runtime_error("--config needs a file path");
            config_path = raw[++i];
        } else if (a.rfind("--config=", 0) == 0) {
            config_path = a.substr(9);
        } else {
            args.push_back(a);
        }
    }
    if (config_path.empty()) return args;

    const auto given = [&args](const std::vector<std::string>& flags) {
        for (const std::string& flag : flags) {
            for (const std::string& a : args) {
                if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
            }
        }
        return false;
    };
    for (const auto& [key, value] : load_config_file(config_path)) {
        const auto& flags = config_key_flags().at(key);
        if (!given(flags)) {
            args.push_back(flags.front());
            args.push_back(value);
        }
    }
    return args;
}

struct CliOptions {
    std::string env = "NG";
    std::string scheme = "blind";
    std::string eh = "aeh";
    std::string spatial = "model1";
    double d_sr1 = 0.5;
    double d_sr2 = 0.5;
    double theta1 = 0.5;
    double theta2 = 0.5;
    double eta1 = 0.3;
    double eta2 = 0.3;
    double lambda = 2.7;
    double p_s = 1.0;
    int m = 5;
    std::string snr_db;
    double trials = -1.0;  // negative: use the subcommand default
    std::uint64_t seed = 1;
    std::string out;
    int workers = 0;
    std::string noise_model = "conditional";
    std::string kind = "scenario";
    bool quiet = false;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    // --config is consumed before CLI11 parsing; registered here for --help
    static std::string config_help_sink;
    cmd->add_option("--config", config_help_sink, "flat key=value configuration file");
    cmd->add_option("--env", opt.env, "noise environment: HI, MI, NG or AWGN");
    cmd->add_option("--scheme", opt.scheme,
                    "relaying scheme: blind or csi; combined names like blind-aeh also set --eh");
    cmd->add_option("--eh", opt.eh, "energy harvesting mode: ieh or aeh");
    cmd->add_option("--spatial", opt.spatial, "impulse-state coupling: model1 or model2");
    cmd->add_option("--d_sr1", opt.d_sr1, "normalized source-relay-1 distance in (0,1)");
    cmd->add_option("--d_sr2", opt.d_sr2, "normalized source-relay-2 distance in (0,1)");
    cmd->add_option("--theta1", opt.theta1, "power-splitting ratio at relay 1");
    cmd->add_option("--theta2", opt.theta2, "power-splitting ratio at relay 2");
    cmd->add_option("--eta1", opt.eta1, "energy-conversion efficiency at relay 1");
    cmd->add_option("--eta2", opt.eta2, "energy-conversion efficiency at relay 2");
    cmd->add_option("--lambda", opt.lambda, "path-loss exponent (> 2)");
    cmd->add_option("--Ps", opt.p_s, "source transmit power in watts");
    cmd->add_option("--M", opt.m, "noise-state truncation");
    cmd->add_option("--snr_db,--snr", opt.snr_db, "SNR grid in dB: start:stop:step or a comma list");
    cmd->add_option("--trials", opt.trials, "Monte Carlo trials per point (0 = analytical only)");
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--out", opt.out, "output CSV path");
    cmd->add_option("--workers", opt.workers, "worker threads (0 = hardware concurrency)");
    cmd->add_option("--noise-model", opt.noise_model,
                    "Monte Carlo noise model: conditional (matches the bounds) or composite "
                    "(full physical chain)");
    cmd->add_flag("--quiet", opt.quiet, "suppress the per-point summary");
}

std::vector<double> parse_snr_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        double start = 0.0, stop = 0.0, step = 0.0;
        char c1 = 0, c2 = 0;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0 ||
            stop < start) {
            throw std::invalid_argument("bad SNR range '" + text + "' (expected start:stop:step)");
        }
        for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
        return grid;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        grid.push_back(std::stod(item));
    }
    if (grid.empty()) throw std::invalid_argument("empty SNR grid '" + text + "'");
    return grid;
}

phy::SystemConfig build_config(const CliOptions& opt, bool eh_given) {
    phy::SystemConfig config;
    config.p_s = opt.p_s;
    config.relay1 = phy::RelayParams{opt.theta1, opt.eta1};
    config.relay2 = phy::RelayParams{opt.theta2, opt.eta2};
    config.topology = channel::Topology{opt.d_sr1, opt.d_sr2, opt.lambda};
    config.environment = mca::NoiseEnvironment::from_name(opt.env);
    config.spatial = mca::spatial_model_from_name(opt.spatial);
    config.truncation_m = opt.m;

    std::string scheme = opt.scheme;
    std::string eh = opt.eh;
    if (const auto dash = scheme.find('-'); dash != std::string::npos) {
        if (!eh_given) eh = scheme.substr(dash + 1);
        scheme = scheme.substr(0, dash);
    }
    config.scheme.relaying = phy::relaying_from_name(scheme);
    config.scheme.eh_mode = phy::eh_mode_from_name(eh);
    config.validate();
    return config;
}

ExperimentSpec build_spec(const CliOptions& opt, bool eh_given, const std::string& default_grid,
                          double default_trials) {
    ExperimentSpec spec;
    spec.config = build_config(opt, eh_given);
    spec.snr_grid_db = parse_snr_grid(opt.snr_db.empty() ? default_grid : opt.snr_db);
    const double trials = opt.trials < 0.0 ? default_trials : opt.trials;
    if (trials < 0.0 || trials > 1e12 || std::floor(trials) != trials) {
        throw std::invalid_argument("trials must be a nonnegative integer");
    }
    spec.trials = static_cast<std::uint64_t>(trials);
    spec.seed = opt.seed;
    spec.out_path = opt.out;
    spec.workers = opt.workers;
    if (opt.noise_model == "conditional") {
        spec.noise_model = phy::NoiseModel::Conditional;
    } else if (opt.noise_model == "composite") {
        spec.noise_model = phy::NoiseModel::Composite;
    } else {
        throw std::invalid_argument("noise model: expected conditional or composite");
    }
    return spec;
}

int run_pep(const CliOptions& opt, bool eh_given) {
    ExperimentSpec spec = build_spec(opt, eh_given, "0:45:5", 1e5);
    const std::vector<ResultRow> rows =
        spec.trials > 0 ? run_monte_carlo(spec) : run_analytical(spec);
    if (!spec.out_path.empty()) write_csv_file(spec.out_path, rows);
    if (opt.quiet) return 0;
    std::printf("pep: %s %s under %s/%s, %zu SNR points, %llu trials/point, seed %llu\n",
                spec.config.scheme.name().c_str(), spec.trials > 0 ? "analytical+mc" : "analytical",
                spec.config.environment.name().c_str(),
                mca::spatial_model_name(spec.config.spatial).c_str(), rows.size(),
                static_cast<unsigned long long>(spec.trials),
                static_cast<unsigned long long>(spec.seed));
    for (const ResultRow& row : rows) {
        std::printf("  %5.1f dB  bound %.6e%s", row.snr_db, row.pep_analytical,
                    row.pep_chernoff_flag ? " (saturated)" : "");
        if (row.pep_mc) std::printf("  mc %.6e [%.6e, %.6e]", *row.pep_mc, *row.ci_low, *row.ci_high);
        std::printf("\n");
    }
    if (!spec.out_path.empty()) std::printf("wrote %zu rows to %s\n", rows.size(), spec.out_path.c_str());
    return 0;
}

int run_sweep_cmd(const CliOptions& opt, bool eh_given) {
    ExperimentSpec spec = build_spec(opt, eh_given, "15,40", 0.0);
    spec.sweep = sweep_kind_from_name(opt.kind);
    const std::vector<ResultRow> rows = run_sweep(spec);
    if (!spec.out_path.empty()) write_csv_file(spec.out_path, rows);
    if (opt.quiet) return 0;
    std::printf("sweep %s: %zu rows (%s, %s)\n", opt.kind.c_str(), rows.size(),
                spec.config.scheme.name().c_str(), spec.config.environment.name().c_str());
    if (!spec.out_path.empty()) std::printf("wrote %zu rows to %s\n", rows.size(), spec.out_path.c_str());
    return 0;
}

int run_diversity(const CliOptions& opt, bool eh_given) {
    const bool all_envs = opt.env == "all";
    const bool all_schemes = opt.scheme == "all";
    const std::vector<std::string> envs =
        all_envs ? std::vector<std::string>{"HI", "MI", "NG", "AWGN"}
                 : std::vector<std::string>{opt.env};
    const std::vector<std::string> schemes =
        all_schemes ? std::vector<std::string>{"blind-ieh", "blind-aeh", "csi-ieh", "csi-aeh"}
                    : std::vector<std::string>{opt.scheme};

    std::vector<ResultRow> all_rows;
    for (const std::string& scheme : schemes) {
        for (const std::string& env : envs) {
            CliOptions local = opt;
            local.env = env;
            local.scheme = scheme;
            ExperimentSpec spec = build_spec(local, eh_given && !all_schemes, "50:80:5", 0.0);
            const std::vector<ResultRow> rows = run_analytical(spec);
            std::vector<std::pair<double, double>> curve;
            curve.reserve(rows.size());
            for (const ResultRow& row : rows) curve.emplace_back(row.snr_db, row.pep_analytical);
            const double order = analysis::diversity_order(curve);
            std::printf("diversity %s %s = %.3f\n", spec.config.scheme.name().c_str(),
                        spec.config.environment.name().c_str(), order);
            all_rows.insert(all_rows.end(), rows.begin(), rows.end());
        }
    }
    if (!opt.out.empty()) {
        write_csv_file(opt.out, all_rows);
        std::printf("wrote %zu rows to %s\n", all_rows.size(), opt.out.c_str());
    }
    return 0;
}

// Statistical self-tests of the noise module; prints one line per check.
int run_noise_check(const CliOptions& opt) {
    const double trials_d = opt.trials < 0.0 ? 1e7 : opt.trials;
    const std::uint64_t trials = static_cast<std::uint64_t>(trials_d);
    const mca::NoiseEnvironment env = mca::NoiseEnvironment::from_name(opt.env);
    const mca::McaParams params = env.params(1.0, opt.m);
    const std::vector<double> alpha = mca::state_probabilities(params);
    const std::vector<double> beta = mca::variance_factors(params);
    bool ok = true;

    const auto report = [&ok](bool pass, const std::string& what) {
        std::printf("%s  %s\n", pass ? "PASS" : "FAIL", what.c_str());
        ok = ok && pass;
    };

    double alpha_sum = 0.0;
    for (const double a : alpha) alpha_sum += a;
    report(std::abs(alpha_sum - 1.0) <= 1e-15, "renormalized state probabilities sum to 1");

    bool increasing = true;
    for (std::size_t m = 1; m < beta.size(); ++m) increasing = increasing && beta[m] > beta[m - 1];
    report(increasing, "variance factors strictly increasing in the state index");

    // Mixture variance against the law of total variance, chunk-parallel so
    // the outcome is reproducible for a given seed.
    double target = 0.0;
    for (std::size_t m = 0; m < alpha.size(); ++m) target += alpha[m] * beta[m];
    const mca::StateSampler sampler(params);
    double sum_sq = 0.0;
    std::uint64_t done = 0;
    std::uint64_t chunk = 0;
    while (done < trials) {
        const std::uint64_t count = std::min<std::uint64_t>(1 << 20, trials - done);
        Rng rng = Rng::for_chunk(opt.seed, 0, chunk);
        double local = 0.0;
        for (std::uint64_t i = 0; i < count; ++i) {
            const int state = sampler.sample(rng);
            local += std::norm(mca::sample_noise(state, params.mean_noise_power_n0, params, rng));
        }
        sum_sq += local;
        done += count;
        ++chunk;
    }
    const double sample_var = sum_sq / static_cast<double>(trials);
    char line[160];
    std::snprintf(line, sizeof line,
                  "mixture sample variance %.6f vs sum(alpha*beta)*N0 %.6f within 1%%", sample_var,
                  target);
    report(std::abs(sample_var - target) <= 0.01 * target, line);

    const double pdf_integral = specfun::quad_semi_infinite([&params](double r) {
        return 2.0 * 3.14159265358979323846 * r * mca::pdf(params, {r, 0.0});
    });
    std::snprintf(line, sizeof line, "truncated pdf integrates to %.8f (tolerance 1e-6)",
                  pdf_integral);
    report(std::abs(pdf_integral - 1.0) <= 1e-6, line);

    Rng rng(opt.seed + 1);
    bool model1_equal = true;
    for (int i = 0; i < 100000; ++i) {
        const mca::FrameNoiseStates s = sampler.sample_frame(mca::SpatialModel::ModelI, rng);
        model1_equal = model1_equal && s.m_d == s.m_r1 && s.m_d == s.m_r2;
    }
    report(model1_equal, "Model I frame states are shared across nodes");

    std::printf("noise-check %s: %s\n", env.name().c_str(), ok ? "all checks passed" : "FAILURES");
    return ok ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Pairwise-error-probability simulator for a two-relay SWIPT system "
                 "under Middleton Class-A noise"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* pep = app.add_subcommand("pep", "analytical bound and Monte Carlo PEP curves");
    CLI::App* sweep = app.add_subcommand("sweep", "relay-placement, PS-factor and model sweeps");
    CLI::App* diversity = app.add_subcommand("diversity", "diversity order from the bound slope");
    CLI::App* noise = app.add_subcommand("noise-check", "noise-model statistical self-tests");
    add_common_options(pep, opt);
    add_common_options(sweep, opt);
    add_common_options(diversity, opt);
    add_common_options(noise, opt);
    sweep->add_option("--kind", opt.kind,
                      "scenario, theta-equal, theta-complement or model-compare");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = apply_config_file(args);
        std::reverse(args.begin(), args.end());  // CLI11 consumes back to front
        app.parse(std::move(args));
        if (pep->parsed()) return run_pep(opt, pep->count("--eh") > 0);
        if (sweep->parsed()) return run_sweep_cmd(opt, sweep->count("--eh") > 0);
        if (diversity->parsed()) return run_diversity(opt, diversity->count("--eh") > 0);
        if (noise->parsed()) return run_noise_check(opt);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace swiptpep::harness
