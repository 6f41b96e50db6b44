#include "swiptpep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "swiptpep/channel.hpp"

namespace swiptpep::harness {

namespace {

constexpr std::uint64_t kChunkSize = 16384;

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

double analytic_bound(const phy::SystemConfig& config, double snr_db,
                      const phy::CodewordPair& pair) {
    if (config.spatial == mca::SpatialModel::ModelII) {
        return analysis::pep_model2(config, snr_db, pair);
    }
    return analysis::pep_bound(config, snr_db, pair);
}

// Evaluates the analytical bound for a batch of (config, snr) jobs in
// parallel; results come back indexed by job, so row order never depends on
// scheduling.
std::vector<double> analytic_batch(const std::vector<std::pair<const phy::SystemConfig*, double>>& jobs,
                                   const phy::CodewordPair& pair, int workers) {
    std::vector<double> values(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                values[i] = analytic_bound(*jobs[i].first, jobs[i].second, pair);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)), jobs.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {  // first failure in row order
        if (e) std::rethrow_exception(e);
    }
    return values;
}

ResultRow base_row(const phy::SystemConfig& config, double snr_db, std::uint64_t seed) {
    ResultRow row;
    row.snr_db = snr_db;
    row.scheme = config.scheme.relaying == phy::Relaying::Blind ? "blind" : "csi";
    row.eh_mode = config.scheme.eh_mode == phy::EhMode::Ieh ? "ieh" : "aeh";
    row.noise_env = config.environment.name();
    row.spatial_model = mca::spatial_model_name(config.spatial);
    row.d_sr1 = config.topology.d_sr1;
    row.d_sr2 = config.topology.d_sr2;
    row.theta1 = config.relay1.theta;
    row.theta2 = config.relay2.theta;
    row.seed = seed;
    return row;
}

void fill_mc(ResultRow& row, const McPoint& point) {
    row.pep_mc = point.pep;
    row.ci_low = point.ci_low;
    row.ci_high = point.ci_high;
    row.trials = point.trials;
}

std::string format_probability(double p) {
    if (!std::isfinite(p)) return std::string();
    char buf[40];
    std::snprintf(buf, sizeof buf, std::abs(p) < 1e-4 ? "%.6e" : "%.6f", p);
    return buf;
}

std::string format_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Rows produced by one sweep/experiment share a deterministic stream counter
// so Monte Carlo results are independent of how rows are grouped.
McPoint mc_for_row(const ExperimentSpec& spec, const phy::SystemConfig& config, double snr_db,
                   std::uint64_t stream) {
    return run_monte_carlo_point(config, snr_db, spec.pair, spec.trials, spec.seed, stream,
                                 spec.workers, spec.noise_model);
}

}  // namespace

SweepKind sweep_kind_from_name(std::string_view name) {
    if (name == "scenario" || name == "relay-scenario") return SweepKind::RelayScenario;
    if (name == "theta-equal") return SweepKind::ThetaEqual;
    if (name == "theta-complement") return SweepKind::ThetaComplement;
    if (name == "model-compare") return SweepKind::ModelCompare;
    throw std::invalid_argument(
        "sweep kind: expected scenario, theta-equal, theta-complement or model-compare");
}

std::array<std::pair<double, double>, 6> relay_scenarios() {
    return {{{0.8, 0.8}, {0.5, 0.8}, {0.2, 0.8}, {0.5, 0.5}, {0.5, 0.2}, {0.2, 0.2}}};
}

void ExperimentSpec::validate() const {
    config.validate();
    pair.validate();
    if (snr_grid_db.empty()) throw std::invalid_argument("ExperimentSpec: empty SNR grid");
    for (std::size_t i = 1; i < snr_grid_db.size(); ++i) {
        if (!(snr_grid_db[i] > snr_grid_db[i - 1])) {
            throw std::invalid_argument("ExperimentSpec: SNR grid must be strictly increasing");
        }
    }
    if (trials > 0 && trials < 1000) {
        throw std::invalid_argument("ExperimentSpec: Monte Carlo runs need at least 1e3 trials");
    }
}

void wilson_interval(std::uint64_t errors, std::uint64_t trials, double& low, double& high) {
    const double z = 1.959963984540054;  // 95% two-sided
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    low = std::max(0.0, center - half);
    high = std::min(1.0, center + half);
}

McPoint run_monte_carlo_point(const phy::SystemConfig& config, double snr_db,
                              const phy::CodewordPair& pair, std::uint64_t trials,
                              std::uint64_t seed, std::uint64_t stream, int workers,
                              phy::NoiseModel noise_model) {
    config.validate();
    pair.validate();
    if (trials == 0) throw std::invalid_argument("run_monte_carlo_point: trials must be >= 1");

    const double n0 = config.n0_for_snr_db(snr_db);
    const mca::McaParams params = config.noise_params(n0);
    const mca::StateSampler sampler(params);
    const std::vector<double>& alpha = sampler.probabilities();
    const std::vector<double> beta = mca::variance_factors(params);

    // Fading-independent effective gains, one set per noise state, reused by
    // the per-draw conditional PEP averages.
    std::vector<phy::EffectiveGains> gains;
    gains.reserve(beta.size());
    for (const double b : beta) {
        gains.push_back(phy::compute_effective_gains(config, n0, b));
    }

    struct ChunkResult {
        std::uint64_t errors = 0;
        double semi_exact = 0.0;
        double semi_chernoff = 0.0;
        double semi_exact_sq = 0.0;
        double semi_chernoff_sq = 0.0;
    };

    const std::uint64_t n_chunks = (trials + kChunkSize - 1) / kChunkSize;
    std::vector<ChunkResult> results(n_chunks);
    std::vector<std::exception_ptr> errors(n_chunks);
    std::atomic<std::uint64_t> next{0};

    const auto worker = [&]() {
        for (;;) {
            const std::uint64_t idx = next.fetch_add(1);
            if (idx >= n_chunks) return;
            try {
                const std::uint64_t count = std::min(kChunkSize, trials - idx * kChunkSize);
                Rng rng = Rng::for_chunk(seed, stream, idx);
                ChunkResult local;
                for (std::uint64_t i = 0; i < count; ++i) {
                    const channel::FadingRealization fading = channel::sample_fading(rng);
                    const mca::FrameNoiseStates states = sampler.sample_frame(config.spatial, rng);
                    const phy::Frame frame = phy::synthesize_frame(
                        config, n0, fading, states, pair.s1, pair.s2, rng, noise_model);
                    if (phy::pairwise_error(frame, pair)) {
                        ++local.errors;
                    }
                    double exact = 0.0;
                    double chernoff = 0.0;
                    for (std::size_t m = 0; m < beta.size(); ++m) {
                        const double d2 = phy::distance_sq(config.scheme, gains[m], fading, pair);
                        exact += alpha[m] * specfun::q_func(std::sqrt(d2 / (2.0 * beta[m] * n0)));
                        chernoff += alpha[m] * std::exp(-d2 / (4.0 * beta[m] * n0));
                    }
                    local.semi_exact += exact;
                    local.semi_chernoff += chernoff;
                    local.semi_exact_sq += exact * exact;
                    local.semi_chernoff_sq += chernoff * chernoff;
                }
                results[idx] = local;
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };

    const int n_workers = std::min<std::uint64_t>(resolve_workers(workers), n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers) - 1);
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    McPoint point;
    point.trials = trials;
    double exact_sq = 0.0;
    double chernoff_sq = 0.0;
    for (const ChunkResult& r : results) {  // fixed reduction order
        point.errors += r.errors;
        point.semi_analytic_exact += r.semi_exact;
        point.semi_analytic_chernoff += r.semi_chernoff;
        exact_sq += r.semi_exact_sq;
        chernoff_sq += r.semi_chernoff_sq;
    }
    const double n = static_cast<double>(trials);
    point.pep = static_cast<double>(point.errors) / n;
    point.semi_analytic_exact /= n;
    point.semi_analytic_chernoff /= n;
    point.semi_exact_sigma = std::sqrt(std::max(
        0.0, (exact_sq / n - point.semi_analytic_exact * point.semi_analytic_exact) / n));
    point.semi_chernoff_sigma = std::sqrt(std::max(
        0.0,
        (chernoff_sq / n - point.semi_analytic_chernoff * point.semi_analytic_chernoff) / n));
    wilson_interval(point.errors, trials, point.ci_low, point.ci_high);
    return point;
}

std::vector<ResultRow> run_monte_carlo(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.trials == 0) {
        throw std::invalid_argument("run_monte_carlo: trials must be positive");
    }
    std::vector<std::pair<const phy::SystemConfig*, double>> jobs;
    for (const double snr_db : spec.snr_grid_db) jobs.emplace_back(&spec.config, snr_db);
    const std::vector<double> bounds = analytic_batch(jobs, spec.pair, spec.workers);

    std::vector<ResultRow> rows;
    rows.reserve(spec.snr_grid_db.size());
    std::uint64_t stream = 0;
    for (std::size_t i = 0; i < spec.snr_grid_db.size(); ++i) {
        ResultRow row = base_row(spec.config, spec.snr_grid_db[i], spec.seed);
        row.pep_analytical = bounds[i];
        row.pep_chernoff_flag = bounds[i] > 1.0;
        fill_mc(row, mc_for_row(spec, spec.config, spec.snr_grid_db[i], stream));
        rows.push_back(std::move(row));
        ++stream;
    }
    return rows;
}

std::vector<ResultRow> run_analytical(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<std::pair<const phy::SystemConfig*, double>> jobs;
    for (const double snr_db : spec.snr_grid_db) jobs.emplace_back(&spec.config, snr_db);
    const std::vector<double> bounds = analytic_batch(jobs, spec.pair, spec.workers);

    std::vector<ResultRow> rows;
    rows.reserve(spec.snr_grid_db.size());
    for (std::size_t i = 0; i < spec.snr_grid_db.size(); ++i) {
        ResultRow row = base_row(spec.config, spec.snr_grid_db[i], spec.seed);
        row.pep_analytical = bounds[i];
        row.pep_chernoff_flag = bounds[i] > 1.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.sweep == SweepKind::None) {
        throw std::invalid_argument("run_sweep: no sweep kind selected");
    }

    std::vector<phy::SystemConfig> configs;
    if (spec.sweep == SweepKind::RelayScenario) {
        for (const auto& [d1, d2] : relay_scenarios()) {
            phy::SystemConfig c = spec.config;
            c.topology.d_sr1 = d1;
            c.topology.d_sr2 = d2;
            configs.push_back(c);
        }
    } else if (spec.sweep == SweepKind::ThetaEqual || spec.sweep == SweepKind::ThetaComplement) {
        for (int k = 1; k <= 49; ++k) {
            const double theta1 = 0.02 * k;
            phy::SystemConfig c = spec.config;
            c.relay1.theta = theta1;
            c.relay2.theta = spec.sweep == SweepKind::ThetaEqual ? theta1 : 1.0 - theta1;
            configs.push_back(c);
        }
    } else {  // ModelCompare: Model I and Model II side by side
        phy::SystemConfig c1 = spec.config;
        c1.spatial = mca::SpatialModel::ModelI;
        phy::SystemConfig c2 = spec.config;
        c2.spatial = mca::SpatialModel::ModelII;
        configs.push_back(c1);
        configs.push_back(c2);
    }

    std::vector<std::pair<const phy::SystemConfig*, double>> jobs;
    for (const double snr_db : spec.snr_grid_db) {
        for (const phy::SystemConfig& config : configs) {
            jobs.emplace_back(&config, snr_db);
        }
    }
    const std::vector<double> bounds = analytic_batch(jobs, spec.pair, spec.workers);

    std::vector<ResultRow> rows;
    rows.reserve(jobs.size());
    std::uint64_t stream = 0;
    for (const auto& [config, snr_db] : jobs) {
        ResultRow row = base_row(*config, snr_db, spec.seed);
        row.pep_analytical = bounds[stream];
        row.pep_chernoff_flag = bounds[stream] > 1.0;
        if (spec.trials > 0) {
            fill_mc(row, mc_for_row(spec, *config, snr_db, stream));
        }
        rows.push_back(std::move(row));
        ++stream;
    }
    return rows;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kCsvHeader << '\n';
    for (const ResultRow& row : rows) {
        os << format_param(row.snr_db) << ',' << row.scheme << ',' << row.eh_mode << ','
           << row.noise_env << ',' << row.spatial_model << ',' << format_param(row.d_sr1) << ','
           << format_param(row.d_sr2) << ',' << format_param(row.theta1) << ','
           << format_param(row.theta2) << ',' << format_probability(row.pep_analytical) << ','
           << (row.pep_chernoff_flag ? 1 : 0) << ','
           << (row.pep_mc ? format_probability(*row.pep_mc) : std::string()) << ','
           << (row.ci_low ? format_probability(*row.ci_low) : std::string()) << ','
           << (row.ci_high ? format_probability(*row.ci_high) : std::string()) << ','
           << row.trials << ',' << row.seed << '\n';
    }
}

void write_csv_file(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ostringstream buffer;
    write_csv(buffer, rows);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    out << buffer.str();
    if (!out) {
        throw std::runtime_error("failed while writing '" + path + "'");
    }
}

}  // namespace swiptpep::harness
