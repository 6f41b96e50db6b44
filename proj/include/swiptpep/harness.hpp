#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "swiptpep/analysis.hpp"
#include "swiptpep/phy.hpp"

namespace swiptpep::harness {

enum class SweepKind { None, RelayScenario, ThetaEqual, ThetaComplement, ModelCompare };

SweepKind sweep_kind_from_name(std::string_view name);

// The six relay-placement scenarios, as (d_sr1, d_sr2) pairs.
std::array<std::pair<double, double>, 6> relay_scenarios();

struct ExperimentSpec {
    phy::SystemConfig config;
    std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30, 35, 40, 45};
    std::uint64_t trials = 0;  // 0: analytical only
    std::uint64_t seed = 1;
    std::string out_path;
    SweepKind sweep = SweepKind::None;
    int workers = 0;  // 0: hardware concurrency
    phy::CodewordPair pair = phy::CodewordPair::worst_case();
    // The conditional model measures the quantity the analytical bounds
    // describe; the composite model exercises the full physical chain.
    phy::NoiseModel noise_model = phy::NoiseModel::Conditional;

    void validate() const;
};

// One CSV row; the column set and order are fixed.
struct ResultRow {
    double snr_db = 0.0;
    std::string scheme;
    std::string eh_mode;
    std::string noise_env;
    std::string spatial_model;
    double d_sr1 = 0.0;
    double d_sr2 = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double pep_analytical = 0.0;
    bool pep_chernoff_flag = false;  // set when the unclamped bound exceeds 1
    std::optional<double> pep_mc;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader =
    "snr_db,scheme,eh_mode,noise_env,spatial_model,d_sr1,d_sr2,theta1,theta2,"
    "pep_analytical,pep_chernoff_flag,pep_mc,ci_low,ci_high,trials,seed";

// Measured pairwise error rate for one configuration/SNR point, together
// with the semi-analytic averages accumulated over the same fading draws.
struct McPoint {
    std::uint64_t errors = 0;
    std::uint64_t trials = 0;
    double pep = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double semi_analytic_exact = 0.0;     // mean of the conditional exact PEP
    double semi_analytic_chernoff = 0.0;  // mean of the conditional Chernoff bound
    double semi_exact_sigma = 0.0;        // standard errors of those means
    double semi_chernoff_sigma = 0.0;
};

// Wilson 95% score interval for a binomial proportion.
void wilson_interval(std::uint64_t errors, std::uint64_t trials, double& low, double& high);

// Seeded, chunk-parallel pairwise-error measurement. Trials are split into
// fixed chunks; chunk generators derive from (seed, stream, chunk) and the
// reduction runs in chunk order, so results do not depend on the worker
// count or scheduling.
McPoint run_monte_carlo_point(const phy::SystemConfig& config, double snr_db,
                              const phy::CodewordPair& pair, std::uint64_t trials,
                              std::uint64_t seed, std::uint64_t stream, int workers,
                              phy::NoiseModel noise_model = phy::NoiseModel::Conditional);

std::vector<ResultRow> run_monte_carlo(const ExperimentSpec& spec);
std::vector<ResultRow> run_analytical(const ExperimentSpec& spec);
std::vector<ResultRow> run_sweep(const ExperimentSpec& spec);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
// Writes the complete file at once; nothing is created if row generation or
// the open fails.
void write_csv_file(const std::string& path, const std::vector<ResultRow>& rows);

// Command-line entry point (subcommands: pep, sweep, diversity, noise-check).
int cli_main(int argc, const char* const* argv);

}  // namespace swiptpep::harness
