#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "swiptpep/rng.hpp"

namespace swiptpep::mca {

// Middleton Class-A parameterization. The mixture is truncated to the first
// truncation_m states and the state probabilities are renormalized, so the
// sampler and every analytical sum share one probability model.
struct McaParams {
    double impulsive_index_a;     // A
    double gaussian_factor_delta; // delta = background/impulsive variance ratio
    int truncation_m;             // M
    double mean_noise_power_n0;   // N0 (mean variance of the mixture)

    McaParams(double a, double delta, int m, double n0);
};

enum class EnvironmentTag { HI, MI, NG, AwgnLimit };

// Named noise presets: HI (0.001, 0.1), MI (0.1, 0.1), NG (1, 0.1) and an
// AWGN limit where delta = 1e9 collapses every state variance to N0.
struct NoiseEnvironment {
    EnvironmentTag tag = EnvironmentTag::NG;
    double impulsive_index_a = 1.0;
    double gaussian_factor_delta = 0.1;

    static NoiseEnvironment preset(EnvironmentTag tag);
    static NoiseEnvironment from_name(std::string_view name);
    std::string name() const;
    McaParams params(double n0, int truncation_m) const;
};

// Spatial coupling of the impulse states across the three receive nodes.
enum class SpatialModel { ModelI, ModelII };

std::string spatial_model_name(SpatialModel model);
SpatialModel spatial_model_from_name(std::string_view name);

// Impulse state indexes for one four-slot frame, constant over the frame.
struct FrameNoiseStates {
    int m_d;
    int m_r1;
    int m_r2;
};

// Renormalized state probabilities alpha_m = exp(-A) A^m / m!, m < M.
std::vector<double> state_probabilities(const McaParams& params);

// Conditional variance factor beta_m = (m/A + delta) / (1 + delta).
double variance_factor(const McaParams& params, int m);
double variance_factor(double a, double delta, int m);
std::vector<double> variance_factors(const McaParams& params);

// Precomputed inverse-CDF sampler over the renormalized states.
class StateSampler {
  public:
    explicit StateSampler(const McaParams& params);

    int sample(Rng& rng) const;
    // Model I draws one shared state; Model II draws destination, relay 1,
    // relay 2 independently, in that order.
    FrameNoiseStates sample_frame(SpatialModel model, Rng& rng) const;

    const std::vector<double>& probabilities() const { return alpha_; }

  private:
    std::vector<double> alpha_;
    std::vector<double> cumulative_;
};

FrameNoiseStates sample_frame_states(const McaParams& params, SpatialModel model, Rng& rng);

// One conditionally Gaussian noise sample: CN(0, beta_m * node_mean_power).
std::complex<double> sample_noise(int state, double node_mean_power, const McaParams& params,
                                  Rng& rng);

// Truncated, renormalized mixture density of a complex noise sample.
double pdf(const McaParams& params, std::complex<double> n);

// Average impulse load over one frame: two slots hit each relay and four hit
// the destination, so phi_bar = (2(beta_r1 + beta_r2) + 4 beta_d) / 8.
double mean_variance_factor(double beta_d, double beta_r1, double beta_r2);

}  // namespace swiptpep::mca
