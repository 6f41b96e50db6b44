#include "swiptpep/mca_noise.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace swiptpep::mca {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795029;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

McaParams::McaParams(double a, double delta, int m, double n0)
    : impulsive_index_a(a), gaussian_factor_delta(delta), truncation_m(m), mean_noise_power_n0(n0) {
    if (!(a > 0.0)) throw std::invalid_argument("McaParams: impulsive index A must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("McaParams: Gaussian factor delta must be > 0");
    if (m < 1) throw std::invalid_argument("McaParams: truncation M must be >= 1");
    if (!(n0 > 0.0)) throw std::invalid_argument("McaParams: mean noise power N0 must be > 0");
}

NoiseEnvironment NoiseEnvironment::preset(EnvironmentTag tag) {
    switch (tag) {
        case EnvironmentTag::HI: return {tag, 0.001, 0.1};
        case EnvironmentTag::MI: return {tag, 0.1, 0.1};
        case EnvironmentTag::NG: return {tag, 1.0, 0.1};
        case EnvironmentTag::AwgnLimit: return {tag, 1.0, 1e9};
    }
    throw std::invalid_argument("NoiseEnvironment: unknown tag");
}

NoiseEnvironment NoiseEnvironment::from_name(std::string_view name) {
    const std::string key = lower(name);
    if (key == "hi") return preset(EnvironmentTag::HI);
    if (key == "mi") return preset(EnvironmentTag::MI);
    if (key == "ng") return preset(EnvironmentTag::NG);
    if (key == "awgn") return preset(EnvironmentTag::AwgnLimit);
    throw std::invalid_argument("NoiseEnvironment: unknown environment '" + std::string(name) +
                                "' (expected HI, MI, NG or AWGN)");
}

std::string NoiseEnvironment::name() const {
    switch (tag) {
        case EnvironmentTag::HI: return "HI";
        case EnvironmentTag::MI: return "MI";
        case EnvironmentTag::NG: return "NG";
        case EnvironmentTag::AwgnLimit: return "AWGN";
    }
    return "?";
}

McaParams NoiseEnvironment::params(double n0, int truncation_m) const {
    return McaParams(impulsive_index_a, gaussian_factor_delta, truncation_m, n0);
}

std::string spatial_model_name(SpatialModel model) {
    return model == SpatialModel::ModelI ? "model1" : "model2";
}

SpatialModel spatial_model_from_name(std::string_view name) {
    const std::string key = lower(name);
    if (key == "model1" || key == "modeli" || key == "1") return SpatialModel::ModelI;
    if (key == "model2" || key == "modelii" || key == "2") return SpatialModel::ModelII;
    throw std::invalid_argument("spatial model: expected model1 or model2, got '" +
                                std::string(name) + "'");
}

std::vector<double> state_probabilities(const McaParams& params) {
    const double a = params.impulsive_index_a;
    std::vector<double> alpha(static_cast<std::size_t>(params.truncation_m));
    double p = std::exp(-a);  // alpha_0
    double sum = 0.0;
    for (int m = 0; m < params.truncation_m; ++m) {
        if (m > 0) p *= a / m;
        alpha[static_cast<std::size_t>(m)] = p;
        sum += p;
    }
    for (double& v : alpha) v /= sum;
    return alpha;
}

double variance_factor(double a, double delta, int m) {
    return (m / a + delta) / (1.0 + delta);
}

double variance_factor(const McaParams& params, int m) {
    if (m < 0 || m >= params.truncation_m) {
        throw std::domain_error("variance_factor: state index out of range");
    }
    return variance_factor(params.impulsive_index_a, params.gaussian_factor_delta, m);
}

std::vector<double> variance_factors(const McaParams& params) {
    std::vector<double> beta(static_cast<std::size_t>(params.truncation_m));
    for (int m = 0; m < params.truncation_m; ++m) {
        beta[static_cast<std::size_t>(m)] = variance_factor(params, m);
    }
    return beta;
}

StateSampler::StateSampler(const McaParams& params) : alpha_(state_probabilities(params)) {
    cumulative_.resize(alpha_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
        acc += alpha_[i];
        cumulative_[i] = acc;
    }
    cumulative_.back() = 1.0;
}

int StateSampler::sample(Rng& rng) const {
    const double u = rng.uniform01();
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
        if (u < cumulative_[i]) {
            return static_cast<int>(i);
        }
    }
    return static_cast<int>(cumulative_.size() - 1);
}

FrameNoiseStates StateSampler::sample_frame(SpatialModel model, Rng& rng) const {
    if (model == SpatialModel::ModelI) {
        const int m = sample(rng);
        return {m, m, m};
    }
    const int m_d = sample(rng);
    const int m_r1 = sample(rng);
    const int m_r2 = sample(rng);
    return {m_d, m_r1, m_r2};
}

FrameNoiseStates sample_frame_states(const McaParams& params, SpatialModel model, Rng& rng) {
    return StateSampler(params).sample_frame(model, rng);
}

std::complex<double> sample_noise(int state, double node_mean_power, const McaParams& params,
                                  Rng& rng) {
    const double beta = variance_factor(params, state);
    return rng.complex_gaussian(beta * node_mean_power);
}

double pdf(const McaParams& params, std::complex<double> n) {
    const std::vector<double> alpha = state_probabilities(params);
    const double mag_sq = std::norm(n);
    double density = 0.0;
    for (int m = 0; m < params.truncation_m; ++m) {
        const double sigma_sq = variance_factor(params, m) * params.mean_noise_power_n0;
        density += alpha[static_cast<std::size_t>(m)] / (kPi * sigma_sq) *
                   std::exp(-mag_sq / sigma_sq);
    }
    return density;
}

double mean_variance_factor(double beta_d, double beta_r1, double beta_r2) {
    return (2.0 * (beta_r1 + beta_r2) + 4.0 * beta_d) / 8.0;
}

}  // namespace swiptpep::mca
