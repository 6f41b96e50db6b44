#include "swiptpep/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace swiptpep::analysis {

using specfun::QuadratureSpec;

namespace {

double direct_factor(double delta, double p_s, double beta, double n0) {
    return 1.0 / (delta * p_s / (4.0 * beta * n0) + 1.0);
}

// Relay Chernoff factor for one branch at one noise state.
double relay_factor(const phy::SystemConfig& config, const phy::EffectiveGains& gains,
                    int relay_index, double eps, double beta, double n0, PepMethod path) {
    const double four_beta_n0 = 4.0 * beta * n0;
    if (config.scheme.relaying == phy::Relaying::Blind) {
        if (config.scheme.eh_mode == phy::EhMode::Ieh) {
            const double c = eps * gains.phi_sq[relay_index] / four_beta_n0;
            return kernel_blind_ieh_quad(c);  // no elementary closed form
        }
        const double x = four_beta_n0 / (eps * gains.phi_sq[relay_index]);
        return path == PepMethod::ChernoffClosedForm ? kernel_blind_aeh_closed(x)
                                                     : kernel_blind_aeh_quad(x);
    }
    const double b = eps * gains.zeta[relay_index] / four_beta_n0;
    const double xi = gains.xi[relay_index];
    if (config.scheme.eh_mode == phy::EhMode::Ieh) {
        if (path == PepMethod::ChernoffClosedForm && xi * xi > 4.0 * b) {
            return kernel_csi_ieh_closed(xi, b);
        }
        return kernel_csi_ieh_quad(xi, b);
    }
    const double gamma = b + xi;
    return path == PepMethod::ChernoffClosedForm ? kernel_csi_aeh_closed(gamma, xi)
                                                 : kernel_csi_aeh_quad(gamma, xi);
}

double pep_model1(const phy::SystemConfig& config, double snr_db, const phy::CodewordPair& pair,
                  PepMethod path) {
    config.validate();
    pair.validate();
    const double n0 = config.n0_for_snr_db(snr_db);
    const mca::McaParams params = config.noise_params(n0);
    const std::vector<double> alpha = mca::state_probabilities(params);

    double bound = 0.0;
    for (int m = 0; m < params.truncation_m; ++m) {
        const double beta = mca::variance_factor(params, m);
        bound += alpha[static_cast<std::size_t>(m)] * pep_state_bound(config, n0, beta, pair, path);
    }
    return bound;
}

void require_variant(const phy::SystemConfig& config, phy::Relaying relaying, phy::EhMode eh,
                     const char* who) {
    if (config.scheme.relaying != relaying || config.scheme.eh_mode != eh) {
        throw std::invalid_argument(std::string(who) + ": config carries a different variant");
    }
}

}  // namespace

double conditional_pep_exact(double d2, const mca::McaParams& params) {
    if (!(d2 >= 0.0)) throw std::domain_error("conditional_pep_exact: d^2 must be >= 0");
    const std::vector<double> alpha = mca::state_probabilities(params);
    double p = 0.0;
    for (int m = 0; m < params.truncation_m; ++m) {
        const double beta = mca::variance_factor(params, m);
        p += alpha[static_cast<std::size_t>(m)] *
             specfun::q_func(std::sqrt(d2 / (2.0 * beta * params.mean_noise_power_n0)));
    }
    return p;
}

double conditional_pep_chernoff(double d2, const mca::McaParams& params) {
    if (!(d2 >= 0.0)) throw std::domain_error("conditional_pep_chernoff: d^2 must be >= 0");
    const std::vector<double> alpha = mca::state_probabilities(params);
    double p = 0.0;
    for (int m = 0; m < params.truncation_m; ++m) {
        const double beta = mca::variance_factor(params, m);
        p += alpha[static_cast<std::size_t>(m)] *
             std::exp(-d2 / (4.0 * beta * params.mean_noise_power_n0));
    }
    return p;
}

double kernel_blind_ieh_quad(double c, const QuadratureSpec& spec) {
    if (!(c >= 0.0)) throw std::domain_error("kernel_blind_ieh_quad: c must be >= 0");
    return specfun::quad_semi_infinite(
        [c](double t) { return std::exp(-t) / (c * t * t + 1.0); }, spec);
}

double kernel_blind_aeh_closed(double x) {
    if (!(x > 0.0)) throw std::domain_error("kernel_blind_aeh_closed: x must be > 0");
    return x * specfun::gamma_upper_zero_scaled(x);
}

double kernel_blind_aeh_quad(double x, const QuadratureSpec& spec) {
    if (!(x > 0.0)) throw std::domain_error("kernel_blind_aeh_quad: x must be > 0");
    return specfun::quad_semi_infinite(
        [x](double t) { return std::exp(-t) / (t / x + 1.0); }, spec);
}

double kernel_csi_ieh_quad(double xi, double b, const QuadratureSpec& spec) {
    if (!(xi >= 0.0) || !(b >= 0.0)) {
        throw std::domain_error("kernel_csi_ieh_quad: xi and B must be >= 0");
    }
    return specfun::quad_semi_infinite(
        [xi, b](double t) { return std::exp(-t) * (xi * t + 1.0) / (b * t * t + xi * t + 1.0); },
        spec);
}

// Partial fractions over the real roots of B t^2 + xi t + 1:
//   F = -[D1 e^L G(0,L) + D2 e^P G(0,P)] / (2 B psi)
// with psi = sqrt(xi^2 - 4B), L = (xi + psi)/(2B), P = (xi - psi)/(2B),
// D1 = -xi^2 - xi psi + 2B, D2 = xi^2 - xi psi - 2B.
double kernel_csi_ieh_closed(double xi, double b) {
    if (!(b > 0.0)) throw std::domain_error("kernel_csi_ieh_closed: B must be > 0");
    const double disc = xi * xi - 4.0 * b;
    if (!(disc > 0.0)) {
        throw std::domain_error("kernel_csi_ieh_closed: complex roots (xi^2 <= 4B)");
    }
    const double psi = std::sqrt(disc);
    const double lam = (xi + psi) / (2.0 * b);
    const double rho = (xi - psi) / (2.0 * b);
    const double d1 = -xi * xi - xi * psi + 2.0 * b;
    const double d2 = xi * xi - xi * psi - 2.0 * b;
    return -(d1 * specfun::gamma_upper_zero_scaled(lam) +
             d2 * specfun::gamma_upper_zero_scaled(rho)) /
           (2.0 * b * psi);
}

double kernel_csi_aeh_quad(double gamma, double xi, const QuadratureSpec& spec) {
    if (!(gamma > 0.0) || !(xi >= 0.0)) {
        throw std::domain_error("kernel_csi_aeh_quad: gamma must be > 0 and xi >= 0");
    }
    return specfun::quad_semi_infinite(
        [gamma, xi](double t) { return std::exp(-t) * (xi * t + 1.0) / (gamma * t + 1.0); }, spec);
}

double kernel_csi_aeh_closed(double gamma, double xi) {
    if (!(gamma > 0.0) || !(xi >= 0.0) || xi > gamma) {
        throw std::domain_error("kernel_csi_aeh_closed: need gamma >= xi >= 0, gamma > 0");
    }
    const double b = gamma - xi;
    return b / (gamma * gamma) * specfun::gamma_upper_zero_scaled(1.0 / gamma) + xi / gamma;
}

double pep_state_bound(const phy::SystemConfig& config, double n0, double beta,
                       const phy::CodewordPair& pair, PepMethod path) {
    const phy::EffectiveGains gains = phy::compute_effective_gains(config, n0, beta);
    double term = direct_factor(pair.delta(), config.p_s, beta, n0);
    for (int i = 0; i < 2; ++i) {
        term *= relay_factor(config, gains, i, pair.epsilon(), beta, n0, path);
    }
    return term;
}

double pep_blind_ieh(const phy::SystemConfig& config, double snr_db, const phy::CodewordPair& pair,
                     PepMethod path) {
    require_variant(config, phy::Relaying::Blind, phy::EhMode::Ieh, "pep_blind_ieh");
    return pep_model1(config, snr_db, pair, path);
}

double pep_blind_aeh(const phy::SystemConfig& config, double snr_db, const phy::CodewordPair& pair,
                     PepMethod path) {
    require_variant(config, phy::Relaying::Blind, phy::EhMode::Aeh, "pep_blind_aeh");
    return pep_model1(config, snr_db, pair, path);
}

double pep_csi_ieh(const phy::SystemConfig& config, double snr_db, const phy::CodewordPair& pair,
                   PepMethod path) {
    require_variant(config, phy::Relaying::CsiAssisted, phy::EhMode::Ieh, "pep_csi_ieh");
    return pep_model1(config, snr_db, pair, path);
}

double pep_csi_aeh(const phy::SystemConfig& config, double snr_db, const phy::CodewordPair& pair,
                   PepMethod path) {
    require_variant(config, phy::Relaying::CsiAssisted, phy::EhMode::Aeh, "pep_csi_aeh");
    return pep_model1(config, snr_db, pair, path);
}

double pep_bound(const phy::SystemConfig& config, double snr_db, const phy::CodewordPair& pair,
                 PepMethod path) {
    return pep_model1(config, snr_db, pair, path);
}

double pep_model2(const phy::SystemConfig& config, double snr_db, const phy::CodewordPair& pair,
                  PepMethod path) {
    config.validate();
    pair.validate();
    if (config.truncation_m > 8) {
        throw std::invalid_argument("pep_model2: M^3 state sum guarded to M <= 8");
    }
    const double n0 = config.n0_for_snr_db(snr_db);
    const mca::McaParams params = config.noise_params(n0);
    const std::vector<double> alpha = mca::state_probabilities(params);
    const std::vector<double> beta = mca::variance_factors(params);

    double bound = 0.0;
    for (int m_d = 0; m_d < params.truncation_m; ++m_d) {
        for (int m_r1 = 0; m_r1 < params.truncation_m; ++m_r1) {
            for (int m_r2 = 0; m_r2 < params.truncation_m; ++m_r2) {
                const double weight = alpha[static_cast<std::size_t>(m_d)] *
                                      alpha[static_cast<std::size_t>(m_r1)] *
                                      alpha[static_cast<std::size_t>(m_r2)];
                const double phi_bar = mca::mean_variance_factor(
                    beta[static_cast<std::size_t>(m_d)], beta[static_cast<std::size_t>(m_r1)],
                    beta[static_cast<std::size_t>(m_r2)]);
                bound += weight * pep_state_bound(config, n0, phi_bar, pair, path);
            }
        }
    }
    return bound;
}

double diversity_order(std::span<const std::pair<double, double>> curve) {
    if (curve.size() < 2) {
        throw std::runtime_error("diversity_order: need at least two curve points");
    }
    const auto& [snr1_db, p1] = curve[curve.size() - 2];
    const auto& [snr2_db, p2] = curve[curve.size() - 1];
    if (!(p1 > 0.0) || !(p2 > 0.0) || !(p2 < p1) || !(snr2_db > snr1_db)) {
        throw std::runtime_error("diversity_order: tail must be positive and strictly decreasing");
    }
    const double log_snr1 = std::log(std::pow(10.0, snr1_db / 10.0));
    const double log_snr2 = std::log(std::pow(10.0, snr2_db / 10.0));
    return -(std::log(p2) - std::log(p1)) / (log_snr2 - log_snr1);
}

}  // namespace swiptpep::analysis
