#include "swiptpep/phy.hpp"

#include <cmath>
#include <stdexcept>

namespace swiptpep::phy {

namespace {

double norm_sq(std::complex<double> z) { return std::norm(z); }

void require_relay_index(int relay_index) {
    if (relay_index != 0 && relay_index != 1) {
        throw std::invalid_argument("relay_index must be 0 or 1");
    }
}

}  // namespace

std::string SchemeVariant::name() const {
    std::string out = relaying == Relaying::Blind ? "blind" : "csi";
    out += eh_mode == EhMode::Ieh ? "-ieh" : "-aeh";
    return out;
}

Relaying relaying_from_name(std::string_view name) {
    if (name == "blind") return Relaying::Blind;
    if (name == "csi") return Relaying::CsiAssisted;
    throw std::invalid_argument("relaying scheme: expected blind or csi, got '" +
                                std::string(name) + "'");
}

EhMode eh_mode_from_name(std::string_view name) {
    if (name == "ieh") return EhMode::Ieh;
    if (name == "aeh") return EhMode::Aeh;
    throw std::invalid_argument("EH mode: expected ieh or aeh, got '" + std::string(name) + "'");
}

void RelayParams::validate() const {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw std::domain_error("RelayParams: theta must lie in (0,1)");
    }
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::domain_error("RelayParams: eta must lie in (0,1)");
    }
}

void SystemConfig::validate() const {
    if (!(p_s > 0.0)) throw std::domain_error("SystemConfig: P_s must be positive");
    relay1.validate();
    relay2.validate();
    topology.validate();
    if (truncation_m < 1) throw std::domain_error("SystemConfig: truncation M must be >= 1");
}

double SystemConfig::n0_for_snr_db(double snr_db) const {
    return p_s / std::pow(10.0, snr_db / 10.0);
}

const RelayParams& SystemConfig::relay(int relay_index) const {
    require_relay_index(relay_index);
    return relay_index == 0 ? relay1 : relay2;
}

mca::McaParams SystemConfig::noise_params(double n0) const {
    return environment.params(n0, truncation_m);
}

double CodewordPair::delta() const {
    const double d1 = s1 - s1_hat;
    const double d2 = s2 - s2_hat;
    return d1 * d1 + d2 * d2;
}

void CodewordPair::validate() const {
    const auto bpsk = [](int s) { return s == 1 || s == -1; };
    if (!bpsk(s1) || !bpsk(s2) || !bpsk(s1_hat) || !bpsk(s2_hat)) {
        throw std::domain_error("CodewordPair: symbols must be +1 or -1");
    }
    if (s1 == s1_hat && s2 == s2_hat) {
        throw std::domain_error("CodewordPair: codewords must differ");
    }
}

std::array<CodewordPair, 12> CodewordPair::all_ordered_pairs() {
    std::array<CodewordPair, 12> pairs{};
    std::size_t k = 0;
    for (const auto& s : kBpskCodebook) {
        for (const auto& t : kBpskCodebook) {
            if (s == t) continue;
            pairs[k++] = CodewordPair{s[0], s[1], t[0], t[1]};
        }
    }
    return pairs;
}

CodeMatrix build_code_matrix(int s1, int s2) {
    CodeMatrix s{};
    s[0][0] = s1;
    s[1][1] = s2;
    s[2][2] = s1;
    s[2][3] = -static_cast<double>(s2);  // -s2* for real BPSK symbols
    s[3][2] = s2;
    s[3][3] = s1;
    return s;
}

double harvested_power(const SystemConfig& config, int relay_index, double h_sr_sq) {
    require_relay_index(relay_index);
    const RelayParams& r = config.relay(relay_index);
    const channel::PathLossGains loss = channel::path_loss_gains(config.topology);
    const double l_sr = relay_index == 0 ? loss.sr1 : loss.sr2;
    const double channel_power = config.scheme.eh_mode == EhMode::Ieh ? h_sr_sq : 1.0;
    return r.eta * r.theta * config.p_s * channel_power / l_sr;
}

double relay_gain(const SystemConfig& config, int relay_index, double n0, double h_sr_sq,
                  double beta_m) {
    require_relay_index(relay_index);
    const RelayParams& r = config.relay(relay_index);
    const channel::PathLossGains loss = channel::path_loss_gains(config.topology);
    const double l_sr = relay_index == 0 ? loss.sr1 : loss.sr2;
    if (config.scheme.relaying == Relaying::Blind) {
        return std::sqrt(r.kappa() * config.p_s / l_sr + n0);
    }
    return std::sqrt(r.kappa() * config.p_s / l_sr * h_sr_sq + beta_m * n0);
}

double mean_sq_relay_gain(const SystemConfig& config, int relay_index, double n0, double beta_m) {
    require_relay_index(relay_index);
    const RelayParams& r = config.relay(relay_index);
    const channel::PathLossGains loss = channel::path_loss_gains(config.topology);
    const double l_sr = relay_index == 0 ? loss.sr1 : loss.sr2;
    if (config.scheme.relaying == Relaying::Blind) {
        return r.kappa() * config.p_s / l_sr + n0;
    }
    return r.kappa() * config.p_s / l_sr + beta_m * n0;
}

double omega(const SystemConfig& config, double n0, double beta_m) {
    const channel::PathLossGains loss = channel::path_loss_gains(config.topology);
    double sum = 1.0;
    for (int i = 0; i < 2; ++i) {
        const RelayParams& r = config.relay(i);
        const double l_sr = i == 0 ? loss.sr1 : loss.sr2;
        const double l_rd = i == 0 ? loss.rd1 : loss.rd2;
        sum += r.eta * r.theta * config.p_s * (r.kappa() + 1.0) /
               (l_sr * l_rd * mean_sq_relay_gain(config, i, n0, beta_m));
    }
    return std::sqrt(sum);
}

double effective_phi_sq(const SystemConfig& config, int relay_index, double n0, double beta_m,
                        double h_sr_sq) {
    require_relay_index(relay_index);
    if (!(n0 > 0.0)) throw std::domain_error("effective_phi_sq: n0 must be positive");
    const RelayParams& r = config.relay(relay_index);
    const channel::PathLossGains loss = channel::path_loss_gains(config.topology);
    const double l_sr = relay_index == 0 ? loss.sr1 : loss.sr2;
    const double l_rd = relay_index == 0 ? loss.rd1 : loss.rd2;
    const double om_sq = omega(config, n0, beta_m) * omega(config, n0, beta_m);
    const double kappa = r.kappa();

    if (config.scheme.relaying == Relaying::Blind) {
        const double snr = config.p_s / n0;
        return r.eta * r.theta * kappa * config.p_s * snr /
               (om_sq * l_sr * l_sr * l_rd * (kappa / l_sr * snr + 1.0));
    }
    const double snr_state = config.p_s / (beta_m * n0);
    return r.eta * r.theta * kappa * config.p_s * snr_state /
           (om_sq * l_sr * l_sr * l_rd * (kappa / l_sr * snr_state * h_sr_sq + 1.0));
}

EffectiveGains compute_effective_gains(const SystemConfig& config, double n0, double beta_m,
                                       double h_sr1_sq, double h_sr2_sq) {
    if (!(n0 > 0.0)) throw std::domain_error("compute_effective_gains: n0 must be positive");
    EffectiveGains gains;
    gains.p_s = config.p_s;
    gains.omega = omega(config, n0, beta_m);
    const double om_sq = gains.omega * gains.omega;
    const channel::PathLossGains loss = channel::path_loss_gains(config.topology);

    for (int i = 0; i < 2; ++i) {
        const RelayParams& r = config.relay(i);
        const double l_sr = i == 0 ? loss.sr1 : loss.sr2;
        const double l_rd = i == 0 ? loss.rd1 : loss.rd2;
        const double h_sr_sq = i == 0 ? h_sr1_sq : h_sr2_sq;
        gains.g_r[i] = relay_gain(config, i, n0, h_sr_sq, beta_m);
        gains.phi_sq[i] = effective_phi_sq(config, i, n0, beta_m, h_sr_sq);
        if (config.scheme.relaying == Relaying::Blind) {
            gains.zeta[i] = gains.phi_sq[i];
            gains.xi[i] = 0.0;
        } else {
            const double snr_state = config.p_s / (beta_m * n0);
            gains.zeta[i] = r.eta * r.theta * r.kappa() * config.p_s * snr_state /
                            (om_sq * l_sr * l_sr * l_rd);
            gains.xi[i] = r.kappa() / l_sr * snr_state;
        }
    }
    return gains;
}

double distance_sq(const SchemeVariant& variant, const EffectiveGains& gains,
                   const channel::FadingRealization& fading, const CodewordPair& pair) {
    const double delta = pair.delta();
    const double eps = pair.epsilon();
    const double x[2] = {norm_sq(fading.h_sr1), norm_sq(fading.h_sr2)};
    const double y[2] = {norm_sq(fading.h_rd1), norm_sq(fading.h_rd2)};

    double d2 = delta * gains.p_s * norm_sq(fading.h_sd);
    for (int i = 0; i < 2; ++i) {
        const double channel_power =
            variant.eh_mode == EhMode::Ieh ? x[i] * x[i] * y[i] : x[i] * y[i];
        d2 += eps * gains.zeta[i] * channel_power / (gains.xi[i] * x[i] + 1.0);
    }
    return d2;
}

std::array<std::complex<double>, 4> candidate_signal(const EffectiveChannel& h, int s1, int s2) {
    const double c1 = s1;
    const double c2 = s2;
    return {
        h.direct * c1,
        h.direct * c2,
        h.relay_s3[0] * c1 + h.relay_s3[1] * c2,
        -h.relay_s4[0] * c2 + h.relay_s4[1] * c1,
    };
}

Frame synthesize_frame(const SystemConfig& config, double n0,
                       const channel::FadingRealization& fading,
                       const mca::FrameNoiseStates& states, int s1, int s2, Rng& rng,
                       NoiseModel noise_model) {
    const double a = config.environment.impulsive_index_a;
    const double delta = config.environment.gaussian_factor_delta;
    double beta_d = mca::variance_factor(a, delta, states.m_d);
    double beta_r[2] = {mca::variance_factor(a, delta, states.m_r1),
                        mca::variance_factor(a, delta, states.m_r2)};
    if (noise_model == NoiseModel::Conditional) {
        // The conditional model homogenizes the three variance factors (a
        // no-op under Model I, the frame-average approximation otherwise).
        const double phi_bar = mca::mean_variance_factor(beta_d, beta_r[0], beta_r[1]);
        beta_d = beta_r[0] = beta_r[1] = phi_bar;
    }

    const channel::PathLossGains loss = channel::path_loss_gains(config.topology);
    const std::complex<double> h_sr[2] = {fading.h_sr1, fading.h_sr2};
    const std::complex<double> h_rd[2] = {fading.h_rd1, fading.h_rd2};
    const bool blind = config.scheme.relaying == Relaying::Blind;
    const bool ieh = config.scheme.eh_mode == EhMode::Ieh;

    double p_r[2];
    double g_sq[2];
    double om_sq = 1.0;  // destination normalization accumulates E-average terms
    for (int i = 0; i < 2; ++i) {
        const RelayParams& r = config.relay(i);
        const double l_sr = i == 0 ? loss.sr1 : loss.sr2;
        const double l_rd = i == 0 ? loss.rd1 : loss.rd2;
        const double x = std::norm(h_sr[i]);
        p_r[i] = r.eta * r.theta * config.p_s * (ieh ? x : 1.0) / l_sr;
        const double fixed_part = r.kappa() * config.p_s / l_sr;
        g_sq[i] = blind ? fixed_part + n0 : fixed_part * x + beta_r[i] * n0;
        const double mean_g_sq = blind ? fixed_part + n0 : fixed_part + beta_r[i] * n0;
        om_sq += r.eta * r.theta * config.p_s * (r.kappa() + 1.0) / (l_sr * l_rd * mean_g_sq);
    }
    const double om = std::sqrt(om_sq);

    Frame frame;
    frame.channel.direct = std::sqrt(config.p_s) * fading.h_sd;

    double relay_noise_scale[2];
    for (int i = 0; i < 2; ++i) {
        const RelayParams& r = config.relay(i);
        const double l_sr = i == 0 ? loss.sr1 : loss.sr2;
        const double l_rd = i == 0 ? loss.rd1 : loss.rd2;
        const double g = std::sqrt(g_sq[i]);
        const double rho = std::sqrt(r.kappa() * p_r[i] * config.p_s) / (g * std::sqrt(l_rd * l_sr));
        frame.channel.relay_s3[i] = rho / om * h_sr[i] * h_rd[i];
        frame.channel.relay_s4[i] = noise_model == NoiseModel::Conditional
                                        ? frame.channel.relay_s3[i]
                                        : rho / om * std::conj(h_sr[i]) * h_rd[i];
        relay_noise_scale[i] = std::sqrt(p_r[i]) / (g * std::sqrt(l_rd)) / om;
    }

    const std::array<std::complex<double>, 4> clean = candidate_signal(frame.channel, s1, s2);

    if (noise_model == NoiseModel::Conditional) {
        for (int q = 0; q < 4; ++q) {
            frame.y[q] = clean[q] + rng.complex_gaussian(beta_d * n0);
        }
        return frame;
    }

    // Composite noise draws in canonical order.
    std::complex<double> n_d[4];
    for (auto& n : n_d) n = rng.complex_gaussian(beta_d * n0);
    std::complex<double> n_relay[2][2];
    for (int i = 0; i < 2; ++i) {
        const double var = beta_r[i] * (config.relay(i).kappa() + 1.0) * n0;
        n_relay[i][0] = rng.complex_gaussian(var);  // forwarded in slot 3
        n_relay[i][1] = rng.complex_gaussian(var);  // forwarded (conjugated) in slot 4
    }

    frame.y[0] = clean[0] + n_d[0];
    frame.y[1] = clean[1] + n_d[1];
    frame.y[2] = clean[2] + relay_noise_scale[0] * h_rd[0] * n_relay[0][0] +
                 relay_noise_scale[1] * h_rd[1] * n_relay[1][0] + n_d[2] / om;
    frame.y[3] = clean[3] - relay_noise_scale[0] * h_rd[0] * std::conj(n_relay[0][1]) +
                 relay_noise_scale[1] * h_rd[1] * std::conj(n_relay[1][1]) + n_d[3] / om;
    return frame;
}

namespace {

double metric(const Frame& frame, int s1, int s2) {
    const std::array<std::complex<double>, 4> cand = candidate_signal(frame.channel, s1, s2);
    double m = 0.0;
    for (int q = 0; q < 4; ++q) {
        m += std::norm(frame.y[q] - cand[q]);
    }
    return m;
}

}  // namespace

int mdr_decide(const Frame& frame) {
    int best = 0;
    double best_metric = metric(frame, kBpskCodebook[0][0], kBpskCodebook[0][1]);
    for (int c = 1; c < 4; ++c) {
        const double m = metric(frame, kBpskCodebook[c][0], kBpskCodebook[c][1]);
        if (m < best_metric) {
            best_metric = m;
            best = c;
        }
    }
    return best;
}

bool pairwise_error(const Frame& frame, const CodewordPair& pair) {
    return metric(frame, pair.s1_hat, pair.s2_hat) < metric(frame, pair.s1, pair.s2);
}

}  // namespace swiptpep::phy
