#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

#include "swiptpep/channel.hpp"
#include "swiptpep/mca_noise.hpp"
#include "swiptpep/rng.hpp"

namespace swiptpep::phy {

enum class Relaying { Blind, CsiAssisted };
enum class EhMode { Ieh, Aeh };

// One of the four analyzed techniques: {blind, CSI-assisted} x {IEH, AEH}.
struct SchemeVariant {
    Relaying relaying = Relaying::Blind;
    EhMode eh_mode = EhMode::Aeh;

    std::string name() const;  // e.g. "blind-aeh"
};

Relaying relaying_from_name(std::string_view name);
EhMode eh_mode_from_name(std::string_view name);

// Power-splitting ratio theta in (0,1) and conversion efficiency eta in (0,1).
// kappa = 1 - theta is always derived, never stored.
struct RelayParams {
    double theta = 0.5;
    double eta = 0.3;

    double kappa() const { return 1.0 - theta; }
    void validate() const;
};

// Full scenario description. N0 is not part of the scenario: the SNR sweep
// varies N0 = P_s / 10^(snr_db/10) at fixed transmit power.
struct SystemConfig {
    double p_s = 1.0;
    RelayParams relay1;
    RelayParams relay2;
    channel::Topology topology;
    SchemeVariant scheme;
    mca::NoiseEnvironment environment = mca::NoiseEnvironment::preset(mca::EnvironmentTag::NG);
    mca::SpatialModel spatial = mca::SpatialModel::ModelI;
    int truncation_m = 5;

    void validate() const;
    double n0_for_snr_db(double snr_db) const;
    const RelayParams& relay(int relay_index) const;
    mca::McaParams noise_params(double n0) const;
};

// A transmitted/competing BPSK codeword pair with its distance metrics.
// For this code the two eigenvalues of the codeword difference matrix both
// equal Delta, so epsilon() is shared by the relay branches.
struct CodewordPair {
    int s1 = 1;
    int s2 = 1;
    int s1_hat = -1;
    int s2_hat = -1;

    double delta() const;    // |s1-s1^|^2 + |s2-s2^|^2, one of {0,4,8}
    double epsilon() const { return delta(); }
    void validate() const;   // BPSK symbols, s != s^

    static CodewordPair worst_case() { return CodewordPair{1, 1, -1, -1}; }
    static std::array<CodewordPair, 12> all_ordered_pairs();
};

using CodeMatrix = std::array<std::array<std::complex<double>, 4>, 4>;

// Two-phase code matrix: diag(s1, s2) over phase 1 and the orthogonal
// [[s1, -s2*],[s2, s1*]] block over phase 2.
CodeMatrix build_code_matrix(int s1, int s2);

// Relay transmit power after phase 1. IEH scales with the instantaneous
// source-relay channel power; AEH uses its unit mean instead.
double harvested_power(const SystemConfig& config, int relay_index, double h_sr_sq);

// Amplify-and-forward scaling. Blind relays normalize the average receive
// energy (channel independent); CSI-assisted relays normalize each
// realization using the instantaneous channel and their current noise state.
double relay_gain(const SystemConfig& config, int relay_index, double n0, double h_sr_sq,
                  double beta_m);

// E|G_r|^2 used by the destination normalization: exact for blind gains,
// closed form (kappa P_s / L_sr + beta_m N0) for CSI-assisted since the
// channel power has unit mean.
double mean_sq_relay_gain(const SystemConfig& config, int relay_index, double n0, double beta_m);

// Destination normalization that keeps the average power of the relayed
// slots aligned with the direct slots.
double omega(const SystemConfig& config, double n0, double beta_m);

// Effective relayed-branch gain squared. The CSI-assisted form carries the
// instantaneous |h_sr|^2 in its denominator; the blind form does not.
double effective_phi_sq(const SystemConfig& config, int relay_index, double n0, double beta_m,
                        double h_sr_sq);

// Per-state effective gain bundle. zeta/xi describe the relayed branch as
// zeta * X^p * Y / (xi X + 1) with X = |h_sr|^2, Y = |h_rd|^2 and p = 2 (IEH)
// or 1 (AEH); blind schemes are the xi = 0 special case with zeta = Phi^2.
struct EffectiveGains {
    double p_s = 1.0;
    double omega = 1.0;
    std::array<double, 2> g_r{};      // scaling at the supplied |h_sr|^2
    std::array<double, 2> phi_sq{};   // instantaneous Phi_n^2
    std::array<double, 2> zeta{};
    std::array<double, 2> xi{};
};

EffectiveGains compute_effective_gains(const SystemConfig& config, double n0, double beta_m,
                                       double h_sr1_sq = 1.0, double h_sr2_sq = 1.0);

// Squared Euclidean distance between the codeword pair seen through the
// effective channel, per the active variant.
double distance_sq(const SchemeVariant& variant, const EffectiveGains& gains,
                   const channel::FadingRealization& fading, const CodewordPair& pair);

// Effective gains as the decoder sees them. Phase-2 slots carry the
// source-hop coefficient unconjugated in slot 3 and conjugated in slot 4.
struct EffectiveChannel {
    std::complex<double> direct;                   // sqrt(P_s) h_sd
    std::array<std::complex<double>, 2> relay_s3;  // slot-3 branch gains
    std::array<std::complex<double>, 2> relay_s4;  // slot-4 branch gains
};

struct Frame {
    std::array<std::complex<double>, 4> y;
    EffectiveChannel channel;
};

// Noise-free candidate signal for a codeword under the effective channel.
std::array<std::complex<double>, 4> candidate_signal(const EffectiveChannel& h, int s1, int s2);

// Composite: the physical chain. Relays forward their own receive noise, so
// the phase-2 noise variance depends on the fading draw, and slot 4 carries
// the conjugated source-hop gains.
// Conditional: the statistical model behind the analytical PEP expressions.
// All four slots carry equal-variance Gaussian noise for the frame's state
// and the decoder row reuses the slot-3 gains, so conditioned on any fading
// draw the pairwise error rate is exactly the Gaussian tail of the distance.
// The two models differ materially for CSI-assisted AEH, where a faded
// source-relay hop makes the physical relay amplify noise at full harvested
// power; the analytical bounds describe the conditional model.
enum class NoiseModel { Composite, Conditional };

// Synthesizes one four-slot frame: phase-1 direct reception and phase-2
// distributed-Alamouti relaying with harvested power, normalized by omega.
// n0 = 0 produces the noiseless chain. Composite noise draw order:
// n_d(1..4), then relay 1 slots 3/4, then relay 2; conditional order:
// slots 1..4.
Frame synthesize_frame(const SystemConfig& config, double n0,
                       const channel::FadingRealization& fading,
                       const mca::FrameNoiseStates& states, int s1, int s2, Rng& rng,
                       NoiseModel noise_model = NoiseModel::Composite);

// Minimum-distance decision over the four BPSK codewords with the plain
// Euclidean metric (no per-state whitening). Ties break to the lowest index.
inline constexpr std::array<std::array<int, 2>, 4> kBpskCodebook{{{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}}};

int mdr_decide(const Frame& frame);

// Binary pairwise test the analytical PEP bounds: true when the competing
// codeword is strictly preferred over the transmitted one.
bool pairwise_error(const Frame& frame, const CodewordPair& pair);

}  // namespace swiptpep::phy
