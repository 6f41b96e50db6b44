#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "swiptpep/mca_noise.hpp"
#include "swiptpep/phy.hpp"
#include "swiptpep/specfun.hpp"

namespace swiptpep::analysis {

enum class PepMethod { ExactConditionalAvg, ChernoffClosedForm, ChernoffQuadrature, MonteCarlo };

// A PEP value and how it was produced. Chernoff-type bounds can exceed one
// at low SNR; they are reported unclamped with the saturation flag set.
struct PepEstimate {
    double value = 0.0;
    PepMethod method = PepMethod::ChernoffQuadrature;
    bool saturated = false;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t trials = 0;
};

// Exact conditional PEP given the squared distance: the state-weighted
// Gaussian tail sum_m alpha_m Q(sqrt(d^2 / (2 beta_m N0))).
double conditional_pep_exact(double d2, const mca::McaParams& params);

// Chernoff counterpart sum_m alpha_m exp(-d^2 / (4 beta_m N0)); always an
// upper bound on the exact conditional PEP.
double conditional_pep_chernoff(double d2, const mca::McaParams& params);

// ---------------------------------------------------------------------------
// Per-relay Chernoff factors after averaging over the fading. Quadrature of
// the defining integrals is the primary evaluation path; the special-function
// closed forms exist as cross-checks where they are numerically valid.

// Blind IEH branch: c = eps Phi^2 / (4 beta N0),
//   F(c) = int_0^inf exp(-t) / (1 + c t^2) dt.
double kernel_blind_ieh_quad(double c, const specfun::QuadratureSpec& spec = {});

// Blind AEH branch: x = 4 beta N0 / (eps Phi^2),
//   F = x exp(x) G(0,x)  ==  int_0^inf exp(-t) / (1 + t/x) dt.
double kernel_blind_aeh_closed(double x);
double kernel_blind_aeh_quad(double x, const specfun::QuadratureSpec& spec = {});

// CSI IEH branch: B = eps zeta / (4 beta N0),
//   F(xi,B) = int_0^inf exp(-t) (xi t + 1) / (B t^2 + xi t + 1) dt.
// The closed form requires real partial-fraction roots (xi^2 > 4B) and
// throws std::domain_error outside that region.
double kernel_csi_ieh_quad(double xi, double b, const specfun::QuadratureSpec& spec = {});
double kernel_csi_ieh_closed(double xi, double b);

// CSI AEH branch: gamma = B + xi,
//   F(gamma,xi) = int_0^inf exp(-t) (xi t + 1) / (gamma t + 1) dt
//               = (B / gamma^2) exp(1/gamma) G(0,1/gamma) + xi / gamma.
double kernel_csi_aeh_quad(double gamma, double xi, const specfun::QuadratureSpec& spec = {});
double kernel_csi_aeh_closed(double gamma, double xi);

// ---------------------------------------------------------------------------
// Unconditional PEP bounds under spatially dependent impulse states.

// Single-state Chernoff term: the direct-link factor times the two relay
// factors of the active variant, all evaluated at variance factor beta.
double pep_state_bound(const phy::SystemConfig& config, double n0, double beta,
                       const phy::CodewordPair& pair,
                       PepMethod path = PepMethod::ChernoffQuadrature);

double pep_blind_ieh(const phy::SystemConfig& config, double snr_db,
                     const phy::CodewordPair& pair = phy::CodewordPair::worst_case(),
                     PepMethod path = PepMethod::ChernoffQuadrature);
double pep_blind_aeh(const phy::SystemConfig& config, double snr_db,
                     const phy::CodewordPair& pair = phy::CodewordPair::worst_case(),
                     PepMethod path = PepMethod::ChernoffQuadrature);
double pep_csi_ieh(const phy::SystemConfig& config, double snr_db,
                   const phy::CodewordPair& pair = phy::CodewordPair::worst_case(),
                   PepMethod path = PepMethod::ChernoffQuadrature);
double pep_csi_aeh(const phy::SystemConfig& config, double snr_db,
                   const phy::CodewordPair& pair = phy::CodewordPair::worst_case(),
                   PepMethod path = PepMethod::ChernoffQuadrature);

// Dispatches on config.scheme (spatial Model I averaging).
double pep_bound(const phy::SystemConfig& config, double snr_db,
                 const phy::CodewordPair& pair = phy::CodewordPair::worst_case(),
                 PepMethod path = PepMethod::ChernoffQuadrature);

// Spatially independent impulse states: a triple state sum where each term
// homogenizes the three variance factors to their frame average phi_bar and
// reuses the variant's single-state machinery. Guarded to M <= 8.
double pep_model2(const phy::SystemConfig& config, double snr_db,
                  const phy::CodewordPair& pair = phy::CodewordPair::worst_case(),
                  PepMethod path = PepMethod::ChernoffQuadrature);

// Negative log-log slope through the two highest-SNR points of a PEP curve.
// Points are (snr_db, pep); the tail must be positive and strictly
// decreasing, otherwise std::runtime_error.
double diversity_order(std::span<const std::pair<double, double>> curve);

}  // namespace swiptpep::analysis
