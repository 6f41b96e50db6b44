#pragma once

#include <complex>

#include "swiptpep/rng.hpp"

namespace swiptpep::channel {

// Relay geometry. Both relays sit on the source-destination segment, the
// source-destination distance is the unit reference, so d_rd,n = 1 - d_sr,n.
struct Topology {
    double d_sr1 = 0.5;
    double d_sr2 = 0.5;
    double path_loss_exponent = 2.7;  // lambda > 2

    void validate() const;
};

// Relative path-loss gains L_ij = d_ij^lambda (all in (0,1)).
struct PathLossGains {
    double sr1;
    double sr2;
    double rd1;
    double rd2;
};

PathLossGains path_loss_gains(const Topology& topology);

// One block-fading draw of the five links; i.i.d. CN(0,1), i.e. unit expected
// power and Rayleigh envelopes, constant within a frame.
struct FadingRealization {
    std::complex<double> h_sd;
    std::complex<double> h_sr1;
    std::complex<double> h_sr2;
    std::complex<double> h_rd1;
    std::complex<double> h_rd2;
};

// Draw order: h_sd, h_sr1, h_sr2, h_rd1, h_rd2.
FadingRealization sample_fading(Rng& rng);

}  // namespace swiptpep::channel
