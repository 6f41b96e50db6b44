#include "swiptpep/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace swiptpep::channel {

void Topology::validate() const {
    if (!(d_sr1 > 0.0 && d_sr1 < 1.0) || !(d_sr2 > 0.0 && d_sr2 < 1.0)) {
        throw std::domain_error("Topology: d_sr must lie in (0,1)");
    }
    if (!(path_loss_exponent > 2.0)) {
        throw std::domain_error("Topology: path-loss exponent must exceed 2");
    }
}

PathLossGains path_loss_gains(const Topology& topology) {
    topology.validate();
    const double lambda = topology.path_loss_exponent;
    return PathLossGains{
        std::pow(topology.d_sr1, lambda),
        std::pow(topology.d_sr2, lambda),
        std::pow(1.0 - topology.d_sr1, lambda),
        std::pow(1.0 - topology.d_sr2, lambda),
    };
}

FadingRealization sample_fading(Rng& rng) {
    FadingRealization h;
    h.h_sd = rng.complex_gaussian(1.0);
    h.h_sr1 = rng.complex_gaussian(1.0);
    h.h_sr2 = rng.complex_gaussian(1.0);
    h.h_rd1 = rng.complex_gaussian(1.0);
    h.h_rd2 = rng.complex_gaussian(1.0);
    return h;
}

}  // namespace swiptpep::channel
