#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "swiptpep/phy.hpp"
#include "swiptpep/specfun.hpp"

using namespace swiptpep;
using namespace swiptpep::phy;

namespace {

SystemConfig table_config(Relaying r, EhMode e, const char* env = "NG") {
    SystemConfig cfg;
    cfg.scheme = SchemeVariant{r, e};
    cfg.environment = mca::NoiseEnvironment::from_name(env);
    return cfg;
}

std::complex<double> unit(double phase) { return {std::cos(phase), std::sin(phase)}; }

}  // namespace

TEST_CASE("code matrix structure") {
    const CodeMatrix s = build_code_matrix(1, 1);
    CHECK(s[0][0] == std::complex<double>(1.0));
    CHECK(s[1][1] == std::complex<double>(1.0));
    CHECK(s[2][2] == std::complex<double>(1.0));
    CHECK(s[2][3] == std::complex<double>(-1.0));
    CHECK(s[3][2] == std::complex<double>(1.0));
    CHECK(s[3][3] == std::complex<double>(1.0));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i != j) CHECK(s[i][j] == std::complex<double>(0.0));
        }
    }
}

TEST_CASE("codeword difference matrix has equal eigenvalues") {
    // lower 2x2 block of (S - S^)(S - S^)^H must be Delta * I for every
    // ordered BPSK pair
    for (const CodewordPair& pair : CodewordPair::all_ordered_pairs()) {
        const CodeMatrix s = build_code_matrix(pair.s1, pair.s2);
        const CodeMatrix sh = build_code_matrix(pair.s1_hat, pair.s2_hat);
        std::complex<double> d[2][2];
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                d[i][j] = s[2 + i][2 + j] - sh[2 + i][2 + j];
            }
        }
        std::complex<double> block[2][2];
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                block[i][j] = d[i][0] * std::conj(d[j][0]) + d[i][1] * std::conj(d[j][1]);
            }
        }
        const double delta = pair.delta();
        CHECK(block[0][0].real() == doctest::Approx(delta).epsilon(1e-14));
        CHECK(block[1][1].real() == doctest::Approx(delta).epsilon(1e-14));
        CHECK(std::abs(block[0][1]) <= 1e-14);
        const auto eig =
            oracles::eig2_hermitian(block[0][0].real(), block[0][1], block[1][1].real());
        CHECK(eig[0] == doctest::Approx(delta).epsilon(1e-12));
        CHECK(eig[1] == doctest::Approx(delta).epsilon(1e-12));
    }
}

TEST_CASE("codeword pair metrics") {
    CHECK(CodewordPair::worst_case().delta() == doctest::Approx(8.0));
    const CodewordPair single{1, 1, -1, 1};
    CHECK(single.delta() == doctest::Approx(4.0));
    const CodewordPair equal{1, 1, 1, 1};
    CHECK_THROWS_AS(equal.validate(), std::domain_error);
    const CodewordPair bad_symbol{2, 1, -1, 1};
    CHECK_THROWS_AS(bad_symbol.validate(), std::domain_error);
}

TEST_CASE("harvested power") {
    const SystemConfig aeh = table_config(Relaying::Blind, EhMode::Aeh);
    CHECK(harvested_power(aeh, 0, 5.0) == doctest::Approx(0.974703).epsilon(1e-5));

    const SystemConfig ieh = table_config(Relaying::Blind, EhMode::Ieh);
    CHECK(harvested_power(ieh, 0, 1.0) ==
          doctest::Approx(harvested_power(aeh, 0, 1.0)).epsilon(1e-14));

    Rng rng(5);
    oracles::RunningStats stats;
    for (int i = 0; i < 1000000; ++i) {
        stats.add(harvested_power(ieh, 0, std::norm(rng.complex_gaussian(1.0))));
    }
    CHECK(stats.mean == doctest::Approx(harvested_power(aeh, 0, 1.0)).epsilon(0.01));
}

TEST_CASE("relay gain") {
    const SystemConfig blind = table_config(Relaying::Blind, EhMode::Aeh);
    CHECK(relay_gain(blind, 0, 1.0, 123.0, 9.0) == doctest::Approx(2.06131).epsilon(1e-5));

    const SystemConfig csi = table_config(Relaying::CsiAssisted, EhMode::Aeh);
    const double beta = 9.18182;
    const double n0 = 0.25;
    CHECK(relay_gain(csi, 0, n0, 0.0, beta) == doctest::Approx(std::sqrt(beta * n0)).epsilon(1e-12));

    Rng rng(6);
    oracles::RunningStats sq;
    for (int i = 0; i < 1000000; ++i) {
        const double x = std::norm(rng.complex_gaussian(1.0));
        const double g = relay_gain(csi, 0, n0, x, beta);
        sq.add(g * g);
    }
    CHECK(sq.mean == doctest::Approx(mean_sq_relay_gain(csi, 0, n0, beta)).epsilon(0.01));
}

TEST_CASE("omega") {
    const SystemConfig cfg = table_config(Relaying::Blind, EhMode::Aeh);

    SUBCASE("hand evaluation at 10 dB") {
        const double l = std::pow(0.5, 2.7);
        const double g_sq = 0.5 / l + 0.1;
        const double expected = std::sqrt(1.0 + 2.0 * (0.3 * 0.5 * 1.5) / (l * l * g_sq));
        CHECK(omega(cfg, 0.1, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("vanishing harvested power") {
        SystemConfig off = cfg;
        off.relay1.eta = 1e-12;
        off.relay2.eta = 1e-12;
        CHECK(omega(off, 0.1, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    }

    SUBCASE("symmetric relays contribute equal summands") {
        const double om_sq = omega(cfg, 0.1, 1.0) * omega(cfg, 0.1, 1.0);
        SystemConfig one = cfg;
        one.relay2.eta = 1e-300;  // silence relay 2
        const double om1_sq = omega(one, 0.1, 1.0) * omega(one, 0.1, 1.0);
        CHECK(om_sq - 1.0 == doctest::Approx(2.0 * (om1_sq - 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("effective phi squared") {
    SUBCASE("blind high-SNR limit") {
        const SystemConfig cfg = table_config(Relaying::Blind, EhMode::Aeh);
        const double n0 = 1e-12;
        const double l = std::pow(0.5, 2.7);
        const double om_sq = omega(cfg, n0, 1.0) * omega(cfg, n0, 1.0);
        const double limit = 0.3 * 0.5 * 1.0 / (om_sq * l * l);
        CHECK(effective_phi_sq(cfg, 0, n0, 1.0, 1.0) == doctest::Approx(limit).epsilon(1e-6));
    }

    SUBCASE("blind hand evaluation at 10 dB") {
        const SystemConfig cfg = table_config(Relaying::Blind, EhMode::Ieh);
        const double n0 = 0.1;
        const double l = std::pow(0.5, 2.7);
        const double om_sq = omega(cfg, n0, 1.0) * omega(cfg, n0, 1.0);
        const double expected =
            0.3 * 0.5 * 0.5 * 1.0 * 10.0 / (om_sq * l * l * l * (0.5 / l * 10.0 + 1.0));
        CHECK(effective_phi_sq(cfg, 0, n0, 1.0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("CSI gain collapses as the source-relay channel grows") {
        const SystemConfig cfg = table_config(Relaying::CsiAssisted, EhMode::Ieh);
        const double small = effective_phi_sq(cfg, 0, 0.01, 1.0, 1e9);
        const double normal = effective_phi_sq(cfg, 0, 0.01, 1.0, 1.0);
        CHECK(small < 1e-6 * normal);
    }
}

TEST_CASE("effective gains bundle") {
    const double n0 = 0.01;
    SUBCASE("blind schemes are the xi = 0 case") {
        const SystemConfig cfg = table_config(Relaying::Blind, EhMode::Ieh);
        const EffectiveGains g = compute_effective_gains(cfg, n0, 1.0);
        CHECK(g.xi[0] == 0.0);
        CHECK(g.zeta[0] == doctest::Approx(g.phi_sq[0]).epsilon(1e-14));
    }
    SUBCASE("CSI instantaneous gain identity") {
        const SystemConfig cfg = table_config(Relaying::CsiAssisted, EhMode::Ieh);
        for (double x : {0.2, 1.0, 4.0}) {
            const EffectiveGains g = compute_effective_gains(cfg, n0, 9.18182, x, x);
            CHECK(g.phi_sq[0] ==
                  doctest::Approx(g.zeta[0] / (g.xi[0] * x + 1.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("distance squared") {
    const double n0 = 0.01;
    const CodewordPair pair = CodewordPair::worst_case();

    SUBCASE("null channels give zero distance") {
        const SystemConfig cfg = table_config(Relaying::Blind, EhMode::Ieh);
        const EffectiveGains g = compute_effective_gains(cfg, n0, 1.0);
        const channel::FadingRealization h{};
        CHECK(distance_sq(cfg.scheme, g, h, pair) == 0.0);
    }

    SUBCASE("direct link only") {
        const SystemConfig cfg = table_config(Relaying::Blind, EhMode::Ieh);
        const EffectiveGains g = compute_effective_gains(cfg, n0, 1.0);
        channel::FadingRealization h{};
        h.h_sd = {0.6, -0.8};
        CHECK(distance_sq(cfg.scheme, g, h, pair) ==
              doctest::Approx(8.0 * std::norm(h.h_sd)).epsilon(1e-14));
    }

    SUBCASE("CSI IEH approaches the AEH form at large xi") {
        Rng rng(11);
        EffectiveGains csi;
        csi.zeta = {3.0e9, 2.0e9};
        csi.xi = {1e9, 1e9};
        EffectiveGains aeh;
        aeh.zeta = {csi.zeta[0] / csi.xi[0], csi.zeta[1] / csi.xi[1]};
        aeh.xi = {0.0, 0.0};
        const SchemeVariant v_csi{Relaying::CsiAssisted, EhMode::Ieh};
        const SchemeVariant v_aeh{Relaying::Blind, EhMode::Aeh};
        for (int i = 0; i < 50; ++i) {
            const channel::FadingRealization h = channel::sample_fading(rng);
            const double a = distance_sq(v_csi, csi, h, pair);
            const double b = distance_sq(v_aeh, aeh, h, pair);
            CHECK(a == doctest::Approx(b).epsilon(1e-6));
        }
    }

    SUBCASE("nonnegative over random draws") {
        Rng rng(12);
        for (const auto scheme : {SchemeVariant{Relaying::Blind, EhMode::Ieh},
                                  SchemeVariant{Relaying::CsiAssisted, EhMode::Aeh}}) {
            SystemConfig cfg = table_config(scheme.relaying, scheme.eh_mode);
            const EffectiveGains g = compute_effective_gains(cfg, n0, 0.0909091);
            for (int i = 0; i < 200; ++i) {
                CHECK(distance_sq(scheme, g, channel::sample_fading(rng), pair) >= 0.0);
            }
        }
    }
}

TEST_CASE("distance equals the quadratic form of the decoder row") {
    // || h(S - S^) ||^2 computed from the synthesized effective channel must
    // reproduce distance_sq (conditional model row; state 0)
    Rng rng(13);
    const double n0 = 0.01;
    for (const auto scheme :
         {SchemeVariant{Relaying::Blind, EhMode::Ieh}, SchemeVariant{Relaying::Blind, EhMode::Aeh},
          SchemeVariant{Relaying::CsiAssisted, EhMode::Ieh},
          SchemeVariant{Relaying::CsiAssisted, EhMode::Aeh}}) {
        SystemConfig cfg = table_config(scheme.relaying, scheme.eh_mode);
        const double beta0 = mca::variance_factor(cfg.noise_params(n0), 0);
        for (const CodewordPair& pair :
             {CodewordPair::worst_case(), CodewordPair{1, -1, 1, 1}}) {
            const channel::FadingRealization h = channel::sample_fading(rng);
            const phy::Frame frame = synthesize_frame(cfg, n0, h, {0, 0, 0}, pair.s1, pair.s2, rng,
                                                      NoiseModel::Conditional);
            const auto tx = candidate_signal(frame.channel, pair.s1, pair.s2);
            const auto other = candidate_signal(frame.channel, pair.s1_hat, pair.s2_hat);
            double direct = 0.0;
            for (int q = 0; q < 4; ++q) direct += std::norm(tx[q] - other[q]);
            const EffectiveGains g = compute_effective_gains(cfg, n0, beta0, std::norm(h.h_sr1),
                                                             std::norm(h.h_sr2));
            CHECK(direct == doctest::Approx(distance_sq(scheme, g, h, pair)).epsilon(1e-10));
        }
    }
}

TEST_CASE("noiseless synthesis reproduces the signal model") {
    Rng rng(14);
    const channel::FadingRealization h = channel::sample_fading(rng);
    for (const auto model : {NoiseModel::Composite, NoiseModel::Conditional}) {
        const SystemConfig cfg = table_config(Relaying::CsiAssisted, EhMode::Ieh);
        const Frame f = synthesize_frame(cfg, 0.0, h, {1, 1, 1}, 1, -1, rng, model);
        const auto clean = candidate_signal(f.channel, 1, -1);
        for (int q = 0; q < 4; ++q) {
            CHECK(std::abs(f.y[q] - clean[q]) <= 1e-15);
        }
    }
}

TEST_CASE("vanishing conversion efficiency leaves only destination noise") {
    SystemConfig cfg = table_config(Relaying::Blind, EhMode::Ieh);
    cfg.relay1.eta = 1e-30;
    cfg.relay2.eta = 1e-30;
    Rng rng(15);
    const channel::FadingRealization h = channel::sample_fading(rng);
    const double n0 = 0.1;
    const Frame f = synthesize_frame(cfg, n0, h, {0, 0, 0}, 1, 1, rng);
    CHECK(std::abs(f.channel.relay_s3[0]) < 1e-10);
    CHECK(std::abs(f.channel.relay_s3[1]) < 1e-10);
    // slot 3 noise variance == beta_0 n0 / omega^2 with omega == 1
    oracles::RunningStats var;
    Rng rng2(16);
    for (int i = 0; i < 200000; ++i) {
        const Frame g = synthesize_frame(cfg, n0, h, {0, 0, 0}, 1, 1, rng2);
        var.add(std::norm(g.y[2]));
    }
    const double beta0 = 0.1 / 1.1;
    CHECK(var.mean == doctest::Approx(beta0 * n0).epsilon(0.02));
}

TEST_CASE("composite slot-3 noise variance at fixed fading") {
    const SystemConfig cfg = table_config(Relaying::Blind, EhMode::Aeh);
    const double n0 = 0.1;
    Rng rng(17);
    const channel::FadingRealization h = channel::sample_fading(rng);
    const mca::FrameNoiseStates states{0, 0, 0};
    const double beta0 = 0.1 / 1.1;

    // analytic conditional variance of the normalized slot-3 noise
    const channel::PathLossGains loss = channel::path_loss_gains(cfg.topology);
    const double om = omega(cfg, n0, beta0);
    double expected = beta0 * n0;
    const double y_rd[2] = {std::norm(h.h_rd1), std::norm(h.h_rd2)};
    for (int i = 0; i < 2; ++i) {
        const double l_rd = i == 0 ? loss.rd1 : loss.rd2;
        const double p_r = harvested_power(cfg, i, 1.0);
        const double g_sq = mean_sq_relay_gain(cfg, i, n0, beta0);  // exact for blind
        expected += p_r * y_rd[i] * beta0 * (cfg.relay(i).kappa() + 1.0) * n0 / (g_sq * l_rd);
    }
    expected /= om * om;

    oracles::RunningStats var;
    for (int i = 0; i < 100000; ++i) {
        const Frame f = synthesize_frame(cfg, n0, h, states, 1, 1, rng);
        const auto clean = candidate_signal(f.channel, 1, 1);
        var.add(std::norm(f.y[2] - clean[2]));
    }
    CHECK(var.mean == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("conditional pairwise error rate matches the Gaussian tail") {
    // At any fixed fading/state draw the conditional-model error rate is
    // exactly Q(sqrt(d^2 / (2 beta N0))).
    const double n0 = 0.1;  // 10 dB
    Rng fading_rng(18);
    const channel::FadingRealization h = channel::sample_fading(fading_rng);
    const CodewordPair pair = CodewordPair::worst_case();
    for (const auto scheme :
         {SchemeVariant{Relaying::Blind, EhMode::Ieh}, SchemeVariant{Relaying::Blind, EhMode::Aeh},
          SchemeVariant{Relaying::CsiAssisted, EhMode::Ieh},
          SchemeVariant{Relaying::CsiAssisted, EhMode::Aeh}}) {
        SystemConfig cfg = table_config(scheme.relaying, scheme.eh_mode);
        const double beta0 = mca::variance_factor(cfg.noise_params(n0), 0);
        const EffectiveGains g =
            compute_effective_gains(cfg, n0, beta0, std::norm(h.h_sr1), std::norm(h.h_sr2));
        const double d2 = distance_sq(scheme, g, h, pair);
        const double expected = specfun::q_func(std::sqrt(d2 / (2.0 * beta0 * n0)));

        Rng rng(19);
        const int n = 1000000;
        int errors = 0;
        for (int i = 0; i < n; ++i) {
            const Frame f = synthesize_frame(cfg, n0, h, {0, 0, 0}, pair.s1, pair.s2, rng,
                                             NoiseModel::Conditional);
            if (pairwise_error(f, pair)) ++errors;
        }
        const double sigma = std::sqrt(expected * (1.0 - expected) / n);
        CHECK(std::abs(static_cast<double>(errors) / n - expected) <= 3.0 * sigma);
    }
}

TEST_CASE("composite chain agrees at unit-power relay hops") {
    // With real source-relay coefficients and unit-magnitude relay-hop draws
    // the composite slot noise variance equals beta N0 exactly and the
    // Alamouti cross terms vanish, so the same Gaussian-tail identity holds
    // for the physical chain.
    const double n0 = 0.1;
    channel::FadingRealization h;
    h.h_sd = {0.45, -0.7};
    h.h_sr1 = {1.0, 0.0};
    h.h_sr2 = {1.0, 0.0};
    h.h_rd1 = unit(0.9);
    h.h_rd2 = unit(-2.2);
    const CodewordPair pair = CodewordPair::worst_case();
    for (const auto scheme :
         {SchemeVariant{Relaying::Blind, EhMode::Ieh}, SchemeVariant{Relaying::Blind, EhMode::Aeh},
          SchemeVariant{Relaying::CsiAssisted, EhMode::Ieh},
          SchemeVariant{Relaying::CsiAssisted, EhMode::Aeh}}) {
        SystemConfig cfg = table_config(scheme.relaying, scheme.eh_mode);
        const double beta0 = mca::variance_factor(cfg.noise_params(n0), 0);
        const EffectiveGains g = compute_effective_gains(cfg, n0, beta0, 1.0, 1.0);
        const double d2 = distance_sq(scheme, g, h, pair);
        const double expected = specfun::q_func(std::sqrt(d2 / (2.0 * beta0 * n0)));

        Rng rng(20);
        const int n = 1000000;
        int errors = 0;
        for (int i = 0; i < n; ++i) {
            const Frame f = synthesize_frame(cfg, n0, h, {0, 0, 0}, pair.s1, pair.s2, rng,
                                             NoiseModel::Composite);
            if (pairwise_error(f, pair)) ++errors;
        }
        const double sigma = std::sqrt(expected * (1.0 - expected) / n);
        CHECK(std::abs(static_cast<double>(errors) / n - expected) <= 3.0 * sigma);
    }
}

TEST_CASE("minimum distance decisions") {
    const SystemConfig cfg = table_config(Relaying::Blind, EhMode::Aeh);
    Rng rng(21);
    const channel::FadingRealization h = channel::sample_fading(rng);

    SUBCASE("noiseless frames decode to the transmitted codeword") {
        for (int c = 0; c < 4; ++c) {
            const Frame f =
                synthesize_frame(cfg, 0.0, h, {0, 0, 0}, kBpskCodebook[c][0], kBpskCodebook[c][1], rng);
            CHECK(mdr_decide(f) == c);
        }
    }

    SUBCASE("exact candidate match wins") {
        Frame f = synthesize_frame(cfg, 0.0, h, {0, 0, 0}, 1, 1, rng);
        f.y = candidate_signal(f.channel, -1, 1);
        CHECK(mdr_decide(f) == 2);
    }

    SUBCASE("high-noise limit decays to uniform guessing") {
        SystemConfig noisy = cfg;
        const double n0 = 1e6;
        Rng rng2(22);
        int errors = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const channel::FadingRealization hh = channel::sample_fading(rng2);
            const Frame f = synthesize_frame(noisy, n0, hh, {0, 0, 0}, 1, 1, rng2);
            if (mdr_decide(f) != 0) ++errors;
        }
        const double sigma = std::sqrt(0.75 * 0.25 / n);
        CHECK(std::abs(static_cast<double>(errors) / n - 0.75) <= 3.0 * sigma);
    }
}
