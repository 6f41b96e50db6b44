#include "swiptpep/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace swiptpep::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// E1(x) = G(0,x) by power series, 0 < x <= 1:
//   E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k * k!)
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;  // (-x)^k / k!
    for (int k = 1; k <= 80; ++k) {
        term *= -x / k;
        const double add = -term / k;
        sum += add;
        if (std::abs(add) < 1e-18 * (std::abs(sum) + 1e-30)) {
            break;
        }
    }
    return -kEulerGamma - std::log(x) + sum;
}

// Modified Lentz evaluation of the continued fraction
//   exp(x) E1(x) = 1 / (x+1 - 1/(x+3 - 4/(x+5 - 9/(x+7 - ...))))
// Reliable for x >= 1.
double e1_scaled_cf(double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k <= 400; ++k) {
        const double a = -static_cast<double>(k) * static_cast<double>(k);
        b += 2.0;
        d = a * d + b;
        if (d == 0.0) d = tiny;
        c = b + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    return h;
}

void require_finite(double x, const char* who) {
    if (!std::isfinite(x)) {
        throw std::domain_error(std::string(who) + ": argument must be finite");
    }
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7/15 pair on [-1,1].

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
};

Segment gk15(const std::function<double(double)>& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_center = g(center);
    double kronrod = kWgk[7] * f_center;
    double gauss = kWg[3] * f_center;

    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = g(center - dx) + g(center + dx);
        kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * fsum;
        }
    }
    const double value = kronrod * half;
    const double error = std::abs((kronrod - gauss) * half);
    return Segment{a, b, value, error};
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0)) {
        throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
    }
    if (max_subdivisions < 1) {
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    }
}

double q_func(double x) {
    require_finite(x, "q_func");
    return 0.5 * std::erfc(x * 0.70710678118654752440084436210485);
}

double gamma_upper_zero(double x) {
    require_finite(x, "gamma_upper_zero");
    if (x <= 0.0) {
        throw std::domain_error("gamma_upper_zero: argument must be positive");
    }
    if (x < 1.0) {
        return e1_series(x);
    }
    return std::exp(-x) * e1_scaled_cf(x);
}

double gamma_upper_zero_scaled(double x) {
    require_finite(x, "gamma_upper_zero_scaled");
    if (x <= 0.0) {
        throw std::domain_error("gamma_upper_zero_scaled: argument must be positive");
    }
    if (x < 1.0) {
        return std::exp(x) * e1_series(x);
    }
    return e1_scaled_cf(x);
}

double expint_ei(double x) {
    require_finite(x, "expint_ei");
    if (x == 0.0) {
        throw std::domain_error("expint_ei: argument must be nonzero");
    }
    if (x < 0.0) {
        return -gamma_upper_zero(-x);
    }
    if (x <= 40.0) {
        // Ei(x) = gamma + ln x + sum_{k>=1} x^k / (k * k!); all terms positive.
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k <= 160; ++k) {
            term *= x / k;
            const double add = term / k;
            sum += add;
            if (add < 1e-17 * sum) {
                break;
            }
        }
        return kEulerGamma + std::log(x) + sum;
    }
    // Asymptotic expansion truncated at the smallest term.
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k <= 60; ++k) {
        const double next = term * k / x;
        if (next >= term) {
            break;
        }
        term = next;
        sum += term;
    }
    return std::exp(x) / x * sum;
}

double quad_semi_infinite(const std::function<double(double)>& f, const QuadratureSpec& spec) {
    spec.validate();

    // Fold (0,inf) onto (0,1).
    const auto g = [&f](double u) {
        const double om = 1.0 - u;
        return f(u / om) / (om * om);
    };

    std::vector<Segment> segments;
    segments.reserve(64);
    segments.push_back(gk15(g, 0.0, 1.0));

    for (;;) {
        double total = 0.0;
        double err = 0.0;
        for (const Segment& s : segments) {
            total += s.value;
            err += s.error;
        }
        if (err <= std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(total))) {
            return total;
        }
        if (static_cast<int>(segments.size()) >= spec.max_subdivisions) {
            throw QuadratureError("quad_semi_infinite: tolerance not reached within max_subdivisions",
                                  total, err);
        }

        // Split the segment with the largest error; ties resolve to the
        // leftmost segment so the refinement order is reproducible.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segments.size(); ++i) {
            if (segments[i].error > segments[worst].error ||
                (segments[i].error == segments[worst].error && segments[i].a < segments[worst].a)) {
                worst = i;
            }
        }
        const double a = segments[worst].a;
        const double b = segments[worst].b;
        const double mid = 0.5 * (a + b);
        segments[worst] = gk15(g, a, mid);
        segments.push_back(gk15(g, mid, b));
    }
}

}  // namespace swiptpep::specfun
