#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace swiptpep::specfun {

// Controls for the semi-infinite adaptive integrator.
struct QuadratureSpec {
    double relative_tolerance = 1e-9;
    double absolute_tolerance = 1e-12;
    int max_subdivisions = 2000;

    void validate() const;  // throws std::invalid_argument on a bad spec
};

// Raised when the integrator cannot reach the requested tolerance; carries the
// best available estimate and its error bound.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

  private:
    double best_estimate_;
    double error_bound_;
};

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_func(double x);

// Upper incomplete gamma function at zero order,
//
//            inf
//             /  -t
//   G(0,x) = |  e  / t dt,   x > 0.
//            /
//            x
//
// Series expansion below x = 1, continued fraction above.
double gamma_upper_zero(double x);

// exp(x) * G(0,x) without overflow for any x > 0. The continued-fraction
// branch produces the scaled product directly, which keeps the large-x
// regime exact where exp(x) alone would overflow.
double gamma_upper_zero_scaled(double x);

// Principal-value exponential integral Ei(x), x != 0. Negative arguments are
// routed through Ei(-y) = -G(0,y) so the two functions share one source of
// truth.
double expint_ei(double x);

// Integral of f over (0,inf). The domain is mapped to (0,1) with t = u/(1-u)
// and integrated by globally adaptive Gauss-Kronrod 7/15 bisection. The open
// rule never evaluates the endpoints, so integrable singularities at 0 and
// exponential decay at infinity are handled without special casing.
// Deterministic: identical inputs give bit-identical results.
double quad_semi_infinite(const std::function<double(double)>& f,
                          const QuadratureSpec& spec = QuadratureSpec{});

}  // namespace swiptpep::specfun
