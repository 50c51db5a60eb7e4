#pragma once

#include <utility>
#include <vector>

#include "scalekit/models.hpp"

namespace scalekit {

// Bromwich inversion controls: Abate-Whitt Euler summation with `terms`
// partial sums before the binomial average over `euler` more. The truncation
// error is estimated a posteriori from two truncation levels; if it exceeds
// tol * max(1, |value|) the term budget is doubled twice before giving up.
struct InversionParams {
    double a_param = 20.5;
    int terms = 44;
    int euler = 16;
    double tol = 1e-7;
};

enum class ScaleMethod { automatic, closed_form, laplace_inversion };

// q-scale function machinery for a spectrally negative Levy model. W is the
// increasing function on [0, inf) with Laplace transform 1/(psi(beta) - q) for
// beta > phi(q), extended by 0 on (-inf, 0); Z(x) = 1 + q int_0^x W.
//
// Models with exponential (or no) jumps admit a closed form: 1/(psi - q) is
// rational, so W is a sum of two or three real exponentials obtained by
// partial fractions. Everything else goes through numerical inversion of the
// tilted transform 1/(psi(beta + phi(q)) - q), whose preimage
// exp(-phi(q) x) W(x) is bounded.
class LevyScale {
  public:
    LevyScale(LevyModel model, double q, ScaleMethod method = ScaleMethod::automatic,
              InversionParams params = {});

    const LevyModel& model() const { return model_; }
    double q() const { return q_; }
    double phi() const { return phi_; }
    ScaleMethod method() const { return method_; }  // resolved, never automatic

    double w(double x) const;
    double z(double x) const;

    // Resolvent density of the free process killed at rate q (q > 0), with
    // respect to Lebesgue measure; the value at 0 is the right limit.
    double resolvent_density(double x) const;

    // (int_0^inf e^{-beta x} W(x) dx, 1/(psi(beta) - q)) for beta > phi(q) + 0.1;
    // the two routes are independent up to the shared model definition.
    std::pair<double, double> laplace_check(double beta) const;

  private:
    struct Term {
        double coef, rate;
    };

    double w_closed(double x) const;
    double w_inverted(double x) const;
    double w_at_zero() const;
    double invert_tilted(double x, int terms) const;

    LevyModel model_;
    double q_;
    double phi_;
    ScaleMethod method_;
    InversionParams params_;
    std::vector<Term> terms_;   // sum coef * exp(rate x)
    double linear_coef_ = 0.0;  // + linear_coef * x * exp(linear_rate * x)
    double linear_rate_ = 0.0;
};

}  // namespace scalekit
