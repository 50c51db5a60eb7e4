#pragma once

#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace scalekit {

// ---------------------------------------------------------------------------
// Spectrally negative Levy models: X_t = c t + sigma B_t - sum of jumps,
// jump arrivals Poisson(rate), jump sizes > 0 drawn from the jump law.
// ---------------------------------------------------------------------------

enum class JumpLaw { none, exponential, fixed };

struct LevyModel {
    double drift = 0.0;     // c
    double gaussian = 0.0;  // sigma >= 0
    double jump_rate = 0.0;
    JumpLaw jump_law = JumpLaw::none;
    double jump_mean = 0.0;  // exponential law: mean jump size
    double jump_size = 0.0;  // fixed law: jump size
};

LevyModel brownian_model(double drift, double sigma);
LevyModel cramer_lundberg_model(double drift, double jump_rate, double jump_mean);
LevyModel fixed_jump_model(double drift, double sigma, double jump_rate, double jump_size);

// Throws std::invalid_argument unless sigma >= 0, rates/sizes are positive
// where used, and the paths are not monotone decreasing.
void validate(const LevyModel& m);

// Laplace exponent psi(lam) = log E[exp(lam X_1)], finite for Re(lam) >= 0.
double psi(const LevyModel& m, double lam);
std::complex<double> psi(const LevyModel& m, std::complex<double> lam);
double psi_prime(const LevyModel& m, double lam);
double psi_prime_at_zero(const LevyModel& m);  // right derivative at 0 = E[X_1]

// Largest root of psi(lam) = q on [0, inf); q >= 0. psi is convex with
// psi(0) = 0, so the root is found by a doubling bracket + bisection and
// polished by Newton to machine accuracy.
double phi(const LevyModel& m, double q);

// ---------------------------------------------------------------------------
// One-dimensional diffusions dX = mu(X) dt + sigma(X) dB on an open interval.
// ---------------------------------------------------------------------------

struct Interval {
    double left = -std::numeric_limits<double>::infinity();
    double right = std::numeric_limits<double>::infinity();
};

enum class CoefficientKind { constant, linear, table };

/// Named coefficient: constant v, linear a + b x, or a piecewise-linear table.
class Coefficient {
  public:
    Coefficient() = default;
    static Coefficient constant(double value);
    static Coefficient linear(double intercept, double slope);
    static Coefficient table(std::vector<double> x, std::vector<double> value);

    double operator()(double x) const;
    CoefficientKind kind() const { return kind_; }
    double intercept() const { return a_; }
    double slope() const { return b_; }
    const std::vector<double>& table_x() const { return xs_; }
    const std::vector<double>& table_value() const { return vs_; }

  private:
    CoefficientKind kind_ = CoefficientKind::constant;
    double a_ = 0.0, b_ = 0.0;
    std::vector<double> xs_, vs_;
};

struct DiffusionModel {
    Interval interval;
    Coefficient mu = Coefficient::constant(0.0);
    Coefficient sigma = Coefficient::constant(1.0);
    // Anchors the scale/speed pair: s'(reference_point) = 1. All scale
    // objects and Monte Carlo band measures for one model share this pair.
    double reference_point = 0.0;
};

DiffusionModel brownian_diffusion(double mu, double sigma);

void validate(const DiffusionModel& m);

// Scale density s' = exp(-int 2 mu/sigma^2), scale s (s(anchor) = 0) and
// speed density m' = 2/(sigma^2 s') sampled on a grid.
struct ScaleSpeedTable {
    std::vector<double> x, s, s_prime, m_prime;
};

/// Requires the anchor to be one of the grid nodes.
ScaleSpeedTable derive_scale_speed(const DiffusionModel& m, double anchor,
                                   std::span<const double> grid);

// Same computation with the anchor allowed off the grid (offset integral is
// done adaptively); used internally wherever the model's reference point is
// not a node of the working grid.
ScaleSpeedTable scale_speed_at_nodes(const DiffusionModel& m, double anchor,
                                     std::span<const double> nodes);

// Speed measure of [lo, hi] under the model's reference-point normalization.
double speed_measure(const DiffusionModel& m, double lo, double hi);

}  // namespace scalekit
