#include "scalekit/levy_scale.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "scalekit/numerics.hpp"

namespace scalekit {

namespace {

// Real roots of a*b^2 + b*beta + c... (stable quadratic; roots are known to be
// real and distinct at every call site).
std::pair<double, double> quadratic_roots(double a, double b, double c) {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw std::logic_error("quadratic_roots: complex pair");
    const double sq = std::sqrt(disc);
    const double t = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    const double r1 = t / a;
    const double r2 = (t != 0.0) ? c / t : -b / a - r1;
    return {r1, r2};
}

double horner(const std::vector<double>& p, double x) {
    double v = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

std::vector<double> derivative(const std::vector<double>& p) {
    std::vector<double> d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<double>(i));
    return d;
}

}  // namespace

LevyScale::LevyScale(LevyModel model, double q, ScaleMethod method, InversionParams params)
    : model_(std::move(model)), q_(q), method_(method), params_(params) {
    validate(model_);
    if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument("LevyScale: q must be >= 0");
    phi_ = scalekit::phi(model_, q_);

    const bool rational = model_.jump_law != JumpLaw::fixed || model_.jump_rate == 0.0;
    if (method_ == ScaleMethod::closed_form && !rational)
        throw std::invalid_argument("LevyScale: no closed form for fixed-size jumps");
    const bool strict = method_ == ScaleMethod::closed_form;
    if (method_ == ScaleMethod::automatic)
        method_ = rational ? ScaleMethod::closed_form : ScaleMethod::laplace_inversion;
    if (method_ != ScaleMethod::closed_form) return;

    // Partial fractions of 1/(psi(beta) - q) = N(beta)/P(beta) with P a
    // polynomial of degree <= 3. All roots are real; W is sum A_i e^{r_i x}
    // with A_i = N(r_i)/P'(r_i), plus an x e^{r x} term at a confluent root.
    const double c = model_.drift, sg = model_.gaussian;
    const double lam = model_.jump_rate > 0.0 ? model_.jump_rate : 0.0;
    const bool jumps = lam > 0.0;
    const double rho = jumps ? 1.0 / model_.jump_mean : 0.0;

    std::vector<double> roots;
    std::vector<double> P;  // ascending coefficients
    if (!jumps && sg == 0.0) {
        terms_.push_back({1.0 / c, q_ / c});  // pure drift: 1/(c beta - q)
        return;
    }
    if (!jumps) {
        P = {-q_, c, 0.5 * sg * sg};
        if (q_ == 0.0 && c == 0.0) {  // double root at 0: W(x) = 2 x / sg^2
            linear_coef_ = 2.0 / (sg * sg);
            linear_rate_ = 0.0;
            return;
        }
        if (q_ == 0.0) {
            roots = {0.0, -2.0 * c / (sg * sg)};
        } else {
            const auto [r1, r2] = quadratic_roots(P[2], P[1], P[0]);
            roots = {r1, r2};
        }
    } else if (sg == 0.0) {
        P = {-q_ * rho, c * rho - lam - q_, c};
        if (q_ == 0.0 && c * rho == lam) {  // double root at 0: W(x) = (1 + rho x)/c
            terms_.push_back({1.0 / c, 0.0});
            linear_coef_ = rho / c;
            linear_rate_ = 0.0;
            return;
        }
        if (q_ == 0.0) {
            roots = {0.0, (lam - c * rho) / c};
        } else {
            const auto [r1, r2] = quadratic_roots(P[2], P[1], P[0]);
            roots = {r1, r2};
        }
    } else {
        P = {-q_ * rho, c * rho - lam - q_, c + 0.5 * sg * sg * rho, 0.5 * sg * sg};
        if (q_ == 0.0 && c * rho == lam) {
            // cubic with a double root at 0; no clean partial fraction form
            if (strict)
                throw std::invalid_argument("LevyScale: confluent roots at q = 0; use inversion");
            method_ = ScaleMethod::laplace_inversion;
            return;
        }
        if (q_ == 0.0) {
            const auto [r1, r2] = quadratic_roots(P[3], P[2], P[1]);
            roots = {0.0, r1, r2};
        } else {
            // deflate by the known largest root phi(q)
            const double b2 = P[3];
            const double b1 = P[2] + b2 * phi_;
            const double b0 = P[1] + b1 * phi_;
            const auto [r1, r2] = quadratic_roots(b2, b1, b0);
            roots = {phi_, r1, r2};
        }
    }

    // partial fractions degrade as roots coalesce; outside the exact double
    // root cases handled above, fall back to inversion
    double scale = 1.0, gap = std::numeric_limits<double>::infinity();
    for (double r : roots) scale = std::max(scale, std::abs(r));
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            gap = std::min(gap, std::abs(roots[i] - roots[j]));
    if (gap < 1e-5 * scale) {
        if (strict) throw std::invalid_argument("LevyScale: nearly confluent roots; use inversion");
        method_ = ScaleMethod::laplace_inversion;
        return;
    }

    const auto Pd = derivative(P);
    for (double r : roots) {
        // one Newton step against accumulated deflation error
        const double pd = horner(Pd, r);
        if (pd != 0.0) r -= horner(P, r) / pd;
        const double num = jumps ? (rho + r) : 1.0;
        terms_.push_back({num / horner(Pd, r), r});
    }
}

double LevyScale::w_at_zero() const {
    if (model_.gaussian > 0.0) return 0.0;
    return 1.0 / model_.drift;  // bounded variation
}

double LevyScale::w_closed(double x) const {
    double v = 0.0;
    for (const auto& t : terms_) v += t.coef * std::exp(t.rate * x);
    if (linear_coef_ != 0.0) v += linear_coef_ * x * std::exp(linear_rate_ * x);
    return v;
}

// Abate-Whitt Euler-summation Bromwich inversion of the tilted transform
// F(s) = 1/(psi(s + phi(q)) - q) at t = x; the preimage exp(-phi x) W(x) is
// bounded, so the discretization error is O(e^{-A}). Returns the Euler
// average over the last `euler` partial sums; the caller compares two
// truncation levels for an error estimate.
double LevyScale::invert_tilted(double x, int terms) const {
    const double A = params_.a_param;
    const int M = params_.euler;
    const double t = x;
    const auto F = [&](const std::complex<double>& s) {
        return (1.0 / (psi(model_, s + phi_) - q_)).real();
    };
    double partial = 0.5 * F({A / (2.0 * t), 0.0});
    double sign = -1.0;
    double acc = 0.0;
    double binom = 1.0;  // C(M, j) scan
    double binom_sum = 0.0;
    for (int k = 1; k <= terms + M; ++k) {
        partial += sign * F({A / (2.0 * t), k * std::numbers::pi / t});
        sign = -sign;
        if (k >= terms) {
            const int j = k - terms;
            acc += binom * partial;
            binom_sum += binom;
            binom = binom * (M - j) / (j + 1.0);
        }
    }
    return std::exp(0.5 * A) / t * (acc / binom_sum);
}

double LevyScale::w_inverted(double x) const {
    int terms = params_.terms;
    for (int attempt = 0; attempt < 3; ++attempt) {
        const double v = invert_tilted(x, terms);
        const double v_short = invert_tilted(x, terms - 4);
        if (std::abs(v - v_short) <= params_.tol * std::max(1.0, std::abs(v)))
            return std::exp(phi_ * x) * v;
        terms *= 2;
    }
    throw std::runtime_error("LevyScale: Laplace inversion did not converge at x = " +
                             std::to_string(x));
}

double LevyScale::w(double x) const {
    if (x < 0.0) return 0.0;
    if (x == 0.0) return w_at_zero();
    return method_ == ScaleMethod::closed_form ? w_closed(x) : w_inverted(x);
}

double LevyScale::z(double x) const {
    if (x <= 0.0 || q_ == 0.0) return 1.0;
    if (method_ == ScaleMethod::closed_form) {
        double acc = 0.0;
        for (const auto& t : terms_)
            acc += t.coef * (std::abs(t.rate) > 0.0 ? std::expm1(t.rate * x) / t.rate : x);
        if (linear_coef_ != 0.0) acc += 0.5 * linear_coef_ * x * x;  // only at q = 0
        return 1.0 + q_ * acc;
    }
    int panels = std::max(50, static_cast<int>(std::ceil(x / 0.02)));
    panels += panels % 2;
    return 1.0 + q_ * simpson([this](double u) { return w(u); }, 0.0, x, panels);
}

double LevyScale::resolvent_density(double x) const {
    if (!(q_ > 0.0)) throw std::invalid_argument("resolvent_density: requires q > 0");
    // r(0+) = phi'(q) by central differences; the implicit-function value
    // 1/psi'(phi(q)) must agree to 1e-8 or the root solve has gone bad.
    const double h = std::min(1e-5 * std::max(1.0, q_), 0.5 * q_);
    const double r0 = (scalekit::phi(model_, q_ + h) - scalekit::phi(model_, q_ - h)) / (2.0 * h);
    const double r0_implicit = 1.0 / psi_prime(model_, phi_);
    if (std::abs(r0 - r0_implicit) > 1e-8 * std::max(1.0, std::abs(r0_implicit)))
        throw std::logic_error("resolvent_density: phi'(q) routes disagree beyond 1e-8");
    if (x >= 0.0) return std::exp(-phi_ * x) * r0;
    return std::exp(-phi_ * x) * r0 - w(-x);
}

std::pair<double, double> LevyScale::laplace_check(double beta) const {
    if (!(beta > phi_ + 0.1))
        throw std::invalid_argument("laplace_check: beta must exceed phi(q) + 0.1");
    const double rhs = 1.0 / (psi(model_, beta) - q_);
    // choose M so that int_M^inf e^{-beta u} W(u) du ~ e^{-beta M} W(M)/(beta - phi)
    // is negligible against rhs
    double M = std::max(1.0, 2.0 / (beta - phi_));
    for (int i = 0; i < 400; ++i) {
        const double tail = std::exp((phi_ - beta) * M) * (std::exp(-phi_ * M) * w(M)) /
                            (beta - phi_);
        if (tail <= 1e-10 * std::max(1.0, rhs)) break;
        M *= 1.5;
        if (i == 399) throw std::runtime_error("laplace_check: tail cut not found");
    }
    const double lhs = adaptive_simpson(
        [&](double u) { return std::exp(-beta * u) * w(u); }, 0.0, M, 1e-9 * std::abs(rhs));
    return {lhs, rhs};
}

}  // namespace scalekit
