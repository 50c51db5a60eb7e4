#include "scalekit/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scalekit/numerics.hpp"

namespace scalekit {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

double rho_of(const LevyModel& m) { return 1.0 / m.jump_mean; }

}  // namespace

LevyModel brownian_model(double drift, double sigma) {
    LevyModel m;
    m.drift = drift;
    m.gaussian = sigma;
    validate(m);
    return m;
}

LevyModel cramer_lundberg_model(double drift, double jump_rate, double jump_mean) {
    LevyModel m;
    m.drift = drift;
    m.jump_rate = jump_rate;
    m.jump_law = JumpLaw::exponential;
    m.jump_mean = jump_mean;
    validate(m);
    return m;
}

LevyModel fixed_jump_model(double drift, double sigma, double jump_rate, double jump_size) {
    LevyModel m;
    m.drift = drift;
    m.gaussian = sigma;
    m.jump_rate = jump_rate;
    m.jump_law = JumpLaw::fixed;
    m.jump_size = jump_size;
    validate(m);
    return m;
}

void validate(const LevyModel& m) {
    require(std::isfinite(m.drift), "levy model: drift must be finite");
    require(m.gaussian >= 0.0 && std::isfinite(m.gaussian),
            "levy model: gaussian coefficient must be >= 0");
    require(m.jump_rate >= 0.0 && std::isfinite(m.jump_rate),
            "levy model: jump rate must be >= 0");
    if (m.jump_rate > 0.0) {
        require(m.jump_law != JumpLaw::none, "levy model: positive jump rate needs a jump law");
        if (m.jump_law == JumpLaw::exponential)
            require(m.jump_mean > 0.0, "levy model: exponential jump mean must be > 0");
        if (m.jump_law == JumpLaw::fixed)
            require(m.jump_size > 0.0, "levy model: fixed jump size must be > 0");
    }
    // Paths must be able to move upward: no Gaussian part forces positive drift.
    if (m.gaussian == 0.0)
        require(m.drift > 0.0, "levy model: paths are monotone decreasing (sigma = 0, drift <= 0)");
}

double psi(const LevyModel& m, double lam) {
    double v = m.drift * lam + 0.5 * m.gaussian * m.gaussian * lam * lam;
    if (m.jump_rate > 0.0) {
        if (m.jump_law == JumpLaw::exponential) {
            const double rho = rho_of(m);
            v += -m.jump_rate * lam / (rho + lam);
        } else {
            v += m.jump_rate * (std::exp(-lam * m.jump_size) - 1.0);
        }
    }
    return v;
}

std::complex<double> psi(const LevyModel& m, std::complex<double> lam) {
    std::complex<double> v = m.drift * lam + 0.5 * m.gaussian * m.gaussian * lam * lam;
    if (m.jump_rate > 0.0) {
        if (m.jump_law == JumpLaw::exponential) {
            const double rho = rho_of(m);
            v += -m.jump_rate * lam / (rho + lam);
        } else {
            v += m.jump_rate * (std::exp(-lam * m.jump_size) - 1.0);
        }
    }
    return v;
}

double psi_prime(const LevyModel& m, double lam) {
    double v = m.drift + m.gaussian * m.gaussian * lam;
    if (m.jump_rate > 0.0) {
        if (m.jump_law == JumpLaw::exponential) {
            const double rho = rho_of(m);
            v += -m.jump_rate * rho / ((rho + lam) * (rho + lam));
        } else {
            v += -m.jump_rate * m.jump_size * std::exp(-lam * m.jump_size);
        }
    }
    return v;
}

double psi_prime_at_zero(const LevyModel& m) { return psi_prime(m, 0.0); }

double phi(const LevyModel& m, double q) {
    validate(m);
    require(q >= 0.0 && std::isfinite(q), "phi: q must be >= 0");
    if (q == 0.0 && psi_prime_at_zero(m) >= 0.0) return 0.0;

    double hi = 1.0;
    int guard = 0;
    while (psi(m, hi) <= q) {
        hi *= 2.0;
        if (++guard > 2000) throw std::runtime_error("phi: bracket doubling failed");
    }
    double lo = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (psi(m, mid) > q ? hi : lo) = mid;
    }
    // Newton polish from the upper side; psi is convex so iterates stay above
    // the root and decrease monotonically.
    double x = hi;
    const double tol = 1e-15 * std::max(1.0, q);
    for (int i = 0; i < 60; ++i) {
        const double r = psi(m, x) - q;
        const double d = psi_prime(m, x);
        if (d <= 0.0) break;
        const double step = r / d;
        x -= step;
        if (x < lo) {
            x = lo;
            break;
        }
        if (std::abs(r) <= tol || std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return std::max(x, 0.0);
}

// --- diffusion coefficients -------------------------------------------------

Coefficient Coefficient::constant(double value) {
    Coefficient c;
    c.kind_ = CoefficientKind::constant;
    c.a_ = value;
    return c;
}

Coefficient Coefficient::linear(double intercept, double slope) {
    Coefficient c;
    c.kind_ = CoefficientKind::linear;
    c.a_ = intercept;
    c.b_ = slope;
    return c;
}

Coefficient Coefficient::table(std::vector<double> x, std::vector<double> value) {
    require(x.size() >= 2 && x.size() == value.size(),
            "coefficient table: need >= 2 matching nodes");
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        require(x[i + 1] > x[i], "coefficient table: abscissae must increase");
    Coefficient c;
    c.kind_ = CoefficientKind::table;
    c.xs_ = std::move(x);
    c.vs_ = std::move(value);
    return c;
}

double Coefficient::operator()(double x) const {
    switch (kind_) {
        case CoefficientKind::constant:
            return a_;
        case CoefficientKind::linear:
            return a_ + b_ * x;
        case CoefficientKind::table: {
            if (x <= xs_.front()) return vs_.front();
            if (x >= xs_.back()) return vs_.back();
            const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
            const double t = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
            return vs_[i] + t * (vs_[i + 1] - vs_[i]);
        }
    }
    return a_;
}

DiffusionModel brownian_diffusion(double mu, double sigma) {
    DiffusionModel m;
    m.mu = Coefficient::constant(mu);
    m.sigma = Coefficient::constant(sigma);
    validate(m);
    return m;
}

void validate(const DiffusionModel& m) {
    require(m.interval.left < m.interval.right, "diffusion model: empty interval");
    require(std::isfinite(m.reference_point) && m.reference_point > m.interval.left &&
                m.reference_point < m.interval.right,
            "diffusion model: reference point must lie inside the interval");
    // pointwise positivity is enforced again wherever sigma is evaluated;
    // this catches plainly degenerate models up front
    const double s0 = m.sigma(m.reference_point);
    require(std::isfinite(s0) && s0 > 0.0,
            "diffusion model: sigma must be positive at the reference point");
}

namespace {

double sigma_at(const DiffusionModel& m, double x) {
    const double s = m.sigma(x);
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::runtime_error("diffusion model: sigma(" + std::to_string(x) +
                                 ") = " + std::to_string(s) + " is not positive");
    return s;
}

double drift_over_var(const DiffusionModel& m, double x) {
    const double s = sigma_at(m, x);
    return 2.0 * m.mu(x) / (s * s);
}

}  // namespace

ScaleSpeedTable scale_speed_at_nodes(const DiffusionModel& m, double anchor,
                                     std::span<const double> nodes) {
    validate(m);
    require(!nodes.empty(), "scale_speed_at_nodes: empty grid");
    require(anchor > m.interval.left && anchor < m.interval.right,
            "scale_speed_at_nodes: anchor outside interval");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        require(nodes[i + 1] > nodes[i], "scale_speed_at_nodes: grid must increase");
    require(nodes.front() > m.interval.left && nodes.back() < m.interval.right,
            "scale_speed_at_nodes: grid leaves the interval");

    const auto f = [&](double x) { return drift_over_var(m, x); };

    // J(x) = int_{nodes[0]}^x 2 mu/sigma^2 on a x4-refined copy of the grid.
    const std::size_t n = nodes.size();
    const int refine = 4;
    std::vector<double> fine;
    fine.reserve((n - 1) * refine + 1);
    fine.push_back(nodes[0]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = (nodes[i + 1] - nodes[i]) / refine;
        for (int k = 1; k < refine; ++k) fine.push_back(nodes[i] + k * h);
        fine.push_back(nodes[i + 1]);
    }
    const std::vector<double> J = cumulative_integral(f, fine, 2);

    const double snap =
        grid_snap_rel * std::max({1.0, std::abs(anchor), std::abs(fine.back() - fine.front())});
    const auto anchor_node = [&]() -> long {
        const auto it = std::lower_bound(fine.begin(), fine.end(), anchor - snap);
        if (it != fine.end() && std::abs(*it - anchor) <= snap) return it - fine.begin();
        return -1;
    }();

    double J_anchor;
    if (anchor_node >= 0)
        J_anchor = J[static_cast<std::size_t>(anchor_node)];
    else if (anchor < fine.front())
        J_anchor = -adaptive_simpson(f, anchor, fine.front(), 1e-13);
    else if (anchor > fine.back())
        J_anchor = J.back() + adaptive_simpson(f, fine.back(), anchor, 1e-13);
    else {
        const std::size_t j =
            static_cast<std::size_t>(std::upper_bound(fine.begin(), fine.end(), anchor) -
                                     fine.begin()) -
            1;
        J_anchor = J[j] + adaptive_simpson(f, fine[j], anchor, 1e-13);
    }

    std::vector<double> sp_fine(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) sp_fine[i] = std::exp(-(J[i] - J_anchor));

    // S(x) = int_{nodes[0]}^x s' by composite Simpson over pairs of fine
    // cells; the half-cell value uses the quadratic through three samples.
    std::vector<double> S(fine.size(), 0.0);
    for (std::size_t i = 0; i + 2 < fine.size(); i += 2) {
        const double h = fine[i + 1] - fine[i];
        S[i + 1] = S[i] + h / 12.0 * (5.0 * sp_fine[i] + 8.0 * sp_fine[i + 1] - sp_fine[i + 2]);
        S[i + 2] = S[i] + h / 3.0 * (sp_fine[i] + 4.0 * sp_fine[i + 1] + sp_fine[i + 2]);
    }

    // s' anchored as above, evaluated off the fine grid (rare path).
    const auto sprime_near = [&](std::size_t j) {
        return [&, j](double u) {
            const double dJ = (u >= fine[j]) ? adaptive_simpson(f, fine[j], u, 1e-13)
                                             : -adaptive_simpson(f, u, fine[j], 1e-13);
            return std::exp(-(J[j] + dJ - J_anchor));
        };
    };
    double S_anchor;
    if (anchor_node >= 0)
        S_anchor = S[static_cast<std::size_t>(anchor_node)];
    else if (anchor < fine.front())
        S_anchor = -adaptive_simpson(sprime_near(0), anchor, fine.front(), 1e-13);
    else if (anchor > fine.back())
        S_anchor = S.back() + adaptive_simpson(sprime_near(fine.size() - 1), fine.back(), anchor, 1e-13);
    else {
        const std::size_t j =
            static_cast<std::size_t>(std::upper_bound(fine.begin(), fine.end(), anchor) -
                                     fine.begin()) -
            1;
        S_anchor = S[j] + adaptive_simpson(sprime_near(j), fine[j], anchor, 1e-13);
    }

    ScaleSpeedTable out;
    out.x.assign(nodes.begin(), nodes.end());
    out.s.resize(n);
    out.s_prime.resize(n);
    out.m_prime.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = i * refine;
        out.s[i] = S[k] - S_anchor;
        out.s_prime[i] = sp_fine[k];
        const double sig = sigma_at(m, nodes[i]);
        out.m_prime[i] = 2.0 / (sig * sig * sp_fine[k]);
        if (!std::isfinite(out.s[i]) || !std::isfinite(out.m_prime[i]))
            throw std::runtime_error("scale_speed_at_nodes: non-finite value at x = " +
                                     std::to_string(nodes[i]));
    }
    return out;
}

ScaleSpeedTable derive_scale_speed(const DiffusionModel& m, double anchor,
                                   std::span<const double> grid) {
    require(!grid.empty(), "derive_scale_speed: empty grid");
    const double step = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
    const double snap = grid_snap_rel * std::max(1.0, std::abs(step));
    const bool on_grid = std::any_of(grid.begin(), grid.end(),
                                     [&](double x) { return std::abs(x - anchor) <= snap; });
    require(on_grid, "derive_scale_speed: anchor must be a grid node");
    return scale_speed_at_nodes(m, anchor, grid);
}

double speed_measure(const DiffusionModel& m, double lo, double hi) {
    validate(m);
    require(lo < hi, "speed_measure: empty range");
    const auto nodes = linspace(lo, hi, 65);
    const auto table = scale_speed_at_nodes(m, m.reference_point, nodes);
    double acc = 0.0;
    const double h = nodes[1] - nodes[0];
    acc = integrate_uniform(table.m_prime, h);
    return acc;
}

}  // namespace scalekit
