#include "scalekit/duality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "scalekit/diffusion_scale.hpp"
#include "scalekit/levy_scale.hpp"

namespace scalekit {

namespace {

// c_hat(u) = c(-u), optionally negated (drift flips sign, volatility does not)
Coefficient reflect_coef(const Coefficient& c, bool negate) {
    const double sgn = negate ? -1.0 : 1.0;
    switch (c.kind()) {
        case CoefficientKind::constant:
            return Coefficient::constant(sgn * c.intercept());
        case CoefficientKind::linear:
            // a + b(-u) maps to (sgn a) + (-sgn b) u
            return Coefficient::linear(sgn * c.intercept(), -sgn * c.slope());
        case CoefficientKind::table: {
            std::vector<double> xs(c.table_x().rbegin(), c.table_x().rend());
            for (auto& v : xs) v = -v;
            std::vector<double> vs(c.table_value().rbegin(), c.table_value().rend());
            if (negate)
                for (auto& v : vs) v = -v;
            return Coefficient::table(std::move(xs), std::move(vs));
        }
    }
    throw std::logic_error("reflect_coef: unreachable");
}

}  // namespace

DiffusionModel reflect_model(const DiffusionModel& m) {
    DiffusionModel out;
    out.interval = {-m.interval.right, -m.interval.left};
    out.mu = reflect_coef(m.mu, true);
    out.sigma = reflect_coef(m.sigma, false);
    out.reference_point = -m.reference_point;
    return out;
}

LevyModel reflect_model(const LevyModel& m) { return m; }

double check_scale_symmetry(const DiffusionModel& m, double q, double lo, double hi, int cells,
                            int n) {
    if (n < 2) throw std::invalid_argument("check_scale_symmetry: need n >= 2");
    const DiffusionModel dual = reflect_model(m);
    const auto pts = linspace(lo, hi, n);
    const double h = (hi - lo) / cells;
    double worst = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double y = pts[static_cast<std::size_t>(iy)];
        if (!(y < hi)) continue;
        const int fwd_cells = std::max(2, static_cast<int>(std::lround((hi - y) / h)));
        DiffusionScale fwd(m, q, y, hi, fwd_cells);
        for (int ix = iy + 1; ix < n; ++ix) {
            const double x = pts[static_cast<std::size_t>(ix)];
            const int bwd_cells = std::max(2, static_cast<int>(std::lround((x - lo) / h)));
            DiffusionScale bwd(dual, q, -x, -lo, bwd_cells);
            worst = std::max(worst, std::abs(fwd.w(x) - bwd.w(-y)));
        }
    }
    return worst;
}

double check_scale_symmetry(const LevyModel& m, double q, double lo, double hi, int n) {
    if (n < 2) throw std::invalid_argument("check_scale_symmetry: need n >= 2");
    const LevyScale fwd(m, q);
    const LevyScale bwd(reflect_model(m), q);
    const auto pts = linspace(lo, hi, n);
    double worst = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = iy + 1; ix < n; ++ix) {
            const double x = pts[static_cast<std::size_t>(ix)];
            const double y = pts[static_cast<std::size_t>(iy)];
            worst = std::max(worst, std::abs(fwd.w(x - y) - bwd.w((-y) - (-x))));
        }
    return worst;
}

LocalTimeDuality check_local_time_duality(const DiffusionModel& m, double q, double b, double a,
                                          double x, double y, double eps, const McConfig& cfg) {
    if (!(b < x && x < a) || !(b < y && y < a))
        throw std::invalid_argument("check_local_time_duality: x and y must lie in (b, a)");
    if (!(eps > 0.0)) throw std::invalid_argument("check_local_time_duality: eps must be > 0");
    const DiffusionModel dual = reflect_model(m);

    LocalTimeDuality out;
    const ExitStats fwd = simulate_exit(m, q, b, a, x, {{y - eps, y + eps}}, cfg);
    McConfig bcfg = cfg;
    bcfg.seed = cfg.seed + 1;  // independent stream for the reflected run
    const ExitStats bwd = simulate_exit(dual, q, -a, -b, -y, {{-x - eps, -x + eps}}, bcfg);

    out.band_mass_forward = speed_measure(m, y - eps, y + eps);
    out.band_mass_backward = speed_measure(dual, -x - eps, -x + eps);
    out.forward = {fwd.occupation[0].value / out.band_mass_forward,
                   fwd.occupation[0].se / out.band_mass_forward};
    out.backward = {bwd.occupation[0].value / out.band_mass_backward,
                    bwd.occupation[0].se / out.band_mass_backward};
    // a truncated path underestimates occupation by at most e^{-q H} (a - b) m'(.)
    // worth of band time; exit identities are unaffected here, so fold both
    // runs' truncation fractions into one conservative bound
    const double fb = fwd.truncation_bias_bound(q, cfg.horizon);
    const double bb = bwd.truncation_bias_bound(q, cfg.horizon);
    out.bias_bound = (fb / out.band_mass_forward + bb / out.band_mass_backward) / std::max(q, 0.02);
    return out;
}

}  // namespace scalekit
