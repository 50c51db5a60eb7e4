#include "scalekit/runner.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "scalekit/diffusion_scale.hpp"
#include "scalekit/duality.hpp"
#include "scalekit/exit.hpp"
#include "scalekit/levy_scale.hpp"
#include "scalekit/mc.hpp"

namespace scalekit {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return {buf};
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("run_task: cannot open output file " + path);
    return out;
}

ScaleMethod method_from(const std::string& s) {
    if (s == "auto") return ScaleMethod::automatic;
    if (s == "closed") return ScaleMethod::closed_form;
    if (s == "inversion") return ScaleMethod::laplace_inversion;
    throw std::invalid_argument("config: unknown method '" + s + "'");
}

int resolvent_cells(const RunConfig& cfg) {
    if (cfg.cells > 0) return cfg.cells;
    return cfg.kind == ModelKind::diffusion ? 800 : 1200;
}

std::unique_ptr<ScaleProvider> make_provider(const RunConfig& cfg, double q) {
    if (cfg.kind == ModelKind::levy)
        return std::make_unique<LevyScaleProvider>(cfg.levy, q, method_from(cfg.method));
    return std::make_unique<DiffusionScaleProvider>(cfg.diffusion, q, cfg.window_b, cfg.window_a,
                                                    resolvent_cells(cfg));
}

int task_psi_table(const RunConfig& cfg) {
    if (cfg.kind != ModelKind::levy)
        throw std::invalid_argument("psi-table: requires a Levy model");
    auto out = open_out(cfg.out);
    out << "lambda,psi,psi_prime\n";
    for (double lam : linspace(cfg.grid.lo, cfg.grid.hi, cfg.grid.points))
        out << fmt(lam) << ',' << fmt(psi(cfg.levy, lam)) << ',' << fmt(psi_prime(cfg.levy, lam))
            << '\n';
    return 0;
}

int task_scale_table(const RunConfig& cfg) {
    auto out = open_out(cfg.out);
    out << "x,y,q,W,Z\n";
    const auto xs = linspace(cfg.grid.lo, cfg.grid.hi, cfg.grid.points);
    for (double q : cfg.q) {
        if (cfg.kind == ModelKind::levy) {
            LevyScale scale(cfg.levy, q, method_from(cfg.method));
            for (double x : xs)
                out << fmt(x) << ",0," << fmt(q) << ',' << fmt(scale.w(x)) << ','
                    << fmt(scale.z(x)) << '\n';
        } else {
            const int cells = cfg.cells > 0 ? cfg.cells
                                            : std::max(200, static_cast<int>(std::ceil(
                                                                (cfg.grid.hi - cfg.base) / 1e-3)));
            DiffusionScaleProvider sp(cfg.diffusion, q, cfg.base, cfg.grid.hi, cells);
            for (double x : xs)
                out << fmt(x) << ',' << fmt(cfg.base) << ',' << fmt(q) << ','
                    << fmt(sp.W(x, cfg.base)) << ',' << fmt(sp.Z(x, cfg.base)) << '\n';
        }
    }
    return 0;
}

int task_exit(const RunConfig& cfg) {
    auto out = open_out(cfg.out);
    out << "b,a,x,q,up_exit,down_exit,mean_discounted_occupation\n";
    for (double q : cfg.q) {
        const auto sp = make_provider(cfg, q);
        for (double x0 : cfg.starts) {
            const double up = up_exit(*sp, cfg.window_b, cfg.window_a, x0);
            const double down = down_exit(*sp, cfg.window_b, cfg.window_a, x0);
            const double kr =
                killed_resolvent(*sp, cfg.window_b, cfg.window_a, x0, resolvent_cells(cfg));
            out << fmt(cfg.window_b) << ',' << fmt(cfg.window_a) << ',' << fmt(x0) << ','
                << fmt(q) << ',' << fmt(up) << ',' << fmt(down) << ',' << fmt(kr) << '\n';
        }
    }
    return 0;
}

int task_resolvent(const RunConfig& cfg) {
    if (cfg.kind != ModelKind::levy)
        throw std::invalid_argument("resolvent: requires a Levy model");
    auto out = open_out(cfg.out);
    out << "x,q,r\n";
    for (double q : cfg.q) {
        LevyScale scale(cfg.levy, q, method_from(cfg.method));
        for (double x : linspace(cfg.grid.lo, cfg.grid.hi, cfg.grid.points))
            out << fmt(x) << ',' << fmt(q) << ',' << fmt(scale.resolvent_density(x)) << '\n';
    }
    return 0;
}

// magnitude of the derivative jump of y -> g(x0, y) across y = x0, which
// sets the band-averaging bias of the occupation estimate
double green_kink_magnitude(const RunConfig& cfg, double x0) {
    if (cfg.kind == ModelKind::levy) {
        if (cfg.levy.gaussian > 0.0) return 2.0 / (cfg.levy.gaussian * cfg.levy.gaussian);
        return 0.0;  // bounded variation: the jump of g itself is budgeted separately
    }
    const std::array<double, 2> pts{x0, x0 + 1e-3};
    return scale_speed_at_nodes(cfg.diffusion, cfg.diffusion.reference_point, pts).s_prime[0];
}

}  // namespace

VerificationReport verify_identities(const RunConfig& cfg) {
    VerificationReport rep;
    std::vector<Band> bands;
    for (double c : cfg.band_centers) bands.emplace_back(c - cfg.band_eps, c + cfg.band_eps);
    const bool exact_paths = cfg.kind == ModelKind::levy && cfg.levy.gaussian == 0.0;
    const double dt_bias = exact_paths ? 0.0 : 10.0 * cfg.mc.dt;
    for (double q : cfg.q) {
        const auto sp = make_provider(cfg, q);
        for (double x0 : cfg.starts) {
            const double b = cfg.window_b, a = cfg.window_a;
            const double up = up_exit(*sp, b, a, x0);
            const double down = down_exit(*sp, b, a, x0);
            const double kr = killed_resolvent(*sp, b, a, x0, resolvent_cells(cfg));
            const ExitStats mc = cfg.kind == ModelKind::levy
                                     ? simulate_exit(cfg.levy, q, b, a, x0, bands, cfg.mc)
                                     : simulate_exit(cfg.diffusion, q, b, a, x0, bands, cfg.mc);
            const double trunc = mc.truncation_bias_bound(q, cfg.mc.horizon);
            rep.rows.push_back(make_row(
                "up-exit", "E_x[e^{-qT_a}; T_a < T_b] = W(x,b)/W(a,b)", up, mc.up.value,
                3.0 * mc.up.se + trunc + dt_bias));
            rep.rows.push_back(make_row(
                "down-exit", "E_x[e^{-qT_b}; T_b < T_a] = Z(x,b) - W(x,b) Z(a,b)/W(a,b)", down,
                mc.down.value, 3.0 * mc.down.se + trunc + dt_bias));
            rep.rows.push_back(make_row("chain", "up + down + q int_b^a g(x,y) m(dy) = 1",
                                        up + down + q * kr, 1.0, 1e-6));
            for (std::size_t i = 0; i < bands.size(); ++i) {
                const double yc = cfg.band_centers[i];
                const double g = green_density(*sp, b, a, x0, yc);
                const double mass = cfg.kind == ModelKind::levy
                                        ? 2.0 * cfg.band_eps
                                        : speed_measure(cfg.diffusion, bands[i].first,
                                                        bands[i].second);
                const double est = mc.occupation[i].value / mass;
                const double se = mc.occupation[i].se / mass;
                double budget = 3.0 * se + 2.0 * cfg.band_eps * cfg.band_eps + dt_bias +
                                trunc / (mass * std::max(q, 0.02));
                if (std::abs(x0 - yc) < cfg.band_eps) {
                    budget += 0.30 * cfg.band_eps * green_kink_magnitude(cfg, x0);
                    if (exact_paths && cfg.levy.drift > 0.0)
                        budget += 0.55 / cfg.levy.drift;  // g itself jumps at y = x
                }
                rep.rows.push_back(make_row(
                    "green", "E_x[int_0^T e^{-qt} 1{X_t near y} dt] = g(x,y) m(band)", g, est,
                    budget));
            }
        }
    }
    return rep;
}

VerificationReport verify_duality(const RunConfig& cfg) {
    if (cfg.q.empty()) throw std::invalid_argument("verify-duality: empty q list");
    VerificationReport rep;
    const double q0 = cfg.q.front();
    if (cfg.kind == ModelKind::levy) {
        const double res =
            check_scale_symmetry(cfg.levy, q0, cfg.window_b, cfg.window_a, cfg.grid.points);
        rep.rows.push_back(make_row("scale-symmetry", "W(x,y) = W_hat(-y,-x)", res, 0.0,
                                    cfg.budget));
        return rep;
    }
    const int cells = resolvent_cells(cfg);
    const double res = check_scale_symmetry(cfg.diffusion, q0, cfg.window_b, cfg.window_a, cells,
                                            cfg.grid.points);
    rep.rows.push_back(make_row("scale-symmetry", "W(x,y) = W_hat(-y,-x)", res, 0.0,
                                cfg.budget > 0.0 ? cfg.budget : 1e-5));
    for (double q : cfg.q) {
        const auto ltd = check_local_time_duality(cfg.diffusion, q, cfg.window_b, cfg.window_a,
                                                  cfg.x, cfg.y, cfg.band_eps, cfg.mc);
        const double budget = 3.0 * std::hypot(ltd.forward.se, ltd.backward.se) +
                              ltd.bias_bound + 2.0 * cfg.band_eps * cfg.band_eps +
                              20.0 * cfg.mc.dt;
        rep.rows.push_back(make_row("local-time", "g(x,y) = g_hat(-y,-x)", ltd.forward.value,
                                    ltd.backward.value, budget));
    }
    return rep;
}

VerificationReport laplace_rows(const RunConfig& cfg) {
    if (cfg.kind != ModelKind::levy)
        throw std::invalid_argument("laplace-check: requires a Levy model");
    VerificationReport rep;
    for (double q : cfg.q) {
        LevyScale scale(cfg.levy, q, method_from(cfg.method));
        for (double beta : cfg.betas) {
            const auto [lhs, rhs] = scale.laplace_check(beta);
            rep.rows.push_back(make_row("laplace-transform",
                                        "int_0^inf e^{-beta x} W(x) dx = 1/(psi(beta) - q)", rhs,
                                        lhs, 1e-6 * std::max(1.0, std::abs(rhs))));
        }
    }
    return rep;
}

int run_task(const RunConfig& cfg) {
    if (cfg.task == "psi-table") return task_psi_table(cfg);
    if (cfg.task == "scale-table") return task_scale_table(cfg);
    if (cfg.task == "exit") return task_exit(cfg);
    if (cfg.task == "resolvent") return task_resolvent(cfg);
    if (is_verification_task(cfg.task)) {
        VerificationReport rep;
        if (cfg.task == "verify-identities") rep = verify_identities(cfg);
        if (cfg.task == "verify-duality") rep = verify_duality(cfg);
        if (cfg.task == "laplace-check") rep = laplace_rows(cfg);
        write_report(rep, cfg.out);
        return rep.all_pass() ? 0 : 1;
    }
    throw std::invalid_argument("run_task: unknown task '" + cfg.task + "'");
}

}  // namespace scalekit
