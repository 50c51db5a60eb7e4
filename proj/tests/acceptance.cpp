// End-to-end acceptance checks. Each criterion prints one [PASS]/[FAIL] line;
// the binary exits nonzero if any criterion fails. Oracles are either pinned
// constants derived from classical closed forms, independent quadratures, or
// Monte Carlo runs with explicit error budgets.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "scalekit/diffusion_scale.hpp"
#include "scalekit/duality.hpp"
#include "scalekit/exit.hpp"
#include "scalekit/levy_scale.hpp"
#include "scalekit/mc.hpp"
#include "scalekit/models.hpp"

using namespace scalekit;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int g_failed = 0;

void criterion(int id, const char* name, double wall_limit, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome oc;
    try {
        oc = fn();
    } catch (const std::exception& e) {
        oc = {false, std::string("exception: ") + e.what()};
    }
    const double el =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (oc.ok && wall_limit > 0.0 && el > wall_limit) {
        oc.ok = false;
        oc.detail = "over wall-clock limit of " + std::to_string(wall_limit) + " s";
    }
    std::printf("[%s] %02d %s (%.2f s)%s%s\n", oc.ok ? "PASS" : "FAIL", id, name, el,
                oc.detail.empty() ? "" : ": ", oc.detail.c_str());
    std::fflush(stdout);
    if (!oc.ok) ++g_failed;
}

std::string describe(const char* what, double worst, double tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3g exceeds %.3g", what, worst, tol);
    return {buf};
}

// classical two-barrier Brownian transforms, derived from the ODE
// (sigma^2/2) v'' + mu v' = q v with boundary data at b and a
double bm_down_classical(double mu, double sigma, double q, double b, double a, double x) {
    const double g = mu / (sigma * sigma);
    const double eta = std::sqrt(g * g + 2.0 * q / (sigma * sigma));
    return std::exp(-g * (x - b)) * std::sinh(eta * (a - x)) / std::sinh(eta * (a - b));
}

double bm_up_classical(double mu, double sigma, double q, double b, double a, double x) {
    const double g = mu / (sigma * sigma);
    const double eta = std::sqrt(g * g + 2.0 * q / (sigma * sigma));
    return std::exp(g * (a - x)) * std::sinh(eta * (x - b)) / std::sinh(eta * (a - b));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------------------

Outcome laplace_sweep() {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::vector<LevyModel> models = {brownian_model(0.0, 1.0), brownian_model(1.0, 1.0),
                                           brownian_model(-1.0, 1.0),
                                           cramer_lundberg_model(1.5, 1.0, 1.0)};
    double worst = 0.0;
    for (const auto& m : models) {
        for (int i = 0; i < 20; ++i) {
            const double q = 3.0 * U(rng);
            const double beta = phi(m, q) + 0.15 + 4.0 * U(rng);
            const auto [lhs, rhs] = LevyScale(m, q).laplace_check(beta);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
    }
    if (worst > 1e-6) return {false, describe("relative error", worst, 1e-6)};
    return {true, {}};
}

Outcome closed_vs_inversion() {
    double worst = 0.0;
    for (const auto& m : {brownian_model(0.0, 1.0), cramer_lundberg_model(1.5, 1.0, 1.0)}) {
        for (double q : {0.0, 0.5, 2.0}) {
            const LevyScale closed(m, q, ScaleMethod::closed_form);
            const LevyScale inv(m, q, ScaleMethod::laplace_inversion);
            for (double x : linspace(0.0, 5.0, 51)) {
                const double cw = closed.w(x);
                worst = std::max(worst, std::abs(cw - inv.w(x)) / std::max(1.0, cw));
                const double cz = closed.z(x);
                worst = std::max(worst, std::abs(cz - inv.z(x)) / std::max(1.0, cz));
            }
        }
    }
    if (worst > 1e-6) return {false, describe("route disagreement", worst, 1e-6)};
    return {true, {}};
}

Outcome resolvent_decomposition() {
    struct Case {
        LevyModel m;
        double q;
    };
    LevyModel mixed = cramer_lundberg_model(1.5, 1.0, 1.0);
    mixed.gaussian = 0.6;
    const std::vector<Case> cases = {{brownian_model(0.0, 1.0), 0.5},
                                     {brownian_model(1.0, 1.0), 0.25},
                                     {cramer_lundberg_model(2.0, 1.0, 0.5), 0.75},
                                     {mixed, 0.8}};
    double worst = 0.0;
    for (const auto& c : cases) {
        const LevyScale s(c.m, c.q);
        const double p = phi(c.m, c.q);
        const double r0 = s.resolvent_density(0.0);
        // two routes to the mass at the origin
        worst = std::max(worst, std::abs(r0 - 1.0 / psi_prime(c.m, p)));
        for (double x : {0.25, 1.0, 2.5}) {
            worst = std::max(worst, std::abs(s.resolvent_density(x) - std::exp(-p * x) * r0));
            worst = std::max(worst, std::abs(s.resolvent_density(-x) -
                                             (std::exp(p * x) * r0 - s.w(x))));
        }
    }
    // pinned: driftless unit Brownian at q = 1/2 has r(-1) = 1/e
    const LevyScale bm(brownian_model(0.0, 1.0), 0.5);
    worst = std::max(worst, std::abs(bm.resolvent_density(-1.0) - std::exp(-1.0)));
    if (worst > 1e-8) return {false, describe("residual", worst, 1e-8)};
    return {true, {}};
}

Outcome volterra_convergence() {
    const auto m = brownian_diffusion(0.0, 1.0);
    const auto err = [&](int cells) {
        return std::abs(solve_psi(m, 0.5, 0.0, 1.0, cells).back() - std::sinh(1.0));
    };
    const double at_h3 = err(1000);
    if (at_h3 > 1e-6) return {false, describe("error at h = 1e-3", at_h3, 1e-6)};
    const double ratio = err(500) / at_h3;
    if (ratio < 3.0 || ratio > 5.0)
        return {false, describe("halving ratio outside [3, 5]:", ratio, 5.0)};
    return {true, {}};
}

Outcome exit_vs_monte_carlo() {
    struct Case {
        const char* name;
        bool levy;
        LevyModel lm;
        DiffusionModel dm;
        double q, b, a, x;
        double pinned_up;  // NaN when no pinned constant applies
    };
    const double nan = std::nan("");
    const auto bm = brownian_model(0.0, 1.0);
    const auto cl = cramer_lundberg_model(1.5, 1.0, 1.0);
    const auto w0 = [](double x) { return 2.0 - 4.0 / 3.0 * std::exp(-x / 3.0); };
    const std::vector<Case> cases = {
        {"bm q=0", true, bm, {}, 0.0, 0.0, 1.0, 0.3, 0.3},
        {"bm q=0.5", true, bm, {}, 0.5, 0.0, 1.0, 0.3, std::sinh(0.3) / std::sinh(1.0)},
        {"cl q=0", true, cl, {}, 0.0, -2.0, 1.0, 0.0, w0(2.0) / w0(3.0)},
        {"cl q=0.5", true, cl, {}, 0.5, -2.0, 1.0, 0.0, nan},
        {"diffusion bm q=0.5", false, {}, brownian_diffusion(0.0, 1.0), 0.5, 0.0, 1.0, 0.5,
         0.44340944470998407},
        {"diffusion drift q=0", false, {}, brownian_diffusion(-1.0, 1.0), 0.0, 0.0, 1.0, 0.5,
         0.2689414213699951}};
    McConfig mc;
    mc.paths = 100000;
    mc.dt = 1e-4;
    int idx = 0;
    for (const auto& c : cases) {
        mc.seed = 42 + idx++;
        double up, down;
        ExitStats st;
        if (c.levy) {
            const LevyScaleProvider sp(c.lm, c.q);
            up = up_exit(sp, c.b, c.a, c.x);
            down = down_exit(sp, c.b, c.a, c.x);
            st = simulate_exit(c.lm, c.q, c.b, c.a, c.x, {}, mc);
        } else {
            const DiffusionScaleProvider sp(c.dm, c.q, c.b, c.a, 1000);
            up = up_exit(sp, c.b, c.a, c.x);
            down = down_exit(sp, c.b, c.a, c.x);
            st = simulate_exit(c.dm, c.q, c.b, c.a, c.x, {}, mc);
        }
        const bool exact = c.levy && c.lm.gaussian == 0.0;
        const double dt_bias = exact ? 0.0 : 10.0 * mc.dt;
        const double trunc = st.truncation_bias_bound(c.q, mc.horizon);
        if (!std::isnan(c.pinned_up) && std::abs(up - c.pinned_up) > 2e-6)
            return {false, std::string(c.name) + ": analytic up drifted from pinned value"};
        const double eu = std::abs(up - st.up.value);
        const double bu = 3.0 * st.up.se + trunc + dt_bias;
        if (eu > bu) return {false, std::string(c.name) + " up: " + describe("", eu, bu)};
        const double ed = std::abs(down - st.down.value);
        const double bd = 3.0 * st.down.se + trunc + dt_bias;
        if (ed > bd) return {false, std::string(c.name) + " down: " + describe("", ed, bd)};
    }
    return {true, {}};
}

Outcome green_occupation() {
    const auto m = brownian_diffusion(0.0, 1.0);
    const double b = 0.0, a = 1.0, x = 0.3, eps = 0.02;
    const std::vector<double> centers = {0.3, 0.5, 0.7};
    std::vector<Band> bands;
    for (double c : centers) bands.emplace_back(c - eps, c + eps);

    // exact anchor before any simulation: in natural scale at q = 0 the green
    // density is W(x,b) W(a,y) / W(a,b) = 0.3 * 0.3
    {
        const DiffusionScaleProvider sp(m, 0.0, b, a, 1000);
        if (std::abs(green_density(sp, b, a, 0.3, 0.7) - 0.09) > 1e-9)
            return {false, "q=0 anchor g(0.3, 0.7) != 0.09"};
    }

    McConfig mc;
    mc.paths = 100000;
    mc.dt = 1e-4;
    int idx = 0;
    for (double q : {0.0, 0.5}) {
        mc.seed = 142 + idx++;
        const DiffusionScaleProvider sp(m, q, b, a, 1000);
        const auto st = simulate_exit(m, q, b, a, x, bands, mc);
        const double trunc = st.truncation_bias_bound(q, mc.horizon);
        for (std::size_t i = 0; i < bands.size(); ++i) {
            const double yc = centers[i];
            const double g = green_density(sp, b, a, x, yc);
            const double mass = speed_measure(m, bands[i].first, bands[i].second);
            const double est = st.occupation[i].value / mass;
            const double se = st.occupation[i].se / mass;
            double budget = 3.0 * se + 2.0 * eps * eps + 10.0 * mc.dt +
                            trunc / (mass * std::max(q, 0.02));
            if (std::abs(x - yc) < eps) budget += 0.30 * eps;  // s'(x) = 1 in natural scale
            const double err = std::abs(g - est);
            if (err > budget) {
                char buf[120];
                std::snprintf(buf, sizeof buf, "q=%g band %g: error %.3g budget %.3g", q, yc,
                              err, budget);
                return {false, buf};
            }
        }
    }
    return {true, {}};
}

Outcome chain_and_sinh() {
    double worst_formula = 0.0, worst_chain = 0.0;
    // Brownian windows against the classical two-barrier transforms
    for (double mu : {0.0, 1.0, -1.0}) {
        for (double q : {0.5, 2.0}) {
            const LevyScaleProvider sp(brownian_model(mu, 1.0), q);
            const double b = 0.0, a = 1.0, x = 0.5;
            const double up = up_exit(sp, b, a, x);
            const double down = down_exit(sp, b, a, x);
            worst_formula =
                std::max(worst_formula, std::abs(down - bm_down_classical(mu, 1.0, q, b, a, x)));
            worst_formula =
                std::max(worst_formula, std::abs(up - bm_up_classical(mu, 1.0, q, b, a, x)));
            const double chain = up + down + q * killed_resolvent(sp, b, a, x, 1200);
            worst_chain = std::max(worst_chain, std::abs(chain - 1.0));
        }
    }
    // bounded-variation model: the diagonal of the green density jumps
    {
        const LevyScaleProvider sp(cramer_lundberg_model(1.5, 1.0, 1.0), 0.5);
        const double chain = up_exit(sp, -2.0, 1.0, 0.0) + down_exit(sp, -2.0, 1.0, 0.0) +
                             0.5 * killed_resolvent(sp, -2.0, 1.0, 0.0, 1200);
        worst_chain = std::max(worst_chain, std::abs(chain - 1.0));
    }
    // diffusions: node-aligned evaluation cancels discretely
    for (const auto& dm : {brownian_diffusion(0.0, 1.0), brownian_diffusion(-1.0, 1.0)}) {
        const DiffusionScaleProvider sp(dm, 0.5, 0.0, 1.0, 800);
        const double chain = up_exit(sp, 0.0, 1.0, 0.5) + down_exit(sp, 0.0, 1.0, 0.5) +
                             0.5 * killed_resolvent(sp, 0.0, 1.0, 0.5, 800);
        worst_chain = std::max(worst_chain, std::abs(chain - 1.0));
    }
    if (worst_formula > 1e-8)
        return {false, describe("two-barrier transform residual", worst_formula, 1e-8)};
    if (worst_chain > 1e-8) return {false, describe("chain residual", worst_chain, 1e-8)};
    return {true, {}};
}

Outcome duality_symmetry() {
    const auto m = brownian_diffusion(-1.0, 1.0);
    const double res = check_scale_symmetry(m, 0.5, -1.0, 1.0, 2000, 10);
    if (res > 1e-5) return {false, describe("diffusion residual", res, 1e-5)};
    const double levy_bm = check_scale_symmetry(brownian_model(0.3, 1.0), 0.5, -1.0, 1.0, 10);
    const double levy_cl =
        check_scale_symmetry(cramer_lundberg_model(1.5, 1.0, 1.0), 0.7, -2.0, 1.0, 10);
    if (levy_bm != 0.0 || levy_cl != 0.0)
        return {false, "Levy reflection residual must vanish identically"};
    return {true, {}};
}

Outcome local_time_duality() {
    const auto m = brownian_diffusion(-1.0, 1.0);
    struct Case {
        double x, y, q;
    };
    const std::vector<Case> cases = {{0.3, 0.6, 0.5}, {0.5, 0.5, 0.5}, {0.7, 0.4, 0.0}};
    McConfig mc;
    mc.paths = 50000;
    mc.dt = 2e-4;
    int idx = 0;
    for (const auto& c : cases) {
        mc.seed = 1000 + idx++;
        const auto r = check_local_time_duality(m, c.q, 0.0, 1.0, c.x, c.y, 0.02, mc);
        const double budget = 3.0 * std::hypot(r.forward.se, r.backward.se) + r.bias_bound +
                              2.0 * 0.02 * 0.02 + 20.0 * mc.dt;
        const double err = std::abs(r.forward.value - r.backward.value);
        if (err > budget) {
            char buf[120];
            std::snprintf(buf, sizeof buf, "(x=%g, y=%g, q=%g): error %.3g budget %.3g", c.x,
                          c.y, c.q, err, budget);
            return {false, buf};
        }
    }
    return {true, {}};
}

Outcome reproducible_reports() {
    const char* cli = std::getenv("SCALEKIT_CLI");
    const char* cfgs = std::getenv("SCALEKIT_CONFIGS");
    if (!cli || !cfgs) return {false, "SCALEKIT_CLI / SCALEKIT_CONFIGS not set"};
    const std::string base = std::string("\"") + cli + "\" verify \"" + cfgs +
                             "/verify_identities_bm.json\"";
    const auto run = [&](const std::string& extra) {
        const std::string cmd = base + " " + extra + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return status != -1 && WIFEXITED(status) ? WEXITSTATUS(status) : -2;
    };
    if (run("--threads 1 --out acc_t1.json") != 0) return {false, "threads=1 run failed"};
    if (run("--threads 2 --out acc_t2.json") != 0) return {false, "threads=2 run failed"};
    if (run("--threads 4 --out acc_t4.json") != 0) return {false, "threads=4 run failed"};
    if (run("--threads 1 --out acc_t1b.json") != 0) return {false, "rerun failed"};
    const auto t1 = slurp("acc_t1.json");
    if (t1.empty()) return {false, "missing report output"};
    if (t1 != slurp("acc_t2.json") || t1 != slurp("acc_t4.json"))
        return {false, "reports differ across thread counts"};
    if (t1 != slurp("acc_t1b.json")) return {false, "reports differ across reruns"};
    const auto j = nlohmann::ordered_json::parse(t1);
    if (j.at("all_pass") != true) return {false, "verification rows did not all pass"};
    return {true, {}};
}

}  // namespace

int main() {
    criterion(1, "laplace transform identity, random (q, beta) sweep", 10.0, laplace_sweep);
    criterion(2, "closed form vs numerical inversion on [0, 5]", 10.0, closed_vs_inversion);
    criterion(3, "resolvent decomposition and origin mass", 0.0, resolvent_decomposition);
    criterion(4, "Volterra march hits sinh and converges at order 2", 5.0, volterra_convergence);
    criterion(5, "two-sided exit laws vs path simulation", 0.0, exit_vs_monte_carlo);
    criterion(6, "green density vs banded occupation times", 0.0, green_occupation);
    criterion(7, "two-barrier transforms and the exit chain", 0.0, chain_and_sinh);
    criterion(8, "reflection symmetry of scale functions", 0.0, duality_symmetry);
    criterion(9, "local time duality by simulation", 0.0, local_time_duality);
    criterion(10, "byte-identical verification reports", 0.0, reproducible_reports);
    if (g_failed > 0) {
        std::printf("%d criterion(s) failed\n", g_failed);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
