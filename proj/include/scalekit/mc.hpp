#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scalekit/models.hpp"

namespace scalekit {

struct McConfig {
    std::uint64_t seed = 1;
    long paths = 100000;
    double dt = 1e-4;       // Euler step (diffusion) / Gaussian sampling step (Levy)
    double horizon = 50.0;  // paths still inside at this time are truncated
    bool bridge = true;     // Brownian-bridge crossing correction between steps
    int threads = 1;
};

struct McEstimate {
    double value = 0.0;
    double se = 0.0;
};

using Band = std::pair<double, double>;

// Two-sided exit statistics started from x in the window (b, a), b < a:
//   up:            e^{-q T} on paths reaching a before b
//   down:          e^{-q T} on paths reaching b first (jumps may overshoot)
//   occupation[i]: int_0^T e^{-qt} 1{X_t in bands[i]} dt
// Truncated paths contribute zero exit payoff and their occupation up to the
// horizon; the induced bias on the exit estimates is at most
// (truncated / paths) e^{-q horizon}.
struct ExitStats {
    McEstimate up, down;
    std::vector<McEstimate> occupation;
    long truncated = 0;
    long paths = 0;

    double truncation_bias_bound(double q, double horizon) const;
};

// Paths are generated from per-path RNG streams keyed by (seed, path index)
// and reduced block by block in a fixed order, so results are bit-identical
// for any thread count.
ExitStats simulate_exit(const DiffusionModel& model, double q, double b, double a, double x,
                        const std::vector<Band>& bands, const McConfig& cfg);

// Exact skeleton for the Levy models: jump epochs are Exp(rate) events; in
// between, drift-only paths are handled in closed form and Gaussian paths by
// exact normal increments of length <= dt with optional bridge correction.
ExitStats simulate_exit(const LevyModel& model, double q, double b, double a, double x,
                        const std::vector<Band>& bands, const McConfig& cfg);

}  // namespace scalekit
