#pragma once

#include "scalekit/mc.hpp"
#include "scalekit/models.hpp"

namespace scalekit {

// Spatial reflection of a diffusion: -X has drift -mu(-u) and volatility
// sigma(-u), the state interval flips sign, and the reference point maps to
// its negative, so the reflected speed density satisfies m'_hat(u) = m'(-u)
// (both models share one speed measure under u -> -u). Applying the map
// twice reproduces the input exactly.
DiffusionModel reflect_model(const DiffusionModel& m);

// For a spectrally negative Levy process the time-reversal dual is -X; its
// spatial reflection is X again, so the dual pair collapses to the model
// itself.
LevyModel reflect_model(const LevyModel& m);

// max over an n x n grid of |W(x, y) - W_hat(-y, -x)|, x > y in [lo, hi],
// with W_hat the reflected model's scale function. The diffusion version
// runs two independent Volterra solves per pair on cells covering [lo, hi];
// the residual is bounded by twice the solver error. The Levy version builds
// the dual scale object separately and the residual is exactly zero.
double check_scale_symmetry(const DiffusionModel& m, double q, double lo, double hi, int cells,
                            int n);
double check_scale_symmetry(const LevyModel& m, double q, double lo, double hi, int n);

// Green-function symmetry g(x, y) = g_hat(-y, -x) probed by simulation: the
// discounted occupation of a band at y started from x (window (b, a)) is
// compared against the reflected model's occupation of a band at -x started
// from -y (window (-a, -b)). Both estimates are normalized by the speed
// mass of their band; the backward run draws from an independent stream.
struct LocalTimeDuality {
    McEstimate forward, backward;       // band occupation / band speed mass
    double band_mass_forward = 0.0;
    double band_mass_backward = 0.0;
    double bias_bound = 0.0;            // truncation bias, both runs combined
};

LocalTimeDuality check_local_time_duality(const DiffusionModel& m, double q, double b, double a,
                                          double x, double y, double eps, const McConfig& cfg);

}  // namespace scalekit
