#pragma once

#include <vector>

#include "scalekit/models.hpp"
#include "scalekit/numerics.hpp"

namespace scalekit {

// Two-parameter scale function of a regular one-dimensional diffusion on a
// uniform grid. With s the scale function and m' the speed density (both
// normalized at the model reference point), W^(q)(., y) solves the Volterra
// equation
//
//   W(x, y) = s(x) - s(y) + q * int_y^x (s(x) - s(u)) W(u, y) m'(u) du
//
// marched explicitly with the product trapezoid rule; the kernel vanishes at
// u = x, so no implicit solve is needed. Convergence is O(h^2).
//
// solve_psi returns W(x_k, base) at the nodes x_k = base + k h, k = 0..cells.
std::vector<double> solve_psi(const ScaleSpeedTable& table, double q);

std::vector<double> solve_psi(const DiffusionModel& model, double q, double base, double hi,
                              int cells);

// One base point, W(., base) on [base, hi] with monotone cubic interpolation
// between nodes (values at nodes are the march output itself).
class DiffusionScale {
  public:
    DiffusionScale(DiffusionModel model, double q, double base, double hi, int cells);

    const DiffusionModel& model() const { return model_; }
    double q() const { return q_; }
    double base() const { return base_; }
    double hi() const { return hi_; }
    double h() const { return h_; }

    // W(x, base); zero for x < base, interpolated for off-node x in [base, hi]
    double w(double x) const;

    // node access, k = 0..cells
    const std::vector<double>& node_values() const { return psi_; }

  private:
    DiffusionModel model_;
    double q_, base_, hi_, h_;
    std::vector<double> psi_;
    Pchip interp_;
};

// Z^(q)(x, y) = 1 + q * int_y^x W^(q)(x, u) m'(u) du. The integrand needs a
// fresh Volterra solve per quadrature node u (the base point varies), so this
// is the expensive route; DiffusionScaleProvider in exit.hpp caches the
// per-node solves when many evaluations share a grid. `cells` spans [y, x].
double diffusion_z(const DiffusionModel& model, double q, double x, double y, int cells);

}  // namespace scalekit
