#pragma once

#include <functional>
#include <span>
#include <vector>

namespace scalekit {

// Nodes x[0] < x[1] < ... treated as exactly equal when within this fraction
// of the local grid step.
inline constexpr double grid_snap_rel = 1e-9;

std::vector<double> linspace(double a, double b, int points);

// Single Simpson panel over [a, b] using the midpoint.
double simpson_panel(const std::function<double(double)>& f, double a, double b);

// Composite Simpson over [a, b] with n equal panels (midpoint rule per panel).
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

// Adaptive Simpson with absolute tolerance. Throws std::runtime_error if the
// recursion depth is exhausted before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 48);

// Cumulative integral of f along `nodes`, one value per node (first is 0).
// Each cell is integrated by composite Simpson on `refine` sub-panels, so the
// result is O(h^4) in the largest cell width.
std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        std::span<const double> nodes, int refine = 4);

// Integral of uniformly sampled values with spacing h: composite Simpson when
// the panel count is even, otherwise Simpson on the leading panels plus one
// trapezoid tail panel.
double integrate_uniform(std::span<const double> values, double h);

// Trapezoid rule on arbitrary increasing nodes.
double trapezoid(std::span<const double> nodes, std::span<const double> values);

// Shape-preserving piecewise-cubic interpolant (Fritsch-Carlson slopes):
// monotone data produce a monotone interpolant, nodal values are reproduced
// exactly.
class Pchip {
  public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, d_;  // nodes, values, nodal slopes
};

}  // namespace scalekit
