#pragma once

#include <memory>
#include <vector>

#include "scalekit/diffusion_scale.hpp"
#include "scalekit/levy_scale.hpp"
#include "scalekit/models.hpp"

namespace scalekit {

// Interface the exit functionals consume: two-parameter scale functions plus
// the density of the measure the killed resolvent integrates against
// (Lebesgue for a Levy process, the speed measure for a diffusion).
class ScaleProvider {
  public:
    virtual ~ScaleProvider() = default;
    virtual double W(double x, double y) const = 0;  // 0 for x < y
    virtual double Z(double x, double y) const = 0;  // 1 for x <= y or q = 0
    virtual double speed_density(double y) const = 0;
    virtual double q() const = 0;
};

class LevyScaleProvider final : public ScaleProvider {
  public:
    LevyScaleProvider(LevyModel model, double q, ScaleMethod method = ScaleMethod::automatic,
                      InversionParams params = {});
    const LevyScale& scale() const { return scale_; }
    double W(double x, double y) const override { return scale_.w(x - y); }
    double Z(double x, double y) const override { return scale_.z(x - y); }
    double speed_density(double) const override { return 1.0; }
    double q() const override { return scale_.q(); }

  private:
    LevyScale scale_;
};

// One Volterra solve per master-grid node, cached lazily; Z at node-aligned
// arguments is the composite Simpson sum of the cached node values against
// the speed density. Keeping Z and the killed resolvent on the same grid and
// rule makes the identity up + down + q * resolvent = 1 cancel to roundoff
// at node-aligned evaluation points.
class DiffusionScaleProvider final : public ScaleProvider {
  public:
    DiffusionScaleProvider(DiffusionModel model, double q, double lo, double hi, int cells);
    const DiffusionModel& model() const { return model_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int cells() const { return cells_; }

    double W(double x, double y) const override;
    double Z(double x, double y) const override;
    double speed_density(double y) const override;
    double q() const override { return q_; }

  private:
    const DiffusionScale& node_scale(int j) const;
    double node_w(int j, double x) const;
    // nearest node index, or -1 if y is not within snap tolerance of a node
    int node_index(double y) const;

    DiffusionModel model_;
    double q_, lo_, hi_, h_;
    int cells_;
    ScaleSpeedTable table_;
    mutable std::vector<std::unique_ptr<DiffusionScale>> cache_;
};

// Two-sided exit identities for the window b < x < a (b the lower barrier,
// a the upper):
//   up_exit    E_x[e^{-q T_a}; T_a < T_b]           = W(x,b) / W(a,b)
//   down_exit  E_x[e^{-q T_b}; T_b < T_a]           = Z(x,b) - W(x,b) Z(a,b) / W(a,b)
//   green      E_x[int_0^T e^{-qt} 1{X_t near y} dt] ~ g(x,y) m(dy)
//     with g(x,y) = W(x,b) W(a,y) / W(a,b) - W(x,y)
double up_exit(const ScaleProvider& sp, double b, double a, double x);
double down_exit(const ScaleProvider& sp, double b, double a, double x);
double green_density(const ScaleProvider& sp, double b, double a, double x, double y);

// int_b^a g(x,y) m(dy), the mean discounted occupation of the window up to
// exit. Composite Simpson on `cells` uniform cells. The integrand jumps at
// y = x when W(0) > 0 (bounded variation paths), so the diagonal node is
// evaluated one-sidedly on each flank; when x sits on an even-index node the
// combined weights match the single-grid rule exactly, otherwise the two
// flanks are integrated on their own even-cell grids.
double killed_resolvent(const ScaleProvider& sp, double b, double a, double x, int cells);

}  // namespace scalekit
