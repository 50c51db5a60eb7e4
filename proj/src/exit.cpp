#include "scalekit/exit.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace scalekit {

LevyScaleProvider::LevyScaleProvider(LevyModel model, double q, ScaleMethod method,
                                     InversionParams params)
    : scale_(std::move(model), q, method, params) {}

DiffusionScaleProvider::DiffusionScaleProvider(DiffusionModel model, double q, double lo,
                                               double hi, int cells)
    : model_(std::move(model)), q_(q), lo_(lo), hi_(hi), h_((hi - lo) / cells), cells_(cells) {
    if (!(hi > lo)) throw std::invalid_argument("DiffusionScaleProvider: need hi > lo");
    if (cells < 2) throw std::invalid_argument("DiffusionScaleProvider: need at least two cells");
    table_ = scale_speed_at_nodes(model_, model_.reference_point, linspace(lo_, hi_, cells_ + 1));
    cache_.resize(static_cast<std::size_t>(cells_) + 1);
}

int DiffusionScaleProvider::node_index(double y) const {
    const double k = (y - lo_) / h_;
    const auto j = std::llround(k);
    if (j < 0 || j > cells_) return -1;
    if (std::abs(k - static_cast<double>(j)) >= grid_snap_rel * cells_) return -1;
    return static_cast<int>(j);
}

const DiffusionScale& DiffusionScaleProvider::node_scale(int j) const {
    auto& slot = cache_[static_cast<std::size_t>(j)];
    if (!slot)
        slot = std::make_unique<DiffusionScale>(model_, q_, table_.x[static_cast<std::size_t>(j)],
                                                hi_, cells_ - j);
    return *slot;
}

// W(x, base node j); avoids instantiating a solve when the value is zero by
// convention (x at or below the base, including the base at the last node)
double DiffusionScaleProvider::node_w(int j, double x) const {
    if (j >= cells_ || x <= table_.x[static_cast<std::size_t>(j)]) return 0.0;
    return node_scale(j).w(x);
}

double DiffusionScaleProvider::W(double x, double y) const {
    if (x <= y) return 0.0;
    if (y < lo_ - grid_snap_rel * (hi_ - lo_) || x > hi_ + grid_snap_rel * (hi_ - lo_))
        throw std::out_of_range("DiffusionScaleProvider::W: arguments outside master grid");
    const int j = node_index(y);
    if (j >= 0) return node_w(j, x);
    DiffusionScale adhoc(model_, q_, y, x,
                         std::max(2, static_cast<int>(std::ceil((x - y) / h_))));
    return adhoc.node_values().back();
}

double DiffusionScaleProvider::speed_density(double y) const {
    const int j = node_index(y);
    if (j >= 0) return table_.m_prime[static_cast<std::size_t>(j)];
    const std::array<double, 2> pts{y, y + h_};
    return scale_speed_at_nodes(model_, model_.reference_point, pts).m_prime[0];
}

double DiffusionScaleProvider::Z(double x, double y) const {
    if (x <= y || q_ == 0.0) return 1.0;
    const int jy = node_index(y);
    const int jx = node_index(x);
    if (jy >= 0 && jx > jy) {
        std::vector<double> f(static_cast<std::size_t>(jx - jy) + 1);
        for (int j = jy; j <= jx; ++j)
            f[static_cast<std::size_t>(j - jy)] =
                node_w(j, x) * table_.m_prime[static_cast<std::size_t>(j)];
        return 1.0 + q_ * integrate_uniform(f, h_);
    }
    // off-grid arguments: aligned interior sum plus trapezoid end corrections
    const int j0 = std::max(
        0, static_cast<int>(std::ceil((y - lo_) / h_ - grid_snap_rel * cells_)));
    const int j1 = std::min(
        cells_, static_cast<int>(std::floor((x - lo_) / h_ + grid_snap_rel * cells_)));
    double acc = 0.0;
    const auto fval = [&](double u) { return W(x, u) * speed_density(u); };
    if (j1 > j0) {
        std::vector<double> f(static_cast<std::size_t>(j1 - j0) + 1);
        for (int j = j0; j <= j1; ++j)
            f[static_cast<std::size_t>(j - j0)] =
                node_w(j, x) * table_.m_prime[static_cast<std::size_t>(j)];
        acc += integrate_uniform(f, h_);
        const double u0 = table_.x[static_cast<std::size_t>(j0)];
        const double u1 = table_.x[static_cast<std::size_t>(j1)];
        if (u0 - y > grid_snap_rel * (hi_ - lo_))
            acc += 0.5 * (u0 - y) * (fval(y) + fval(u0));
        if (x - u1 > grid_snap_rel * (hi_ - lo_)) acc += 0.5 * (x - u1) * (0.0 + fval(u1));
    } else {
        acc += 0.5 * (x - y) * (fval(y) + 0.0);
    }
    return 1.0 + q_ * acc;
}

double up_exit(const ScaleProvider& sp, double b, double a, double x) {
    if (!(b < x && x < a)) throw std::invalid_argument("up_exit: need b < x < a");
    return sp.W(x, b) / sp.W(a, b);
}

double down_exit(const ScaleProvider& sp, double b, double a, double x) {
    if (!(b < x && x < a)) throw std::invalid_argument("down_exit: need b < x < a");
    return sp.Z(x, b) - sp.W(x, b) / sp.W(a, b) * sp.Z(a, b);
}

double green_density(const ScaleProvider& sp, double b, double a, double x, double y) {
    if (!(b < x && x < a)) throw std::invalid_argument("green_density: need b < x < a");
    if (y < b || y > a) return 0.0;
    const double lead = sp.W(x, b) * sp.W(a, y) / sp.W(a, b);
    const double g = lead - sp.W(x, y);
    if (g < 0.0 && g > -1e-10 * std::max(1.0, lead)) return 0.0;
    return g;
}

double killed_resolvent(const ScaleProvider& sp, double b, double a, double x, int cells) {
    if (!(b < x && x < a)) throw std::invalid_argument("killed_resolvent: need b < x < a");
    if (cells < 4) throw std::invalid_argument("killed_resolvent: too few cells");
    const double ratio = sp.W(x, b) / sp.W(a, b);
    const auto g_left = [&](double y) {  // value and left limit at y = x
        return (ratio * sp.W(a, y) - sp.W(x, y)) * sp.speed_density(y);
    };
    const auto g_right = [&](double y) {  // right limit at y = x: no W(x, .) mass
        return ratio * sp.W(a, y) * sp.speed_density(y);
    };
    const double h = (a - b) / cells;
    const double k = (x - b) / h;
    const auto j = std::llround(k);
    const bool aligned = std::abs(k - static_cast<double>(j)) < grid_snap_rel * cells &&
                         j % 2 == 0 && j > 0 && j < cells;
    if (aligned) {
        std::vector<double> left(static_cast<std::size_t>(j) + 1);
        for (std::size_t i = 0; i < left.size(); ++i) left[i] = g_left(b + i * h);
        left.back() = ratio * sp.W(a, x) * sp.speed_density(x) -
                      sp.W(x, x) * sp.speed_density(x);
        std::vector<double> right(static_cast<std::size_t>(cells - j) + 1);
        for (std::size_t i = 0; i < right.size(); ++i)
            right[i] = (i == 0 ? g_right(x) : g_left(x + i * h));
        return integrate_uniform(left, h) + integrate_uniform(right, h);
    }
    // x off the grid (or at an odd node): integrate the two smooth flanks on
    // their own even-cell grids
    double acc = 0.0;
    {
        int n = std::max(4, static_cast<int>(std::ceil((x - b) / h)));
        n += n % 2;
        const double hl = (x - b) / n;
        std::vector<double> f(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = g_left(b + i * hl);
        f.back() = (ratio * sp.W(a, x) - sp.W(x, x)) * sp.speed_density(x);
        acc += integrate_uniform(f, hl);
    }
    {
        int n = std::max(4, static_cast<int>(std::ceil((a - x) / h)));
        n += n % 2;
        const double hr = (a - x) / n;
        std::vector<double> f(static_cast<std::size_t>(n) + 1);
        f[0] = g_right(x);
        for (int i = 1; i <= n; ++i) f[static_cast<std::size_t>(i)] = g_left(x + i * hr);
        acc += integrate_uniform(f, hr);
    }
    return acc;
}

}  // namespace scalekit
