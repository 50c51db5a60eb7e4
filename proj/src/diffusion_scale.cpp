#include "scalekit/diffusion_scale.hpp"

#include <cmath>
#include <stdexcept>

namespace scalekit {

std::vector<double> solve_psi(const ScaleSpeedTable& table, double q) {
    const std::size_t n = table.x.size();
    if (n < 2) throw std::invalid_argument("solve_psi: need at least two nodes");
    if (!(q >= 0.0)) throw std::invalid_argument("solve_psi: q must be >= 0");
    const double h = table.x[1] - table.x[0];
    const auto& s = table.s;
    const auto& m = table.m_prime;
    std::vector<double> psi(n, 0.0);
    // running trapezoid sums over j = 0..k-1 (psi_0 = 0 kills the half-weight
    // endpoint terms): A = sum psi_j m_j, B = sum s_j psi_j m_j
    double A = 0.0, B = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        psi[k] = (s[k] - s[0]) + q * h * (s[k] * A - B);
        A += psi[k] * m[k];
        B += s[k] * psi[k] * m[k];
    }
    return psi;
}

std::vector<double> solve_psi(const DiffusionModel& model, double q, double base, double hi,
                              int cells) {
    if (!(hi > base)) throw std::invalid_argument("solve_psi: need hi > base");
    if (cells < 1) throw std::invalid_argument("solve_psi: need at least one cell");
    const auto table =
        scale_speed_at_nodes(model, model.reference_point, linspace(base, hi, cells + 1));
    return solve_psi(table, q);
}

DiffusionScale::DiffusionScale(DiffusionModel model, double q, double base, double hi, int cells)
    : model_(std::move(model)), q_(q), base_(base), hi_(hi), h_((hi - base) / cells) {
    if (!(q >= 0.0)) throw std::invalid_argument("DiffusionScale: q must be >= 0");
    psi_ = solve_psi(model_, q_, base_, hi_, cells);
    interp_ = Pchip(linspace(base_, hi_, cells + 1), psi_);
}

double DiffusionScale::w(double x) const {
    if (x < base_) return 0.0;
    if (x > hi_ + grid_snap_rel * (hi_ - base_))
        throw std::out_of_range("DiffusionScale::w: x beyond solved range");
    // snap to a node when within grid tolerance so node queries bypass the
    // interpolant
    const double k = (x - base_) / h_;
    const auto idx = static_cast<std::size_t>(std::llround(k));
    const double tol_cells = grid_snap_rel * static_cast<double>(psi_.size() - 1);
    if (idx < psi_.size() && std::abs(k - static_cast<double>(idx)) < tol_cells)
        return psi_[idx];
    return interp_(std::min(x, hi_));
}

double diffusion_z(const DiffusionModel& model, double q, double x, double y, int cells) {
    if (x <= y || q == 0.0) return 1.0;
    if (cells % 2 != 0) ++cells;
    const double h = (x - y) / cells;
    std::vector<double> integrand(cells + 1);
    const auto table = scale_speed_at_nodes(model, model.reference_point,
                                            linspace(y, x, cells + 1));
    for (int j = 0; j <= cells; ++j) {
        if (j == cells) {
            integrand[j] = 0.0;  // W(x, x) = 0
            continue;
        }
        ScaleSpeedTable sub;
        sub.x.assign(table.x.begin() + j, table.x.end());
        sub.s.assign(table.s.begin() + j, table.s.end());
        sub.s_prime.assign(table.s_prime.begin() + j, table.s_prime.end());
        sub.m_prime.assign(table.m_prime.begin() + j, table.m_prime.end());
        integrand[j] = solve_psi(sub, q).back() * table.m_prime[j];
    }
    return 1.0 + q * integrate_uniform(integrand, h);
}

}  // namespace scalekit
