#include "scalekit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scalekit {

std::vector<double> linspace(double a, double b, int points) {
    if (points < 2) throw std::invalid_argument("linspace: need at least 2 points");
    std::vector<double> x(points);
    const double h = (b - a) / (points - 1);
    for (int i = 0; i < points; ++i) x[i] = a + h * i;
    x.back() = b;
    return x;
}

double simpson_panel(const std::function<double(double)>& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("simpson: need at least 1 panel");
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) acc += simpson_panel(f, a + i * h, a + (i + 1) * h);
    return acc;
}

namespace {

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0)
        throw std::runtime_error("adaptive_simpson: depth exhausted before tolerance met");
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    if (!(abs_tol > 0)) throw std::invalid_argument("adaptive_simpson: tolerance must be > 0");
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

std::vector<double> cumulative_integral(const std::function<double(double)>& f,
                                        std::span<const double> nodes, int refine) {
    if (nodes.size() < 1) throw std::invalid_argument("cumulative_integral: empty grid");
    if (refine < 1) throw std::invalid_argument("cumulative_integral: refine must be >= 1");
    std::vector<double> out(nodes.size(), 0.0);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (!(nodes[i + 1] > nodes[i]))
            throw std::invalid_argument("cumulative_integral: grid must be strictly increasing");
        out[i + 1] = out[i] + simpson(f, nodes[i], nodes[i + 1], refine);
    }
    return out;
}

double integrate_uniform(std::span<const double> values, double h) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    const std::size_t panels = n - 1;
    double acc = 0.0;
    std::size_t simpson_panels = (panels % 2 == 0) ? panels : panels - 1;
    if (simpson_panels >= 2) {
        // pattern 1,4,2,4,...,4,1 over pairs of panels
        acc += values[0] + values[simpson_panels];
        for (std::size_t i = 1; i < simpson_panels; i += 2) acc += 4.0 * values[i];
        for (std::size_t i = 2; i < simpson_panels; i += 2) acc += 2.0 * values[i];
        acc *= h / 3.0;
    } else {
        simpson_panels = 0;
    }
    for (std::size_t i = simpson_panels; i < panels; ++i)
        acc += 0.5 * h * (values[i] + values[i + 1]);
    return acc;
}

double trapezoid(std::span<const double> nodes, std::span<const double> values) {
    if (nodes.size() != values.size())
        throw std::invalid_argument("trapezoid: node/value size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        acc += 0.5 * (nodes[i + 1] - nodes[i]) * (values[i] + values[i + 1]);
    return acc;
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("Pchip: need >= 2 matching nodes");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i + 1] > x_[i])) throw std::invalid_argument("Pchip: nodes must increase");
    d_.resize(n);
    std::vector<double> h(n - 1), sec(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        sec[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    if (n == 2) {
        d_[0] = d_[1] = sec[0];
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (sec[i - 1] * sec[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / sec[i - 1] + w2 / sec[i]);
            }
        }
        // one-sided three-point endpoint slopes, limited to preserve shape
        auto endpoint = [](double h0, double h1, double s0, double s1) {
            double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
            if (d * s0 <= 0.0) return 0.0;
            if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
            return d;
        };
        d_[0] = endpoint(h[0], h[1], sec[0], sec[1]);
        d_[n - 1] = endpoint(h[n - 2], h[n - 3], sec[n - 2], sec[n - 3]);
    }
}

double Pchip::operator()(double x) const {
    if (x <= x_.front()) return y_.front() + d_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + d_.back() * (x - x_.back());
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

}  // namespace scalekit
