#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "scalekit/duality.hpp"
#include "scalekit/numerics.hpp"

using namespace scalekit;

TEST_CASE("reflection is an exact involution") {
    SUBCASE("linear coefficients") {
        DiffusionModel m;
        m.interval = {-2.0, 3.0};
        m.mu = Coefficient::linear(0.4, -1.3);
        m.sigma = Coefficient::linear(1.1, 0.2);
        m.reference_point = 0.25;
        const auto r = reflect_model(m);
        CHECK(r.interval.left == -3.0);
        CHECK(r.interval.right == 2.0);
        CHECK(r.reference_point == -0.25);
        // mu_hat(u) = -mu(-u), sigma_hat(u) = sigma(-u)
        for (double u : {-1.0, 0.0, 0.7}) {
            CHECK(r.mu(u) == -m.mu(-u));
            CHECK(r.sigma(u) == m.sigma(-u));
        }
        const auto rr = reflect_model(r);
        CHECK(rr.interval.left == m.interval.left);
        CHECK(rr.interval.right == m.interval.right);
        CHECK(rr.reference_point == m.reference_point);
        for (double u : {-1.0, 0.0, 0.7}) {
            CHECK(rr.mu(u) == m.mu(u));
            CHECK(rr.sigma(u) == m.sigma(u));
        }
    }
    SUBCASE("table coefficients") {
        DiffusionModel m;
        m.interval = {-2.0, 2.0};
        m.mu = Coefficient::table({-2.0, 0.0, 2.0}, {0.5, -0.1, 0.3});
        m.sigma = Coefficient::table({-2.0, 0.0, 2.0}, {1.0, 1.5, 0.8});
        const auto r = reflect_model(m);
        for (double u : {-1.7, -0.3, 0.0, 1.2}) {
            CHECK(r.mu(u) == doctest::Approx(-m.mu(-u)).epsilon(1e-15));
            CHECK(r.sigma(u) == doctest::Approx(m.sigma(-u)).epsilon(1e-15));
        }
        const auto rr = reflect_model(r);
        for (double u : {-1.7, 0.0, 1.2}) CHECK(rr.mu(u) == doctest::Approx(m.mu(u)));
    }
    SUBCASE("Levy models reflect to themselves") {
        const auto m = cramer_lundberg_model(1.5, 1.0, 1.0);
        const auto r = reflect_model(m);
        CHECK(r.drift == m.drift);
        CHECK(r.jump_rate == m.jump_rate);
    }
}

TEST_CASE("reflected speed density is the mirror image") {
    DiffusionModel m = brownian_diffusion(-0.8, 1.0);
    const auto r = reflect_model(m);
    const auto grid_f = linspace(-1.0, 1.0, 5);
    const auto tf = scale_speed_at_nodes(m, m.reference_point, grid_f);
    const auto tb = scale_speed_at_nodes(r, r.reference_point, grid_f);
    // m'_hat(u) = m'(-u): compare node k against node n-1-k
    for (std::size_t k = 0; k < tf.x.size(); ++k)
        CHECK(tb.m_prime[k] ==
              doctest::Approx(tf.m_prime[tf.x.size() - 1 - k]).epsilon(1e-12));
}

TEST_CASE("scale symmetry residual") {
    SUBCASE("Levy: exactly zero by construction") {
        CHECK(check_scale_symmetry(brownian_model(0.3, 1.0), 0.5, -1.0, 1.0, 6) == 0.0);
        CHECK(check_scale_symmetry(cramer_lundberg_model(1.5, 1.0, 1.0), 0.7, -2.0, 1.0, 5) ==
              0.0);
    }
    SUBCASE("diffusion: bounded by the solver error") {
        const auto m = brownian_diffusion(-1.0, 1.0);
        CHECK(check_scale_symmetry(m, 0.5, -1.0, 1.0, 2000, 8) < 1e-5);
    }
    SUBCASE("asymmetric diffusion still satisfies the dual identity") {
        DiffusionModel m;
        m.interval = {-5.0, 5.0};
        m.mu = Coefficient::linear(0.2, -0.5);  // OU-like
        m.sigma = Coefficient::constant(1.0);
        CHECK(check_scale_symmetry(m, 0.4, -1.0, 1.0, 2000, 6) < 1e-5);
    }
}

TEST_CASE("local time duality by simulation") {
    const auto m = brownian_diffusion(-1.0, 1.0);
    McConfig cfg;
    cfg.seed = 11;
    cfg.paths = 20000;
    cfg.dt = 1e-3;
    const auto r = check_local_time_duality(m, 0.5, 0.0, 1.0, 0.3, 0.6, 0.02, cfg);
    CHECK(r.band_mass_forward > 0.0);
    CHECK(r.band_mass_backward > 0.0);
    const double tol =
        3.0 * std::hypot(r.forward.se, r.backward.se) + r.bias_bound + 2.0 * 0.02 * 0.02 +
        20.0 * cfg.dt;
    CHECK(std::abs(r.forward.value - r.backward.value) < tol);
}
