#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "scalekit/mc.hpp"
#include "scalekit/models.hpp"

namespace scalekit {

enum class ModelKind { levy, diffusion };

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    int points = 51;
};

// One task description as read from a JSON config file. Tasks:
//   psi-table         Laplace exponent table (Levy)
//   scale-table       x,y,q,W,Z rows
//   exit              two-sided exit functionals over a window
//   resolvent         e^{-phi x} resolvent density table (Levy, q > 0)
//   laplace-check     int_0^inf e^{-beta x} W(x) dx against 1/(psi(beta)-q)
//   verify-identities exit identities against the Monte Carlo oracle
//   verify-duality    reflection symmetry and local-time duality (diffusion)
// The last three are verification tasks: the process exits 0 only if every
// row meets its budget.
struct RunConfig {
    std::string task;
    ModelKind kind = ModelKind::levy;
    LevyModel levy;
    DiffusionModel diffusion;
    std::string method = "auto";  // Levy scale route: auto | closed | inversion
    std::vector<double> q = {0.0};
    GridSpec grid;
    double base = 0.0;  // scale-table second argument
    int cells = 0;      // diffusion master grid / resolvent quadrature (0 = default)
    double window_b = 0.0;
    double window_a = 1.0;
    std::vector<double> starts = {0.5};
    std::vector<double> betas;
    std::vector<double> band_centers;
    double band_eps = 0.02;
    double x = 0.5, y = 0.5;       // verify-duality probe pair
    double budget = 0.0;           // verify-duality symmetry budget (0 = default)
    McConfig mc;
    std::string out = "out.csv";
};

bool is_verification_task(const std::string& task);

RunConfig parse_config(const nlohmann::ordered_json& j);
RunConfig load_config(const std::string& path);

}  // namespace scalekit
