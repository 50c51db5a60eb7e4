#include "scalekit/config.hpp"

#include <fstream>
#include <stdexcept>

namespace scalekit {

namespace {

using nlohmann::ordered_json;

std::vector<double> number_or_list(const ordered_json& j) {
    if (j.is_array()) return j.get<std::vector<double>>();
    return {j.get<double>()};
}

Coefficient parse_coefficient(const ordered_json& j) {
    if (j.is_number()) return Coefficient::constant(j.get<double>());
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "constant") return Coefficient::constant(j.at("value").get<double>());
    if (kind == "linear")
        return Coefficient::linear(j.at("intercept").get<double>(), j.at("slope").get<double>());
    if (kind == "table")
        return Coefficient::table(j.at("x").get<std::vector<double>>(),
                                  j.at("value").get<std::vector<double>>());
    throw std::invalid_argument("config: unknown coefficient kind '" + kind + "'");
}

void parse_model(const ordered_json& j, RunConfig& cfg) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "levy") {
        cfg.kind = ModelKind::levy;
        cfg.levy.drift = j.value("drift", 0.0);
        cfg.levy.gaussian = j.value("gaussian", 0.0);
        if (j.contains("jump")) {
            const auto& jj = j.at("jump");
            const auto law = jj.at("law").get<std::string>();
            cfg.levy.jump_rate = jj.at("rate").get<double>();
            if (law == "exponential") {
                cfg.levy.jump_law = JumpLaw::exponential;
                cfg.levy.jump_mean = jj.at("mean").get<double>();
            } else if (law == "fixed") {
                cfg.levy.jump_law = JumpLaw::fixed;
                cfg.levy.jump_size = jj.at("size").get<double>();
            } else {
                throw std::invalid_argument("config: unknown jump law '" + law + "'");
            }
        }
        validate(cfg.levy);
    } else if (kind == "diffusion") {
        cfg.kind = ModelKind::diffusion;
        cfg.diffusion.mu = parse_coefficient(j.at("mu"));
        cfg.diffusion.sigma = parse_coefficient(j.at("sigma"));
        if (j.contains("interval")) {
            cfg.diffusion.interval.left = j.at("interval").at(0).get<double>();
            cfg.diffusion.interval.right = j.at("interval").at(1).get<double>();
        }
        cfg.diffusion.reference_point = j.value("reference", 0.0);
        validate(cfg.diffusion);
    } else {
        throw std::invalid_argument("config: unknown model kind '" + kind + "'");
    }
}

}  // namespace

bool is_verification_task(const std::string& task) {
    return task == "verify-identities" || task == "verify-duality" || task == "laplace-check";
}

RunConfig parse_config(const ordered_json& j) {
    RunConfig cfg;
    cfg.task = j.at("task").get<std::string>();
    parse_model(j.at("model"), cfg);
    if (j.contains("q")) cfg.q = number_or_list(j.at("q"));
    if (j.contains("method")) cfg.method = j.at("method").get<std::string>();
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.grid.lo = g.at("lo").get<double>();
        cfg.grid.hi = g.at("hi").get<double>();
        cfg.grid.points = g.value("points", 51);
    }
    cfg.base = j.value("base", 0.0);
    cfg.cells = j.value("cells", 0);
    if (j.contains("window")) {
        cfg.window_b = j.at("window").at(0).get<double>();
        cfg.window_a = j.at("window").at(1).get<double>();
    }
    if (j.contains("start")) cfg.starts = number_or_list(j.at("start"));
    if (j.contains("beta")) cfg.betas = number_or_list(j.at("beta"));
    if (j.contains("bands")) {
        cfg.band_centers = j.at("bands").at("centers").get<std::vector<double>>();
        cfg.band_eps = j.at("bands").value("eps", 0.02);
    }
    cfg.x = j.value("x", 0.5);
    cfg.y = j.value("y", 0.5);
    cfg.budget = j.value("budget", 0.0);
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        cfg.mc.seed = m.value("seed", std::uint64_t{1});
        cfg.mc.paths = m.value("paths", long{100000});
        cfg.mc.dt = m.value("dt", 1e-4);
        cfg.mc.horizon = m.value("horizon", 50.0);
        cfg.mc.bridge = m.value("bridge", true);
        cfg.mc.threads = m.value("threads", 1);
    }
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    ordered_json j;
    in >> j;
    return parse_config(j);
}

}  // namespace scalekit
