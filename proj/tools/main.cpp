#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "scalekit/config.hpp"
#include "scalekit/runner.hpp"

namespace {

int execute(const std::string& path, bool verify_only, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out, const std::optional<int>& threads) {
    scalekit::RunConfig cfg = scalekit::load_config(path);
    if (verify_only && !scalekit::is_verification_task(cfg.task)) {
        std::fprintf(stderr, "verify: task '%s' is not a verification task\n", cfg.task.c_str());
        return 2;
    }
    if (seed) cfg.mc.seed = *seed;
    if (out) cfg.out = *out;
    if (threads) cfg.mc.threads = *threads;
    return scalekit::run_task(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scale functions and exit identities for spectrally negative Levy processes "
                 "and one-dimensional diffusions"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config, "JSON task description")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "override mc.seed");
        sub->add_option("--out", out, "override the output path");
        sub->add_option("--threads", threads, "override mc.threads");
    };
    add_common(app.add_subcommand("run", "execute a task"));
    auto* verify = app.add_subcommand(
        "verify", "execute a verification task; exit 0 only if every row passes");
    add_common(verify);

    CLI11_PARSE(app, argc, argv);
    try {
        return execute(config, verify->parsed(), seed, out, threads);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
