#include "scalekit/mc.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "scalekit/rng.hpp"

namespace scalekit {

namespace {

constexpr long kBlock = 4096;

struct Acc {
    double up = 0.0, up2 = 0.0;
    double down = 0.0, down2 = 0.0;
    std::vector<double> occ, occ2;
    long truncated = 0;

    explicit Acc(std::size_t nbands) : occ(nbands, 0.0), occ2(nbands, 0.0) {}
};

struct PathResult {
    int outcome = 0;  // 0 truncated, 1 up, 2 down
    double payoff = 0.0;
};

void fold(Acc& acc, const PathResult& r, const std::vector<double>& occ_buf) {
    if (r.outcome == 1) {
        acc.up += r.payoff;
        acc.up2 += r.payoff * r.payoff;
    } else if (r.outcome == 2) {
        acc.down += r.payoff;
        acc.down2 += r.payoff * r.payoff;
    } else {
        ++acc.truncated;
    }
    for (std::size_t i = 0; i < occ_buf.size(); ++i) {
        acc.occ[i] += occ_buf[i];
        acc.occ2[i] += occ_buf[i] * occ_buf[i];
    }
}

McEstimate finish(double sum, double sum2, long n) {
    McEstimate e;
    e.value = sum / static_cast<double>(n);
    const double var = std::max(0.0, (sum2 - sum * e.value) / static_cast<double>(n - 1));
    e.se = std::sqrt(var / static_cast<double>(n));
    return e;
}

// Runs `paths` evaluations of path(idx, occ_buf) -> PathResult over fixed
// 4096-path blocks; partial sums indexed by block and reduced in ascending
// order make the totals independent of thread scheduling.
template <typename PathFn>
ExitStats run_blocks(long paths, std::size_t nbands, int threads, PathFn&& path) {
    if (paths < 2) throw std::invalid_argument("simulate_exit: need at least two paths");
    const long nblocks = (paths + kBlock - 1) / kBlock;
    std::vector<Acc> partial(static_cast<std::size_t>(nblocks), Acc(nbands));
    std::atomic<long> next{0};
    auto worker = [&] {
        std::vector<double> occ_buf(nbands, 0.0);
        for (;;) {
            const long bi = next.fetch_add(1);
            if (bi >= nblocks) return;
            Acc& acc = partial[static_cast<std::size_t>(bi)];
            const long end = std::min(paths, (bi + 1) * kBlock);
            for (long idx = bi * kBlock; idx < end; ++idx) {
                std::fill(occ_buf.begin(), occ_buf.end(), 0.0);
                const PathResult r = path(static_cast<std::uint64_t>(idx), occ_buf);
                fold(acc, r, occ_buf);
            }
        }
    };
    const int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    Acc total(nbands);
    for (const auto& acc : partial) {
        total.up += acc.up;
        total.up2 += acc.up2;
        total.down += acc.down;
        total.down2 += acc.down2;
        total.truncated += acc.truncated;
        for (std::size_t i = 0; i < nbands; ++i) {
            total.occ[i] += acc.occ[i];
            total.occ2[i] += acc.occ2[i];
        }
    }
    ExitStats stats;
    stats.paths = paths;
    stats.truncated = total.truncated;
    stats.up = finish(total.up, total.up2, paths);
    stats.down = finish(total.down, total.down2, paths);
    stats.occupation.resize(nbands);
    for (std::size_t i = 0; i < nbands; ++i)
        stats.occupation[i] = finish(total.occ[i], total.occ2[i], paths);
    return stats;
}

// crossing probability of a level by a Brownian bridge between step
// endpoints that both sit on the same side; exponent cut avoids the exp call
// on the (vast majority of) interior steps
inline double bridge_prob(double d0, double d1, double var) {
    const double e = 2.0 * d0 * d1 / var;
    return e > 40.0 ? 0.0 : std::exp(-e);
}

}  // namespace

double ExitStats::truncation_bias_bound(double q, double horizon) const {
    if (paths == 0) return 0.0;
    return static_cast<double>(truncated) / static_cast<double>(paths) * std::exp(-q * horizon);
}

ExitStats simulate_exit(const DiffusionModel& model, double q, double b, double a, double x,
                        const std::vector<Band>& bands, const McConfig& cfg) {
    if (!(b < x && x < a)) throw std::invalid_argument("simulate_exit: need b < x < a");
    const double dt = cfg.dt;
    const double sqdt = std::sqrt(dt);
    const double dq = std::exp(-q * dt);
    auto path = [&](std::uint64_t idx, std::vector<double>& occ_buf) {
        Xoshiro256pp rng(cfg.seed, idx);
        std::normal_distribution<double> norm(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double xt = x, t = 0.0, disc = 1.0;
        PathResult r;
        while (t < cfg.horizon) {
            for (std::size_t i = 0; i < bands.size(); ++i)
                if (xt > bands[i].first && xt < bands[i].second) occ_buf[i] += disc * dt;
            const double mu = model.mu(xt);
            const double sg = model.sigma(xt);
            const double x1 = xt + mu * dt + sg * sqdt * norm(rng);
            t += dt;
            disc *= dq;
            if (x1 <= b) {
                r = {2, disc};
                return r;
            }
            if (x1 >= a) {
                r = {1, disc};
                return r;
            }
            if (cfg.bridge) {
                const double var = sg * sg * dt;
                const double pb = bridge_prob(xt - b, x1 - b, var);
                const double pa = bridge_prob(a - xt, a - x1, var);
                if (pb + pa > 0.0) {
                    const double u = unif(rng);
                    if (u < pb) {
                        r = {2, disc};
                        return r;
                    }
                    if (u < pb + pa) {
                        r = {1, disc};
                        return r;
                    }
                }
            }
            xt = x1;
        }
        return r;
    };
    return run_blocks(cfg.paths, bands.size(), cfg.threads, path);
}

namespace {

// drift-only segment x(u) = x0 + c (u - t0), u in [t0, t0 + seg]: adds the
// exact discounted band occupation
inline void drift_occupation(double x0, double c, double t0, double seg, double q,
                             const std::vector<Band>& bands, std::vector<double>& occ_buf) {
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const double u0 = t0 + std::max(0.0, (bands[i].first - x0) / c);
        const double u1 = t0 + std::min(seg, (bands[i].second - x0) / c);
        if (u1 <= u0) continue;
        occ_buf[i] += q > 0.0 ? (std::exp(-q * u0) - std::exp(-q * u1)) / q : u1 - u0;
    }
}

}  // namespace

ExitStats simulate_exit(const LevyModel& model, double q, double b, double a, double x,
                        const std::vector<Band>& bands, const McConfig& cfg) {
    if (!(b < x && x < a)) throw std::invalid_argument("simulate_exit: need b < x < a");
    validate(model);
    const double c = model.drift;
    const double sg = model.gaussian;
    const double rate = model.jump_rate;
    const bool jumps = rate > 0.0;
    const double dq = std::exp(-q * cfg.dt);

    auto path = [&](std::uint64_t idx, std::vector<double>& occ_buf) {
        Xoshiro256pp rng(cfg.seed, idx);
        std::normal_distribution<double> norm(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::exponential_distribution<double> arrival(jumps ? rate : 1.0);
        std::exponential_distribution<double> expsize(
            model.jump_law == JumpLaw::exponential ? 1.0 / model.jump_mean : 1.0);
        auto draw_jump = [&] {
            return model.jump_law == JumpLaw::fixed ? model.jump_size : expsize(rng);
        };
        double xt = x, t = 0.0, disc = 1.0;
        double next_jump = jumps ? arrival(rng) : std::numeric_limits<double>::infinity();
        PathResult r;
        if (sg == 0.0) {
            // fully event driven: upward drift segments, exact hit of the
            // upper barrier, jumps checked against the lower one
            while (t < cfg.horizon) {
                const double tau_a = (a - xt) / c;
                const double seg = std::min({next_jump - t, tau_a, cfg.horizon - t});
                drift_occupation(xt, c, t, seg, q, bands, occ_buf);
                if (seg == tau_a && t + tau_a <= cfg.horizon) {
                    r = {1, std::exp(-q * (t + tau_a))};
                    return r;
                }
                xt += c * seg;
                t += seg;
                if (t >= cfg.horizon) break;
                xt -= draw_jump();
                if (xt <= b) {
                    r = {2, std::exp(-q * t)};
                    return r;
                }
                next_jump = t + arrival(rng);
            }
            return r;
        }
        while (t < cfg.horizon) {
            const double to_jump = next_jump - t;
            const double step = std::min({cfg.dt, to_jump, cfg.horizon - t});
            const bool at_jump = jumps && step == to_jump;
            for (std::size_t i = 0; i < bands.size(); ++i)
                if (xt > bands[i].first && xt < bands[i].second) occ_buf[i] += disc * step;
            const double x1 = xt + c * step + sg * std::sqrt(step) * norm(rng);
            t += step;
            disc = step == cfg.dt ? disc * dq : disc * std::exp(-q * step);
            if (x1 <= b) {
                r = {2, disc};
                return r;
            }
            if (x1 >= a) {
                r = {1, disc};
                return r;
            }
            if (cfg.bridge) {
                const double var = sg * sg * step;
                const double pb = bridge_prob(xt - b, x1 - b, var);
                const double pa = bridge_prob(a - xt, a - x1, var);
                if (pb + pa > 0.0) {
                    const double u = unif(rng);
                    if (u < pb) {
                        r = {2, disc};
                        return r;
                    }
                    if (u < pb + pa) {
                        r = {1, disc};
                        return r;
                    }
                }
            }
            xt = x1;
            if (at_jump) {
                xt -= draw_jump();
                if (xt <= b) {
                    r = {2, disc};
                    return r;
                }
                next_jump = t + arrival(rng);
            }
        }
        return r;
    };
    return run_blocks(cfg.paths, bands.size(), cfg.threads, path);
}

}  // namespace scalekit
