#include "qcomm/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

#include "qcomm/problems.hpp"
#include "qcomm/quantum.hpp"

namespace qcomm {

const std::vector<std::string> &protocol_ids() {
    static const std::vector<std::string> ids{"sk-det", "sk-wrong", "pj-det", "pj-nw"};
    return ids;
}

unsigned worker_threads() {
    if (const char *env = std::getenv("QCOMM_THREADS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

constexpr std::uint64_t kExhaustiveLimit = std::uint64_t{1} << 24;

struct TrialResult {
    bool error = false;
    bool aborted = false;
    std::vector<std::size_t> round_bits;
};

enum class Family { Sk, Pj };

Family family_of(const std::string &id) { return id.rfind("sk-", 0) == 0 ? Family::Sk : Family::Pj; }

TrialResult summarize(const ProtocolRun &run, int truth) {
    TrialResult t;
    t.error = run.output != truth;
    t.aborted = run.aborted;
    for (const auto &m : run.transcript.messages()) {
        t.round_bits.push_back(m.bits.size());
    }
    return t;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn fn) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_threads(), std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) {
                    fn(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig &cfg) {
    const auto &ids = protocol_ids();
    if (std::find(ids.begin(), ids.end(), cfg.protocol) == ids.end()) {
        throw std::invalid_argument("unknown protocol id '" + cfg.protocol + "'");
    }
    if (cfg.n < 1 || cfg.k < 1) {
        throw std::invalid_argument("experiment: need n >= 1 and k >= 1");
    }
    if (!cfg.exhaustive && cfg.trials < 1) {
        throw std::invalid_argument("experiment: trials must be >= 1");
    }
    const Family family = family_of(cfg.protocol);
    const std::size_t L = index_width(cfg.n);

    ExperimentReport rep;
    rep.config = cfg;

    std::optional<NwParams> nw;
    if (cfg.protocol == "pj-nw") {
        nw = nw_params(cfg.n, cfg.k, cfg.eps);
        rep.degenerate = nw->degenerate;
        rep.warnings = nw->warnings;
        rep.budget_formula_bits = nw_budget_bits(cfg.n, cfg.k, cfg.eps);
        if (cfg.k >= 2) {
            rep.corollary_bits = (static_cast<double>(cfg.n) / cfg.k + cfg.k) * std::log2(static_cast<double>(cfg.k));
        }
    } else if (cfg.protocol == "sk-wrong") {
        rep.budget_formula_bits = static_cast<double>((static_cast<std::size_t>(cfg.k) - 1) * L + cfg.n);
    } else {
        rep.budget_formula_bits = static_cast<double>(static_cast<std::size_t>(cfg.k) * L);
    }
    if (family == Family::Sk) {
        // Refuse trees that would not fit in memory.
        double leaves = std::pow(static_cast<double>(cfg.n), cfg.k);
        if (leaves > static_cast<double>(kExhaustiveLimit)) {
            throw std::invalid_argument("experiment: S_k tree with n^k > 2^24 leaves is too large");
        }
    }

    std::size_t count = cfg.trials;
    if (cfg.exhaustive) {
        std::uint64_t space = 0;
        try {
            space = family == Family::Sk ? sk_instance_count(cfg.n, cfg.k) : pj_instance_count(cfg.n);
        } catch (const std::overflow_error &) {
            space = kExhaustiveLimit + 1;
        }
        if (space > kExhaustiveLimit) {
            throw std::invalid_argument("experiment: instance space too large for exhaustive mode (limit 2^24)");
        }
        count = static_cast<std::size_t>(space);
    }
    rep.config.trials = count;

    std::vector<TrialResult> results(count);
    parallel_for(count, [&](std::size_t i) {
        const std::uint64_t inst_seed = derive_seed(cfg.seed, 2 * i);
        const std::uint64_t coin_seed = derive_seed(cfg.seed, 2 * i + 1);
        if (family == Family::Sk) {
            SkInstance inst;
            if (cfg.exhaustive) {
                inst = sk_instance_from_index(cfg.n, cfg.k, i);
            } else {
                Rng rng(inst_seed);
                inst = random_sk(cfg.n, cfg.k, rng);
            }
            int truth = sk_eval(inst);
            ProtocolRun run =
                cfg.protocol == "sk-det" ? sk_protocol_right_start(inst) : sk_protocol_wrong_start(inst);
            results[i] = summarize(run, truth);
            return;
        }
        PjInstance inst;
        if (cfg.exhaustive) {
            inst = pj_instance_from_index(cfg.n, i);
        } else {
            Rng rng(inst_seed);
            inst = random_pj(cfg.n, rng);
        }
        int truth = pj_eval(inst, cfg.k).bit;
        if (cfg.protocol == "pj-det") {
            results[i] = summarize(pj_det_protocol(inst, cfg.k), truth);
        } else {
            PublicCoins coins(coin_seed);
            results[i] = summarize(pj_nw_protocol(inst, *nw, coins), truth);
        }
    });

    // Ordered fold: independent of the worker count.
    rep.runs = count;
    rep.min_bits = std::numeric_limits<std::size_t>::max();
    double total_bits = 0.0;
    rep.per_round_bits.assign(static_cast<std::size_t>(cfg.k), 0.0);
    for (const auto &t : results) {
        rep.errors += t.error ? 1 : 0;
        rep.aborts += t.aborted ? 1 : 0;
        rep.errors_without_abort += (t.error && !t.aborted) ? 1 : 0;
        std::size_t bits = 0;
        for (std::size_t r = 0; r < t.round_bits.size(); ++r) {
            bits += t.round_bits[r];
            rep.per_round_bits[r] += static_cast<double>(t.round_bits[r]);
        }
        total_bits += static_cast<double>(bits);
        rep.max_bits = std::max(rep.max_bits, bits);
        rep.min_bits = std::min(rep.min_bits, bits);
    }
    const double runs = static_cast<double>(count);
    rep.error_rate = static_cast<double>(rep.errors) / runs;
    rep.abort_rate = static_cast<double>(rep.aborts) / runs;
    rep.mean_bits = total_bits / runs;
    for (auto &b : rep.per_round_bits) {
        b /= runs;
    }
    rep.measured_constant =
        rep.budget_formula_bits > 0.0 ? static_cast<double>(rep.max_bits) / rep.budget_formula_bits : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Classical one-round reduction

ReductionDemoReport classical_round_reduction_demo(const ReductionDemoConfig &cfg) {
    const std::size_t n = cfg.n;
    const std::size_t s = cfg.alphabet;
    if (n < 1 || s < 2) {
        throw std::invalid_argument("reduction demo: need n >= 1 and alphabet >= 2");
    }
    if (cfg.ell1 > 20) {
        throw std::invalid_argument("reduction demo: ell1 too large");
    }
    const std::size_t messages = std::size_t{1} << cfg.ell1;
    double inputs_d = std::pow(static_cast<double>(s), static_cast<double>(n));
    if (inputs_d * static_cast<double>(messages) > static_cast<double>(std::size_t{1} << 22)) {
        throw std::invalid_argument("reduction demo: parameter space too large for exact enumeration (s^n 2^ell1 > 2^22)");
    }
    const auto inputs = static_cast<std::size_t>(std::llround(inputs_d));

    ReductionDemoReport rep;
    rep.config = cfg;
    rep.bound = std::sqrt(2.0 * static_cast<double>(cfg.ell1) / static_cast<double>(n));

    // digits[y * n + j] = coordinate j of input y, coordinate 0 most significant
    std::vector<std::size_t> digits(inputs * n);
    for (std::size_t y = 0; y < inputs; ++y) {
        std::size_t rest = y;
        for (std::size_t j = n; j-- > 0;) {
            digits[y * n + j] = rest % s;
            rest /= s;
        }
    }

    for (std::size_t c = 0; c < cfg.channels; ++c) {
        Rng rng(derive_seed(cfg.seed, c));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::exponential_distribution<double> expo(1.0);
        std::uniform_int_distribution<std::size_t> pick(0, messages - 1);
        const double lambda = unit(rng);

        // channel[y * messages + m] = P(m | y)
        std::vector<double> channel(inputs * messages);
        for (std::size_t y = 0; y < inputs; ++y) {
            double *row = &channel[y * messages];
            double total = 0.0;
            for (std::size_t m = 0; m < messages; ++m) {
                row[m] = expo(rng);
                total += row[m];
            }
            for (std::size_t m = 0; m < messages; ++m) {
                row[m] = (1.0 - lambda) * row[m] / total;
            }
            row[pick(rng)] += lambda;
        }

        const double py = 1.0 / static_cast<double>(inputs);
        std::vector<double> pm(messages, 0.0);
        for (std::size_t y = 0; y < inputs; ++y) {
            for (std::size_t m = 0; m < messages; ++m) {
                pm[m] += py * channel[y * messages + m];
            }
        }
        double dist = 0.0;
        std::vector<double> joint(messages * s);
        for (std::size_t j = 0; j < n; ++j) {
            std::fill(joint.begin(), joint.end(), 0.0);
            for (std::size_t y = 0; y < inputs; ++y) {
                std::size_t a = digits[y * n + j];
                for (std::size_t m = 0; m < messages; ++m) {
                    joint[m * s + a] += py * channel[y * messages + m];
                }
            }
            double dj = 0.0;
            for (std::size_t m = 0; m < messages; ++m) {
                for (std::size_t a = 0; a < s; ++a) {
                    dj += std::abs(joint[m * s + a] - pm[m] / static_cast<double>(s));
                }
            }
            dist += dj;
        }
        dist /= static_cast<double>(n);
        rep.distances.push_back(dist);
    }

    for (double d : rep.distances) {
        rep.avg_stat_distance += d;
        rep.max_stat_distance = std::max(rep.max_stat_distance, d);
        if (d > rep.bound + 1e-8) {
            rep.holds = false;
        }
    }
    if (!rep.distances.empty()) {
        rep.avg_stat_distance /= static_cast<double>(rep.distances.size());
    }
    rep.max_ratio = rep.bound > 0.0 ? rep.max_stat_distance / rep.bound : 0.0;
    return rep;
}

}  // namespace qcomm
