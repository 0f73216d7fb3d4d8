// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// Each criterion runs the library path and, where a value can be recomputed
// independently, compares it against a local oracle built from plain Eigen
// eigen/SVD calls.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qcomm/experiment.hpp"
#include "qcomm/metrics.hpp"
#include "qcomm/problems.hpp"
#include "qcomm/qprotosim.hpp"
#include "qcomm/suites.hpp"
#include "qcomm/transitions.hpp"

using namespace qcomm;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string &what) {
        if (!ok) {
            if (pass) {
                detail << "failed: ";
            } else {
                detail << "; ";
            }
            detail << what;
            pass = false;
        }
    }
};

// ---- oracles ---------------------------------------------------------------

Matrix psd_fn(const Matrix &m, double (*f)(double)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    RealVector ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        ev(i) = ev(i) > 1e-12 ? f(ev(i)) : 0.0;
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double o_trace_norm_herm(const Matrix &m) { return Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().cwiseAbs().sum(); }

double o_fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    auto sq = [](double x) { return std::sqrt(x); };
    Eigen::JacobiSVD<Matrix> svd(psd_fn(a.matrix(), sq) * psd_fn(b.matrix(), sq));
    double s = svd.singularValues().sum();
    return s * s;
}

double o_hellinger(const DensityMatrix &a, const DensityMatrix &b) {
    return std::sqrt(std::max(0.0, 1.0 - std::sqrt(std::min(1.0, o_fidelity(a, b)))));
}

// S(a||b) in bits via eigen-decompositions of both arguments.
double o_relative_entropy(const DensityMatrix &a, const DensityMatrix &b) {
    Eigen::SelfAdjointEigenSolver<Matrix> ea(a.matrix()), eb(b.matrix());
    double s = 0.0;
    Matrix overlap = ea.eigenvectors().adjoint() * eb.eigenvectors();
    for (Eigen::Index i = 0; i < ea.eigenvalues().size(); ++i) {
        double p = ea.eigenvalues()(i);
        if (p <= 1e-13) {
            continue;
        }
        s += p * std::log2(p);
        for (Eigen::Index j = 0; j < eb.eigenvalues().size(); ++j) {
            double w = std::norm(overlap(i, j));
            if (w <= 1e-13) {
                continue;
            }
            double q = eb.eigenvalues()(j);
            if (q <= 1e-13) {
                return std::numeric_limits<double>::infinity();
            }
            s -= p * w * std::log2(q);
        }
    }
    return s;
}

int sk_oracle(const SkInstance &s) {
    return s.level == 1 ? s.alice_bits.at(s.bob_index) : sk_oracle(s.children.at(s.pointer));
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t w = 0;
    while ((std::size_t{1} << w) < n) {
        ++w;
    }
    return w;
}

int pj_oracle(const PjInstance &p, int k) {
    std::size_t v = 0;
    for (int i = 0; i <= k; ++i) {
        v = (i % 2 == 0) ? p.f_a[v] : p.f_b[v];
    }
    int x = 0;
    for (std::size_t b = 0; b < ceil_log2(p.n); ++b) {
        x ^= static_cast<int>((v >> b) & 1U);
    }
    return x;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void suite_clean(Outcome &o, const SuiteReport &r, std::size_t trials) {
    for (const auto &s : r.results) {
        o.require(s.violations == 0, s.inequality + " violated " + std::to_string(s.violations) + " times");
        o.require(s.trials >= trials, s.inequality + " ran " + std::to_string(s.trials) + " trials");
    }
}

// ---- criteria --------------------------------------------------------------

void c1(Outcome &o) {
    auto t0 = std::chrono::steady_clock::now();
    auto rep = run_suite("relative-entropy", 1000, kSeed);
    suite_clean(o, rep, 1000);
    double worst_gap = 0.0, min_slack = 1e9;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        Rng rng(derive_seed(kSeed, i));
        auto [a, b] = random_state_pair(rng);
        double s = o_relative_entropy(a, b);
        double t = o_trace_norm_herm(a.matrix() - b.matrix());
        double h = o_hellinger(a, b);
        double lib = relative_entropy(a, b);
        if (std::isfinite(s)) {
            worst_gap = std::max(worst_gap, std::abs(lib - s));
        } else {
            o.require(std::isinf(lib), "support mismatch not flagged");
        }
        min_slack = std::min({min_slack, s - t * t / (2 * std::log(2.0)), s - 2 * h * h / std::log(2.0)});
    }
    double secs = elapsed_s(t0);
    o.require(min_slack >= -1e-8, "oracle slack " + fmt(min_slack));
    o.require(worst_gap < 1e-8, "library vs oracle gap " + fmt(worst_gap));
    o.require(secs < 60.0, "runtime " + fmt(secs) + " s");
    o.detail << "1000 pairs, min oracle slack " << fmt(min_slack) << ", " << fmt(secs) << " s";
}

void c2(Outcome &o) {
    auto rep = run_suite("fuchs-vdg", 1000, kSeed);
    suite_clean(o, rep, 1000);
    double min_slack = 1e9;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        Rng rng(derive_seed(kSeed, i));
        auto [a, b] = random_state_pair(rng);
        double half_t = o_trace_norm_herm(a.matrix() - b.matrix()) / 2;
        double f = o_fidelity(a, b);
        double h = o_hellinger(a, b);
        min_slack = std::min({min_slack, half_t - (1 - std::sqrt(f)), std::sqrt(1 - f) - half_t, half_t - h * h,
                              std::sqrt(2.0) * h - half_t});
    }
    o.require(min_slack >= -1e-8, "oracle slack " + fmt(min_slack));
    auto pure = run_suite("pure-trace", 200, kSeed);
    suite_clean(o, pure, 200);
    double worst = 0.0;
    Rng rng(kSeed);
    for (int i = 0; i < 200; ++i) {
        std::size_t d = 2 + static_cast<std::size_t>(i % 7);
        auto p1 = random_pure_state(d, rng);
        auto p2 = random_pure_state(d, rng);
        double closed = 2 * std::sqrt(std::max(0.0, 1 - std::norm(p1.inner(p2))));
        worst = std::max(worst, std::abs(closed - trace_distance(DensityMatrix::from_pure(p1), DensityMatrix::from_pure(p2))));
    }
    o.require(worst <= 1e-9, "pure-state closed form off by " + fmt(worst));
    o.detail << "1000 pairs min slack " << fmt(min_slack) << ", pure-state max error " << fmt(worst);
}

void c3(Outcome &o) {
    auto rep = run_suite("jozsa", 200, kSeed);
    suite_clean(o, rep, 200);
    double worst = 0.0, worst_u = 0.0;
    Rng rng(kSeed + 3);
    for (int i = 0; i < 200; ++i) {
        std::size_t d = 2 + static_cast<std::size_t>(i % 4);
        auto r1 = random_density(d, 1 + static_cast<std::size_t>(i) % d, rng);
        auto r2 = random_density(d, 1 + static_cast<std::size_t>(i / 4) % d, rng);
        auto p1 = purify(r1, d), p2 = purify(r2, d);
        Matrix u = uhlmann_unitary(p1, p2);
        worst = std::max(worst, std::abs(purification_overlap(p1, p2, u) - o_fidelity(r1, r2)));
        worst_u = std::max(worst_u, (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm());
    }
    o.require(worst <= 1e-8, "overlap vs oracle " + fmt(worst));
    o.require(worst_u <= 1e-9, "unitarity " + fmt(worst_u));
    o.detail << "200 pairs, overlap error " << fmt(worst) << ", unitarity error " << fmt(worst_u);
}

void c4(Outcome &o) {
    auto rep = run_suite("local-transition", 200, kSeed);
    suite_clean(o, rep, 200);
    double worst_h = 0.0, min_slack = 1e9;
    Rng rng(kSeed + 4);
    for (int i = 0; i < 200; ++i) {
        std::size_t d = 2 + static_cast<std::size_t>(i % 4);
        auto r1 = random_density(d, 1 + static_cast<std::size_t>(i) % d, rng);
        auto r2 = random_density(d, 1 + static_cast<std::size_t>(i / 4) % d, rng);
        auto lt = local_transition(r1, r2, purify(r1, d), purify(r2, d));
        worst_h = std::max(worst_h, std::abs(lt.h_states - o_hellinger(r1, r2)));
        double t = o_trace_norm_herm(r1.matrix() - r2.matrix());
        min_slack = std::min(min_slack, 2 * std::sqrt(t) - lt.trace_states);
    }
    o.require(worst_h <= 1e-8, "h equality off by " + fmt(worst_h));
    o.require(min_slack >= -1e-8, "trace bound slack " + fmt(min_slack));
    o.detail << "200 pairs, h error " << fmt(worst_h) << ", min trace slack " << fmt(min_slack);
}

void c5(Outcome &o) {
    auto rep = run_suite("average-encoding", 300, kSeed);
    suite_clean(o, rep, 300);
    auto rho = random_density(3, 2, kSeed);
    Encoding constant({"a", "b", "c", "d"}, Distribution({0.1, 0.2, 0.3, 0.4}), {rho, rho, rho, rho});
    auto c = average_encoding_report(constant);
    o.require(std::abs(c.mutual_info) < 1e-12 && std::abs(c.avg_trace_dist) < 1e-12 && std::abs(c.avg_h_sq) < 1e-12,
              "constant encoding not zero: I=" + fmt(c.mutual_info) + " t=" + fmt(c.avg_trace_dist));
    o.require(c.bound1_holds && c.bound2_holds, "constant encoding bounds");
    o.detail << "300 encodings clean, constant encoding I = " << fmt(c.mutual_info);
}

void c6(Outcome &o) {
    auto info = run_suite("info-distance", 300, kSeed);
    suite_clean(o, info, 300);
    auto block = run_suite("block-diagonal", 100, kSeed);
    suite_clean(o, block, 100);
    for (const char *eps : {"0.05", "0.10", "0.20"}) {
        const auto &s = block.stats(std::string("block-diagonal-boolean-eps-") + eps);
        o.require(s.violations == 0 && s.trials == 100, std::string("helstrom scenario eps ") + eps);
    }
    o.detail << info.results.size() << " distance properties on 300 states, " << block.results.size()
             << " block-diagonal checks on 100 states";
}

void c7(Outcome &o) {
    std::size_t runs = 0;
    auto sk_check = [&](const SkInstance &s) {
        std::size_t n = s.width, k = static_cast<std::size_t>(s.level);
        auto right = sk_protocol_right_start(s);
        auto wrong = sk_protocol_wrong_start(s);
        int truth = sk_oracle(s);
        o.require(right.output == truth && wrong.output == truth, "S_k output mismatch");
        o.require(right.transcript.total_bits() == k * ceil_log2(n), "S_k right-start bits");
        o.require(wrong.transcript.total_bits() == (k - 1) * ceil_log2(n) + n, "S_k wrong-start bits");
        ++runs;
    };
    auto pj_check = [&](const PjInstance &p, int k) {
        auto run = pj_det_protocol(p, k);
        o.require(run.output == pj_oracle(p, k), "PJ output mismatch");
        o.require(run.transcript.total_bits() == static_cast<std::size_t>(k) * ceil_log2(p.n), "PJ bits");
        ++runs;
    };
    for (int k = 1; k <= 3; ++k) {
        for (std::uint64_t i = 0; i < sk_instance_count(2, k); ++i) {
            sk_check(sk_instance_from_index(2, k, i));
        }
        for (std::size_t n = 1; n <= 3; ++n) {
            for (std::uint64_t i = 0; i < pj_instance_count(n); ++i) {
                pj_check(pj_instance_from_index(n, i), k);
            }
        }
    }
    Rng rng(kSeed + 7);
    for (int t = 0; t < 1000; ++t) {
        sk_check(random_sk(3 + static_cast<std::size_t>(t % 6), 1 + t % 4, rng));
        pj_check(random_pj(4 + static_cast<std::size_t>(t % 29), rng), 1 + t % 8);
    }
    o.detail << runs << " runs exact";
}

void c8(Outcome &o) {
    const std::size_t n = 4096, trials = 2000;
    const int k = 12;
    const double eps = 0.2;
    auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg{"pj-nw", n, k, eps, trials, 1, false};
    auto rep = run_experiment(cfg);

    // Replay every trial against the walk oracle.
    auto params = nw_params(n, k, eps);
    std::size_t aborts = 0, wrong = 0, max_bits = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        Rng rng(derive_seed(cfg.seed, 2 * i));
        auto inst = random_pj(n, rng);
        PublicCoins coins(derive_seed(cfg.seed, 2 * i + 1));
        auto run = pj_nw_protocol(inst, params, coins);
        aborts += run.aborted ? 1 : 0;
        wrong += (!run.aborted && run.output != pj_oracle(inst, k)) ? 1 : 0;
        max_bits = std::max(max_bits, run.transcript.total_bits());
    }
    double secs = elapsed_s(t0);
    double abort_rate = static_cast<double>(aborts) / trials;
    double limit = eps + 3 * std::sqrt(eps * (1 - eps) / trials);
    double budget = k * std::log2(double(n)) +
                    double(n) / k * std::log(1 / eps) * (iterated_log(double(n), (k + 1) / 2) + 3 * std::log2(double(k)));
    double constant = static_cast<double>(max_bits) / budget;
    o.require(wrong == 0 && rep.errors_without_abort == 0, "(a) " + std::to_string(wrong) + " wrong outputs");
    o.require(abort_rate <= limit, "(b) abort rate " + fmt(abort_rate));
    o.require(static_cast<double>(max_bits) <= 10 * budget, "(c) bits " + std::to_string(max_bits));
    o.require(rep.aborts == aborts && rep.max_bits == max_bits, "report disagrees with replay");
    o.require(secs < 120.0, "runtime " + fmt(secs) + " s");
    o.detail << "abort rate " << fmt(abort_rate) << " <= " << fmt(limit) << ", max bits " << max_bits
             << ", measured C " << fmt(constant) << ", " << fmt(secs) << " s";
}

void c9(Outcome &o) {
    auto check = [&](const SkInstance &s) {
        auto red = sk_to_disj(s);
        std::set<std::uint64_t> b(red.instance.set_b.begin(), red.instance.set_b.end());
        std::size_t common = 0;
        for (auto x : red.instance.set_a) {
            common += b.count(x);
        }
        o.require(common <= 1, "intersection larger than one");
        o.require((common > 0) == (sk_oracle(s) == 1), "DISJ disagrees with S_k");
        o.require(disj_eval(red.instance) == (common > 0), "disj_eval disagrees with brute force");
        return red;
    };
    for (std::uint64_t i = 0; i < sk_instance_count(2, 2); ++i) {
        check(sk_instance_from_index(2, 2, i));
    }
    Rng rng(kSeed + 9);
    for (int t = 0; t < 500; ++t) {
        auto red = check(random_sk(4, 3, rng));
        o.require(red.padded, "odd k not padded");
    }
    o.detail << sk_instance_count(2, 2) << " exhaustive + 500 padded instances";
}

void c10(Outcome &o) {
    auto prefixes_ok = [&](const QSchedule &s, const std::string &name) {
        for (const auto &p : prefix_accounts(s)) {
            o.require(p.i_x_b <= 2.0 * static_cast<double>(p.qubits_alice_to_bob) + 1e-6,
                      name + " prefix of " + std::to_string(p.steps) + " steps");
        }
    };
    prefixes_ok(send_classical_bit_schedule(), "send-classical-bit");
    auto sd = superdense_coding_schedule();
    prefixes_ok(sd, "superdense");
    auto run = run_qprotocol(sd, InputMode::uniform());
    double i = info_account(sd, run).i_x_b;
    o.require(std::abs(i - 2.0) <= 1e-6 && run.alice_to_bob == 1, "superdense I = " + fmt(i));
    for (std::size_t n : {2u, 3u}) {
        for (std::size_t m : {0u, 1u, 2u, 3u}) {
            prefixes_ok(random_access_schedule(n, m, std::nullopt), "random-access");
            for (std::size_t idx = 0; idx < n; ++idx) {
                prefixes_ok(random_access_schedule(n, m, idx), "random-access");
            }
            o.require(random_access_demo(n, m).info_bound_check, "random-access bound");
        }
    }
    std::size_t c = 7;
    auto st = safe_storage_transform(coin_length_example(c), kSeed);
    o.require(st.total == 2 * c && st.decode_ok, "safe storage total " + std::to_string(st.total));
    o.detail << "superdense I = " << fmt(i) << ", safe storage 2c = " << st.total;
}

void c11(Outcome &o) {
    double worst_ratio = 0.0;
    int configs = 0;
    for (std::size_t n : {2u, 4u, 6u, 8u}) {
        for (std::size_t ell1 : {1u, 2u, 3u}) {
            ReductionDemoConfig cfg;
            cfg.n = n;
            cfg.ell1 = ell1;
            cfg.channels = 50;
            cfg.seed = derive_seed(kSeed, n * 10 + ell1);
            auto rep = classical_round_reduction_demo(cfg);
            double bound = std::sqrt(2.0 * static_cast<double>(ell1) / static_cast<double>(n));
            o.require(rep.distances.size() == 50, "channel count");
            for (double d : rep.distances) {
                o.require(d <= bound + 1e-8, "n=" + std::to_string(n) + " ell1=" + std::to_string(ell1) + " distance " + fmt(d));
            }
            worst_ratio = std::max(worst_ratio, rep.max_stat_distance / bound);
            ++configs;
        }
    }
    o.detail << configs << " configurations x 50 channels, max distance/bound " << fmt(worst_ratio);
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        std::function<void(Outcome &)> run;
    };
    std::vector<Criterion> all = {
        {1, "relative-entropy bounds", c1},
        {2, "Fuchs-van de Graaf and Hellinger sandwich", c2},
        {3, "Jozsa/Uhlmann purification overlap", c3},
        {4, "local transition", c4},
        {5, "average encoding", c5},
        {6, "informational distance", c6},
        {7, "deterministic protocols", c7},
        {8, "randomized pointer jumping", c8},
        {9, "DISJ reduction", c9},
        {10, "quantum information accounting", c10},
        {11, "classical reduction demo", c11},
    };
    int failed = 0;
    for (auto &c : all) {
        Outcome o;
        try {
            c.run(o);
        } catch (const std::exception &e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
