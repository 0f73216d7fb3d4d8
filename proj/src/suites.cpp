#include "qcomm/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "qcomm/metrics.hpp"
#include "qcomm/transitions.hpp"

namespace qcomm {

namespace {

std::size_t uniform_size(Rng &rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

DensityMatrix random_state(Rng &rng, std::size_t dim) { return random_density(dim, uniform_size(rng, 1, dim), rng); }

KrausChannel random_small_channel(Rng &rng, std::size_t din, std::size_t dout) {
    std::size_t anc = std::max(uniform_size(rng, 1, 4), (din + dout - 1) / dout);
    return random_channel(din, dout, rng, anc);
}

class Recorder {
   public:
    explicit Recorder(SuiteReport &rep) : rep_(rep) {}

    void record(const std::string &name, double slack, double tol, std::uint64_t seed,
                const std::function<std::vector<Matrix>()> &inputs) {
        PropertyStats &s = slot(name, tol);
        ++s.trials;
        if (std::isnan(slack)) {
            slack = -std::numeric_limits<double>::infinity();
        }
        if (s.trials == 1 || slack < s.min_slack) {
            s.min_slack = slack;
            s.worst_case_seed = seed;
        }
        s.max_violation = std::max(s.max_violation, -slack);
        if (slack < -tol) {
            if (s.violations == 0) {
                s.failing_inputs = inputs();
            }
            ++s.violations;
        }
    }

    void record(const InequalityCheck &c, std::uint64_t seed, const std::function<std::vector<Matrix>()> &inputs) {
        record(std::string(to_string(c.tag)), c.slack, kInequalitySlack, seed, inputs);
    }

    void observe_max(const std::string &name, double v) {
        auto it = rep_.observations.find(name);
        if (it == rep_.observations.end() || v > it->second) {
            rep_.observations[name] = v;
        }
    }

   private:
    PropertyStats &slot(const std::string &name, double tol) {
        for (auto &s : rep_.results) {
            if (s.inequality == name) {
                return s;
            }
        }
        rep_.results.push_back(PropertyStats{name, 0, 0, tol, 0.0, 0.0, 0, {}});
        return rep_.results.back();
    }

    SuiteReport &rep_;
};

std::function<std::vector<Matrix>()> mats(std::initializer_list<const DensityMatrix *> states) {
    std::vector<Matrix> m;
    for (const auto *s : states) {
        m.push_back(s->matrix());
    }
    return [m] { return m; };
}

using TrialFn = std::function<void(Rng &, std::uint64_t, Recorder &)>;

void pair_trial(Rng &rng, std::uint64_t seed, Recorder &rec, std::initializer_list<Inequality> tags) {
    auto [r1, r2] = random_state_pair(rng);
    InequalityInputs in;
    in.states = {r1, r2};
    for (auto t : tags) {
        rec.record(check_inequality(t, in), seed, mats({&r1, &r2}));
    }
}

void relative_entropy_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    pair_trial(rng, seed, rec, {Inequality::RelativeVsTrace, Inequality::RelativeVsHellinger});
}

void fuchs_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    pair_trial(rng, seed, rec, {Inequality::FuchsVdg, Inequality::Sandwich});
}

void pure_trace_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    std::size_t d = uniform_size(rng, 2, 8);
    PureState a = random_pure_state(d, rng);
    PureState b = random_pure_state(d, rng);
    InequalityInputs in;
    in.pure_states = {a, b};
    InequalityCheck c = check_inequality(Inequality::PureTraceFormula, in);
    DensityMatrix ra = DensityMatrix::from_pure(a);
    DensityMatrix rb = DensityMatrix::from_pure(b);
    rec.record(std::string(to_string(c.tag)), c.slack, 1e-9, seed, mats({&ra, &rb}));
}

void monotonicity_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    std::size_t din = uniform_size(rng, 2, 6);
    std::size_t dout = uniform_size(rng, 2, 6);
    KrausChannel t = random_small_channel(rng, din, dout);
    DensityMatrix r1 = random_state(rng, din);
    DensityMatrix r2 = random_state(rng, din);
    InequalityInputs in;
    in.states = {r1, r2};
    in.channel = t;
    auto inputs = [&] {
        std::vector<Matrix> m{r1.matrix(), r2.matrix()};
        for (const auto &k : t.kraus_ops()) {
            m.push_back(k);
        }
        return m;
    };
    rec.record(check_inequality(Inequality::TraceMonotone, in), seed, inputs);
    rec.record(check_inequality(Inequality::HellingerMonotone, in), seed, inputs);
}

void measurement_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    std::size_t d = uniform_size(rng, 2, 8);
    Povm m = random_povm(d, uniform_size(rng, 2, 6), rng);
    DensityMatrix r1 = random_state(rng, d);
    DensityMatrix r2 = random_state(rng, d);
    InequalityInputs in;
    in.states = {r1, r2};
    in.povm = m;
    rec.record(check_inequality(Inequality::MeasuredFidelity, in), seed, [&] {
        std::vector<Matrix> v{r1.matrix(), r2.matrix()};
        for (const auto &e : m.elements()) {
            v.push_back(e);
        }
        return v;
    });
}

void triple_trial(Rng &rng, std::uint64_t seed, Recorder &rec, std::initializer_list<Inequality> tags) {
    std::size_t d = uniform_size(rng, 2, 8);
    DensityMatrix r1 = random_state(rng, d);
    DensityMatrix r2 = random_state(rng, d);
    DensityMatrix r3 = random_state(rng, d);
    InequalityInputs in;
    in.states = {r1, r2, r3};
    for (auto t : tags) {
        rec.record(check_inequality(t, in), seed, mats({&r1, &r2, &r3}));
    }
}

void quasi_triangle_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    triple_trial(rng, seed, rec, {Inequality::QuasiTriangle});
}

void metric_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    std::size_t d = uniform_size(rng, 2, 8);
    DensityMatrix r1 = random_state(rng, d);
    DensityMatrix r2 = random_state(rng, d);
    DensityMatrix r3 = random_state(rng, d);
    InequalityInputs in;
    in.states = {r1, r2, r3};
    auto inputs = mats({&r1, &r2, &r3});
    rec.record(std::string(to_string(Inequality::TraceTriangle)),
               check_inequality(Inequality::TraceTriangle, in).slack, 1e-9, seed, inputs);
    rec.record(std::string(to_string(Inequality::HellingerTriangle)),
               check_inequality(Inequality::HellingerTriangle, in).slack, 1e-9, seed, inputs);
    rec.record("trace-symmetry", -std::abs(trace_distance(r1, r2) - trace_distance(r2, r1)), 1e-9, seed, inputs);
    rec.record("hellinger-symmetry", -std::abs(hellinger(r1, r2) - hellinger(r2, r1)), 1e-9, seed, inputs);
    rec.record("trace-identity", -trace_distance(r1, r1), 1e-9, seed, inputs);
    rec.record("hellinger-identity", -hellinger(r1, r1), 1e-6, seed, inputs);
    double t = trace_distance(r1, r2);
    double h = hellinger(r1, r2);
    rec.record("trace-range", std::min(t, 2.0 - t), 1e-9, seed, inputs);
    rec.record("hellinger-range", std::min(h, 1.0 - h), 1e-9, seed, inputs);
}

struct Tripartite {
    DensityMatrix rho;
    BipartiteLayout layout;
};

Tripartite random_tripartite(Rng &rng) {
    std::size_t dx = uniform_size(rng, 2, 3);
    std::size_t dy = uniform_size(rng, 2, 3);
    std::size_t dz = uniform_size(rng, 2, 3);
    std::size_t d = dx * dy * dz;
    return Tripartite{random_density(d, uniform_size(rng, 1, d), rng), BipartiteLayout{{dx, dy, dz}}};
}

DensityMatrix keep(const Tripartite &t, std::vector<std::size_t> factors) {
    return partial_trace(t.rho, t.layout, factors);
}

void info_distance_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    Tripartite t = random_tripartite(rng);
    const auto &f = t.layout.factor_dims;
    auto inputs = mats({&t.rho});
    DensityMatrix xy = keep(t, {0, 1});
    DensityMatrix xz = keep(t, {0, 2});

    double d_xy = informational_distance(xy, Bipartition::of(f[0], f[1]));
    DensityMatrix yx = permute_factors(xy, BipartiteLayout{{f[0], f[1]}}, std::vector<std::size_t>{1, 0});
    double d_yx = informational_distance(yx, Bipartition::of(f[1], f[0]));
    rec.record("d-symmetry", -std::abs(d_xy - d_yx), 1e-9, seed, inputs);
    rec.record("d-range", std::min(d_xy, 1.0 - d_xy), 1e-8, seed, inputs);

    std::size_t dxy = f[0] * f[1];
    KrausChannel ch = random_small_channel(rng, dxy, uniform_size(rng, 2, 6));
    DensityMatrix prod = product_of_marginals(xy, Bipartition::of(f[0], f[1]));
    double h_after = hellinger(apply_channel(ch, xy), apply_channel(ch, prod));
    rec.record("d-channel", d_xy - h_after, 1e-8, seed, inputs);

    double d_xy_z = informational_distance(t.rho, Bipartition{t.layout, {0, 1}});
    double d_x_z = informational_distance(xz, Bipartition::of(f[0], f[2]));
    rec.record("d-monotone", d_xy_z - d_x_z, 1e-8, seed, inputs);

    double i_xy = mutual_information(xy, Bipartition::of(f[0], f[1]));
    rec.record("d-sqrt-mi", std::sqrt(std::max(i_xy, 0.0)) - d_xy, 1e-8, seed, inputs);
}

void mi_chain_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    Tripartite t = random_tripartite(rng);
    const auto &f = t.layout.factor_dims;
    auto inputs = mats({&t.rho});
    double i_x_yz = mutual_information(t.rho, Bipartition{t.layout, {0}});
    double i_x_y = mutual_information(keep(t, {0, 1}), Bipartition::of(f[0], f[1]));
    double i_xy_z = mutual_information(t.rho, Bipartition{t.layout, {0, 1}});
    double i_y_z = mutual_information(keep(t, {1, 2}), Bipartition::of(f[1], f[2]));
    rec.record("mi-chain-rule", -std::abs(i_x_yz - (i_x_y + i_xy_z - i_y_z)), 1e-8, seed, inputs);
    rec.record("mi-strong-subadditivity", i_x_yz - i_x_y, 1e-8, seed, inputs);
    double rel = mutual_information_relative(t.rho, Bipartition{t.layout, {0}});
    rec.record("mi-relative-form", -std::abs(i_x_yz - rel), 1e-8, seed, inputs);
    rec.record("mi-nonnegative", i_x_yz, 1e-9, seed, inputs);
}

Distribution random_prior(Rng &rng, std::size_t n, int kind) {
    std::vector<double> p(n);
    if (kind == 0) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
    } else if (kind == 1) {
        std::exponential_distribution<double> e(1.0);
        double s = 0.0;
        for (auto &x : p) {
            s += (x = e(rng));
        }
        for (auto &x : p) {
            x /= s;
        }
    } else {
        // Geometric weights with a random ratio.
        double r = std::uniform_real_distribution<double>(0.1, 0.7)(rng);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += (p[i] = std::pow(r, static_cast<double>(i)));
        }
        for (auto &x : p) {
            x /= s;
        }
    }
    return Distribution(std::move(p));
}

Encoding random_encoding(Rng &rng, std::size_t max_labels, std::size_t max_dim, int prior_kind) {
    std::size_t nx = uniform_size(rng, 2, max_labels);
    std::size_t d = uniform_size(rng, 2, max_dim);
    std::vector<std::string> labels;
    std::vector<DensityMatrix> states;
    for (std::size_t x = 0; x < nx; ++x) {
        labels.push_back(std::to_string(x));
        states.push_back(random_state(rng, d));
    }
    return Encoding(labels, random_prior(rng, nx, prior_kind), states);
}

void block_diagonal_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    Encoding e = random_encoding(rng, 4, 4, static_cast<int>(seed % 3));
    DensityMatrix joint = e.joint_state();
    double d = informational_distance(joint, Bipartition::of(e.dim(), e.size()));
    DensityMatrix bar = e.average();
    double avg = 0.0;
    for (std::size_t x = 0; x < e.size(); ++x) {
        double h = hellinger(e.states()[x], bar);
        avg += e.probs()[x] * h * h;
    }
    rec.record("block-diagonal-average", -std::abs(d * d - avg), 1e-8, seed, mats({&joint}));
}

// Two states with disjoint supports, mixed so that the optimal measurement
// errs with probability eps.
void helstrom_trial(Rng &rng, std::uint64_t seed, Recorder &rec, double eps, SuiteReport &rep) {
    std::size_t half = uniform_size(rng, 1, 3);
    std::size_t d = 2 * half;
    Matrix u = random_unitary(d, rng);
    auto embed = [&](std::size_t offset) {
        DensityMatrix r = random_state(rng, half);
        Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        m.block(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(half),
                static_cast<Eigen::Index>(half)) = r.matrix();
        return Matrix(u * m * u.adjoint());
    };
    Matrix a = embed(0);
    Matrix b = embed(half);
    DensityMatrix s0((1.0 - eps) * a + eps * b);
    DensityMatrix s1((1.0 - eps) * b + eps * a);
    double err = helstrom_error(s0, s1);
    Encoding e({"0", "1"}, Distribution::uniform(2), {s0, s1});
    DensityMatrix joint = e.joint_state();
    double d_sq = std::pow(informational_distance(joint, Bipartition::of(d, 2)), 2);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", eps);
    auto inputs = mats({&s0, &s1});
    rec.record(std::string("helstrom-error-eps-") + buf, -std::abs(err - eps), 1e-9, seed, inputs);
    rec.record(std::string("block-diagonal-boolean-eps-") + buf, d_sq - (0.125 - err / 2.0), 1e-8, seed, inputs);
    std::string key = std::string("min_d_squared_eps_") + buf;
    auto it = rep.observations.find(key);
    if (it == rep.observations.end() || d_sq < it->second) {
        rep.observations[key] = d_sq;
    }
}

void jozsa_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    std::size_t d = uniform_size(rng, 2, 5);
    DensityMatrix r1 = random_state(rng, d);
    DensityMatrix r2 = random_state(rng, d);
    Purification p1 = purify(r1);
    Purification p2 = purify(r2);
    // A second, unrelated purification of r2.
    p2 = p2.apply_ancilla_unitary(random_unitary(p2.ancilla_dim(), rng));
    Matrix u = uhlmann_unitary(p1, p2);
    double overlap = purification_overlap(p1, p2, u);
    auto inputs = mats({&r1, &r2});
    rec.record("uhlmann-overlap", -std::abs(overlap - fidelity(r1, r2)), 1e-8, seed, inputs);
    Matrix id = Matrix::Identity(u.rows(), u.cols());
    rec.record("uhlmann-unitary", -(u.adjoint() * u - id).cwiseAbs().maxCoeff(), 1e-9, seed, inputs);
}

void local_transition_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    std::size_t d = uniform_size(rng, 2, 4);
    DensityMatrix r1 = random_state(rng, d);
    DensityMatrix r2 = random_state(rng, d);
    Purification p1 = purify(r1, d);
    Purification p2 = purify(r2, d);
    p2 = p2.apply_ancilla_unitary(random_unitary(d, rng));
    LocalTransitionReport lt = local_transition(r1, r2, p1, p2);
    auto inputs = mats({&r1, &r2});
    rec.record("lt-hellinger-equality", -std::abs(lt.h_states - lt.h_reduced), 1e-8, seed, inputs);
    rec.record("lt-trace-bound", lt.final_bound - lt.trace_states, 1e-8, seed, inputs);
    rec.record("lt-intermediate-bound", lt.intermediate_bound - lt.trace_states, 1e-8, seed, inputs);
    if (lt.final_bound > 0.0) {
        rec.observe_max("max_ratio_trace_to_final_bound", lt.trace_states / lt.final_bound);
    }
    if (lt.intermediate_bound > 0.0) {
        rec.observe_max("max_ratio_trace_to_intermediate_bound", lt.trace_states / lt.intermediate_bound);
    }
}

void average_encoding_trial(Rng &rng, std::uint64_t seed, Recorder &rec) {
    Encoding e = random_encoding(rng, 8, 8, static_cast<int>(seed % 3));
    AverageEncodingReport r = average_encoding_report(e);
    DensityMatrix joint = e.joint_state();
    auto inputs = mats({&joint});
    rec.record("aet-trace", r.bound1_rhs - r.avg_trace_dist, 1e-8, seed, inputs);
    rec.record("aet-hellinger", r.bound2_rhs - r.avg_h_sq, 1e-8, seed, inputs);
    rec.record("aet-mutual-information-forms", -std::abs(r.mutual_info - r.mutual_info_entropies), 1e-8, seed,
               inputs);
}

struct SuiteDef {
    std::string id;
    std::size_t default_trials;
    TrialFn trial;
};

const std::vector<SuiteDef> &suite_defs() {
    static const std::vector<SuiteDef> defs{
        {"relative-entropy", 1000, relative_entropy_trial},
        {"fuchs-vdg", 1000, fuchs_trial},
        {"pure-trace", 200, pure_trace_trial},
        {"monotonicity", 300, monotonicity_trial},
        {"measurement", 300, measurement_trial},
        {"quasi-triangle", 300, quasi_triangle_trial},
        {"metric", 300, metric_trial},
        {"info-distance", 300, info_distance_trial},
        {"block-diagonal", 100, block_diagonal_trial},
        {"mi-chain", 300, mi_chain_trial},
        {"jozsa", 200, jozsa_trial},
        {"local-transition", 200, local_transition_trial},
        {"average-encoding", 300, average_encoding_trial},
    };
    return defs;
}

const SuiteDef &find_suite(const std::string &id) {
    for (const auto &d : suite_defs()) {
        if (d.id == id) {
            return d;
        }
    }
    throw std::invalid_argument("unknown suite '" + id + "'");
}

void run_into(const SuiteDef &def, std::size_t trials, std::uint64_t seed, SuiteReport &rep) {
    Recorder rec(rep);
    for (std::size_t i = 0; i < trials; ++i) {
        std::uint64_t s = derive_seed(seed, i);
        Rng rng(s);
        def.trial(rng, s, rec);
    }
    if (def.id == "block-diagonal") {
        // Boolean scenarios: `trials` per error level, on a separate stream.
        const double levels[] = {0.05, 0.1, 0.2, 0.0};
        for (std::size_t l = 0; l < std::size(levels); ++l) {
            for (std::size_t i = 0; i < trials; ++i) {
                std::uint64_t s = derive_seed(derive_seed(seed, 1000003 + l), i);
                Rng rng(s);
                helstrom_trial(rng, s, rec, levels[l], rep);
            }
        }
        rep.observations["limit_one_minus_inv_sqrt2"] = 1.0 - 1.0 / std::sqrt(2.0);
    }
}

}  // namespace

std::pair<DensityMatrix, DensityMatrix> random_state_pair(Rng &rng, std::size_t min_dim, std::size_t max_dim) {
    std::size_t d = uniform_size(rng, min_dim, max_dim);
    DensityMatrix r1 = random_state(rng, d);
    DensityMatrix r2 = random_state(rng, d);
    return {std::move(r1), std::move(r2)};
}

bool SuiteReport::passed() const {
    return std::all_of(results.begin(), results.end(), [](const PropertyStats &s) { return s.violations == 0; });
}

const PropertyStats &SuiteReport::stats(const std::string &name) const {
    for (const auto &s : results) {
        if (s.inequality == name) {
            return s;
        }
    }
    throw std::out_of_range("suite report has no property '" + name + "'");
}

const std::vector<std::string> &suite_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto &d : suite_defs()) {
            v.push_back(d.id);
        }
        v.push_back("all");
        return v;
    }();
    return ids;
}

std::size_t default_trials(const std::string &suite) {
    if (suite == "all") {
        return 0;
    }
    return find_suite(suite).default_trials;
}

SuiteReport run_suite(const std::string &suite, std::size_t trials, std::uint64_t seed) {
    SuiteReport rep;
    rep.suite = suite;
    rep.trials = trials;
    rep.seed = seed;
    if (suite == "all") {
        // trials == 0 selects each suite's default count.
        const auto &defs = suite_defs();
        for (std::size_t i = 0; i < defs.size(); ++i) {
            run_into(defs[i], trials == 0 ? defs[i].default_trials : trials, derive_seed(seed, i), rep);
        }
        return rep;
    }
    const SuiteDef &def = find_suite(suite);
    run_into(def, trials == 0 ? def.default_trials : trials, seed, rep);
    if (trials == 0) {
        rep.trials = def.default_trials;
    }
    return rep;
}

}  // namespace qcomm
