#include "qcomm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qcomm {

namespace {

// Eigenvalues below this are treated as exact zeros in entropy-like sums.
constexpr double kZeroEigen = 1e-12;
// Weight of r1 on r2's kernel above which S(r1||r2) is infinite.
constexpr double kSupportWeight = 1e-9;

double xlogx(double x) { return x > kZeroEigen ? x * std::log2(x) : 0.0; }

void require_same_dim(const DensityMatrix &a, const DensityMatrix &b, const char *what) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()) + ")");
    }
}

void require_same_len(const Distribution &p, const Distribution &q, const char *what) {
    if (p.size() != q.size()) {
        throw std::invalid_argument(std::string(what) + ": length mismatch");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Distribution

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw std::invalid_argument("Distribution: empty");
    }
    double sum = 0.0;
    for (double &p : probs_) {
        if (!std::isfinite(p) || p < -1e-12) {
            throw std::invalid_argument("Distribution: invalid probability " + std::to_string(p));
        }
        p = std::max(p, 0.0);
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("Distribution: probabilities sum to " + std::to_string(sum));
    }
}

Distribution Distribution::uniform(std::size_t n) {
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

// ---------------------------------------------------------------------------
// Entropies and distances

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("binary_entropy: p outside [0, 1]");
    }
    return -xlogx(p) - xlogx(1.0 - p);
}

double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) {
        h -= xlogx(x);
    }
    return h;
}

double trace_norm(const Matrix &a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("trace_norm: expected a square matrix");
    }
    if (a.size() == 0) {
        return 0.0;
    }
    double scale = std::max(1.0, a.norm());
    if ((a - a.adjoint()).norm() <= 1e-13 * scale) {
        Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().sum();
}

double trace_distance(const DensityMatrix &r1, const DensityMatrix &r2) {
    require_same_dim(r1, r2, "trace_distance");
    return std::clamp(trace_norm(r1.matrix() - r2.matrix()), 0.0, 2.0);
}

namespace {

// Columns sqrt(lambda_i) v_i over the support (lambda_i > 1e-12), so that
// root * root^dag = rho. Eigensolver noise on the kernel would otherwise
// enter the square root at the 1e-8 level.
Matrix support_root(const DensityMatrix &r) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(r.matrix());
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) > 1e-12) {
            keep.push_back(i);
        }
    }
    Matrix root(es.eigenvectors().rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        root.col(static_cast<Eigen::Index>(j)) = std::sqrt(es.eigenvalues()(keep[j])) * es.eigenvectors().col(keep[j]);
    }
    return root;
}

}  // namespace

double fidelity(const DensityMatrix &r1, const DensityMatrix &r2) {
    require_same_dim(r1, r2, "fidelity");
    // ||sqrt(r1) sqrt(r2)||_t equals the trace norm of A1^dag A2 for any
    // factorisations r_i = A_i A_i^dag.
    Matrix a1 = support_root(r1);
    Matrix a2 = support_root(r2);
    Eigen::JacobiSVD<Matrix> svd(a1.adjoint() * a2);
    double root = svd.singularValues().sum();
    return std::clamp(root * root, 0.0, 1.0);
}

double hellinger(const DensityMatrix &r1, const DensityMatrix &r2) {
    require_same_dim(r1, r2, "hellinger");
    // 1 - sqrt F = min_U ||A1 - A2 U||_F^2 / 2, attained at the polar unitary
    // of A2^dag A1. This avoids the cancellation in 1 - sqrt F near F = 1.
    Matrix a1 = support_root(r1);
    Matrix a2 = support_root(r2);
    const Eigen::Index c1 = a1.cols(), c2 = a2.cols(), r = std::max(c1, c2);
    a1.conservativeResize(Eigen::NoChange, r);
    a2.conservativeResize(Eigen::NoChange, r);
    a1.rightCols(r - c1).setZero();
    a2.rightCols(r - c2).setZero();
    Eigen::JacobiSVD<Matrix> svd(a2.adjoint() * a1, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix u = svd.matrixU() * svd.matrixV().adjoint();
    double h_sq = 0.5 * (a1 - a2 * u).squaredNorm();
    return std::sqrt(std::clamp(h_sq, 0.0, 1.0));
}

double von_neumann_entropy(const DensityMatrix &r) {
    RealVector ev = r.eigenvalues();
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        s -= xlogx(ev(i));
    }
    return std::max(s, 0.0);
}

double relative_entropy(const DensityMatrix &r1, const DensityMatrix &r2) {
    require_same_dim(r1, r2, "relative_entropy");
    Eigen::SelfAdjointEigenSolver<Matrix> e1(r1.matrix());
    Eigen::SelfAdjointEigenSolver<Matrix> e2(r2.matrix());
    const RealVector &a = e1.eigenvalues();
    const RealVector &b = e2.eigenvalues();
    // overlap(i, j) = |<a_i|b_j>|^2
    Eigen::MatrixXd overlap = (e1.eigenvectors().adjoint() * e2.eigenvectors()).cwiseAbs2();

    double value = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        value += xlogx(a(i));
    }
    for (Eigen::Index j = 0; j < b.size(); ++j) {
        double weight = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (a(i) > kZeroEigen) {
                weight += a(i) * overlap(i, j);
            }
        }
        if (b(j) < kZeroEigen) {
            if (weight > kSupportWeight) {
                return kInfinity;
            }
            continue;
        }
        value -= weight * std::log2(b(j));
    }
    return std::max(value, 0.0);
}

// ---------------------------------------------------------------------------
// Bipartite quantities

Bipartition Bipartition::of(std::size_t dim_a, std::size_t dim_b) {
    return Bipartition{BipartiteLayout{dim_a, dim_b}, {0}};
}

std::vector<std::size_t> Bipartition::group_b() const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < layout.size(); ++f) {
        if (std::find(group_a.begin(), group_a.end(), f) == group_a.end()) {
            out.push_back(f);
        }
    }
    return out;
}

namespace {

void check_parts(const DensityMatrix &rho, const Bipartition &parts) {
    parts.layout.check(rho.dim());
    if (parts.group_a.empty() || parts.group_a.size() >= parts.layout.size()) {
        throw std::invalid_argument("bipartition: both groups must be non-empty");
    }
    for (std::size_t f : parts.group_a) {
        if (f >= parts.layout.size()) {
            throw std::invalid_argument("bipartition: factor index out of range");
        }
    }
}

}  // namespace

DensityMatrix product_of_marginals(const DensityMatrix &rho_ab, const Bipartition &parts) {
    check_parts(rho_ab, parts);
    std::vector<std::size_t> a = parts.group_a;
    std::sort(a.begin(), a.end());
    std::vector<std::size_t> b = parts.group_b();
    DensityMatrix rho_a = partial_trace(rho_ab, parts.layout, a);
    DensityMatrix rho_b = partial_trace(rho_ab, parts.layout, b);
    Matrix prod = tensor(rho_a.matrix(), rho_b.matrix());

    // prod has factor order a..., b...; map back to the original order.
    std::vector<std::size_t> order = a;
    order.insert(order.end(), b.begin(), b.end());
    std::vector<std::size_t> prod_dims;
    for (std::size_t f : order) {
        prod_dims.push_back(parts.layout.factor_dims[f]);
    }
    std::vector<std::size_t> perm(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        perm[order[pos]] = pos;
    }
    return DensityMatrix(permute_factors(prod, BipartiteLayout(prod_dims), perm));
}

double mutual_information(const DensityMatrix &rho_ab, const Bipartition &parts) {
    check_parts(rho_ab, parts);
    std::vector<std::size_t> a = parts.group_a;
    std::sort(a.begin(), a.end());
    double sa = von_neumann_entropy(partial_trace(rho_ab, parts.layout, a));
    double sb = von_neumann_entropy(partial_trace(rho_ab, parts.layout, parts.group_b()));
    return sa + sb - von_neumann_entropy(rho_ab);
}

double mutual_information_relative(const DensityMatrix &rho_ab, const Bipartition &parts) {
    return relative_entropy(rho_ab, product_of_marginals(rho_ab, parts));
}

double informational_distance(const DensityMatrix &rho_ab, const Bipartition &parts) {
    return hellinger(rho_ab, product_of_marginals(rho_ab, parts));
}

// ---------------------------------------------------------------------------
// Classical counterparts

double classical_fidelity(const Distribution &p, const Distribution &q) {
    require_same_len(p, q, "classical_fidelity");
    double bc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        bc += std::sqrt(p[i] * q[i]);
    }
    return std::clamp(bc * bc, 0.0, 1.0);
}

double classical_hellinger(const Distribution &p, const Distribution &q) {
    return std::sqrt(std::max(0.0, 1.0 - std::sqrt(classical_fidelity(p, q))));
}

double kl_divergence(const Distribution &p, const Distribution &q) {
    require_same_len(p, q, "kl_divergence");
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) {
            continue;
        }
        if (q[i] <= 0.0) {
            return kInfinity;
        }
        kl += p[i] * std::log2(p[i] / q[i]);
    }
    return std::max(kl, 0.0);
}

double l1_distance(const Distribution &p, const Distribution &q) {
    require_same_len(p, q, "l1_distance");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        d += std::abs(p[i] - q[i]);
    }
    return d;
}

MetricReport classical_metrics(const Distribution &p, const Distribution &q) {
    MetricReport r;
    double f = classical_fidelity(p, q);
    double h = std::sqrt(std::max(0.0, 1.0 - std::sqrt(f)));
    r.value = h;
    r.components["fidelity"] = f;
    r.components["hellinger"] = h;
    r.components["kl"] = kl_divergence(p, q);
    r.components["l1"] = l1_distance(p, q);
    return r;
}

double fano_bound(double p_correct) {
    if (!(p_correct >= 0.0 && p_correct <= 1.0)) {
        throw std::invalid_argument("fano_bound: probability outside [0, 1]");
    }
    return 1.0 - binary_entropy(p_correct);
}

// ---------------------------------------------------------------------------
// Inequality predicates

namespace {

struct TagName {
    Inequality tag;
    std::string_view name;
};

constexpr TagName kTagNames[] = {
    {Inequality::RelativeVsTrace, "relative-vs-trace"},
    {Inequality::RelativeVsHellinger, "relative-vs-hellinger"},
    {Inequality::FuchsVdg, "fuchs-vdg"},
    {Inequality::Sandwich, "sandwich"},
    {Inequality::QuasiTriangle, "quasi-triangle"},
    {Inequality::TraceTriangle, "trace-triangle"},
    {Inequality::HellingerTriangle, "hellinger-triangle"},
    {Inequality::TraceMonotone, "trace-monotone"},
    {Inequality::HellingerMonotone, "hellinger-monotone"},
    {Inequality::MeasuredFidelity, "measured-fidelity"},
    {Inequality::PureTraceFormula, "pure-trace-formula"},
};

void need_states(const InequalityInputs &in, std::size_t n, Inequality tag) {
    if (in.states.size() != n) {
        throw std::invalid_argument(std::string(to_string(tag)) + ": expects " + std::to_string(n) +
                                    " density matrices, got " + std::to_string(in.states.size()));
    }
}

}  // namespace

std::string_view to_string(Inequality tag) {
    for (const auto &tn : kTagNames) {
        if (tn.tag == tag) {
            return tn.name;
        }
    }
    return "unknown";
}

Inequality inequality_from_string(std::string_view name) {
    for (const auto &tn : kTagNames) {
        if (tn.name == name) {
            return tn.tag;
        }
    }
    throw std::invalid_argument("unknown inequality tag: " + std::string(name));
}

std::vector<Inequality> all_inequalities() {
    std::vector<Inequality> out;
    for (const auto &tn : kTagNames) {
        out.push_back(tn.tag);
    }
    return out;
}

InequalityCheck chain_check(Inequality tag, std::vector<double> chain, double tol) {
    InequalityCheck c;
    c.tag = tag;
    c.slack = kInfinity;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        double lo = chain[i];
        double hi = chain[i + 1];
        double s = (hi == kInfinity) ? kInfinity : hi - lo;
        if (s < c.slack || i == 0) {
            c.slack = s;
            c.lhs = hi;
            c.rhs = lo;
        }
    }
    c.holds = c.slack >= -tol;
    c.chain = std::move(chain);
    return c;
}

InequalityCheck check_inequality(Inequality tag, const InequalityInputs &in, double tol) {
    constexpr double ln2 = std::numbers::ln2;
    switch (tag) {
        case Inequality::RelativeVsTrace: {
            need_states(in, 2, tag);
            double t = trace_distance(in.states[0], in.states[1]);
            return chain_check(tag, {t * t / (2.0 * ln2), relative_entropy(in.states[0], in.states[1])}, tol);
        }
        case Inequality::RelativeVsHellinger: {
            need_states(in, 2, tag);
            double h = hellinger(in.states[0], in.states[1]);
            return chain_check(tag, {2.0 * h * h / ln2, relative_entropy(in.states[0], in.states[1])}, tol);
        }
        case Inequality::FuchsVdg: {
            need_states(in, 2, tag);
            double f = fidelity(in.states[0], in.states[1]);
            double half_t = trace_distance(in.states[0], in.states[1]) / 2.0;
            return chain_check(tag, {1.0 - std::sqrt(f), half_t, std::sqrt(1.0 - f)}, tol);
        }
        case Inequality::Sandwich: {
            need_states(in, 2, tag);
            double h = hellinger(in.states[0], in.states[1]);
            double half_t = trace_distance(in.states[0], in.states[1]) / 2.0;
            return chain_check(tag, {h * h, half_t, std::sqrt(2.0) * h}, tol);
        }
        case Inequality::QuasiTriangle: {
            need_states(in, 3, tag);
            double h12 = hellinger(in.states[0], in.states[1]);
            double h13 = hellinger(in.states[0], in.states[2]);
            double h32 = hellinger(in.states[2], in.states[1]);
            return chain_check(tag, {h12 * h12, (h13 + h32) * (h13 + h32), 2.0 * h13 * h13 + 2.0 * h32 * h32}, tol);
        }
        case Inequality::TraceTriangle: {
            need_states(in, 3, tag);
            return chain_check(tag,
                               {trace_distance(in.states[0], in.states[1]),
                                trace_distance(in.states[0], in.states[2]) + trace_distance(in.states[2], in.states[1])},
                               tol);
        }
        case Inequality::HellingerTriangle: {
            need_states(in, 3, tag);
            return chain_check(
                tag,
                {hellinger(in.states[0], in.states[1]),
                 hellinger(in.states[0], in.states[2]) + hellinger(in.states[2], in.states[1])},
                tol);
        }
        case Inequality::TraceMonotone: {
            need_states(in, 2, tag);
            if (!in.channel) {
                throw std::invalid_argument("trace-monotone: needs a channel");
            }
            Matrix diff = in.states[0].matrix() - in.states[1].matrix();
            return chain_check(tag, {trace_norm(apply_channel(*in.channel, diff)), trace_norm(diff)}, tol);
        }
        case Inequality::HellingerMonotone: {
            need_states(in, 2, tag);
            if (!in.channel) {
                throw std::invalid_argument("hellinger-monotone: needs a channel");
            }
            return chain_check(tag,
                               {hellinger(apply_channel(*in.channel, in.states[0]),
                                          apply_channel(*in.channel, in.states[1])),
                                hellinger(in.states[0], in.states[1])},
                               tol);
        }
        case Inequality::MeasuredFidelity: {
            need_states(in, 2, tag);
            if (!in.povm) {
                throw std::invalid_argument("measured-fidelity: needs a POVM");
            }
            // Renormalise: outcome sums carry eigensolver rounding.
            auto as_dist = [](std::vector<double> p) {
                double s = std::accumulate(p.begin(), p.end(), 0.0);
                for (double &x : p) {
                    x /= s;
                }
                return Distribution(std::move(p));
            };
            Distribution p = as_dist(measure_povm(*in.povm, in.states[0]));
            Distribution q = as_dist(measure_povm(*in.povm, in.states[1]));
            return chain_check(tag, {fidelity(in.states[0], in.states[1]), classical_fidelity(p, q)}, tol);
        }
        case Inequality::PureTraceFormula: {
            if (in.pure_states.size() != 2) {
                throw std::invalid_argument("pure-trace-formula: expects 2 pure states");
            }
            const auto &a = in.pure_states[0];
            const auto &b = in.pure_states[1];
            double ov = std::norm(a.inner(b));
            double closed = 2.0 * std::sqrt(std::max(0.0, 1.0 - ov));
            double direct = trace_norm(a.amplitudes() * a.amplitudes().adjoint() -
                                       b.amplitudes() * b.amplitudes().adjoint());
            return chain_check(tag, {direct, closed, direct}, tol);
        }
    }
    throw std::invalid_argument("check_inequality: unknown tag");
}

}  // namespace qcomm
