#include "qcomm/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qcomm {

// ---------------------------------------------------------------------------
// Purification

Matrix Purification::coefficients() const {
    auto d = static_cast<Eigen::Index>(system_dim());
    auto a = static_cast<Eigen::Index>(ancilla_dim());
    Matrix c(d, a);
    const Vector &v = state.amplitudes();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < a; ++j) {
            c(i, j) = v(i * a + j);
        }
    }
    return c;
}

Purification Purification::from_coefficients(const Matrix &c) {
    Vector v(c.rows() * c.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
            v(i * c.cols() + j) = c(i, j);
        }
    }
    return Purification{PureState(std::move(v)),
                        BipartiteLayout{static_cast<std::size_t>(c.rows()), static_cast<std::size_t>(c.cols())}};
}

DensityMatrix Purification::reduced() const {
    Matrix c = coefficients();
    return DensityMatrix(c * c.adjoint());
}

Purification Purification::padded(std::size_t new_ancilla) const {
    if (new_ancilla < ancilla_dim()) {
        throw std::invalid_argument("Purification::padded: cannot shrink the ancilla");
    }
    Matrix c = coefficients();
    Matrix p = Matrix::Zero(c.rows(), static_cast<Eigen::Index>(new_ancilla));
    p.leftCols(c.cols()) = c;
    return from_coefficients(p);
}

Purification Purification::apply_ancilla_unitary(const Matrix &u) const {
    if (static_cast<std::size_t>(u.rows()) != ancilla_dim() || u.rows() != u.cols()) {
        throw std::invalid_argument("apply_ancilla_unitary: unitary does not match ancilla dimension");
    }
    // (I (x) U)|phi> has coefficient matrix C U^T.
    return from_coefficients(coefficients() * u.transpose());
}

Purification purify(const DensityMatrix &rho, std::size_t ancilla_dim) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    const RealVector &ev = es.eigenvalues();
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = ev.size(); i-- > 0;) {
        if (ev(i) > 1e-12) {
            support.push_back(i);
        }
    }
    if (support.empty()) {
        throw std::invalid_argument("purify: state has empty support");
    }
    std::size_t anc = std::max(ancilla_dim, support.size());
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(rho.dim()), static_cast<Eigen::Index>(anc));
    for (std::size_t j = 0; j < support.size(); ++j) {
        c.col(static_cast<Eigen::Index>(j)) = std::sqrt(ev(support[j])) * es.eigenvectors().col(support[j]);
    }
    c /= c.norm();
    return Purification::from_coefficients(c);
}

namespace {

void check_same_system(const Purification &a, const Purification &b) {
    if (a.layout.size() != 2 || b.layout.size() != 2) {
        throw std::invalid_argument("purification layout must have exactly two factors");
    }
    if (a.system_dim() != b.system_dim()) {
        throw std::invalid_argument("purifications live on different system dimensions");
    }
}

}  // namespace

Matrix uhlmann_unitary(const Purification &phi1, const Purification &phi2) {
    check_same_system(phi1, phi2);
    std::size_t anc = std::max(phi1.ancilla_dim(), phi2.ancilla_dim());
    Matrix c1 = phi1.padded(anc).coefficients();
    Matrix c2 = phi2.padded(anc).coefficients();
    // <phi1|(I (x) U)|phi2> = Tr(B U) with B = (C1^dag C2)^T; for B = W S V^dag
    // the maximum |Tr(B U)| = Tr S is attained at U = V W^dag.
    Matrix b = (c1.adjoint() * c2).transpose();
    Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixV() * svd.matrixU().adjoint();
}

double purification_overlap(const Purification &phi1, const Purification &phi2, const Matrix &u) {
    check_same_system(phi1, phi2);
    std::size_t anc = static_cast<std::size_t>(u.rows());
    Purification rotated = phi2.padded(anc).apply_ancilla_unitary(u);
    return std::norm(phi1.padded(anc).state.inner(rotated.state));
}

LocalTransitionReport local_transition(const DensityMatrix &rho1, const DensityMatrix &rho2,
                                       const Purification &phi1, const Purification &phi2, double tol) {
    check_same_system(phi1, phi2);
    if (rho1.dim() != phi1.system_dim() || rho2.dim() != phi2.system_dim()) {
        throw std::invalid_argument("local_transition: purification system dimension mismatch");
    }
    if ((phi1.reduced().matrix() - rho1.matrix()).norm() > 1e-9 ||
        (phi2.reduced().matrix() - rho2.matrix()).norm() > 1e-9) {
        throw std::invalid_argument("local_transition: purification does not reduce to the given state");
    }
    std::size_t anc = std::max(phi1.ancilla_dim(), phi2.ancilla_dim());
    if (anc < rho1.dim()) {
        throw std::invalid_argument("local_transition: ancilla dimension smaller than system dimension");
    }
    Purification p1 = phi1.padded(anc);
    Purification p2 = phi2.padded(anc);

    LocalTransitionReport r;
    r.unitary = uhlmann_unitary(p1, p2);
    r.phi2_prime = p2.apply_ancilla_unitary(r.unitary).state;

    DensityMatrix s1 = DensityMatrix::from_pure(p1.state);
    DensityMatrix s2 = DensityMatrix::from_pure(r.phi2_prime);
    r.h_states = hellinger(s1, s2);
    r.h_reduced = hellinger(rho1, rho2);
    r.trace_states = trace_distance(s1, s2);
    r.trace_reduced = trace_distance(rho1, rho2);
    r.intermediate_bound = 2.0 * std::numbers::sqrt2 * r.h_reduced;
    r.final_bound = 2.0 * std::sqrt(r.trace_reduced);
    r.h_equal = std::abs(r.h_states - r.h_reduced) <= tol;
    r.trace_bound_holds = r.trace_states <= r.final_bound + tol && r.trace_states <= r.intermediate_bound + tol;
    return r;
}

// ---------------------------------------------------------------------------
// Average encoding

Encoding::Encoding(std::vector<std::string> labels, Distribution probs, std::vector<DensityMatrix> states)
    : labels_(std::move(labels)), probs_(std::move(probs)), states_(std::move(states)) {
    if (states_.empty()) {
        throw std::invalid_argument("Encoding: no states");
    }
    if (labels_.size() != states_.size() || probs_.size() != states_.size()) {
        throw std::invalid_argument("Encoding: labels, probabilities and states differ in count");
    }
    for (const auto &s : states_) {
        if (s.dim() != states_.front().dim()) {
            throw std::invalid_argument("Encoding: states have different dimensions");
        }
    }
}

DensityMatrix Encoding::average() const {
    auto d = static_cast<Eigen::Index>(dim());
    Matrix m = Matrix::Zero(d, d);
    for (std::size_t x = 0; x < size(); ++x) {
        m += probs_[x] * states_[x].matrix();
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix Encoding::joint_state() const {
    auto d = static_cast<Eigen::Index>(dim());
    auto nx = static_cast<Eigen::Index>(size());
    Matrix m = Matrix::Zero(d * nx, d * nx);
    // index = q * nx + x
    for (Eigen::Index x = 0; x < nx; ++x) {
        const Matrix &rho = states_[static_cast<std::size_t>(x)].matrix();
        double p = probs_[static_cast<std::size_t>(x)];
        for (Eigen::Index i = 0; i < d; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                m(i * nx + x, j * nx + x) = p * rho(i, j);
            }
        }
    }
    return DensityMatrix(std::move(m));
}

AverageEncodingReport average_encoding_report(const Encoding &e, double tol) {
    AverageEncodingReport r;
    DensityMatrix bar = e.average();
    for (std::size_t x = 0; x < e.size(); ++x) {
        double p = e.probs()[x];
        if (p <= 0.0) {
            continue;
        }
        const DensityMatrix &rho = e.states()[x];
        r.mutual_info += p * relative_entropy(rho, bar);
        r.avg_trace_dist += p * trace_distance(bar, rho);
        double h = hellinger(bar, rho);
        r.avg_h_sq += p * h * h;
    }
    DensityMatrix joint = e.joint_state();
    r.mutual_info_entropies = mutual_information(joint, Bipartition::of(e.dim(), e.size()));

    r.bound1_rhs = std::sqrt(2.0 * std::numbers::ln2 * r.mutual_info);
    r.bound2_rhs = std::numbers::ln2 / 2.0 * r.mutual_info;
    r.bound1_holds = r.avg_trace_dist <= r.bound1_rhs + tol;
    r.bound2_holds = r.avg_h_sq <= r.bound2_rhs + tol;
    return r;
}

// ---------------------------------------------------------------------------
// Helstrom

Povm helstrom_measurement(const DensityMatrix &rho0, const DensityMatrix &rho1) {
    if (rho0.dim() != rho1.dim()) {
        throw std::invalid_argument("helstrom_measurement: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho0.matrix() - rho1.matrix());
    auto d = static_cast<Eigen::Index>(rho0.dim());
    Matrix p = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (es.eigenvalues()(i) >= 0.0) {
            Vector v = es.eigenvectors().col(i);
            p += v * v.adjoint();
        }
    }
    p = (p + p.adjoint()) * 0.5;
    return Povm({p, Matrix::Identity(d, d) - p});
}

double helstrom_error(const DensityMatrix &rho0, const DensityMatrix &rho1) {
    Povm m = helstrom_measurement(rho0, rho1);
    double p_wrong_0 = measure_povm(m, rho0)[1];
    double p_wrong_1 = measure_povm(m, rho1)[0];
    return 0.5 * (p_wrong_0 + p_wrong_1);
}

}  // namespace qcomm
