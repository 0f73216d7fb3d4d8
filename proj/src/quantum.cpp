#include "qcomm/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace qcomm {

namespace {

std::string dims_str(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

void require_square(const Matrix &m, const char *what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": expected a square matrix, got " +
                                    dims_str(m.rows(), m.cols()));
    }
}

void require_finite(const Matrix &m, const char *what) {
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
    }
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * dims[i];
    }
    return strides;
}

// Flattened offsets of every multi-index over the given factors, in
// row-major order of those factors.
std::vector<std::size_t> offsets_over(const std::vector<std::size_t> &factors, const std::vector<std::size_t> &dims,
                                      const std::vector<std::size_t> &strides) {
    std::vector<std::size_t> out{0};
    for (std::size_t f : factors) {
        std::vector<std::size_t> next;
        next.reserve(out.size() * dims[f]);
        for (std::size_t base : out) {
            for (std::size_t d = 0; d < dims[f]; ++d) {
                next.push_back(base + d * strides[f]);
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace

Tolerances &default_tolerances() {
    static Tolerances tol;
    return tol;
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(Vector amplitudes, double tol) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0) {
        throw std::invalid_argument("PureState: empty amplitude vector");
    }
    if (!amps_.allFinite()) {
        throw std::invalid_argument("PureState: non-finite amplitude");
    }
    double norm2 = amps_.squaredNorm();
    if (std::abs(norm2 - 1.0) > tol) {
        throw std::invalid_argument("PureState: squared norm " + std::to_string(norm2) + " differs from 1");
    }
    amps_ /= std::sqrt(norm2);
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::invalid_argument("PureState::basis: index out of range");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(std::move(v));
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix m, const Tolerances &tol) {
    require_square(m, "DensityMatrix");
    require_finite(m, "DensityMatrix");
    if (m.rows() == 0) {
        throw std::invalid_argument("DensityMatrix: zero dimension");
    }
    double herm_err = (m - m.adjoint()).norm();
    if (herm_err > tol.herm) {
        throw std::invalid_argument("DensityMatrix: not Hermitian (||rho - rho^dag||_F = " + std::to_string(herm_err) +
                                    ")");
    }
    Matrix h = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    RealVector ev = es.eigenvalues();
    if (ev.minCoeff() < -tol.psd) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(ev.minCoeff()));
    }
    double tr = h.trace().real();
    if (std::abs(tr - 1.0) > tol.trace) {
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
    }
    if (ev.minCoeff() < 0.0) {
        ev = ev.cwiseMax(0.0);
        h = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
        tr = ev.sum();
    }
    m_ = h / tr;
}

DensityMatrix DensityMatrix::from_pure(const PureState &psi) {
    const Vector &a = psi.amplitudes();
    return DensityMatrix(a * a.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    if (dim == 0) {
        throw std::invalid_argument("maximally_mixed: zero dimension");
    }
    auto d = static_cast<Eigen::Index>(dim);
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probs) {
    auto d = static_cast<Eigen::Index>(probs.size());
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        m(i, i) = probs[static_cast<std::size_t>(i)];
    }
    return DensityMatrix(std::move(m));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

RealVector DensityMatrix::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// ---------------------------------------------------------------------------
// BipartiteLayout

std::size_t BipartiteLayout::total_dim() const {
    return std::accumulate(factor_dims.begin(), factor_dims.end(), std::size_t{1}, std::multiplies<>());
}

void BipartiteLayout::check(std::size_t dim) const {
    if (factor_dims.empty()) {
        throw std::invalid_argument("layout: no factors");
    }
    for (std::size_t d : factor_dims) {
        if (d == 0) {
            throw std::invalid_argument("layout: zero-dimensional factor");
        }
    }
    if (total_dim() != dim) {
        throw std::invalid_argument("layout mismatch: factors multiply to " + std::to_string(total_dim()) +
                                    " but state has dimension " + std::to_string(dim));
    }
}

// ---------------------------------------------------------------------------
// KrausChannel / Povm

KrausChannel::KrausChannel(std::vector<Matrix> kraus_ops, double tol) : ops_(std::move(kraus_ops)) {
    if (ops_.empty()) {
        throw std::invalid_argument("KrausChannel: no Kraus operators");
    }
    const auto rows = ops_.front().rows();
    const auto cols = ops_.front().cols();
    Matrix sum = Matrix::Zero(cols, cols);
    for (const auto &k : ops_) {
        if (k.rows() != rows || k.cols() != cols) {
            throw std::invalid_argument("KrausChannel: Kraus operators have inconsistent shapes");
        }
        require_finite(k, "KrausChannel");
        sum += k.adjoint() * k;
    }
    double err = (sum - Matrix::Identity(cols, cols)).norm();
    if (err > tol) {
        throw std::invalid_argument("KrausChannel: sum K^dag K deviates from identity by " + std::to_string(err));
    }
}

KrausChannel KrausChannel::identity(std::size_t dim) {
    auto d = static_cast<Eigen::Index>(dim);
    return KrausChannel({Matrix::Identity(d, d)});
}

KrausChannel KrausChannel::dephasing(std::size_t dim) {
    auto d = static_cast<Eigen::Index>(dim);
    std::vector<Matrix> ops;
    for (Eigen::Index i = 0; i < d; ++i) {
        Matrix p = Matrix::Zero(d, d);
        p(i, i) = 1.0;
        ops.push_back(std::move(p));
    }
    return KrausChannel(std::move(ops));
}

Povm::Povm(std::vector<Matrix> elements, const Tolerances &tol) : elements_(std::move(elements)) {
    if (elements_.empty()) {
        throw std::invalid_argument("Povm: no elements");
    }
    const auto d = elements_.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto &e : elements_) {
        require_square(e, "Povm");
        if (e.rows() != d) {
            throw std::invalid_argument("Povm: elements have inconsistent dimensions");
        }
        if (!is_hermitian(e, tol.herm)) {
            throw std::invalid_argument("Povm: element is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es((e + e.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol.psd) {
            throw std::invalid_argument("Povm: element is not positive semi-definite");
        }
        sum += e;
    }
    double err = (sum - Matrix::Identity(d, d)).norm();
    if (err > tol.cptp) {
        throw std::invalid_argument("Povm: elements sum to identity only within " + std::to_string(err));
    }
}

Povm Povm::computational(std::size_t dim) {
    auto d = static_cast<Eigen::Index>(dim);
    return from_basis(Matrix::Identity(d, d));
}

Povm Povm::from_basis(const Matrix &unitary) {
    std::vector<Matrix> elems;
    for (Eigen::Index j = 0; j < unitary.cols(); ++j) {
        Vector v = unitary.col(j);
        elems.emplace_back(v * v.adjoint());
    }
    return Povm(std::move(elems));
}

// ---------------------------------------------------------------------------
// Operations

Matrix tensor(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

PureState tensor(const PureState &a, const PureState &b) {
    return PureState(tensor(Matrix(a.amplitudes()), Matrix(b.amplitudes())).col(0));
}

DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix(tensor(a.matrix(), b.matrix()));
}

Matrix partial_trace(const Matrix &m, const BipartiteLayout &layout, std::span<const std::size_t> keep) {
    require_square(m, "partial_trace");
    layout.check(static_cast<std::size_t>(m.rows()));
    const auto &dims = layout.factor_dims;
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t f : keep) {
        if (f >= dims.size()) {
            throw std::invalid_argument("partial_trace: factor index " + std::to_string(f) + " out of range");
        }
        kept[f] = true;
    }
    std::vector<std::size_t> keep_f, trace_f;
    for (std::size_t f = 0; f < dims.size(); ++f) {
        (kept[f] ? keep_f : trace_f).push_back(f);
    }
    auto strides = strides_of(dims);
    auto keep_off = offsets_over(keep_f, dims, strides);
    auto trace_off = offsets_over(trace_f, dims, strides);

    auto n = static_cast<Eigen::Index>(keep_off.size());
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (std::size_t t : trace_off) {
                acc += m(static_cast<Eigen::Index>(keep_off[i] + t), static_cast<Eigen::Index>(keep_off[j] + t));
            }
            out(i, j) = acc;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, const BipartiteLayout &layout,
                            std::span<const std::size_t> keep) {
    return DensityMatrix(partial_trace(rho.matrix(), layout, keep));
}

Matrix permute_factors(const Matrix &m, const BipartiteLayout &layout, std::span<const std::size_t> perm) {
    require_square(m, "permute_factors");
    layout.check(static_cast<std::size_t>(m.rows()));
    const auto &dims = layout.factor_dims;
    if (perm.size() != dims.size()) {
        throw std::invalid_argument("permute_factors: permutation size does not match layout");
    }
    std::vector<bool> seen(dims.size(), false);
    for (std::size_t p : perm) {
        if (p >= dims.size() || seen[p]) {
            throw std::invalid_argument("permute_factors: not a permutation");
        }
        seen[p] = true;
    }
    auto strides = strides_of(dims);
    // Offsets enumerated in the new factor order give, for each new index,
    // the matching old index.
    std::vector<std::size_t> order(perm.begin(), perm.end());
    auto old_index = offsets_over(order, dims, strides);
    auto n = m.rows();
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = m(static_cast<Eigen::Index>(old_index[i]), static_cast<Eigen::Index>(old_index[j]));
        }
    }
    return out;
}

DensityMatrix permute_factors(const DensityMatrix &rho, const BipartiteLayout &layout,
                              std::span<const std::size_t> perm) {
    return DensityMatrix(permute_factors(rho.matrix(), layout, perm));
}

bool is_hermitian(const Matrix &m, double tol) { return m.rows() == m.cols() && (m - m.adjoint()).norm() <= tol; }

bool is_unitary(const Matrix &u, double tol) {
    if (u.rows() != u.cols()) {
        return false;
    }
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

Matrix hermitian_fn(const Matrix &m, HermitianFn f, const Tolerances &tol) {
    require_square(m, "hermitian_fn");
    if (!is_hermitian(m, tol.herm)) {
        throw std::invalid_argument("hermitian_fn: input is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5);
    RealVector ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        double x = ev(i);
        switch (f) {
            case HermitianFn::Sqrt:
                if (x < -tol.psd) {
                    throw std::invalid_argument("hermitian_fn(sqrt): eigenvalue " + std::to_string(x) +
                                                " is negative");
                }
                ev(i) = std::sqrt(std::max(x, 0.0));
                break;
            case HermitianFn::Log2:
                ev(i) = x > tol.psd ? std::log2(x) : 0.0;
                break;
        }
    }
    return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

Matrix apply_channel(const KrausChannel &t, const Matrix &m) {
    require_square(m, "apply_channel");
    if (static_cast<std::size_t>(m.rows()) != t.in_dim()) {
        throw std::invalid_argument("apply_channel: channel expects dimension " + std::to_string(t.in_dim()) +
                                    ", got " + std::to_string(m.rows()));
    }
    auto d = static_cast<Eigen::Index>(t.out_dim());
    Matrix out = Matrix::Zero(d, d);
    for (const auto &k : t.kraus_ops()) {
        out += k * m * k.adjoint();
    }
    return out;
}

DensityMatrix apply_channel(const KrausChannel &t, const DensityMatrix &rho) {
    return DensityMatrix(apply_channel(t, rho.matrix()));
}

std::vector<double> measure_povm(const Povm &povm, const DensityMatrix &rho) {
    if (povm.dim() != rho.dim()) {
        throw std::invalid_argument("measure_povm: POVM dimension " + std::to_string(povm.dim()) +
                                    " does not match state dimension " + std::to_string(rho.dim()));
    }
    std::vector<double> p;
    p.reserve(povm.outcomes());
    for (const auto &e : povm.elements()) {
        p.push_back(std::clamp((rho.matrix() * e).trace().real(), 0.0, 1.0));
    }
    return p;
}

// ---------------------------------------------------------------------------
// Sampling

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 over a golden-ratio combination of the pair
    std::uint64_t z = seed ^ (index * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Matrix ginibre(std::size_t rows, std::size_t cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
        for (Eigen::Index i = 0; i < g.rows(); ++i) {
            double re = normal(rng);
            double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

Matrix random_isometry(std::size_t out_dim, std::size_t in_dim, Rng &rng) {
    if (in_dim == 0 || out_dim < in_dim) {
        throw std::invalid_argument("random_isometry: need 0 < in_dim <= out_dim");
    }
    Matrix g = ginibre(out_dim, in_dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    auto o = static_cast<Eigen::Index>(out_dim);
    auto i = static_cast<Eigen::Index>(in_dim);
    Matrix q = qr.householderQ() * Matrix::Identity(o, i);
    Matrix r = qr.matrixQR().topRows(i).triangularView<Eigen::Upper>();
    // Fix the phase ambiguity of QR so the distribution is Haar.
    for (Eigen::Index k = 0; k < i; ++k) {
        Complex d = r(k, k);
        double a = std::abs(d);
        q.col(k) *= (a > 0.0 ? d / a : Complex(1.0));
    }
    return q;
}

Matrix random_unitary(std::size_t dim, Rng &rng) { return random_isometry(dim, dim, rng); }

PureState random_pure_state(std::size_t dim, Rng &rng) {
    Matrix g = ginibre(dim, 1, rng);
    Vector v = g.col(0);
    v.normalize();
    return PureState(std::move(v));
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng &rng) {
    if (rank < 1 || rank > dim) {
        throw std::invalid_argument("random_density: rank " + std::to_string(rank) + " outside [1, " +
                                    std::to_string(dim) + "]");
    }
    Matrix g = ginibre(dim, rank, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(dim, rank, rng);
}

KrausChannel random_channel(std::size_t in_dim, std::size_t out_dim, Rng &rng, std::size_t ancilla_dim) {
    if (ancilla_dim == 0 || out_dim * ancilla_dim < in_dim) {
        throw std::invalid_argument("random_channel: out_dim * ancilla_dim must be >= in_dim");
    }
    Matrix v = random_isometry(out_dim * ancilla_dim, in_dim, rng);
    auto o = static_cast<Eigen::Index>(out_dim);
    auto a = static_cast<Eigen::Index>(ancilla_dim);
    std::vector<Matrix> ops;
    for (Eigen::Index anc = 0; anc < a; ++anc) {
        Matrix k(o, static_cast<Eigen::Index>(in_dim));
        for (Eigen::Index row = 0; row < o; ++row) {
            k.row(row) = v.row(row * a + anc);
        }
        ops.push_back(std::move(k));
    }
    return KrausChannel(std::move(ops));
}

Povm random_povm(std::size_t dim, std::size_t outcomes, Rng &rng, std::size_t block_dim) {
    if (outcomes == 0) {
        throw std::invalid_argument("random_povm: need at least one outcome");
    }
    block_dim = std::max(block_dim, (dim + outcomes - 1) / outcomes);
    Matrix v = random_isometry(outcomes * block_dim, dim, rng);
    auto b = static_cast<Eigen::Index>(block_dim);
    std::vector<Matrix> elems;
    for (std::size_t m = 0; m < outcomes; ++m) {
        Matrix block = v.middleRows(static_cast<Eigen::Index>(m) * b, b);
        Matrix e = block.adjoint() * block;
        elems.emplace_back((e + e.adjoint()) * 0.5);
    }
    return Povm(std::move(elems));
}

}  // namespace qcomm
