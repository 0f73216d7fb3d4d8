#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcomm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Validation tolerances for states, channels and measurements.
struct Tolerances {
    double herm = 1e-9;
    double psd = 1e-9;
    double trace = 1e-9;
    double cptp = 1e-9;
};

/// Process-wide defaults. Set once at startup (e.g. from a config file);
/// not synchronised.
Tolerances &default_tolerances();

class PureState {
   public:
    PureState() = default;
    explicit PureState(Vector amplitudes, double tol = default_tolerances().trace);

    /// Computational basis vector |index> in dimension dim.
    static PureState basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector &amplitudes() const { return amps_; }
    Complex inner(const PureState &other) const { return amps_.dot(other.amps_); }

   private:
    Vector amps_;
};

/// Hermitian, PSD, unit trace. Construction validates against the given
/// tolerances, clamps eigenvalues in [-tol, 0] to 0 and renormalises the
/// trace when it is within tol of 1. Violations throw std::invalid_argument.
class DensityMatrix {
   public:
    DensityMatrix() = default;
    explicit DensityMatrix(Matrix m, const Tolerances &tol = default_tolerances());

    static DensityMatrix from_pure(const PureState &psi);
    static DensityMatrix maximally_mixed(std::size_t dim);
    static DensityMatrix diagonal(std::span<const double> probs);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Matrix &matrix() const { return m_; }
    double purity() const;
    /// Eigenvalues in ascending order.
    RealVector eigenvalues() const;

   private:
    Matrix m_;
};

/// Dimensions of the tensor factors of a composite system. Factor 0 is the
/// most significant axis of the flattened index.
struct BipartiteLayout {
    std::vector<std::size_t> factor_dims;

    BipartiteLayout() = default;
    BipartiteLayout(std::initializer_list<std::size_t> dims) : factor_dims(dims) {}
    explicit BipartiteLayout(std::vector<std::size_t> dims) : factor_dims(std::move(dims)) {}

    std::size_t total_dim() const;
    std::size_t size() const { return factor_dims.size(); }
    /// Throws std::invalid_argument unless total_dim() == dim and all factors are >= 1.
    void check(std::size_t dim) const;
};

class KrausChannel {
   public:
    explicit KrausChannel(std::vector<Matrix> kraus_ops, double tol = default_tolerances().cptp);

    static KrausChannel identity(std::size_t dim);
    /// Full dephasing in the computational basis.
    static KrausChannel dephasing(std::size_t dim);

    std::size_t in_dim() const { return static_cast<std::size_t>(ops_.front().cols()); }
    std::size_t out_dim() const { return static_cast<std::size_t>(ops_.front().rows()); }
    const std::vector<Matrix> &kraus_ops() const { return ops_; }

   private:
    std::vector<Matrix> ops_;
};

class Povm {
   public:
    explicit Povm(std::vector<Matrix> elements, const Tolerances &tol = default_tolerances());

    static Povm computational(std::size_t dim);
    /// Rank-one projectors onto the columns of a unitary.
    static Povm from_basis(const Matrix &unitary);

    std::size_t dim() const { return static_cast<std::size_t>(elements_.front().rows()); }
    std::size_t outcomes() const { return elements_.size(); }
    const std::vector<Matrix> &elements() const { return elements_; }

   private:
    std::vector<Matrix> elements_;
};

enum class HermitianFn { Sqrt, Log2 };

// Operations

Matrix tensor(const Matrix &a, const Matrix &b);
PureState tensor(const PureState &a, const PureState &b);
DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b);

/// Reduced state on the factors listed in keep (output factor order follows
/// ascending factor index).
DensityMatrix partial_trace(const DensityMatrix &rho, const BipartiteLayout &layout,
                            std::span<const std::size_t> keep);
Matrix partial_trace(const Matrix &m, const BipartiteLayout &layout, std::span<const std::size_t> keep);

/// Reorders tensor factors: output factor i is input factor perm[i].
Matrix permute_factors(const Matrix &m, const BipartiteLayout &layout, std::span<const std::size_t> perm);
DensityMatrix permute_factors(const DensityMatrix &rho, const BipartiteLayout &layout,
                              std::span<const std::size_t> perm);

/// Applies f to the spectrum of a Hermitian matrix. Sqrt clamps eigenvalues in
/// [-tol_psd, 0] to zero; Log2 is taken on the support (eigenvalues <= tol_psd
/// map to 0).
Matrix hermitian_fn(const Matrix &m, HermitianFn f, const Tolerances &tol = default_tolerances());

DensityMatrix apply_channel(const KrausChannel &t, const DensityMatrix &rho);
/// Applies the channel's linear extension to an arbitrary square matrix.
Matrix apply_channel(const KrausChannel &t, const Matrix &m);

/// Outcome probabilities (Tr rho E_m)_m, clamped to [0, 1].
std::vector<double> measure_povm(const Povm &povm, const DensityMatrix &rho);

bool is_hermitian(const Matrix &m, double tol);
bool is_unitary(const Matrix &u, double tol);

// Random sampling. All samplers take an explicit engine so callers control
// seeding; the seed overloads build one.

using Rng = std::mt19937_64;

/// Mixes (seed, index) into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

Matrix ginibre(std::size_t rows, std::size_t cols, Rng &rng);
Matrix random_unitary(std::size_t dim, Rng &rng);
/// Haar-random isometry with in_dim orthonormal columns of length out_dim.
Matrix random_isometry(std::size_t out_dim, std::size_t in_dim, Rng &rng);
PureState random_pure_state(std::size_t dim, Rng &rng);
/// Partial trace of a Haar-random pure state over a rank-dimensional ancilla.
DensityMatrix random_density(std::size_t dim, std::size_t rank, Rng &rng);
DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);
/// Stinespring dilation of a Haar isometry; one Kraus operator per ancilla level.
KrausChannel random_channel(std::size_t in_dim, std::size_t out_dim, Rng &rng, std::size_t ancilla_dim = 2);
/// Elements K_m^dagger K_m of a random isometry split into `outcomes` blocks.
Povm random_povm(std::size_t dim, std::size_t outcomes, Rng &rng, std::size_t block_dim = 1);

}  // namespace qcomm
