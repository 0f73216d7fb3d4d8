#include <doctest.h>

#include <array>
#include <cmath>

#include "qcomm/quantum.hpp"

using namespace qcomm;

namespace {

// Entry-wise partial trace over the last factor, used as an oracle.
Matrix trace_out_last(const Matrix &m, std::size_t da, std::size_t db) {
    Matrix r = Matrix::Zero(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(da));
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            for (std::size_t b = 0; b < db; ++b) {
                r(i, j) += m(i * db + b, j * db + b);
            }
        }
    }
    return r;
}

void check_density_invariants(const Matrix &m) {
    CHECK((m - m.adjoint()).norm() < 1e-9);
    CHECK(std::abs(m.trace() - Complex(1.0)) < 1e-9);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
}

}  // namespace

TEST_CASE("tensor of identities and basis states") {
    Matrix i2 = Matrix::Identity(2, 2);
    CHECK((tensor(i2, i2) - Matrix::Identity(4, 4)).norm() == 0.0);
    auto v = tensor(PureState::basis(2, 0), PureState::basis(2, 1));
    CHECK(v.dim() == 4);
    CHECK(std::abs(v.amplitudes()(1) - Complex(1.0)) < 1e-15);
    CHECK(v.amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("tensor of random states has unit trace") {
    Rng rng(11);
    auto a = random_density(2, 2, rng);
    auto b = random_density(3, 2, rng);
    auto ab = tensor(a, b);
    CHECK(ab.dim() == 6);
    CHECK(std::abs(ab.matrix().trace() - Complex(1.0)) < 1e-10);
}

TEST_CASE("partial trace") {
    Rng rng(3);
    auto a = random_density(3, 2, rng);
    auto b = random_density(2, 2, rng);
    std::array<std::size_t, 1> keep0{0};
    auto ra = partial_trace(tensor(a, b), BipartiteLayout{3, 2}, keep0);
    CHECK((ra.matrix() - a.matrix()).norm() < 1e-10);

    Vector bell = Vector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    auto r = partial_trace(DensityMatrix::from_pure(PureState(bell)), BipartiteLayout{2, 2}, keep0);
    CHECK((r.matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-12);

    auto psi = random_pure_state(2 * 3 * 2, rng);
    auto rho = DensityMatrix::from_pure(psi);
    auto kept = partial_trace(rho, BipartiteLayout{2, 3, 2}, keep0);
    check_density_invariants(kept.matrix());
    CHECK((kept.matrix() - trace_out_last(rho.matrix(), 2, 6)).norm() < 1e-10);

    std::array<std::size_t, 2> keep02{0, 2};
    CHECK(partial_trace(rho, BipartiteLayout{2, 3, 2}, keep02).dim() == 4);
}

TEST_CASE("partial trace rejects a layout that does not match") {
    std::array<std::size_t, 1> keep0{0};
    CHECK_THROWS_AS(partial_trace(DensityMatrix::maximally_mixed(4), BipartiteLayout{2, 3}, keep0),
                    std::invalid_argument);
}

TEST_CASE("hermitian functions") {
    CHECK((hermitian_fn(Matrix::Identity(3, 3), HermitianFn::Sqrt) - Matrix::Identity(3, 3)).norm() < 1e-12);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 4;
    d(1, 1) = 9;
    Matrix s = hermitian_fn(d, HermitianFn::Sqrt);
    CHECK(s(0, 0).real() == doctest::Approx(2.0));
    CHECK(s(1, 1).real() == doctest::Approx(3.0));
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
        auto rho = random_density(5, 1 + t % 5, rng);
        Matrix r = hermitian_fn(rho.matrix(), HermitianFn::Sqrt);
        CHECK((r * r - rho.matrix()).norm() < 1e-9);
    }
    Matrix nonherm = Matrix::Zero(2, 2);
    nonherm(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_fn(nonherm, HermitianFn::Sqrt), std::invalid_argument);
}

TEST_CASE("channels") {
    Rng rng(8);
    auto rho = random_density(3, 3, rng);
    CHECK((apply_channel(KrausChannel::identity(3), rho).matrix() - rho.matrix()).norm() < 1e-12);

    Vector plus = Vector::Constant(2, 1.0 / std::sqrt(2.0));
    auto out = apply_channel(KrausChannel::dephasing(2), DensityMatrix::from_pure(PureState(plus)));
    CHECK((out.matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-12);

    for (int t = 0; t < 20; ++t) {
        auto ch = random_channel(3, 2, rng, 3);
        auto r = apply_channel(ch, random_density(3, 2, rng));
        CHECK(std::abs(r.matrix().trace() - Complex(1.0)) < 1e-10);
    }

    std::vector<Matrix> bad{Matrix::Identity(2, 2) * 0.5};
    CHECK_THROWS_AS(KrausChannel{bad}, std::invalid_argument);
}

TEST_CASE("povm measurement") {
    std::array<double, 2> p{0.3, 0.7};
    auto probs = measure_povm(Povm::computational(2), DensityMatrix::diagonal(p));
    CHECK(probs[0] == doctest::Approx(0.3));
    CHECK(probs[1] == doctest::Approx(0.7));

    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    auto pm = measure_povm(Povm::from_basis(h), DensityMatrix::from_pure(PureState::basis(2, 0)));
    CHECK(pm[0] == doctest::Approx(0.5));
    CHECK(pm[1] == doctest::Approx(0.5));

    Rng rng(9);
    for (int t = 0; t < 30; ++t) {
        auto povm = random_povm(4, 3, rng);
        auto q = measure_povm(povm, random_density(4, 1 + t % 4, rng));
        double sum = 0;
        for (double x : q) {
            CHECK(x >= -1e-10);
            CHECK(x <= 1 + 1e-10);
            sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("random density matrices") {
    auto pure = random_density(4, 1, 42);
    CHECK(pure.purity() == doctest::Approx(1.0).epsilon(1e-9));
    auto a = random_density(5, 3, 99);
    auto b = random_density(5, 3, 99);
    CHECK((a.matrix() - b.matrix()).norm() == 0.0);
    auto full = random_density(8, 8, 7);
    check_density_invariants(full.matrix());
    CHECK(full.eigenvalues().minCoeff() > 0.0);
    CHECK_THROWS_AS(random_density(3, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_density(3, 0, 1), std::invalid_argument);
}

TEST_CASE("density matrix validation") {
    Matrix m = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix{m}, std::invalid_argument);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
}

TEST_CASE("derived seeds are distinct and stable") {
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
