#include <doctest.h>

#include <array>
#include <cmath>

#include "qcomm/transitions.hpp"

using namespace qcomm;

namespace {

Matrix psd_sqrt(const Matrix &m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    RealVector ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        ev(i) = ev(i) > 1e-12 ? std::sqrt(ev(i)) : 0.0;
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double jozsa_oracle(const DensityMatrix &a, const DensityMatrix &b) {
    Eigen::JacobiSVD<Matrix> svd(psd_sqrt(a.matrix()) * psd_sqrt(b.matrix()));
    double s = svd.singularValues().sum();
    return s * s;
}

Matrix reduce_system(const Purification &p) {
    std::array<std::size_t, 1> keep{0};
    return partial_trace(DensityMatrix::from_pure(p.state), p.layout, keep).matrix();
}

}  // namespace

TEST_CASE("purify") {
    Rng rng(1);
    auto pure = DensityMatrix::from_pure(random_pure_state(3, rng));
    auto p = purify(pure);
    CHECK(p.ancilla_dim() == 1);
    CHECK((reduce_system(p) - pure.matrix()).norm() < 1e-9);

    auto half = purify(DensityMatrix::maximally_mixed(2));
    CHECK(half.ancilla_dim() == 2);
    CHECK((reduce_system(half) - Matrix::Identity(2, 2) / 2.0).norm() < 1e-12);
    Matrix c = half.coefficients();
    CHECK((c * c.adjoint() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-12);

    auto rho = random_density(6, 4, rng);
    auto p6 = purify(rho);
    CHECK((reduce_system(p6) - rho.matrix()).norm() < 1e-9);
    auto padded = purify(rho, 6);
    CHECK(padded.ancilla_dim() == 6);
    CHECK((reduce_system(padded) - rho.matrix()).norm() < 1e-9);
    CHECK(purify(rho, 3).ancilla_dim() == 4);
}

TEST_CASE("uhlmann unitary reaches the fidelity") {
    Rng rng(2);
    auto rho = random_density(3, 2, rng);
    auto p = purify(rho);
    Matrix u = uhlmann_unitary(p, p);
    CHECK(is_unitary(u, 1e-9));
    CHECK(purification_overlap(p, p, u) == doctest::Approx(1.0).epsilon(1e-9));

    auto a = purify(DensityMatrix::from_pure(PureState::basis(2, 0)));
    auto b = purify(DensityMatrix::from_pure(PureState::basis(2, 1)));
    Matrix ub = uhlmann_unitary(a, b);
    CHECK(is_unitary(ub, 1e-9));
    CHECK(purification_overlap(a, b, ub) < 1e-12);

    for (int t = 0; t < 200; ++t) {
        std::size_t d = 2 + static_cast<std::size_t>(t % 4);
        auto r1 = random_density(d, 1 + t % d, rng);
        auto r2 = random_density(d, 1 + (t / 4) % d, rng);
        auto p1 = purify(r1, d);
        auto p2 = purify(r2, d);
        Matrix w = uhlmann_unitary(p1, p2);
        CHECK(is_unitary(w, 1e-9));
        CHECK(std::abs(purification_overlap(p1, p2, w) - jozsa_oracle(r1, r2)) < 1e-8);
    }
}

TEST_CASE("local transition") {
    Rng rng(3);
    auto rho = random_density(3, 3, rng);
    auto p1 = purify(rho, 3);
    auto p2 = p1.apply_ancilla_unitary(random_unitary(3, rng));
    auto same = local_transition(rho, rho, p1, p2);
    CHECK(same.h_states <= 1e-8);
    CHECK(std::abs(std::abs(same.phi2_prime.inner(p1.state)) - 1.0) < 1e-8);

    auto k0 = DensityMatrix::from_pure(PureState::basis(2, 0));
    auto k1 = DensityMatrix::from_pure(PureState::basis(2, 1));
    auto orth = local_transition(k0, k1, purify(k0, 2), purify(k1, 2));
    CHECK(orth.h_states == doctest::Approx(1.0));
    CHECK(orth.trace_states == doctest::Approx(2.0));
    CHECK(orth.trace_bound_holds);

    for (int t = 0; t < 200; ++t) {
        std::size_t d = 2 + static_cast<std::size_t>(t % 3);
        auto r1 = random_density(d, 1 + t % d, rng);
        auto r2 = random_density(d, 1 + (t / 3) % d, rng);
        auto rep = local_transition(r1, r2, purify(r1, d), purify(r2, d));
        double h_red = std::sqrt(std::max(0.0, 1 - std::sqrt(jozsa_oracle(r1, r2))));
        Matrix diff = r1.matrix() - r2.matrix();
        double tr = Eigen::SelfAdjointEigenSolver<Matrix>(diff).eigenvalues().cwiseAbs().sum();
        CHECK(std::abs(rep.h_states - h_red) < 1e-8);
        CHECK(rep.trace_states <= 2 * std::sqrt(tr) + 1e-8);
        CHECK(rep.h_equal);
        CHECK(rep.trace_bound_holds);
    }
}

TEST_CASE("average encoding") {
    auto mixed = DensityMatrix::maximally_mixed(2);
    Encoding constant({"a", "b", "c"}, Distribution({0.2, 0.3, 0.5}), {mixed, mixed, mixed});
    auto c = average_encoding_report(constant);
    CHECK(std::abs(c.mutual_info) < 1e-12);
    CHECK(std::abs(c.avg_trace_dist) < 1e-12);
    CHECK(std::abs(c.avg_h_sq) < 1e-12);
    CHECK(c.bound1_holds);
    CHECK(c.bound2_holds);

    auto k0 = DensityMatrix::from_pure(PureState::basis(2, 0));
    auto k1 = DensityMatrix::from_pure(PureState::basis(2, 1));
    Encoding perfect({"0", "1"}, Distribution::uniform(2), {k0, k1});
    auto p = average_encoding_report(perfect);
    CHECK(p.mutual_info == doctest::Approx(1.0));
    CHECK(p.avg_trace_dist == doctest::Approx(1.0));
    CHECK(p.bound1_rhs == doctest::Approx(std::sqrt(2 * std::log(2.0))));
    CHECK(p.bound1_holds);
    CHECK(p.bound2_holds);

    Rng rng(4);
    for (int t = 0; t < 300; ++t) {
        std::size_t labels = 2 + static_cast<std::size_t>(t % 7);
        std::size_t d = 2 + static_cast<std::size_t>((t / 7) % 7);
        std::vector<double> w(labels);
        std::vector<DensityMatrix> states;
        std::vector<std::string> names;
        double total = 0;
        for (std::size_t i = 0; i < labels; ++i) {
            w[i] = (t % 2 == 0) ? 1.0 : std::pow(0.3, static_cast<double>(i));
            total += w[i];
            states.push_back(random_density(d, 1 + (i + t) % d, rng));
            names.push_back(std::to_string(i));
        }
        for (auto &x : w) {
            x /= total;
        }
        Encoding e(names, Distribution(w), states);
        auto r = average_encoding_report(e);
        CHECK(r.avg_trace_dist <= std::sqrt(2 * std::log(2.0) * r.mutual_info) + 1e-8);
        CHECK(r.avg_h_sq <= std::log(2.0) / 2 * r.mutual_info + 1e-8);
        CHECK(std::abs(r.mutual_info - r.mutual_info_entropies) < 1e-8);
    }
}

TEST_CASE("helstrom measurement") {
    auto k0 = DensityMatrix::from_pure(PureState::basis(2, 0));
    auto k1 = DensityMatrix::from_pure(PureState::basis(2, 1));
    CHECK(helstrom_error(k0, k1) < 1e-12);
    CHECK(helstrom_error(k0, k0) == doctest::Approx(0.5));
    Rng rng(5);
    auto a = random_density(3, 2, rng);
    auto b = random_density(3, 3, rng);
    Matrix diff = a.matrix() - b.matrix();
    double tr = Eigen::SelfAdjointEigenSolver<Matrix>(diff).eigenvalues().cwiseAbs().sum();
    CHECK(helstrom_error(a, b) == doctest::Approx(0.5 - tr / 4).epsilon(1e-9));
    auto povm = helstrom_measurement(a, b);
    CHECK(povm.outcomes() == 2);
}
