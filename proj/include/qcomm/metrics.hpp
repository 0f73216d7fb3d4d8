#pragma once

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcomm/quantum.hpp"

namespace qcomm {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Finite probability vector. Entries in [-1e-12, 0) are clamped to 0; the
/// sum must be within 1e-9 of 1.
class Distribution {
   public:
    Distribution() = default;
    explicit Distribution(std::vector<double> probs);

    static Distribution uniform(std::size_t n);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double> &probs() const { return probs_; }

   private:
    std::vector<double> probs_;
};

/// A scalar with the named intermediates that produced it. value may be +inf
/// (relative entropy with mismatched support).
struct MetricReport {
    double value = 0.0;
    std::map<std::string, double> components;

    bool infinite() const { return value == kInfinity; }
};

/// Binary entropy in bits; H(0) = H(1) = 0.
double binary_entropy(double p);
/// Shannon entropy in bits; zero entries contribute nothing.
double shannon_entropy(std::span<const double> p);

double trace_norm(const Matrix &a);
/// ||r1 - r2||_t, in [0, 2].
double trace_distance(const DensityMatrix &r1, const DensityMatrix &r2);
/// ||sqrt(r1) sqrt(r2)||_t^2, in [0, 1].
double fidelity(const DensityMatrix &r1, const DensityMatrix &r2);
/// sqrt(1 - sqrt(F)).
double hellinger(const DensityMatrix &r1, const DensityMatrix &r2);
double von_neumann_entropy(const DensityMatrix &r);
/// Tr r1 log r1 - Tr r1 log r2 in bits; +inf when r1 has weight > 1e-9 on a
/// subspace where r2's eigenvalue is below 1e-12.
double relative_entropy(const DensityMatrix &r1, const DensityMatrix &r2);

/// Bipartition of a layout's factors into group A (the listed factors) and
/// group B (the rest).
struct Bipartition {
    BipartiteLayout layout;
    std::vector<std::size_t> group_a;

    /// Two-factor layout, A = factor 0, B = factor 1.
    static Bipartition of(std::size_t dim_a, std::size_t dim_b);
    std::vector<std::size_t> group_b() const;
};

/// S(A) + S(B) - S(AB).
double mutual_information(const DensityMatrix &rho_ab, const Bipartition &parts);
/// S(rho_AB || rho_A (x) rho_B); equals mutual_information up to rounding.
double mutual_information_relative(const DensityMatrix &rho_ab, const Bipartition &parts);
/// D(A:B) = h(rho_AB, rho_A (x) rho_B).
double informational_distance(const DensityMatrix &rho_ab, const Bipartition &parts);

/// rho_A (x) rho_B laid out in the same factor order as rho_ab.
DensityMatrix product_of_marginals(const DensityMatrix &rho_ab, const Bipartition &parts);

/// Reports F, h, KL (bits, possibly +inf) and l1 in `components`; value = h.
MetricReport classical_metrics(const Distribution &p, const Distribution &q);
double classical_fidelity(const Distribution &p, const Distribution &q);
double classical_hellinger(const Distribution &p, const Distribution &q);
double kl_divergence(const Distribution &p, const Distribution &q);
double l1_distance(const Distribution &p, const Distribution &q);

/// 1 - H(p_correct); throws for p outside [0, 1].
double fano_bound(double p_correct);

/// Inequalities exposed as predicates. Each check reports a chain of values
/// claimed to be non-decreasing; lhs/rhs are the tightest adjacent pair
/// (claimed lhs >= rhs) and slack = lhs - rhs.
enum class Inequality {
    RelativeVsTrace,      // S(r1||r2) >= ||r1-r2||_t^2 / (2 ln 2)
    RelativeVsHellinger,  // S(r1||r2) >= 2 h^2 / ln 2
    FuchsVdg,             // 1 - sqrt F <= ||r1-r2||_t / 2 <= sqrt(1 - F)
    Sandwich,             // h^2 <= ||r1-r2||_t / 2 <= sqrt 2 h
    QuasiTriangle,        // h^2(r1,r2) <= (h13 + h32)^2 <= 2 h13^2 + 2 h32^2
    TraceTriangle,        // ||r1-r2|| <= ||r1-r3|| + ||r3-r2||
    HellingerTriangle,    // h(r1,r2) <= h(r1,r3) + h(r3,r2)
    TraceMonotone,        // ||T(r1-r2)||_t <= ||r1-r2||_t
    HellingerMonotone,    // h(T r1, T r2) <= h(r1, r2)
    MeasuredFidelity,     // F(r1,r2) <= F(p,q) for POVM outcome distributions
    PureTraceFormula,     // |trace_norm - 2 sqrt(1-|<a|b>|^2)| <= 0, both directions
};

std::string_view to_string(Inequality tag);
/// Throws std::invalid_argument for an unknown name.
Inequality inequality_from_string(std::string_view name);
std::vector<Inequality> all_inequalities();

struct InequalityInputs {
    std::vector<DensityMatrix> states;
    std::vector<PureState> pure_states;
    std::optional<KrausChannel> channel;
    std::optional<Povm> povm;
};

struct InequalityCheck {
    Inequality tag{};
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    bool holds = true;
    std::vector<double> chain;
};

inline constexpr double kInequalitySlack = 1e-8;

/// Throws std::invalid_argument if the inputs have the wrong arity.
InequalityCheck check_inequality(Inequality tag, const InequalityInputs &inputs, double tol = kInequalitySlack);

/// Builds a check from a chain claimed non-decreasing.
InequalityCheck chain_check(Inequality tag, std::vector<double> chain, double tol = kInequalitySlack);

}  // namespace qcomm
