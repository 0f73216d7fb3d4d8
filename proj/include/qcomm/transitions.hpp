#pragma once

#include <string>
#include <vector>

#include "qcomm/metrics.hpp"
#include "qcomm/quantum.hpp"

namespace qcomm {

/// Pure state on system (x) ancilla; factor 0 is the system.
struct Purification {
    PureState state;
    BipartiteLayout layout;

    std::size_t system_dim() const { return layout.factor_dims.at(0); }
    std::size_t ancilla_dim() const { return layout.factor_dims.at(1); }
    /// system_dim x ancilla_dim matrix C with |phi> = sum_ij C_ij |i>|j>.
    Matrix coefficients() const;
    /// Tr_ancilla |phi><phi|.
    DensityMatrix reduced() const;
    /// Same state with the ancilla zero-padded to `ancilla_dim` levels.
    Purification padded(std::size_t ancilla_dim) const;
    /// (I (x) u)|phi>.
    Purification apply_ancilla_unitary(const Matrix &u) const;

    static Purification from_coefficients(const Matrix &c);
};

/// Spectral purification sum_i sqrt(l_i) |e_i>|i>. The ancilla has rank(rho)
/// levels, or `ancilla_dim` if larger.
Purification purify(const DensityMatrix &rho, std::size_t ancilla_dim = 0);

/// Unitary U on the ancilla maximising |<phi1|(I (x) U)|phi2>|; the maximum
/// equals F(rho1, rho2). The smaller ancilla is zero-padded first, and the
/// returned U acts on the padded ancilla.
Matrix uhlmann_unitary(const Purification &phi1, const Purification &phi2);

/// |<phi1|(I (x) U)|phi2>|^2 after padding to a common ancilla.
double purification_overlap(const Purification &phi1, const Purification &phi2, const Matrix &u);

struct LocalTransitionReport {
    PureState phi2_prime;
    Matrix unitary;
    double h_states = 0.0;
    double h_reduced = 0.0;
    double trace_states = 0.0;
    double trace_reduced = 0.0;
    /// 2 sqrt(2) h(rho1, rho2): the intermediate bound on trace_states.
    double intermediate_bound = 0.0;
    /// 2 ||rho1 - rho2||_t^{1/2}.
    double final_bound = 0.0;
    bool h_equal = false;
    bool trace_bound_holds = false;
};

/// Applies the optimal local unitary to phi2 and checks h(phi1, phi2') equals
/// h(rho1, rho2) and the trace-distance bounds on the states. Throws
/// std::invalid_argument if phi_i does not purify rho_i within 1e-9 or the
/// ancilla is smaller than the system.
LocalTransitionReport local_transition(const DensityMatrix &rho1, const DensityMatrix &rho2,
                                       const Purification &phi1, const Purification &phi2,
                                       double tol = kInequalitySlack);

/// x -> rho_x with prior p_x.
class Encoding {
   public:
    Encoding(std::vector<std::string> labels, Distribution probs, std::vector<DensityMatrix> states);

    std::size_t size() const { return states_.size(); }
    std::size_t dim() const { return states_.front().dim(); }
    const std::vector<std::string> &labels() const { return labels_; }
    const Distribution &probs() const { return probs_; }
    const std::vector<DensityMatrix> &states() const { return states_; }

    /// sum_x p_x rho_x.
    DensityMatrix average() const;
    /// Block-diagonal sum_x p_x rho_x (x) |x><x|, layout (Q, X).
    DensityMatrix joint_state() const;

   private:
    std::vector<std::string> labels_;
    Distribution probs_;
    std::vector<DensityMatrix> states_;
};

struct AverageEncodingReport {
    /// I(Q:X) via the block decomposition sum_x p_x S(rho_x || rho_bar).
    double mutual_info = 0.0;
    /// I(Q:X) via S(Q) + S(X) - S(QX) on the joint state; cross-check.
    double mutual_info_entropies = 0.0;
    double avg_trace_dist = 0.0;
    double avg_h_sq = 0.0;
    double bound1_rhs = 0.0;  // sqrt(2 ln 2 I)
    double bound2_rhs = 0.0;  // (ln 2 / 2) I
    bool bound1_holds = false;
    bool bound2_holds = false;
};

AverageEncodingReport average_encoding_report(const Encoding &e, double tol = kInequalitySlack);

/// Two-outcome measurement {P, I - P} with P the projector onto the
/// non-negative eigenspace of rho0 - rho1 (outcome 0 guesses rho0).
Povm helstrom_measurement(const DensityMatrix &rho0, const DensityMatrix &rho1);
/// Error probability of the Helstrom measurement under a uniform prior.
double helstrom_error(const DensityMatrix &rho0, const DensityMatrix &rho1);

}  // namespace qcomm
