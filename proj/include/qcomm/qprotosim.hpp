#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qcomm/quantum.hpp"
#include "qcomm/transcript.hpp"

namespace qcomm {

constexpr std::size_t kMaxQubits = 14;

/// Dense state over at most 14 qubits; qubit 0 is the most significant bit
/// of the basis index.
struct QState {
    Vector amplitudes;
    std::vector<Player> owners;
    std::size_t num_qubits() const { return owners.size(); }
};

struct LocalUnitary {
    Player owner = Player::Alice;
    std::vector<std::size_t> qubits;  // first listed qubit is most significant in `matrix`
    Matrix matrix;
};

struct SendQubits {
    std::vector<std::size_t> qubits;
    Player from = Player::Alice;
    Player to = Player::Bob;
};

struct MeasureQubits {
    Player owner = Player::Bob;
    std::vector<std::size_t> qubits;
};

using QStep = std::variant<LocalUnitary, SendQubits, MeasureQubits>;

struct QSchedule {
    std::size_t num_qubits = 0;
    /// Named qubit groups. "X" is the classical input register.
    std::map<std::string, std::vector<std::size_t>> registers;
    std::vector<Player> owners;
    /// Pairs prepared in (|00> + |11>)/sqrt(2) before the run.
    std::vector<std::pair<std::size_t, std::size_t>> entangled_pairs;
    std::vector<QStep> steps;
    /// Qubit count of each send, fixed in advance. Empty means unchecked.
    std::vector<std::size_t> declared_message_sizes;

    /// Throws std::invalid_argument on out-of-range qubits, bad matrix
    /// shapes or more than 14 qubits.
    void validate() const;
    const std::vector<std::size_t> &input_qubits() const;
    /// Copy keeping only the first `count` steps and their declared sizes.
    QSchedule prefix(std::size_t count) const;
};

struct Branch {
    double probability = 1.0;
    QState state;
};

struct InputMode {
    /// Basis input x on the X register, X qubit 0 holding the most
    /// significant bit; std::nullopt gives the uniform superposition.
    std::optional<std::uint64_t> basis;
    static InputMode uniform() { return InputMode{}; }
    static InputMode of(std::uint64_t x) { return InputMode{x}; }
};

struct QRunResult {
    std::vector<Branch> ensemble;
    std::vector<Player> owners;  // after the last step
    std::size_t alice_to_bob = 0;
    std::size_t bob_to_alice = 0;
    std::vector<std::size_t> message_sizes;
};

/// Exact evolution. Measurements split the ensemble; branches of
/// probability below 1e-15 are dropped. Throws ProtocolError on ownership
/// violations, a unitary acting non-diagonally on input qubits, senders not
/// alternating, or sizes differing from the declaration.
QRunResult run_qprotocol(const QSchedule &schedule, const InputMode &input);

/// Ensemble density over the listed qubits (in listed order).
DensityMatrix ensemble_reduced(const std::vector<Branch> &ensemble, const std::vector<std::size_t> &keep);

struct InfoAccount {
    double i_x_b = 0.0;
    std::vector<double> per_coordinate;  // I(X_i : B)
    double per_coordinate_sum = 0.0;
    std::vector<std::size_t> bob_qubits;
};

/// X is dephased in the computational basis before computing I(X : B),
/// where B is every non-input qubit Bob owns at the end of the run.
/// Throws std::invalid_argument when the schedule has no "X" register.
InfoAccount info_account(const QSchedule &schedule, const QRunResult &run);

struct PrefixAccount {
    std::size_t steps = 0;
    std::size_t qubits_alice_to_bob = 0;
    double i_x_b = 0.0;
    double per_coordinate_sum = 0.0;
    bool within_bound = true;      // I <= 2 * qubits + 1e-6
    bool chain_holds = true;       // sum_i I(X_i:B) <= I + 1e-6
};

/// Accounts every prefix of the schedule (0 steps, then after each step)
/// with X in uniform superposition.
std::vector<PrefixAccount> prefix_accounts(const QSchedule &schedule);

// ---------------------------------------------------------------------------
// Bundled protocols

/// Alice copies her input bit into a fresh qubit and sends it.
QSchedule send_classical_bit_schedule();
/// Shared Bell pair; two input bits; one qubit sent; Bob decodes and measures.
QSchedule superdense_coding_schedule();

/// One-message encodings of n input bits into m qubits. Bob decodes bit
/// `index` (or nothing when `index` is empty) and measures register "OUT".
/// m = 0: no message; m >= n: classical copy; m = 1, n in {2, 3}: the
/// Bloch-sphere random access codes; otherwise the first m bits are copied.
QSchedule random_access_schedule(std::size_t n, std::size_t m, std::optional<std::size_t> index);

struct RandomAccessReport {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> success;  // average over uniform x of P(bob outputs x_i)
    double avg_success = 0.0;
    double lhs = 0.0;             // sum_i (1 - H(eps_i))
    double rhs = 0.0;             // 2m
    bool info_bound_check = true;
};

RandomAccessReport random_access_demo(std::size_t n, std::size_t m);

// ---------------------------------------------------------------------------
// Fixed message lengths

/// A k-round protocol whose message lengths depend on a public coin outcome.
struct BranchingProtocol {
    Player first_sender = Player::Alice;
    std::vector<std::vector<std::size_t>> branch_lengths;  // [branch][round]

    void validate() const;
};

struct SafeStorageResult {
    std::vector<std::size_t> declared;  // per round, max over branches
    std::size_t total = 0;
    std::size_t max_branch_cost = 0;    // c
    std::size_t bound = 0;              // k c
    bool unchanged = false;             // input already had fixed lengths
    /// Every branch payload survives blank padding and is read back by the
    /// receiver using the public coin.
    bool decode_ok = true;
};

SafeStorageResult safe_storage_transform(const BranchingProtocol &protocol, std::uint64_t seed = 0);

/// Coin picks (c, 1) or (1, c) for a two-round protocol.
BranchingProtocol coin_length_example(std::size_t c);

}  // namespace qcomm
