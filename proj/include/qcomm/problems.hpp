#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcomm/quantum.hpp"
#include "qcomm/transcript.hpp"

namespace qcomm {

// ---------------------------------------------------------------------------
// Nested index function S_k

/// Level-1 node: Alice holds an n-bit string, Bob an index into it.
/// Level k >= 2: n sub-instances of level k-1 plus a pointer selecting one of
/// them, held by Alice when k is even and by Bob when k is odd. Indices are
/// 0-based.
struct SkInstance {
    int level = 1;
    std::size_t width = 0;
    std::vector<std::uint8_t> alice_bits;  // level 1
    std::size_t bob_index = 0;             // level 1
    std::size_t pointer = 0;               // level >= 2
    std::vector<SkInstance> children;      // level >= 2

    /// Throws std::invalid_argument on a malformed tree.
    void validate() const;
};

/// Holder of the selecting index at a level: Bob at level 1, then Alice for
/// even levels and Bob for odd ones.
Player sk_pointer_holder(int level);

SkInstance random_sk(std::size_t n, int k, Rng &rng);
/// Number of distinct instances; throws std::overflow_error past 2^62.
std::uint64_t sk_instance_count(std::size_t n, int k);
/// Bijection [0, sk_instance_count) -> instances.
SkInstance sk_instance_from_index(std::size_t n, int k, std::uint64_t index);

int sk_eval(const SkInstance &inst);

// ---------------------------------------------------------------------------
// Pointer jumping

enum class Side { A, B };

struct Vertex {
    Side side = Side::A;
    std::size_t index = 0;
    bool operator==(const Vertex &) const = default;
};

/// f_a : V_A -> V_B, f_b : V_B -> V_A. The walk starts at V_A vertex 0.
struct PjInstance {
    std::size_t n = 0;
    std::vector<std::size_t> f_a;
    std::vector<std::size_t> f_b;

    void validate() const;
    Vertex apply(Vertex v) const;
};

PjInstance random_pj(std::size_t n, Rng &rng);
std::uint64_t pj_instance_count(std::size_t n);
PjInstance pj_instance_from_index(std::size_t n, std::uint64_t index);

/// XOR of the index_width(n) big-endian bits of index.
int xor_of_bits(std::size_t index, std::size_t width);

struct PjValue {
    Vertex vertex;  // g_k = f^(k+1)(v_1)
    int bit = 0;    // f_k
};

PjValue pj_eval(const PjInstance &inst, int k);

// ---------------------------------------------------------------------------
// Set disjointness

struct DisjInstance {
    std::uint64_t universe = 0;
    std::vector<std::uint64_t> set_a;  // sorted, distinct
    std::vector<std::uint64_t> set_b;

    void validate() const;
};

std::vector<std::uint64_t> intersection(const DisjInstance &inst);
/// true iff the sets intersect.
bool disj_eval(const DisjInstance &inst);

struct DisjReduction {
    DisjInstance instance;
    /// Odd k: the instance was lifted by a width-1 Alice level.
    bool padded = false;
    int depth = 0;
};

/// Path encoding: a root-to-leaf path (j_k, ..., j_1) is the element
/// sum_l j_l n^(l-1). Alice keeps the paths consistent with her pointers
/// that end at a 1-leaf, Bob the paths consistent with his pointers.
DisjReduction sk_to_disj(const SkInstance &inst);

// ---------------------------------------------------------------------------
// Iterated logarithm

/// log^(1) n = log2 n, log^(j) n = log2(max(log^(j-1) n, 1)); j = 0 gives n.
double iterated_log(double n, int j);
/// min { k >= 1 : log^(k) n <= 1 }.
int log_star(double n);

// ---------------------------------------------------------------------------
// Protocols

struct ProtocolRun {
    int output = 0;
    Transcript transcript{Player::Alice, {}};
    bool aborted = false;
    bool degenerate = false;
    /// pj_nw: first round whose vertex hit S_0 (0 if none) and the round in
    /// which the next vertex became fully known (0 if never).
    int hit_round = 0;
    int pin_round = 0;
};

/// k messages, one ceil(log2 n)-bit index each, the pointer holder first.
ProtocolRun sk_protocol_right_start(const SkInstance &inst);
/// k messages starting with the player not holding the top pointer; total
/// (k-1) ceil(log2 n) + n bits.
ProtocolRun sk_protocol_wrong_start(const SkInstance &inst);

/// Alice starts; round t carries v_{t+1}; k ceil(log2 n) bits in total.
ProtocolRun pj_det_protocol(const PjInstance &inst, int k);

/// Parameters of the randomized Bob-starts protocol, fixed before execution.
struct NwParams {
    std::size_t n = 0;
    int k = 0;
    double eps = 0.0;
    std::size_t width = 0;   // L = ceil(log2 n)
    double delta = 0.0;      // (4/k) ln(1/eps)
    std::size_t s0_size = 0; // min(n, ceil(delta n))
    int log_k = 0;           // max(1, ceil(log2 k))
    /// ell[i] for i = 0 .. ceil(k/2)+1, clamped to [1, L].
    std::vector<std::size_t> ell;
    /// Smallest i with ell[i] == L.
    int pin_index = 0;
    /// Alice rounds t (even, t <= k/2) at which an S_0 hit is acted on.
    std::vector<int> eligible_rounds;
    /// Per-round message lengths: maximum over all branches.
    std::vector<std::size_t> declared;
    bool degenerate = false;
    std::vector<std::string> warnings;
};

/// Throws std::invalid_argument for k < 1, n < 1 or eps outside (0, 1).
NwParams nw_params(std::size_t n, int k, double eps);

/// Randomized k-round protocol with Bob starting. Zero error unless it
/// aborts; on abort it outputs 0.
ProtocolRun pj_nw_protocol(const PjInstance &inst, int k, double eps, PublicCoins &coins);
ProtocolRun pj_nw_protocol(const PjInstance &inst, const NwParams &params, PublicCoins &coins);

/// k log2 n + (n/k) ln(1/eps) (log^(ceil(k/2)) n + 3 log2 k).
double nw_budget_bits(std::size_t n, int k, double eps);

}  // namespace qcomm
