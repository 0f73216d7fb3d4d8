#include "qcomm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcomm {

namespace {

constexpr std::uint64_t kCountLimit = std::uint64_t{1} << 62;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kCountLimit / a) {
        throw std::overflow_error("instance space too large to enumerate");
    }
    return a * b;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        r = checked_mul(r, base);
    }
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// S_k

Player sk_pointer_holder(int level) {
    if (level <= 1) {
        return Player::Bob;
    }
    return level % 2 == 0 ? Player::Alice : Player::Bob;
}

void SkInstance::validate() const {
    if (level < 1) {
        throw std::invalid_argument("S_k instance: level must be >= 1");
    }
    if (width < 1) {
        throw std::invalid_argument("S_k instance: width must be >= 1");
    }
    if (level == 1) {
        if (alice_bits.size() != width) {
            throw std::invalid_argument("S_k instance: level-1 string has " + std::to_string(alice_bits.size()) +
                                        " bits, expected " + std::to_string(width));
        }
        for (auto b : alice_bits) {
            if (b > 1) {
                throw std::invalid_argument("S_k instance: non-binary leaf value");
            }
        }
        if (bob_index >= width) {
            throw std::invalid_argument("S_k instance: index out of range");
        }
        return;
    }
    if (pointer >= width) {
        throw std::invalid_argument("S_k instance: pointer out of range at level " + std::to_string(level));
    }
    if (children.size() != width) {
        throw std::invalid_argument("S_k instance: level " + std::to_string(level) + " has " +
                                    std::to_string(children.size()) + " sub-instances, expected " +
                                    std::to_string(width));
    }
    for (const auto &c : children) {
        if (c.level != level - 1 || c.width != width) {
            throw std::invalid_argument("S_k instance: inconsistent sub-instance shape");
        }
        c.validate();
    }
}

SkInstance random_sk(std::size_t n, int k, Rng &rng) {
    if (n < 1 || k < 1) {
        throw std::invalid_argument("random_sk: need n >= 1 and k >= 1");
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    SkInstance inst;
    inst.level = k;
    inst.width = n;
    if (k == 1) {
        std::bernoulli_distribution coin(0.5);
        inst.alice_bits.resize(n);
        for (auto &b : inst.alice_bits) {
            b = coin(rng) ? 1 : 0;
        }
        inst.bob_index = pick(rng);
        return inst;
    }
    inst.pointer = pick(rng);
    inst.children.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        inst.children.push_back(random_sk(n, k - 1, rng));
    }
    return inst;
}

std::uint64_t sk_instance_count(std::size_t n, int k) {
    if (k == 1) {
        return checked_mul(checked_pow(2, n), n);
    }
    return checked_mul(checked_pow(sk_instance_count(n, k - 1), n), n);
}

SkInstance sk_instance_from_index(std::size_t n, int k, std::uint64_t index) {
    if (index >= sk_instance_count(n, k)) {
        throw std::invalid_argument("sk_instance_from_index: index out of range");
    }
    SkInstance inst;
    inst.level = k;
    inst.width = n;
    if (k == 1) {
        inst.bob_index = static_cast<std::size_t>(index % n);
        std::uint64_t rest = index / n;
        inst.alice_bits.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            inst.alice_bits[i] = static_cast<std::uint8_t>((rest >> (n - 1 - i)) & 1U);
        }
        return inst;
    }
    inst.pointer = static_cast<std::size_t>(index % n);
    std::uint64_t rest = index / n;
    const std::uint64_t sub = sk_instance_count(n, k - 1);
    for (std::size_t j = 0; j < n; ++j) {
        inst.children.push_back(sk_instance_from_index(n, k - 1, rest % sub));
        rest /= sub;
    }
    return inst;
}

int sk_eval(const SkInstance &inst) {
    inst.validate();
    const SkInstance *node = &inst;
    while (node->level > 1) {
        node = &node->children[node->pointer];
    }
    return node->alice_bits[node->bob_index];
}

// ---------------------------------------------------------------------------
// Pointer jumping

void PjInstance::validate() const {
    if (n < 1) {
        throw std::invalid_argument("PJ instance: n must be >= 1");
    }
    if (f_a.size() != n || f_b.size() != n) {
        throw std::invalid_argument("PJ instance: f_a and f_b must both have length n");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (f_a[i] >= n || f_b[i] >= n) {
            throw std::invalid_argument("PJ instance: pointer value out of range");
        }
    }
}

Vertex PjInstance::apply(Vertex v) const {
    if (v.side == Side::A) {
        return Vertex{Side::B, f_a.at(v.index)};
    }
    return Vertex{Side::A, f_b.at(v.index)};
}

PjInstance random_pj(std::size_t n, Rng &rng) {
    if (n < 1) {
        throw std::invalid_argument("random_pj: n must be >= 1");
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    PjInstance inst{n, std::vector<std::size_t>(n), std::vector<std::size_t>(n)};
    for (auto &x : inst.f_a) {
        x = pick(rng);
    }
    for (auto &x : inst.f_b) {
        x = pick(rng);
    }
    return inst;
}

std::uint64_t pj_instance_count(std::size_t n) { return checked_pow(n, 2 * n); }

PjInstance pj_instance_from_index(std::size_t n, std::uint64_t index) {
    if (index >= pj_instance_count(n)) {
        throw std::invalid_argument("pj_instance_from_index: index out of range");
    }
    PjInstance inst{n, std::vector<std::size_t>(n), std::vector<std::size_t>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        inst.f_a[i] = static_cast<std::size_t>(index % n);
        index /= n;
    }
    for (std::size_t i = 0; i < n; ++i) {
        inst.f_b[i] = static_cast<std::size_t>(index % n);
        index /= n;
    }
    return inst;
}

int xor_of_bits(std::size_t index, std::size_t width) {
    int x = 0;
    for (std::size_t i = 0; i < width; ++i) {
        x ^= static_cast<int>((index >> i) & 1U);
    }
    return x;
}

PjValue pj_eval(const PjInstance &inst, int k) {
    inst.validate();
    if (k < 0) {
        throw std::invalid_argument("pj_eval: k must be >= 0");
    }
    Vertex v{Side::A, 0};
    for (int step = 0; step < k + 1; ++step) {
        v = inst.apply(v);
    }
    return PjValue{v, xor_of_bits(v.index, index_width(inst.n))};
}

// ---------------------------------------------------------------------------
// Disjointness

void DisjInstance::validate() const {
    for (const auto *s : {&set_a, &set_b}) {
        for (std::size_t i = 0; i < s->size(); ++i) {
            if ((*s)[i] >= universe) {
                throw std::invalid_argument("DISJ instance: element outside the universe");
            }
            if (i > 0 && (*s)[i] <= (*s)[i - 1]) {
                throw std::invalid_argument("DISJ instance: sets must be sorted and duplicate-free");
            }
        }
    }
}

std::vector<std::uint64_t> intersection(const DisjInstance &inst) {
    std::vector<std::uint64_t> out;
    std::set_intersection(inst.set_a.begin(), inst.set_a.end(), inst.set_b.begin(), inst.set_b.end(),
                          std::back_inserter(out));
    return out;
}

bool disj_eval(const DisjInstance &inst) {
    inst.validate();
    return !intersection(inst).empty();
}

namespace {

// Appends every path element reachable from `node` that `who` cannot rule
// out, given the prefix value accumulated so far.
void collect_paths(const SkInstance &node, Player who, std::uint64_t prefix, std::vector<std::uint64_t> &out) {
    const std::uint64_t n = node.width;
    if (node.level == 1) {
        for (std::uint64_t j = 0; j < n; ++j) {
            bool keep = who == Player::Alice ? node.alice_bits[j] == 1 : node.bob_index == j;
            if (keep) {
                out.push_back(prefix * n + j);
            }
        }
        return;
    }
    for (std::uint64_t j = 0; j < n; ++j) {
        if (sk_pointer_holder(node.level) == who && node.pointer != j) {
            continue;
        }
        collect_paths(node.children[j], who, prefix * n + j, out);
    }
}

}  // namespace

DisjReduction sk_to_disj(const SkInstance &inst) {
    inst.validate();
    DisjReduction r;
    r.instance.universe = checked_pow(inst.width, static_cast<std::uint64_t>(inst.level));
    // An odd-depth tree is lifted by a width-1 Alice level. The single root
    // edge multiplies the path count by 1, so paths and universe are unchanged.
    r.padded = inst.level % 2 == 1;
    r.depth = r.padded ? inst.level + 1 : inst.level;
    collect_paths(inst, Player::Alice, 0, r.instance.set_a);
    collect_paths(inst, Player::Bob, 0, r.instance.set_b);
    std::sort(r.instance.set_a.begin(), r.instance.set_a.end());
    std::sort(r.instance.set_b.begin(), r.instance.set_b.end());
    return r;
}

// ---------------------------------------------------------------------------
// Iterated logarithm

double iterated_log(double n, int j) {
    if (n < 1.0) {
        throw std::invalid_argument("iterated_log: n must be >= 1");
    }
    if (j <= 0) {
        return n;
    }
    double x = std::log2(n);
    for (int i = 2; i <= j; ++i) {
        x = std::log2(std::max(x, 1.0));
    }
    return x;
}

int log_star(double n) {
    int k = 1;
    while (iterated_log(n, k) > 1.0) {
        ++k;
    }
    return k;
}

// ---------------------------------------------------------------------------
// S_k protocols

ProtocolRun sk_protocol_right_start(const SkInstance &inst) {
    inst.validate();
    const std::size_t width = index_width(inst.width);
    ProtocolRun run;
    run.transcript = Transcript(sk_pointer_holder(inst.level),
                                std::vector<std::size_t>(static_cast<std::size_t>(inst.level), width));
    const SkInstance *node = &inst;
    while (true) {
        Player sender = sk_pointer_holder(node->level);
        BitWriter w;
        w.put(node->level == 1 ? node->bob_index : node->pointer, width);
        const Message &m = run.transcript.send(sender, w.take());
        auto idx = static_cast<std::size_t>(BitReader(m.bits).get(width));
        if (node->level == 1) {
            // Alice receives the index and answers from her string.
            run.output = node->alice_bits.at(idx);
            break;
        }
        node = &node->children.at(idx);
    }
    return run;
}

ProtocolRun sk_protocol_wrong_start(const SkInstance &inst) {
    inst.validate();
    const std::size_t n = inst.width;
    const std::size_t width = index_width(n);
    const auto k = static_cast<std::size_t>(inst.level);
    ProtocolRun run;
    if (k == 1) {
        // Alice sends her whole string; Bob reads his position.
        run.transcript = Transcript(Player::Alice, {n});
        BitWriter w;
        for (auto b : inst.alice_bits) {
            w.put_bit(b != 0);
        }
        const Message &m = run.transcript.send(Player::Alice, w.take());
        run.output = m.bits.at(inst.bob_index);
        return run;
    }
    // The opening player holds no pointer it could use yet, so its message is
    // empty; the pointer holders then cascade levels k..2 and Alice attaches
    // the selected level-1 string to the level-2 pointer.
    std::vector<std::size_t> declared(k, width);
    declared[0] = 0;
    declared[k - 1] = width + n;
    run.transcript = Transcript(other(sk_pointer_holder(inst.level)), declared);
    run.transcript.send(other(sk_pointer_holder(inst.level)), {});

    const SkInstance *node = &inst;
    while (node->level >= 2) {
        BitWriter w;
        w.put(node->pointer, width);
        if (node->level == 2) {
            for (auto b : node->children[node->pointer].alice_bits) {
                w.put_bit(b != 0);
            }
        }
        const Message &m = run.transcript.send(sk_pointer_holder(node->level), w.take());
        BitReader rd(m.bits);
        auto idx = static_cast<std::size_t>(rd.get(width));
        if (node->level == 2) {
            // Bob reads position bob_index of the attached string.
            const SkInstance &leaf = node->children.at(idx);
            Bits string(n);
            for (std::size_t i = 0; i < n; ++i) {
                string[i] = static_cast<std::uint8_t>(rd.get(1));
            }
            run.output = string.at(leaf.bob_index);
            break;
        }
        node = &node->children.at(idx);
    }
    return run;
}

// ---------------------------------------------------------------------------
// Pointer jumping protocols

ProtocolRun pj_det_protocol(const PjInstance &inst, int k) {
    inst.validate();
    if (k < 1) {
        throw std::invalid_argument("pj_det_protocol: k must be >= 1");
    }
    const std::size_t width = index_width(inst.n);
    ProtocolRun run;
    run.transcript = Transcript(Player::Alice, std::vector<std::size_t>(static_cast<std::size_t>(k), width));
    Vertex known{Side::A, 0};  // v_1, public
    for (int round = 1; round <= k; ++round) {
        Player sender = round % 2 == 1 ? Player::Alice : Player::Bob;
        Vertex next = inst.apply(known);  // sender's own function
        BitWriter w;
        w.put(next.index, width);
        const Message &m = run.transcript.send(sender, w.take());
        known = Vertex{next.side, static_cast<std::size_t>(BitReader(m.bits).get(width))};
    }
    // The last receiver owns known's side and applies its function once more.
    Vertex g = inst.apply(known);
    run.output = xor_of_bits(g.index, width);
    return run;
}

double nw_budget_bits(std::size_t n, int k, double eps) {
    const double nn = static_cast<double>(n);
    const double kk = static_cast<double>(k);
    return kk * std::log2(nn) +
           nn / kk * std::log(1.0 / eps) * (iterated_log(nn, (k + 1) / 2) + 3.0 * std::log2(kk));
}

NwParams nw_params(std::size_t n, int k, double eps) {
    if (n < 1) {
        throw std::invalid_argument("pj_nw: n must be >= 1");
    }
    if (k < 1) {
        throw std::invalid_argument("pj_nw: k must be >= 1");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("pj_nw: eps must lie in (0, 1)");
    }
    NwParams p;
    p.n = n;
    p.k = k;
    p.eps = eps;
    p.width = index_width(n);
    const std::size_t L = p.width;
    if (k == 1) {
        p.declared = {n * L};
        return p;
    }

    p.delta = 4.0 / k * std::log(1.0 / eps);
    double target = std::ceil(p.delta * static_cast<double>(n));
    if (target >= static_cast<double>(n)) {
        p.degenerate = true;
        p.warnings.push_back("degenerate-parameters: ceil(delta*n) >= n, S_0 is all of V_B");
        p.s0_size = n;
    } else {
        p.s0_size = static_cast<std::size_t>(target);
    }
    p.log_k = std::max(1, static_cast<int>(std::ceil(std::log2(static_cast<double>(k)) - 1e-12)));

    const int half = (k + 1) / 2;
    p.ell.resize(static_cast<std::size_t>(half) + 2, L);
    for (int i = 0; i < half; ++i) {
        double raw = std::ceil(iterated_log(static_cast<double>(n), half - i) + 3.0 * p.log_k - 1e-9);
        auto v = static_cast<std::size_t>(std::max(raw, 1.0));
        p.ell[static_cast<std::size_t>(i)] = std::min(v, L);
    }
    p.pin_index = 0;
    while (p.ell[static_cast<std::size_t>(p.pin_index)] < L) {
        ++p.pin_index;
    }

    for (int t = 2; 2 * t <= k; t += 2) {
        p.eligible_rounds.push_back(t);
    }
    if (p.eligible_rounds.empty()) {
        p.degenerate = true;
        p.warnings.push_back("degenerate-parameters: no Alice round t <= k/2, every run aborts");
    }

    auto block = [&](int i) -> std::size_t {
        if (i >= p.pin_index) {
            return L;  // S_{i+1} is a single vertex whose image is sent in full
        }
        std::size_t shift = L - p.ell[static_cast<std::size_t>(i)];
        std::size_t cap = shift >= 63 ? n : std::min<std::size_t>(n, std::size_t{1} << shift);
        return cap * p.ell[static_cast<std::size_t>(i) + 1];
    };
    p.declared.assign(static_cast<std::size_t>(k), 0);
    p.declared[0] = p.s0_size * p.ell[0];
    for (int r = 2; r <= k; ++r) {
        std::size_t extra = 0;
        for (int t : p.eligible_rounds) {
            int i = r - t;
            if (i >= 0 && i <= p.pin_index) {
                extra = std::max(extra, block(i));
            }
        }
        p.declared[static_cast<std::size_t>(r) - 1] = L + extra;
    }
    return p;
}

ProtocolRun pj_nw_protocol(const PjInstance &inst, int k, double eps, PublicCoins &coins) {
    return pj_nw_protocol(inst, nw_params(inst.n, k, eps), coins);
}

ProtocolRun pj_nw_protocol(const PjInstance &inst, const NwParams &p, PublicCoins &coins) {
    inst.validate();
    if (inst.n != p.n) {
        throw std::invalid_argument("pj_nw: parameters were computed for a different n");
    }
    const std::size_t n = p.n;
    const std::size_t L = p.width;
    const int k = p.k;
    ProtocolRun run;
    run.degenerate = p.degenerate;
    run.transcript = Transcript(Player::Bob, p.declared);

    if (k == 1) {
        BitWriter w;
        for (std::size_t v = 0; v < n; ++v) {
            w.put(inst.f_b[v], L);
        }
        const Message &m = run.transcript.send(Player::Bob, w.take());
        BitReader rd(m.bits);
        std::vector<std::size_t> f_b(n);
        for (auto &x : f_b) {
            x = static_cast<std::size_t>(rd.get(L));
        }
        std::size_t v2 = inst.f_a[0];
        run.output = xor_of_bits(f_b.at(v2), L);
        return run;
    }

    auto top = [L](std::size_t value, std::size_t bits) -> std::size_t { return value >> (L - bits); };
    auto own_fn = [&](Player s) -> const std::vector<std::size_t> & { return s == Player::Alice ? inst.f_a : inst.f_b; };
    auto own_side = [](Player s) { return s == Player::Alice ? Side::A : Side::B; };

    // Round 1: Bob publishes ell_0-bit prefixes of f_b on the public set S_0.
    const std::vector<std::size_t> s0 = coins.sample_without_replacement(n, p.s0_size);
    const std::size_t ell0 = p.ell[0];
    {
        BitWriter w;
        for (std::size_t v : s0) {
            w.put(top(inst.f_b[v], ell0), ell0);
        }
        w.pad_to(p.declared[0]);
        run.transcript.send(Player::Bob, w.take());
    }
    std::vector<long long> s0_prefix(n, -1);
    {
        BitReader rd(run.transcript.messages()[0].bits);
        for (std::size_t v : s0) {
            s0_prefix[v] = static_cast<long long>(rd.get(ell0));
        }
    }

    enum class Phase { Normal, Prefix, Pinned, Aborted };
    Phase phase = p.eligible_rounds.empty() ? Phase::Aborted : Phase::Normal;
    const int last_eligible = p.eligible_rounds.empty() ? 0 : p.eligible_rounds.back();

    Vertex last{Side::A, 0};  // v_{r-1} at the start of round r (public)
    int stage = 0;            // i in round t + i
    std::vector<long long> table(n, -1);  // prefixes of f(u) for u in S_i
    Vertex ahead{};           // pinned: v_{r+1} at the start of round r
    int ahead_step = 0;       // ahead == v_{ahead_step}

    for (int r = 2; r <= k; ++r) {
        const Player s = r % 2 == 0 ? Player::Alice : Player::Bob;
        const auto &f = own_fn(s);
        BitWriter w;
        // Sender-side bookkeeping decided while writing; the receiver
        // re-derives everything from the bits below.
        bool wrote_block = false;
        std::size_t block_prefix = 0;
        std::size_t block_ell = 0;

        if (phase == Phase::Normal || phase == Phase::Prefix) {
            const Vertex vr = inst.apply(last);
            w.put(vr.index, L);
            bool start_prefix = false;
            if (phase == Phase::Normal) {
                if (s == Player::Alice && 2 * r <= k && s0_prefix[vr.index] >= 0) {
                    run.hit_round = r;
                    start_prefix = true;
                    stage = 0;
                    block_prefix = static_cast<std::size_t>(s0_prefix[vr.index]);
                } else if (r >= last_eligible) {
                    phase = Phase::Aborted;
                }
            } else {
                if (table[vr.index] < 0) {
                    throw std::logic_error("pj_nw: current vertex missing from the announced prefix set");
                }
                block_prefix = static_cast<std::size_t>(table[vr.index]);
            }
            if (start_prefix || phase == Phase::Prefix) {
                phase = Phase::Prefix;
                wrote_block = true;
                block_ell = p.ell[static_cast<std::size_t>(stage)];
                if (block_ell >= L) {
                    // The next vertex is fully known: send its image directly.
                    Vertex next{own_side(s), block_prefix};
                    w.put(inst.apply(next).index, L);
                } else {
                    const std::size_t ell_next = p.ell[static_cast<std::size_t>(stage) + 1];
                    const std::size_t lo = block_prefix << (L - block_ell);
                    const std::size_t hi = std::min(n, (block_prefix + 1) << (L - block_ell));
                    for (std::size_t u = lo; u < hi; ++u) {
                        w.put(top(f[u], ell_next), ell_next);
                    }
                }
            }
        } else if (phase == Phase::Pinned) {
            w.put(inst.apply(ahead).index, L);
        }

        w.pad_to(p.declared[static_cast<std::size_t>(r) - 1]);
        const Message &m = run.transcript.send(s, w.take());

        // Receiver's view.
        if (phase == Phase::Aborted) {
            continue;
        }
        BitReader rd(m.bits);
        if (phase == Phase::Pinned) {
            ahead = Vertex{own_side(s) == Side::A ? Side::B : Side::A, static_cast<std::size_t>(rd.get(L))};
            ++ahead_step;
            continue;
        }
        const Vertex vr{own_side(s) == Side::A ? Side::B : Side::A, static_cast<std::size_t>(rd.get(L))};
        last = vr;
        if (!wrote_block) {
            continue;
        }
        if (block_ell >= L) {
            // Block holds v_{r+2}.
            ahead = Vertex{vr.side, static_cast<std::size_t>(rd.get(L))};
            ahead_step = r + 2;
            run.pin_round = r;
            phase = Phase::Pinned;
            continue;
        }
        // The receiver knows v_{r+1} = f_receiver(v_r), hence the prefix that
        // defines S_{i+1}, and files the announced prefixes.
        const Vertex v_next = inst.apply(vr);
        const std::size_t p_recv = top(v_next.index, block_ell);
        const std::size_t ell_next = p.ell[static_cast<std::size_t>(stage) + 1];
        std::fill(table.begin(), table.end(), -1);
        const std::size_t lo = p_recv << (L - block_ell);
        const std::size_t hi = std::min(n, (p_recv + 1) << (L - block_ell));
        for (std::size_t u = lo; u < hi; ++u) {
            table[u] = static_cast<long long>(rd.get(ell_next));
        }
        ++stage;
    }

    if (phase == Phase::Aborted) {
        run.aborted = true;
        run.output = 0;
        return run;
    }
    if (phase != Phase::Pinned || ahead_step != k + 2) {
        throw std::logic_error("pj_nw: protocol ended without resolving g_k");
    }
    run.output = xor_of_bits(ahead.index, L);
    return run;
}

}  // namespace qcomm
