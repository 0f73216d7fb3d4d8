#include "qcomm/qprotosim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

#include "qcomm/metrics.hpp"

namespace qcomm {

namespace {

using Index = std::size_t;

inline Index bit_of(Index i, std::size_t nq, std::size_t q) { return (i >> (nq - 1 - q)) & 1U; }

inline Index with_bit(Index i, std::size_t nq, std::size_t q, Index b) {
    Index mask = Index{1} << (nq - 1 - q);
    return b ? (i | mask) : (i & ~mask);
}

Index gather(Index i, std::size_t nq, const std::vector<std::size_t> &qubits) {
    Index v = 0;
    for (auto q : qubits) {
        v = (v << 1) | bit_of(i, nq, q);
    }
    return v;
}

Index scatter(Index base, std::size_t nq, const std::vector<std::size_t> &qubits, Index v) {
    const std::size_t k = qubits.size();
    for (std::size_t t = 0; t < k; ++t) {
        base = with_bit(base, nq, qubits[t], (v >> (k - 1 - t)) & 1U);
    }
    return base;
}

Vector apply_on(const Vector &amps, std::size_t nq, const std::vector<std::size_t> &qubits, const Matrix &m) {
    Vector out = Vector::Zero(amps.size());
    const auto dim = static_cast<Index>(m.rows());
    for (Index i = 0; i < static_cast<Index>(amps.size()); ++i) {
        const Complex a = amps(static_cast<Eigen::Index>(i));
        if (a == Complex(0.0, 0.0)) {
            continue;
        }
        Index sub = gather(i, nq, qubits);
        Index base = scatter(i, nq, qubits, 0);
        for (Index r = 0; r < dim; ++r) {
            Complex c = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(sub));
            if (c != Complex(0.0, 0.0)) {
                out(static_cast<Eigen::Index>(scatter(base, nq, qubits, r))) += c * a;
            }
        }
    }
    return out;
}

Matrix hadamard() {
    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::numbers::sqrt2;
}

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

Matrix cz() {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = -1;
    return m;
}

void check_qubits(const std::vector<std::size_t> &qubits, std::size_t nq, const char *what) {
    std::set<std::size_t> seen;
    for (auto q : qubits) {
        if (q >= nq) {
            throw std::invalid_argument(std::string(what) + ": qubit " + std::to_string(q) + " out of range");
        }
        if (!seen.insert(q).second) {
            throw std::invalid_argument(std::string(what) + ": qubit " + std::to_string(q) + " listed twice");
        }
    }
}

void require_owner(const std::vector<Player> &owners, const std::vector<std::size_t> &qubits, Player who,
                   const char *what) {
    for (auto q : qubits) {
        if (owners[q] != who) {
            throw ProtocolError(std::string(what) + ": qubit " + std::to_string(q) + " is not owned by " +
                                std::string(to_string(who)));
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Schedule

void QSchedule::validate() const {
    if (num_qubits > kMaxQubits) {
        throw std::invalid_argument("schedule uses " + std::to_string(num_qubits) + " qubits, the limit is " +
                                    std::to_string(kMaxQubits));
    }
    if (owners.size() != num_qubits) {
        throw std::invalid_argument("schedule: owner list does not match the qubit count");
    }
    for (const auto &[name, qs] : registers) {
        check_qubits(qs, num_qubits, ("register " + name).c_str());
    }
    std::set<std::size_t> paired;
    for (const auto &[a, b] : entangled_pairs) {
        if (a >= num_qubits || b >= num_qubits || a == b || !paired.insert(a).second || !paired.insert(b).second) {
            throw std::invalid_argument("schedule: invalid entangled pair");
        }
    }
    for (const auto &step : steps) {
        if (const auto *u = std::get_if<LocalUnitary>(&step)) {
            check_qubits(u->qubits, num_qubits, "unitary");
            auto dim = static_cast<Eigen::Index>(std::size_t{1} << u->qubits.size());
            if (u->qubits.empty() || u->matrix.rows() != dim || u->matrix.cols() != dim) {
                throw std::invalid_argument("unitary: matrix must be 2^q x 2^q for q listed qubits");
            }
        } else if (const auto *s = std::get_if<SendQubits>(&step)) {
            check_qubits(s->qubits, num_qubits, "send");
            if (s->from == s->to) {
                throw std::invalid_argument("send: sender and receiver coincide");
            }
        } else {
            check_qubits(std::get<MeasureQubits>(step).qubits, num_qubits, "measure");
        }
    }
}

const std::vector<std::size_t> &QSchedule::input_qubits() const {
    static const std::vector<std::size_t> none;
    auto it = registers.find("X");
    return it == registers.end() ? none : it->second;
}

QSchedule QSchedule::prefix(std::size_t count) const {
    QSchedule p = *this;
    p.steps.resize(std::min(count, steps.size()));
    std::size_t sends = 0;
    for (const auto &s : p.steps) {
        sends += std::holds_alternative<SendQubits>(s) ? 1 : 0;
    }
    if (!p.declared_message_sizes.empty()) {
        p.declared_message_sizes.resize(std::min(sends, declared_message_sizes.size()));
    }
    return p;
}

// ---------------------------------------------------------------------------
// Simulation

QRunResult run_qprotocol(const QSchedule &schedule, const InputMode &input) {
    schedule.validate();
    const std::size_t nq = schedule.num_qubits;
    const auto &xq = schedule.input_qubits();
    const std::set<std::size_t> input_set(xq.begin(), xq.end());

    Vector amps = Vector::Zero(static_cast<Eigen::Index>(Index{1} << nq));
    Index start = 0;
    if (input.basis) {
        if (xq.size() < 64 && (*input.basis >> xq.size()) != 0) {
            throw std::invalid_argument("run_qprotocol: input value does not fit the X register");
        }
        start = scatter(0, nq, xq, *input.basis);
    }
    amps(static_cast<Eigen::Index>(start)) = 1.0;
    if (!input.basis) {
        for (auto q : xq) {
            amps = apply_on(amps, nq, {q}, hadamard());
        }
    }
    for (const auto &[a, b] : schedule.entangled_pairs) {
        amps = apply_on(amps, nq, {a}, hadamard());
        amps = apply_on(amps, nq, {a, b}, cnot());
    }

    QRunResult res;
    res.owners = schedule.owners;
    res.ensemble.push_back(Branch{1.0, QState{amps, schedule.owners}});
    std::optional<Player> last_sender;

    for (const auto &step : schedule.steps) {
        if (const auto *u = std::get_if<LocalUnitary>(&step)) {
            require_owner(res.owners, u->qubits, u->owner, "unitary");
            if (!is_unitary(u->matrix, 1e-9)) {
                throw ProtocolError("unitary: matrix is not unitary");
            }
            std::vector<std::size_t> in_pos;
            for (std::size_t t = 0; t < u->qubits.size(); ++t) {
                if (input_set.count(u->qubits[t])) {
                    in_pos.push_back(t);
                }
            }
            if (!in_pos.empty()) {
                // Inputs may act as controls only: no amplitude may move
                // between different input values.
                const std::size_t q = u->qubits.size();
                Index mask = 0;
                for (auto t : in_pos) {
                    mask |= Index{1} << (q - 1 - t);
                }
                for (Eigen::Index r = 0; r < u->matrix.rows(); ++r) {
                    for (Eigen::Index c = 0; c < u->matrix.cols(); ++c) {
                        if (((static_cast<Index>(r) ^ static_cast<Index>(c)) & mask) != 0 &&
                            std::abs(u->matrix(r, c)) > 1e-12) {
                            throw ProtocolError("unitary: classical input qubits may only be used as controls");
                        }
                    }
                }
            }
            for (auto &b : res.ensemble) {
                b.state.amplitudes = apply_on(b.state.amplitudes, nq, u->qubits, u->matrix);
            }
        } else if (const auto *s = std::get_if<SendQubits>(&step)) {
            require_owner(res.owners, s->qubits, s->from, "send");
            if (last_sender && *last_sender == s->from) {
                throw ProtocolError("send: consecutive messages from " + std::string(to_string(s->from)));
            }
            std::size_t idx = res.message_sizes.size();
            if (!schedule.declared_message_sizes.empty()) {
                if (idx >= schedule.declared_message_sizes.size()) {
                    throw ProtocolError("send: more messages than declared");
                }
                if (schedule.declared_message_sizes[idx] != s->qubits.size()) {
                    throw ProtocolError("send: message " + std::to_string(idx + 1) + " declared " +
                                        std::to_string(schedule.declared_message_sizes[idx]) + " qubits, got " +
                                        std::to_string(s->qubits.size()));
                }
            }
            last_sender = s->from;
            res.message_sizes.push_back(s->qubits.size());
            (s->from == Player::Alice ? res.alice_to_bob : res.bob_to_alice) += s->qubits.size();
            for (auto q : s->qubits) {
                res.owners[q] = s->to;
            }
            for (auto &b : res.ensemble) {
                b.state.owners = res.owners;
            }
        } else {
            const auto &m = std::get<MeasureQubits>(step);
            require_owner(res.owners, m.qubits, m.owner, "measure");
            const Index outcomes = Index{1} << m.qubits.size();
            std::vector<Branch> next;
            for (const auto &b : res.ensemble) {
                for (Index o = 0; o < outcomes; ++o) {
                    Vector proj = Vector::Zero(b.state.amplitudes.size());
                    for (Index i = 0; i < static_cast<Index>(proj.size()); ++i) {
                        if (gather(i, nq, m.qubits) == o) {
                            proj(static_cast<Eigen::Index>(i)) = b.state.amplitudes(static_cast<Eigen::Index>(i));
                        }
                    }
                    double p = proj.squaredNorm();
                    if (p * b.probability < 1e-15) {
                        continue;
                    }
                    next.push_back(Branch{b.probability * p, QState{proj / std::sqrt(p), res.owners}});
                }
            }
            res.ensemble = std::move(next);
        }
        for (const auto &b : res.ensemble) {
            if (std::abs(b.state.amplitudes.squaredNorm() - 1.0) > 1e-9) {
                throw std::logic_error("run_qprotocol: norm drifted");
            }
        }
    }
    if (!schedule.declared_message_sizes.empty() &&
        res.message_sizes.size() != schedule.declared_message_sizes.size()) {
        throw ProtocolError("run_qprotocol: " + std::to_string(res.message_sizes.size()) + " messages sent, " +
                            std::to_string(schedule.declared_message_sizes.size()) + " declared");
    }
    return res;
}

DensityMatrix ensemble_reduced(const std::vector<Branch> &ensemble, const std::vector<std::size_t> &keep) {
    if (ensemble.empty()) {
        throw std::invalid_argument("ensemble_reduced: empty ensemble");
    }
    const std::size_t nq = ensemble.front().state.num_qubits();
    check_qubits(keep, nq, "ensemble_reduced");
    std::vector<std::size_t> rest;
    for (std::size_t q = 0; q < nq; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
            rest.push_back(q);
        }
    }
    const auto dk = static_cast<Eigen::Index>(Index{1} << keep.size());
    const auto dr = static_cast<Eigen::Index>(Index{1} << rest.size());
    Matrix rho = Matrix::Zero(dk, dk);
    for (const auto &b : ensemble) {
        Matrix c = Matrix::Zero(dk, dr);
        const Vector &a = b.state.amplitudes;
        for (Index i = 0; i < static_cast<Index>(a.size()); ++i) {
            c(static_cast<Eigen::Index>(gather(i, nq, keep)), static_cast<Eigen::Index>(gather(i, nq, rest))) =
                a(static_cast<Eigen::Index>(i));
        }
        rho += b.probability * c * c.adjoint();
    }
    return DensityMatrix((rho + rho.adjoint()) * 0.5);
}

namespace {

// Zeroes coherences between different values of the leading qubits, i.e.
// everything above the trailing `b_bits`.
DensityMatrix dephase_leading(const DensityMatrix &rho, std::size_t b_bits) {
    Matrix m = rho.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if ((static_cast<Index>(r) >> b_bits) != (static_cast<Index>(c) >> b_bits)) {
                m(r, c) = 0.0;
            }
        }
    }
    return DensityMatrix(std::move(m));
}

double dephased_information(const std::vector<Branch> &ensemble, const std::vector<std::size_t> &x,
                            const std::vector<std::size_t> &b) {
    std::vector<std::size_t> keep = x;
    keep.insert(keep.end(), b.begin(), b.end());
    DensityMatrix rho = dephase_leading(ensemble_reduced(ensemble, keep), b.size());
    return mutual_information(rho, Bipartition::of(std::size_t{1} << x.size(), std::size_t{1} << b.size()));
}

}  // namespace

InfoAccount info_account(const QSchedule &schedule, const QRunResult &run) {
    const auto &xq = schedule.input_qubits();
    if (xq.empty()) {
        throw std::invalid_argument("info_account: schedule has no X register");
    }
    InfoAccount acc;
    for (std::size_t q = 0; q < run.owners.size(); ++q) {
        if (run.owners[q] == Player::Bob && std::find(xq.begin(), xq.end(), q) == xq.end()) {
            acc.bob_qubits.push_back(q);
        }
    }
    acc.i_x_b = dephased_information(run.ensemble, xq, acc.bob_qubits);
    for (auto q : xq) {
        double v = dephased_information(run.ensemble, {q}, acc.bob_qubits);
        acc.per_coordinate.push_back(v);
        acc.per_coordinate_sum += v;
    }
    return acc;
}

std::vector<PrefixAccount> prefix_accounts(const QSchedule &schedule) {
    std::vector<PrefixAccount> out;
    for (std::size_t count = 0; count <= schedule.steps.size(); ++count) {
        QSchedule p = schedule.prefix(count);
        QRunResult run = run_qprotocol(p, InputMode::uniform());
        InfoAccount acc = info_account(p, run);
        PrefixAccount a;
        a.steps = count;
        a.qubits_alice_to_bob = run.alice_to_bob;
        a.i_x_b = acc.i_x_b;
        a.per_coordinate_sum = acc.per_coordinate_sum;
        a.within_bound = acc.i_x_b <= 2.0 * static_cast<double>(run.alice_to_bob) + 1e-6;
        a.chain_holds = acc.per_coordinate_sum <= acc.i_x_b + 1e-6;
        out.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bundled protocols

QSchedule send_classical_bit_schedule() {
    QSchedule s;
    s.num_qubits = 2;
    s.registers = {{"X", {0}}, {"M", {1}}, {"OUT", {1}}};
    s.owners = {Player::Alice, Player::Alice};
    s.steps.push_back(LocalUnitary{Player::Alice, {0, 1}, cnot()});
    s.steps.push_back(SendQubits{{1}, Player::Alice, Player::Bob});
    s.declared_message_sizes = {1};
    return s;
}

QSchedule superdense_coding_schedule() {
    QSchedule s;
    s.num_qubits = 4;
    s.registers = {{"X", {0, 1}}, {"A", {2}}, {"B", {3}}, {"OUT", {2, 3}}};
    s.owners = {Player::Alice, Player::Alice, Player::Alice, Player::Bob};
    s.entangled_pairs = {{2, 3}};
    // X^{x1} then Z^{x0} on Alice's half; Bob's Bell measurement reads
    // x0 from qubit 2 and x1 from qubit 3.
    s.steps.push_back(LocalUnitary{Player::Alice, {1, 2}, cnot()});
    s.steps.push_back(LocalUnitary{Player::Alice, {0, 2}, cz()});
    s.steps.push_back(SendQubits{{2}, Player::Alice, Player::Bob});
    s.steps.push_back(LocalUnitary{Player::Bob, {2, 3}, cnot()});
    s.steps.push_back(LocalUnitary{Player::Bob, {2}, hadamard()});
    s.steps.push_back(MeasureQubits{Player::Bob, {2, 3}});
    s.declared_message_sizes = {1};
    return s;
}

namespace {

Matrix bloch_preparation(double rx, double ry, double rz) {
    double norm = std::sqrt(rx * rx + ry * ry + rz * rz);
    double theta = std::acos(std::clamp(rz / norm, -1.0, 1.0));
    double phi = std::atan2(ry, rx);
    Complex a = std::cos(theta / 2.0);
    Complex b = std::polar(std::sin(theta / 2.0), phi);
    Matrix u(2, 2);
    u << a, -std::conj(b), b, std::conj(a);
    return u;
}

bool uses_qrac(std::size_t n, std::size_t m) { return m == 1 && (n == 2 || n == 3); }

}  // namespace

QSchedule random_access_schedule(std::size_t n, std::size_t m, std::optional<std::size_t> index) {
    if (n < 1 || n + m + 1 > kMaxQubits) {
        throw std::invalid_argument("random access schedule: n + m + 1 must not exceed 14 qubits");
    }
    if (index && *index >= n) {
        throw std::invalid_argument("random access schedule: decoded index out of range");
    }
    QSchedule s;
    std::vector<std::size_t> x(n), msg(m);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = i;
    }
    for (std::size_t j = 0; j < m; ++j) {
        msg[j] = n + j;
    }
    s.num_qubits = n + m;
    s.owners.assign(n + m, Player::Alice);
    s.registers["X"] = x;
    if (m > 0) {
        s.registers["M"] = msg;
    }

    const bool qrac = uses_qrac(n, m);
    const std::size_t copied = qrac ? 0 : std::min(n, m);
    if (qrac) {
        // Block-diagonal preparation: for input x, rotate |0> to the Bloch
        // vector whose i-th axis carries (-1)^{x_i}.
        const std::size_t dim = std::size_t{1} << (n + 1);
        Matrix u = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        for (std::size_t xv = 0; xv < (std::size_t{1} << n); ++xv) {
            auto sign = [&](std::size_t i) { return ((xv >> (n - 1 - i)) & 1U) ? -1.0 : 1.0; };
            Matrix block = n == 2 ? bloch_preparation(sign(1), 0.0, sign(0))
                                  : bloch_preparation(sign(0), sign(1), sign(2));
            u.block(static_cast<Eigen::Index>(2 * xv), static_cast<Eigen::Index>(2 * xv), 2, 2) = block;
        }
        std::vector<std::size_t> qs = x;
        qs.push_back(msg[0]);
        s.steps.push_back(LocalUnitary{Player::Alice, qs, u});
    } else {
        for (std::size_t i = 0; i < copied; ++i) {
            s.steps.push_back(LocalUnitary{Player::Alice, {x[i], msg[i]}, cnot()});
        }
    }
    if (m > 0) {
        s.steps.push_back(SendQubits{msg, Player::Alice, Player::Bob});
        s.declared_message_sizes = {m};
    }
    if (!index) {
        return s;
    }
    const std::size_t i = *index;
    std::size_t out_qubit = 0;
    if (qrac) {
        out_qubit = msg[0];
        Matrix basis_change = Matrix::Identity(2, 2);
        // Axis of bit i: n = 2 uses (z, x); n = 3 uses (x, y, z).
        char axis = n == 2 ? (i == 0 ? 'z' : 'x') : "xyz"[i];
        if (axis == 'x') {
            basis_change = hadamard();
        } else if (axis == 'y') {
            Matrix sdg = Matrix::Identity(2, 2);
            sdg(1, 1) = Complex(0.0, -1.0);
            basis_change = hadamard() * sdg;
        }
        s.steps.push_back(LocalUnitary{Player::Bob, {out_qubit}, basis_change});
    } else if (i < copied) {
        out_qubit = msg[i];
    } else {
        // Nothing about x_i arrived: Bob answers 0 from a fresh qubit.
        out_qubit = s.num_qubits++;
        s.owners.push_back(Player::Bob);
    }
    s.registers["OUT"] = {out_qubit};
    s.steps.push_back(MeasureQubits{Player::Bob, {out_qubit}});
    return s;
}

RandomAccessReport random_access_demo(std::size_t n, std::size_t m) {
    RandomAccessReport rep;
    rep.n = n;
    rep.m = m;
    rep.rhs = 2.0 * static_cast<double>(m);
    const std::size_t inputs = std::size_t{1} << n;
    for (std::size_t i = 0; i < n; ++i) {
        QSchedule s = random_access_schedule(n, m, i);
        const std::size_t out = s.registers.at("OUT").front();
        double success = 0.0;
        for (std::size_t xv = 0; xv < inputs; ++xv) {
            const Index want = (xv >> (n - 1 - i)) & 1U;
            QRunResult run = run_qprotocol(s, InputMode::of(xv));
            for (const auto &b : run.ensemble) {
                const Vector &a = b.state.amplitudes;
                for (Index j = 0; j < static_cast<Index>(a.size()); ++j) {
                    if (bit_of(j, s.num_qubits, out) == want) {
                        success += b.probability * std::norm(a(static_cast<Eigen::Index>(j)));
                    }
                }
            }
        }
        success /= static_cast<double>(inputs);
        rep.success.push_back(success);
        rep.avg_success += success / static_cast<double>(n);
        rep.lhs += 1.0 - binary_entropy(success);
    }
    rep.info_bound_check = rep.lhs <= rep.rhs + 1e-6;
    return rep;
}

// ---------------------------------------------------------------------------
// Fixed message lengths

void BranchingProtocol::validate() const {
    if (branch_lengths.empty()) {
        throw std::invalid_argument("branching protocol: no branches");
    }
    const std::size_t k = branch_lengths.front().size();
    if (k == 0) {
        throw std::invalid_argument("branching protocol: no rounds");
    }
    for (const auto &b : branch_lengths) {
        if (b.size() != k) {
            throw std::invalid_argument("branching protocol: branches differ in round count");
        }
    }
}

SafeStorageResult safe_storage_transform(const BranchingProtocol &protocol, std::uint64_t seed) {
    protocol.validate();
    const std::size_t k = protocol.branch_lengths.front().size();
    SafeStorageResult r;
    r.declared.assign(k, 0);
    r.unchanged = true;
    for (const auto &b : protocol.branch_lengths) {
        std::size_t cost = 0;
        for (std::size_t t = 0; t < k; ++t) {
            r.declared[t] = std::max(r.declared[t], b[t]);
            cost += b[t];
        }
        r.max_branch_cost = std::max(r.max_branch_cost, cost);
        r.unchanged = r.unchanged && b == protocol.branch_lengths.front();
    }
    for (auto d : r.declared) {
        r.total += d;
    }
    r.bound = k * r.max_branch_cost;

    // Blank-padding round trip for every branch with random payloads.
    Rng rng(seed);
    std::bernoulli_distribution coin(0.5);
    for (const auto &b : protocol.branch_lengths) {
        Transcript tr(protocol.first_sender, r.declared);
        for (std::size_t t = 0; t < k; ++t) {
            Bits payload(b[t]);
            for (auto &bit : payload) {
                bit = coin(rng) ? 1 : 0;
            }
            BitWriter w;
            for (auto bit : payload) {
                w.put_bit(bit != 0);
            }
            w.pad_to(r.declared[t]);
            const Message &msg = tr.send(tr.next_sender(), w.take());
            // The receiver knows the branch from the public coin.
            Bits read(msg.bits.begin(), msg.bits.begin() + static_cast<std::ptrdiff_t>(b[t]));
            r.decode_ok = r.decode_ok && read == payload;
        }
    }
    return r;
}

BranchingProtocol coin_length_example(std::size_t c) {
    return BranchingProtocol{Player::Alice, {{c, 1}, {1, c}}};
}

}  // namespace qcomm
