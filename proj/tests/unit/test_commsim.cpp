#include <doctest.h>

#include <cmath>
#include <set>

#include "qcomm/experiment.hpp"
#include "qcomm/problems.hpp"
#include "qcomm/transcript.hpp"

using namespace qcomm;

namespace {

// Direct recursive evaluation, independent of the library evaluator.
int sk_oracle(const SkInstance &s) {
    if (s.level == 1) {
        return s.alice_bits.at(s.bob_index);
    }
    return sk_oracle(s.children.at(s.pointer));
}

int pj_oracle(const PjInstance &p, int k) {
    std::size_t v = 0;
    bool on_a = true;
    for (int i = 0; i <= k; ++i) {
        v = on_a ? p.f_a[v] : p.f_b[v];
        on_a = !on_a;
    }
    int width = 0;
    while ((std::size_t{1} << width) < p.n) {
        ++width;
    }
    int x = 0;
    for (int b = 0; b < width; ++b) {
        x ^= static_cast<int>((v >> b) & 1U);
    }
    return x;
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t w = 0;
    while ((std::size_t{1} << w) < n) {
        ++w;
    }
    return w;
}

SkInstance leaf(std::vector<std::uint8_t> bits, std::size_t index) {
    SkInstance s;
    s.level = 1;
    s.width = bits.size();
    s.alice_bits = std::move(bits);
    s.bob_index = index;
    return s;
}

}  // namespace

TEST_CASE("S_k evaluation") {
    // bits 1010, 1-based index 3
    CHECK(sk_eval(leaf({1, 0, 1, 0}, 2)) == 1);

    SkInstance two;
    two.level = 2;
    two.width = 2;
    two.pointer = 1;
    two.children = {leaf({0, 0}, 0), leaf({0, 1}, 1)};
    CHECK(sk_eval(two) == sk_eval(two.children[1]));
    CHECK(sk_eval(two) == 1);

    std::uint64_t count = sk_instance_count(2, 2);
    CHECK(count == 128);
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        auto inst = sk_instance_from_index(2, 2, i);
        CHECK(sk_eval(inst) == sk_oracle(inst));
        ones += static_cast<std::uint64_t>(sk_eval(inst));
    }
    CHECK(ones * 2 == count);

    CHECK(sk_pointer_holder(1) == Player::Bob);
    CHECK(sk_pointer_holder(2) == Player::Alice);
    CHECK(sk_pointer_holder(3) == Player::Bob);

    SkInstance bad = leaf({0, 1}, 5);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("S_k protocols starting with the pointer holder") {
    Rng rng(1);
    auto inst = random_sk(4, 3, rng);
    auto run = sk_protocol_right_start(inst);
    CHECK(run.transcript.total_bits() == 6);
    CHECK(run.transcript.messages().size() == 3);

    for (std::uint64_t i = 0; i < sk_instance_count(2, 1); ++i) {
        auto s = sk_instance_from_index(2, 1, i);
        auto r = sk_protocol_right_start(s);
        CHECK(r.output == sk_oracle(s));
        CHECK(r.transcript.messages().size() == 1);
        CHECK(r.transcript.total_bits() == 1);
    }

    for (int t = 0; t < 1000; ++t) {
        std::size_t n = 2 + static_cast<std::size_t>(t % 7);
        int k = 1 + (t / 7) % 4;
        auto s = random_sk(n, k, rng);
        auto r = sk_protocol_right_start(s);
        CHECK(r.output == sk_oracle(s));
        CHECK(r.transcript.total_bits() == static_cast<std::size_t>(k) * ceil_log2(n));
    }
}

TEST_CASE("S_k protocols starting with the wrong player") {
    auto s = leaf({0, 1, 1, 0}, 2);
    auto r = sk_protocol_wrong_start(s);
    CHECK(r.transcript.messages().size() == 1);
    CHECK(r.transcript.messages()[0].sender == Player::Alice);
    CHECK(r.transcript.messages()[0].bits == Bits{0, 1, 1, 0});
    CHECK(r.output == 1);

    Rng rng(2);
    auto two = random_sk(4, 2, rng);
    CHECK(sk_protocol_wrong_start(two).transcript.total_bits() == 6);

    for (int t = 0; t < 1000; ++t) {
        std::size_t n = 2 + static_cast<std::size_t>(t % 7);
        int k = 1 + (t / 7) % 4;
        auto inst = random_sk(n, k, rng);
        auto run = sk_protocol_wrong_start(inst);
        CHECK(run.output == sk_oracle(inst));
        CHECK(run.transcript.total_bits() == static_cast<std::size_t>(k - 1) * ceil_log2(n) + n);
        CHECK(run.transcript.first_sender() != sk_pointer_holder(k));
    }
}

TEST_CASE("pointer jumping evaluation") {
    PjInstance chain{2, {0, 0}, {0, 0}};
    auto v = pj_eval(chain, 1);
    CHECK(v.vertex == Vertex{Side::A, 0});
    CHECK(v.bit == 0);
    // k = -1 would be f^(0); k = 0 applies f once.
    CHECK(pj_eval(chain, 0).vertex == Vertex{Side::B, 0});

    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        auto p = random_pj(2 + static_cast<std::size_t>(t % 9), rng);
        int k = t % 7;
        auto val = pj_eval(p, k);
        CHECK(val.vertex.side == ((k + 1) % 2 == 1 ? Side::B : Side::A));
        CHECK(val.bit == pj_oracle(p, k));
    }
    CHECK(pj_instance_count(3) == 729);
    PjInstance bad{2, {0, 2}, {0, 0}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("deterministic pointer jumping protocol") {
    Rng rng(4);
    auto p = random_pj(4, rng);
    CHECK(pj_det_protocol(p, 2).transcript.total_bits() == 4);
    for (int k = 1; k <= 3; ++k) {
        for (std::uint64_t i = 0; i < pj_instance_count(2); ++i) {
            auto inst = pj_instance_from_index(2, i);
            auto run = pj_det_protocol(inst, k);
            CHECK(run.output == pj_oracle(inst, k));
            CHECK(run.transcript.first_sender() == Player::Alice);
        }
    }
    for (int t = 0; t < 1000; ++t) {
        auto inst = random_pj(16, rng);
        auto run = pj_det_protocol(inst, 5);
        CHECK(run.output == pj_oracle(inst, 5));
        CHECK(run.transcript.total_bits() == 20);
    }
}

TEST_CASE("randomized pointer jumping protocol") {
    Rng rng(5);
    for (std::size_t n : {2u, 5u, 16u, 64u}) {
        for (int k = 1; k <= 6; ++k) {
            auto params = nw_params(n, k, 0.2);
            for (int t = 0; t < 60; ++t) {
                auto inst = random_pj(n, rng);
                PublicCoins coins(derive_seed(n * 100 + static_cast<std::size_t>(k), static_cast<std::uint64_t>(t)));
                auto run = pj_nw_protocol(inst, params, coins);
                CHECK(run.transcript.first_sender() == Player::Bob);
                CHECK(run.transcript.messages().size() == static_cast<std::size_t>(k));
                if (!run.aborted) {
                    CHECK(run.output == pj_oracle(inst, k));
                }
                for (std::size_t r = 0; r < run.transcript.messages().size(); ++r) {
                    CHECK(run.transcript.messages()[r].bits.size() == params.declared[r]);
                }
            }
        }
    }
    CHECK_THROWS_AS(nw_params(8, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(nw_params(8, 0, 0.2), std::invalid_argument);
    CHECK(nw_params(4, 2, 0.01).degenerate);
}

TEST_CASE("iterated logarithm") {
    CHECK(iterated_log(65536, 1) == doctest::Approx(16.0));
    CHECK(iterated_log(65536, 3) == doctest::Approx(2.0));
    CHECK(iterated_log(65536, 0) == doctest::Approx(65536.0));
    CHECK(log_star(65536) == 4);
    CHECK(log_star(2) == 1);
}

TEST_CASE("set disjointness") {
    DisjInstance a{8, {1, 2}, {3}};
    CHECK_FALSE(disj_eval(a));
    DisjInstance empty{8, {}, {0, 1, 2}};
    CHECK_FALSE(disj_eval(empty));
    DisjInstance same{8, {5}, {5}};
    CHECK(disj_eval(same));
    DisjInstance unsorted{8, {2, 1}, {}};
    CHECK_THROWS_AS(unsorted.validate(), std::invalid_argument);
}

TEST_CASE("reduction from S_k to disjointness") {
    for (std::uint64_t i = 0; i < sk_instance_count(2, 2); ++i) {
        auto s = sk_instance_from_index(2, 2, i);
        auto red = sk_to_disj(s);
        CHECK(red.instance.universe == 4);
        auto inter = intersection(red.instance);
        CHECK(inter.size() <= 1);
        CHECK(inter.empty() == (sk_oracle(s) == 0));
    }
    Rng rng(6);
    CHECK(sk_to_disj(random_sk(3, 2, rng)).instance.universe == 9);
    for (int t = 0; t < 500; ++t) {
        auto s = random_sk(4, 3, rng);
        auto red = sk_to_disj(s);
        CHECK(red.padded);
        CHECK(red.depth == 4);
        std::set<std::uint64_t> bset(red.instance.set_b.begin(), red.instance.set_b.end());
        std::size_t common = 0;
        for (auto x : red.instance.set_a) {
            common += bset.count(x);
        }
        CHECK(common <= 1);
        CHECK((common == 1) == (sk_oracle(s) == 1));
    }
}

TEST_CASE("transcripts enforce declared lengths and turn order") {
    Transcript t(Player::Alice, {2, 1});
    CHECK_THROWS_AS(t.send(Player::Bob, {1, 0}), ProtocolError);
    CHECK_THROWS_AS(t.send(Player::Alice, {1}), ProtocolError);
    t.send(Player::Alice, {1, 0});
    CHECK(t.next_sender() == Player::Bob);
    t.send(Player::Bob, {1});
    CHECK(t.complete());
    CHECK(t.total_bits() == 3);
    CHECK_THROWS_AS(t.send(Player::Alice, {}), ProtocolError);

    BitWriter w;
    w.put(5, 3);
    w.put(1, 2);
    w.pad_to(8);
    Bits bits = w.take();
    CHECK(bits.size() == 8);
    BitReader r(bits);
    CHECK(r.get(3) == 5);
    CHECK(r.get(2) == 1);
    CHECK_THROWS_AS(BitWriter().put(4, 2), ProtocolError);

    PublicCoins c1(7), c2(7);
    for (int i = 0; i < 10; ++i) {
        CHECK(c1.next_u64() == c2.next_u64());
    }
    auto sample = c1.sample_without_replacement(10, 4);
    CHECK(std::set<std::size_t>(sample.begin(), sample.end()).size() == 4);
}

TEST_CASE("experiments") {
    ExperimentConfig cfg;
    cfg.protocol = "sk-det";
    cfg.n = 4;
    cfg.k = 3;
    auto r = run_experiment(cfg);
    CHECK(r.error_rate == 0.0);
    CHECK(r.max_bits == 6);
    CHECK(r.min_bits == 6);

    ExperimentConfig ex;
    ex.protocol = "pj-det";
    ex.n = 2;
    ex.k = 2;
    ex.exhaustive = true;
    auto e = run_experiment(ex);
    CHECK(e.runs == 16);
    CHECK(e.error_rate == 0.0);

    ExperimentConfig nw;
    nw.protocol = "pj-nw";
    nw.n = 256;
    nw.k = 6;
    nw.trials = 200;
    nw.seed = 3;
    auto a = run_experiment(nw);
    auto b = run_experiment(nw);
    CHECK(a.errors_without_abort == 0);
    CHECK(a.abort_rate == b.abort_rate);
    CHECK(a.mean_bits == b.mean_bits);
    CHECK(a.per_round_bits == b.per_round_bits);
    CHECK(a.measured_constant == doctest::Approx(a.max_bits / a.budget_formula_bits));

    for (const auto &id : {"sk-wrong", "pj-det"}) {
        ExperimentConfig c;
        c.protocol = id;
        c.n = 5;
        c.k = 3;
        c.trials = 50;
        CHECK(run_experiment(c).error_rate == 0.0);
    }

    ExperimentConfig unknown;
    unknown.protocol = "nope";
    CHECK_THROWS_AS(run_experiment(unknown), std::invalid_argument);
}

TEST_CASE("classical round reduction demo") {
    ReductionDemoConfig zero;
    zero.ell1 = 0;
    zero.channels = 5;
    auto z = classical_round_reduction_demo(zero);
    CHECK(z.max_stat_distance < 1e-12);

    ReductionDemoConfig small;
    auto s = classical_round_reduction_demo(small);
    CHECK(s.distances.size() == 50);
    CHECK(s.max_stat_distance <= std::sqrt(2.0 / 4.0) + 1e-8);

    ReductionDemoConfig big;
    big.n = 8;
    big.ell1 = 3;
    auto b = classical_round_reduction_demo(big);
    CHECK(b.holds);
    CHECK(b.max_stat_distance <= std::sqrt(6.0 / 8.0) + 1e-8);
    CHECK(b.max_ratio == doctest::Approx(b.max_stat_distance / b.bound));
}
