#include <doctest.h>

#include "qcomm/io.hpp"

using namespace qcomm;

TEST_CASE("instance round trips") {
    Rng rng(1);
    auto sk = random_sk(3, 3, rng);
    auto back = sk_from_json(json::parse(to_json(sk).dump()));
    CHECK(sk_eval(back) == sk_eval(sk));
    CHECK(to_json(back) == to_json(sk));

    auto pj = random_pj(5, rng);
    auto any = instance_from_json(to_json(pj));
    REQUIRE(std::holds_alternative<PjInstance>(any));
    CHECK(std::get<PjInstance>(any).f_a == pj.f_a);

    DisjInstance d{10, {1, 4}, {4, 9}};
    auto dd = std::get<DisjInstance>(instance_from_json(to_json(d)));
    CHECK(dd.set_b == d.set_b);
}

TEST_CASE("malformed instances are rejected") {
    CHECK_THROWS_AS(instance_from_json(json{{"type", "sk"}, {"n", 2}}), std::invalid_argument);
    CHECK_THROWS_AS(instance_from_json(json{{"type", "nope"}}), std::invalid_argument);
    CHECK_THROWS_AS(instance_from_json(json{{"type", "pj"}, {"n", 2}, {"f_a", {0, 5}}, {"f_b", {0, 0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(instance_from_json(json{{"type", "disj"}, {"universe", 2}, {"set_a", {3}}, {"set_b", json::array()}}),
                    std::invalid_argument);
}

TEST_CASE("reduction certificate") {
    json in = json::parse(R"({"type":"sk","n":2,"k":2,"instance":{"pointer":0,"children":[
        {"alice_bits":[0,1],"bob_index":0},{"alice_bits":[1,1],"bob_index":1}]}})");
    auto sk = sk_from_json(in);
    auto cert = reduction_certificate(sk, sk_to_disj(sk));
    CHECK(cert["universe"] == 4);
    CHECK(cert["certificate"]["sk_value"] == 0);
    CHECK(cert["certificate"]["intersection_size"] == 0);
    CHECK(cert["certificate"]["consistent"] == true);
    auto disj = std::get<DisjInstance>(instance_from_json(cert));
    CHECK_FALSE(disj_eval(disj));
}

TEST_CASE("schedule round trip") {
    auto s = superdense_coding_schedule();
    auto back = schedule_from_json(json::parse(to_json(s).dump()));
    CHECK(to_json(back) == to_json(s));
    auto a = run_qprotocol(s, InputMode::uniform());
    auto b = run_qprotocol(back, InputMode::uniform());
    CHECK(info_account(s, a).i_x_b == doctest::Approx(info_account(back, b).i_x_b));

    json bad = to_json(s);
    bad["steps"][0]["kind"] = "teleport";
    CHECK_THROWS_AS(schedule_from_json(bad), std::invalid_argument);
}

TEST_CASE("reports carry version and config") {
    auto suite = to_json(run_suite("pure-trace", 5, 3));
    CHECK(suite["version"] == kVersion);
    CHECK(suite["config"]["seed"] == 3);

    ExperimentConfig cfg;
    cfg.protocol = "pj-det";
    cfg.trials = 5;
    auto rep = run_experiment(cfg);
    CHECK(to_json(rep)["config"]["protocol"] == "pj-det");
    CHECK(experiment_csv_header().rfind("protocol,n,k,eps", 0) == 0);
    CHECK(experiment_csv_row(rep).rfind("pj-det,4,2,0.2,5,0,0,0,", 0) == 0);
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}
