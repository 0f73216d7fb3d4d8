// qcomm: property suites, protocol experiments, reductions and quantum demos.

#include <algorithm>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "qcomm/experiment.hpp"
#include "qcomm/io.hpp"
#include "qcomm/problems.hpp"
#include "qcomm/qprotosim.hpp"
#include "qcomm/suites.hpp"

namespace {

using qcomm::json;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

void emit(const std::string &text, const std::string &out) {
    if (out.empty()) {
        std::cout << text;
    } else {
        qcomm::write_file(out, text);
    }
}

std::string dump(const json &j) { return j.dump(2) + "\n"; }

int cmd_verify(const std::string &suite, std::size_t trials, std::uint64_t seed, const std::string &out) {
    const auto &ids = qcomm::suite_ids();
    if (std::find(ids.begin(), ids.end(), suite) == ids.end()) {
        std::cerr << "qcomm verify: unknown suite '" << suite << "'\n";
        return kUsage;
    }
    auto report = qcomm::run_suite(suite, trials, seed);
    emit(dump(qcomm::to_json(report)), out);
    for (const auto &r : report.results) {
        if (r.violations > 0) {
            std::cerr << "violation: " << r.inequality << " (" << r.violations << " of " << r.trials
                      << ", worst seed " << r.worst_case_seed << ")\n";
        }
    }
    return report.passed() ? kOk : kViolation;
}

int cmd_simulate(const qcomm::ExperimentConfig &cfg, const std::string &format, const std::string &out) {
    const auto &ids = qcomm::protocol_ids();
    if (std::find(ids.begin(), ids.end(), cfg.protocol) == ids.end()) {
        std::cerr << "qcomm simulate: unknown protocol '" << cfg.protocol << "'\n";
        return kUsage;
    }
    auto report = qcomm::run_experiment(cfg);
    for (const auto &w : report.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    if (format == "csv") {
        emit(qcomm::experiment_csv_header() + qcomm::experiment_csv_row(report), out);
    } else {
        emit(dump(qcomm::to_json(report)), out);
    }
    return report.errors_without_abort == 0 ? kOk : kViolation;
}

int cmd_reduce(const std::string &instance_path, const std::string &out) {
    json in;
    try {
        in = json::parse(qcomm::read_file(instance_path));
    } catch (const json::parse_error &e) {
        std::cerr << "qcomm reduce: " << instance_path << ": " << e.what() << "\n";
        return kUsage;
    }
    auto sk = qcomm::sk_from_json(in);
    auto red = qcomm::sk_to_disj(sk);
    json cert = qcomm::reduction_certificate(sk, red);
    emit(dump(cert), out);
    return cert["certificate"]["consistent"].get<bool>() ? kOk : kViolation;
}

struct QdemoOptions {
    std::string demo;
    std::string schedule;
    std::size_t n = 2;
    std::size_t m = 1;
    std::size_t c = 5;
    std::size_t ell1 = 1;
    std::size_t alphabet = 2;
    std::size_t channels = 50;
    int k = 2;
    std::uint64_t seed = 0;
    bool n_set = false;
};

json schedule_demo(const qcomm::QSchedule &schedule, bool &ok) {
    auto accounts = qcomm::prefix_accounts(schedule);
    auto run = qcomm::run_qprotocol(schedule, qcomm::InputMode::uniform());
    auto info = qcomm::info_account(schedule, run);
    for (const auto &a : accounts) {
        ok = ok && a.within_bound && a.chain_holds;
    }
    return json{{"qubits_alice_to_bob", run.alice_to_bob},
                {"qubits_bob_to_alice", run.bob_to_alice},
                {"i_x_b", info.i_x_b},
                {"per_coordinate", info.per_coordinate},
                {"prefixes", qcomm::to_json(accounts)},
                {"schedule", qcomm::to_json(schedule)}};
}

int cmd_qdemo(const QdemoOptions &o, const std::string &out) {
    json config{{"command", "qdemo"}, {"demo", o.demo}};
    json body;
    bool ok = true;
    if (!o.schedule.empty()) {
        auto s = qcomm::schedule_from_json(json::parse(qcomm::read_file(o.schedule)));
        config["schedule_file"] = o.schedule;
        body = schedule_demo(s, ok);
    } else if (o.demo == "send-classical-bit") {
        body = schedule_demo(qcomm::send_classical_bit_schedule(), ok);
    } else if (o.demo == "superdense") {
        body = schedule_demo(qcomm::superdense_coding_schedule(), ok);
    } else if (o.demo == "random-access") {
        config["n"] = o.n;
        config["m"] = o.m;
        auto rep = qcomm::random_access_demo(o.n, o.m);
        ok = rep.info_bound_check;
        body = qcomm::to_json(rep);
        body["accounting"] = schedule_demo(qcomm::random_access_schedule(o.n, o.m, std::nullopt), ok);
    } else if (o.demo == "safe-storage") {
        config["c"] = o.c;
        config["seed"] = o.seed;
        auto rep = qcomm::safe_storage_transform(qcomm::coin_length_example(o.c), o.seed);
        ok = rep.decode_ok && rep.total <= rep.bound;
        body = qcomm::to_json(rep);
    } else if (o.demo == "reduction") {
        qcomm::ReductionDemoConfig cfg;
        cfg.n = o.n_set ? o.n : 4;
        cfg.k = o.k;
        cfg.ell1 = o.ell1;
        cfg.alphabet = o.alphabet;
        cfg.channels = o.channels;
        cfg.seed = o.seed;
        auto rep = qcomm::classical_round_reduction_demo(cfg);
        emit(dump(qcomm::to_json(rep)), out);
        return rep.holds ? kOk : kViolation;
    }
    json report{{"version", qcomm::kVersion}, {"config", config}, {"passed", ok}};
    for (auto &[key, value] : body.items()) {
        report[key] = value;
    }
    emit(dump(report), out);
    return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum communication toolkit: property suites, protocol experiments and reductions."};
    app.set_version_flag("--version", std::string(qcomm::kVersion));
    app.require_subcommand(1);

    std::string out;

    auto *verify = app.add_subcommand("verify", "Run a property suite");
    std::string suite;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    verify->add_option("--suite", suite, "Suite id (or 'all')")->required();
    verify->add_option("--trials", trials, "Trials per property (0 = suite default)");
    verify->add_option("--seed", seed, "Master seed")->required();
    verify->add_option("--out", out, "Report path (default stdout)");

    auto *simulate = app.add_subcommand("simulate", "Run a protocol experiment");
    qcomm::ExperimentConfig cfg;
    std::string format = "json";
    auto *sim_seed = simulate->add_option("--seed", cfg.seed, "Master seed");
    simulate->add_option("--protocol", cfg.protocol, "sk-det, sk-wrong, pj-det or pj-nw")->required();
    simulate->add_option("--n", cfg.n, "Alphabet size")->check(CLI::PositiveNumber);
    simulate->add_option("--k", cfg.k, "Rounds / levels")->check(CLI::PositiveNumber);
    simulate->add_option("--eps", cfg.eps, "Error parameter (pj-nw)")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--trials", cfg.trials, "Sampled instances");
    simulate->add_flag("--exhaustive", cfg.exhaustive, "Enumerate every instance");
    simulate->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    simulate->add_option("--out", out, "Report path (default stdout)");

    auto *reduce = app.add_subcommand("reduce", "Map an S_k instance to set disjointness");
    std::string instance;
    reduce->add_option("--instance", instance, "S_k instance JSON")->required();
    reduce->add_option("--out", out, "Output path (default stdout)");

    auto *qdemo = app.add_subcommand("qdemo", "Run a bundled quantum or reduction demo");
    QdemoOptions qo;
    qdemo->add_option("--demo", qo.demo, "Demo id")
        ->required()
        ->check(CLI::IsMember({"send-classical-bit", "superdense", "random-access", "safe-storage", "reduction"}));
    qdemo->add_option("--schedule", qo.schedule, "Run a schedule JSON file instead of the bundled one");
    auto *qn = qdemo->add_option("--n", qo.n, "Input bits (random-access) or coordinates (reduction)");
    qdemo->add_option("--m", qo.m, "Qubits sent (random-access)");
    qdemo->add_option("--c", qo.c, "Branch cost (safe-storage)");
    qdemo->add_option("--k", qo.k, "Outer level (reduction, recorded only)");
    qdemo->add_option("--ell1", qo.ell1, "First-message bits (reduction)");
    qdemo->add_option("--alphabet", qo.alphabet, "Values per coordinate (reduction)");
    qdemo->add_option("--channels", qo.channels, "Random channels (reduction)");
    qdemo->add_option("--seed", qo.seed, "Seed");
    qdemo->add_option("--out", out, "Report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (verify->parsed()) {
            return cmd_verify(suite, trials, seed, out);
        }
        if (simulate->parsed()) {
            if (cfg.protocol == "pj-nw" && !cfg.exhaustive && sim_seed->count() == 0) {
                std::cerr << "qcomm simulate: --seed is required for sampled pj-nw runs\n";
                return kUsage;
            }
            return cmd_simulate(cfg, format, out);
        }
        if (reduce->parsed()) {
            return cmd_reduce(instance, out);
        }
        qo.n_set = qn->count() > 0;
        return cmd_qdemo(qo, out);
    } catch (const std::invalid_argument &e) {
        std::cerr << "qcomm: " << e.what() << "\n";
        return kUsage;
    } catch (const std::runtime_error &e) {
        std::cerr << "qcomm: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception &e) {
        std::cerr << "qcomm: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "qcomm: " << e.what() << "\n";
        return kViolation;
    }
}
