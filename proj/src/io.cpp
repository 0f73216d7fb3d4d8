#include "qcomm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcomm {

namespace {

const json &field(const json &j, const char *name, const std::string &where) {
    if (!j.is_object() || !j.contains(name)) {
        throw std::invalid_argument(where + ": missing field '" + name + "'");
    }
    return j.at(name);
}

template <typename T>
T get_as(const json &j, const char *name, const std::string &where) {
    try {
        return field(j, name, where).get<T>();
    } catch (const json::exception &e) {
        throw std::invalid_argument(where + ": field '" + name + "' has the wrong type (" + e.what() + ")");
    }
}

std::string player_name(Player p) { return std::string(to_string(p)); }

Player player_from(const json &j, const std::string &where) {
    std::string s = j.get<std::string>();
    if (s == "alice") {
        return Player::Alice;
    }
    if (s == "bob") {
        return Player::Bob;
    }
    throw std::invalid_argument(where + ": unknown player '" + s + "'");
}

// JSON has no infinity; encode it as a string.
json number(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    return v;
}

json sk_node(const SkInstance &n) {
    if (n.level == 1) {
        return json{{"alice_bits", n.alice_bits}, {"bob_index", n.bob_index}};
    }
    json children = json::array();
    for (const auto &c : n.children) {
        children.push_back(sk_node(c));
    }
    return json{{"pointer", n.pointer}, {"children", children}};
}

SkInstance sk_node_from(const json &j, std::size_t n, int level, const std::string &where) {
    SkInstance inst;
    inst.level = level;
    inst.width = n;
    if (level == 1) {
        inst.alice_bits = get_as<std::vector<std::uint8_t>>(j, "alice_bits", where);
        inst.bob_index = get_as<std::size_t>(j, "bob_index", where);
        return inst;
    }
    inst.pointer = get_as<std::size_t>(j, "pointer", where);
    const json &ch = field(j, "children", where);
    if (!ch.is_array()) {
        throw std::invalid_argument(where + ": 'children' must be an array");
    }
    for (std::size_t i = 0; i < ch.size(); ++i) {
        inst.children.push_back(sk_node_from(ch[i], n, level - 1, where + ".children[" + std::to_string(i) + "]"));
    }
    return inst;
}

}  // namespace

// Instances -----------------------------------------------------------------

json to_json(const SkInstance &inst) {
    return json{{"type", "sk"}, {"n", inst.width}, {"k", inst.level}, {"instance", sk_node(inst)}};
}

json to_json(const PjInstance &inst) {
    return json{{"type", "pj"}, {"n", inst.n}, {"f_a", inst.f_a}, {"f_b", inst.f_b}};
}

json to_json(const DisjInstance &inst) {
    return json{{"type", "disj"}, {"universe", inst.universe}, {"set_a", inst.set_a}, {"set_b", inst.set_b}};
}

SkInstance sk_from_json(const json &j) {
    auto n = get_as<std::size_t>(j, "n", "sk");
    auto k = get_as<int>(j, "k", "sk");
    if (k < 1 || n < 1) {
        throw std::invalid_argument("sk: need n >= 1 and k >= 1");
    }
    SkInstance inst = sk_node_from(field(j, "instance", "sk"), n, k, "sk.instance");
    inst.validate();
    return inst;
}

AnyInstance instance_from_json(const json &j) {
    auto type = get_as<std::string>(j, "type", "instance");
    if (type == "sk") {
        return sk_from_json(j);
    }
    if (type == "pj") {
        PjInstance inst{get_as<std::size_t>(j, "n", "pj"), get_as<std::vector<std::size_t>>(j, "f_a", "pj"),
                        get_as<std::vector<std::size_t>>(j, "f_b", "pj")};
        inst.validate();
        return inst;
    }
    if (type == "disj") {
        DisjInstance inst{get_as<std::uint64_t>(j, "universe", "disj"),
                          get_as<std::vector<std::uint64_t>>(j, "set_a", "disj"),
                          get_as<std::vector<std::uint64_t>>(j, "set_b", "disj")};
        inst.validate();
        return inst;
    }
    throw std::invalid_argument("instance: unknown type '" + type + "'");
}

json reduction_certificate(const SkInstance &sk, const DisjReduction &red) {
    json j = to_json(red.instance);
    int sk_value = sk_eval(sk);
    bool disj_value = disj_eval(red.instance);
    std::size_t inter = intersection(red.instance).size();
    j["certificate"] = json{{"sk_value", sk_value},
                            {"disj_value", disj_value},
                            {"intersection_size", inter},
                            {"padded", red.padded},
                            {"depth", red.depth},
                            {"consistent", (sk_value == 1) == disj_value && inter <= 1}};
    return j;
}

// Schedules -----------------------------------------------------------------

json matrix_to_json(const Matrix &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json &j) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument("matrix: expected a non-empty array of rows");
    }
    auto rows = static_cast<Eigen::Index>(j.size());
    auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw std::invalid_argument("matrix: ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json &e = row[static_cast<std::size_t>(c)];
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2) {
                m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                throw std::invalid_argument("matrix: entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

json to_json(const QSchedule &s) {
    json owners = json::array();
    for (auto p : s.owners) {
        owners.push_back(player_name(p));
    }
    json pairs = json::array();
    for (const auto &[a, b] : s.entangled_pairs) {
        pairs.push_back(json::array({a, b}));
    }
    json steps = json::array();
    for (const auto &step : s.steps) {
        if (const auto *u = std::get_if<LocalUnitary>(&step)) {
            steps.push_back(json{{"kind", "local_unitary"},
                                 {"owner", player_name(u->owner)},
                                 {"qubits", u->qubits},
                                 {"matrix", matrix_to_json(u->matrix)}});
        } else if (const auto *snd = std::get_if<SendQubits>(&step)) {
            steps.push_back(json{{"kind", "send"},
                                 {"qubits", snd->qubits},
                                 {"from", player_name(snd->from)},
                                 {"to", player_name(snd->to)}});
        } else {
            const auto &m = std::get<MeasureQubits>(step);
            steps.push_back(json{{"kind", "measure"}, {"owner", player_name(m.owner)}, {"qubits", m.qubits}});
        }
    }
    return json{{"num_qubits", s.num_qubits},
                {"registers", s.registers},
                {"owners", owners},
                {"entangled_pairs", pairs},
                {"steps", steps},
                {"declared_message_sizes", s.declared_message_sizes}};
}

QSchedule schedule_from_json(const json &j) {
    const std::string where = "schedule";
    QSchedule s;
    s.num_qubits = get_as<std::size_t>(j, "num_qubits", where);
    if (j.contains("registers")) {
        s.registers = get_as<std::map<std::string, std::vector<std::size_t>>>(j, "registers", where);
    }
    for (const auto &o : field(j, "owners", where)) {
        s.owners.push_back(player_from(o, where + ".owners"));
    }
    if (j.contains("entangled_pairs")) {
        for (const auto &p : j.at("entangled_pairs")) {
            if (!p.is_array() || p.size() != 2) {
                throw std::invalid_argument(where + ": entangled pairs must be [a, b]");
            }
            s.entangled_pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
        }
    }
    const json &steps = field(j, "steps", where);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const json &st = steps[i];
        std::string w = where + ".steps[" + std::to_string(i) + "]";
        auto kind = get_as<std::string>(st, "kind", w);
        auto qubits = get_as<std::vector<std::size_t>>(st, "qubits", w);
        if (kind == "local_unitary") {
            s.steps.push_back(
                LocalUnitary{player_from(field(st, "owner", w), w), qubits, matrix_from_json(field(st, "matrix", w))});
        } else if (kind == "send") {
            s.steps.push_back(
                SendQubits{qubits, player_from(field(st, "from", w), w), player_from(field(st, "to", w), w)});
        } else if (kind == "measure") {
            s.steps.push_back(MeasureQubits{player_from(field(st, "owner", w), w), qubits});
        } else {
            throw std::invalid_argument(w + ": unknown step kind '" + kind + "'");
        }
    }
    if (j.contains("declared_message_sizes")) {
        s.declared_message_sizes = get_as<std::vector<std::size_t>>(j, "declared_message_sizes", where);
    }
    s.validate();
    return s;
}

// Reports -------------------------------------------------------------------

json to_json(const SuiteReport &r) {
    json results = json::array();
    for (const auto &s : r.results) {
        json e{{"inequality", s.inequality},
               {"trials", s.trials},
               {"max_violation", number(s.max_violation)},
               {"worst_case_seed", s.worst_case_seed},
               {"min_slack", number(s.min_slack)},
               {"violations", s.violations},
               {"tolerance", s.tolerance}};
        if (!s.failing_inputs.empty()) {
            json in = json::array();
            for (const auto &m : s.failing_inputs) {
                in.push_back(matrix_to_json(m));
            }
            e["failing_inputs"] = in;
        }
        results.push_back(e);
    }
    json obs = json::object();
    for (const auto &[k, v] : r.observations) {
        obs[k] = number(v);
    }
    return json{{"version", kVersion},
                {"config", {{"command", "verify"}, {"suite", r.suite}, {"trials", r.trials}, {"seed", r.seed}}},
                {"passed", r.passed()},
                {"results", results},
                {"observations", obs}};
}

json to_json(const ExperimentReport &r) {
    const auto &c = r.config;
    json per_round = json::array();
    for (double b : r.per_round_bits) {
        per_round.push_back(b);
    }
    return json{{"version", kVersion},
                {"config",
                 {{"command", "simulate"},
                  {"protocol", c.protocol},
                  {"n", c.n},
                  {"k", c.k},
                  {"eps", c.eps},
                  {"trials", c.trials},
                  {"seed", c.seed},
                  {"exhaustive", c.exhaustive}}},
                {"runs", r.runs},
                {"errors", r.errors},
                {"aborts", r.aborts},
                {"errors_without_abort", r.errors_without_abort},
                {"error_rate", r.error_rate},
                {"abort_rate", r.abort_rate},
                {"mean_bits", r.mean_bits},
                {"max_bits", r.max_bits},
                {"min_bits", r.min_bits},
                {"per_round_bits", per_round},
                {"budget_formula_bits", r.budget_formula_bits},
                {"measured_constant", r.measured_constant},
                {"corollary_bits", r.corollary_bits},
                {"degenerate", r.degenerate},
                {"warnings", r.warnings}};
}

json to_json(const ReductionDemoReport &r) {
    const auto &c = r.config;
    return json{{"version", kVersion},
                {"config",
                 {{"command", "qdemo"},
                  {"demo", "reduction"},
                  {"n", c.n},
                  {"k", c.k},
                  {"ell1", c.ell1},
                  {"alphabet", c.alphabet},
                  {"channels", c.channels},
                  {"seed", c.seed}}},
                {"avg_stat_distance", r.avg_stat_distance},
                {"max_stat_distance", r.max_stat_distance},
                {"bound", r.bound},
                {"max_ratio", r.max_ratio},
                {"holds", r.holds},
                {"distances", r.distances}};
}

json to_json(const RandomAccessReport &r) {
    return json{{"n", r.n},
                {"m", r.m},
                {"success", r.success},
                {"avg_success", r.avg_success},
                {"lhs", r.lhs},
                {"rhs", r.rhs},
                {"info_bound_check", r.info_bound_check}};
}

json to_json(const SafeStorageResult &r) {
    return json{{"declared", r.declared},       {"total", r.total},         {"max_branch_cost", r.max_branch_cost},
                {"bound", r.bound},             {"unchanged", r.unchanged}, {"decode_ok", r.decode_ok},
                {"within_bound", r.total <= r.bound}};
}

json to_json(const std::vector<PrefixAccount> &accounts) {
    json a = json::array();
    for (const auto &p : accounts) {
        a.push_back(json{{"steps", p.steps},
                         {"qubits_alice_to_bob", p.qubits_alice_to_bob},
                         {"i_x_b", p.i_x_b},
                         {"per_coordinate_sum", p.per_coordinate_sum},
                         {"within_bound", p.within_bound},
                         {"chain_holds", p.chain_holds}});
    }
    return a;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string experiment_csv_header() {
    return "protocol,n,k,eps,trials,seed,error_rate,abort_rate,mean_bits,max_bits,budget_formula_bits,"
           "measured_constant\n";
}

std::string experiment_csv_row(const ExperimentReport &r) {
    const auto &c = r.config;
    std::ostringstream os;
    os << c.protocol << ',' << c.n << ',' << c.k << ',' << format_number(c.eps) << ',' << c.trials << ',' << c.seed
       << ',' << format_number(r.error_rate) << ',' << format_number(r.abort_rate) << ','
       << format_number(r.mean_bits) << ',' << r.max_bits << ',' << format_number(r.budget_formula_bits) << ','
       << format_number(r.measured_constant) << '\n';
    return os.str();
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << contents;
}

}  // namespace qcomm
