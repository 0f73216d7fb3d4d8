#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcomm/experiment.hpp"
#include "qcomm/io.hpp"
#include "qcomm/metrics.hpp"
#include "qcomm/qprotosim.hpp"
#include "qcomm/suites.hpp"

namespace py = pybind11;
using namespace qcomm;

namespace {

DensityMatrix dm(const Matrix &m) { return DensityMatrix(m); }

Bipartition parts(const Matrix &rho, std::size_t dim_a) {
    auto d = static_cast<std::size_t>(rho.rows());
    if (dim_a == 0 || d % dim_a != 0) {
        throw std::invalid_argument("dim_a must divide the state dimension");
    }
    return Bipartition::of(dim_a, d / dim_a);
}

std::string simulate(const std::string &protocol, std::size_t n, int k, double eps, std::size_t trials,
                     std::uint64_t seed, bool exhaustive) {
    ExperimentConfig cfg{protocol, n, k, eps, trials, seed, exhaustive};
    ExperimentReport rep;
    {
        py::gil_scoped_release release;
        rep = run_experiment(cfg);
    }
    return to_json(rep).dump();
}

std::string verify(const std::string &suite, std::size_t trials, std::uint64_t seed) {
    SuiteReport rep;
    {
        py::gil_scoped_release release;
        rep = run_suite(suite, trials, seed);
    }
    return to_json(rep).dump();
}

std::string reduce(const std::string &instance) {
    auto sk = sk_from_json(json::parse(instance));
    return reduction_certificate(sk, sk_to_disj(sk)).dump();
}

QSchedule bundled(const std::string &name) {
    if (name == "send-classical-bit") {
        return send_classical_bit_schedule();
    }
    if (name == "superdense") {
        return superdense_coding_schedule();
    }
    throw std::invalid_argument("unknown bundled schedule '" + name + "'");
}

std::string schedule_report(const std::string &schedule) {
    auto s = schedule_from_json(json::parse(schedule));
    auto run = run_qprotocol(s, InputMode::uniform());
    auto info = info_account(s, run);
    return json{{"i_x_b", info.i_x_b},
                {"per_coordinate", info.per_coordinate},
                {"qubits_alice_to_bob", run.alice_to_bob},
                {"prefixes", to_json(prefix_accounts(s))}}
        .dump();
}

}  // namespace

PYBIND11_MODULE(_qcomm, m) {
    m.doc() = "Native core of the qcomm package";
    m.attr("__version__") = kVersion;

    py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);

    m.def("random_density", [](std::size_t dim, std::size_t rank, std::uint64_t seed) {
        return random_density(dim, rank, seed).matrix();
    }, py::arg("dim"), py::arg("rank"), py::arg("seed"));

    m.def("trace_distance", [](const Matrix &a, const Matrix &b) { return trace_distance(dm(a), dm(b)); });
    m.def("fidelity", [](const Matrix &a, const Matrix &b) { return fidelity(dm(a), dm(b)); });
    m.def("hellinger", [](const Matrix &a, const Matrix &b) { return hellinger(dm(a), dm(b)); });
    m.def("relative_entropy", [](const Matrix &a, const Matrix &b) { return relative_entropy(dm(a), dm(b)); });
    m.def("von_neumann_entropy", [](const Matrix &a) { return von_neumann_entropy(dm(a)); });
    m.def("mutual_information", [](const Matrix &rho, std::size_t dim_a) {
        return mutual_information(dm(rho), parts(rho, dim_a));
    }, py::arg("rho"), py::arg("dim_a"));
    m.def("informational_distance", [](const Matrix &rho, std::size_t dim_a) {
        return informational_distance(dm(rho), parts(rho, dim_a));
    }, py::arg("rho"), py::arg("dim_a"));

    m.def("suite_ids", &suite_ids);
    m.def("protocol_ids", &protocol_ids);
    m.def("verify_json", &verify, py::arg("suite"), py::arg("trials"), py::arg("seed"));
    m.def("simulate_json", &simulate, py::arg("protocol"), py::arg("n"), py::arg("k"), py::arg("eps"),
          py::arg("trials"), py::arg("seed"), py::arg("exhaustive"));
    m.def("reduce_json", &reduce, py::arg("instance"));
    m.def("bundled_schedule_json", [](const std::string &name) { return to_json(bundled(name)).dump(); });
    m.def("schedule_report_json", &schedule_report, py::arg("schedule"));
}
