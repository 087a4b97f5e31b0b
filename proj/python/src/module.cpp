#include <tbsim/analytics.hpp>
#include <tbsim/errors.hpp>
#include <tbsim/hashing.hpp>
#include <tbsim/merkle.hpp>
#include <tbsim/scenario.hpp>
#include <tbsim/stepvm.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>

namespace py = pybind11;
using nlohmann::json;

namespace {

tbsim::Bytes as_bytes(const py::bytes& b)
{
    auto s = static_cast<std::string>(b);
    return {s.begin(), s.end()};
}

py::dict trace_info(const tbsim::Trace& t)
{
    py::list snaps;
    for (const auto& d : t.snapshots) {
        snaps.append(d.hex());
    }
    tbsim::SnapshotTree tree(t.snapshots);
    py::dict out;
    out["steps"] = t.steps();
    out["solution"] = t.solution;
    out["snapshots"] = snaps;
    out["root"] = tree.root().hex();
    return out;
}

tbsim::ScenarioConfig config_from(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw tbsim::Error(tbsim::ErrorCode::ConfigInvalid, e.what());
    }
    return tbsim::parse_config(doc);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "tbsim core bindings";

    static PyObject* error_type = py::exception<tbsim::Error>(m, "TbsimError").inc_ref().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const tbsim::Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = std::string(tbsim::to_string(e.code()));
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    m.def("hash_parts", [](const std::vector<py::bytes>& parts) {
        std::vector<tbsim::Bytes> owned;
        for (const auto& p : parts) {
            owned.push_back(as_bytes(p));
        }
        std::vector<tbsim::ByteView> views(owned.begin(), owned.end());
        return tbsim::hash(std::span<const tbsim::ByteView>(views)).hex();
    });
    m.def("personalize", [](const std::string& snapshot_hex, const py::bytes& address, const py::bytes& p) {
        return tbsim::personalize(tbsim::Digest::from_hex(snapshot_hex), as_bytes(address), as_bytes(p)).hex();
    });
    m.def("seal", [](const py::bytes& address, const py::bytes& p, std::uint64_t y) {
        return tbsim::seal(as_bytes(address), as_bytes(p), y).hex();
    });
    m.def("merkle_root", [](const std::vector<std::string>& leaves_hex) {
        std::vector<tbsim::Digest> leaves;
        for (const auto& h : leaves_hex) {
            leaves.push_back(tbsim::Digest::from_hex(h));
        }
        return tbsim::SnapshotTree(leaves).root().hex();
    });
    m.def("challenge_index", [](const std::string& root_hex, std::uint64_t n) {
        return tbsim::challenge_index(tbsim::Digest::from_hex(root_hex), n);
    });

    m.def("execute", [](const std::string& program_json) {
        return trace_info(tbsim::execute(tbsim::parse_program(json::parse(program_json))));
    });
    m.def(
        "execute_faulty",
        [](const std::string& program_json, std::uint64_t fault_step, std::uint64_t corruption) {
            auto program = tbsim::parse_program(json::parse(program_json));
            return trace_info(tbsim::execute_faulty(program, tbsim::FaultSpec{fault_step, corruption}));
        },
        py::arg("program"), py::arg("fault_step"), py::arg("corruption") = 1);

    m.def("attack_probability", [](std::uint64_t q, std::uint64_t n, std::uint64_t k) {
        auto p = tbsim::attack_probability({q, n, k});
        return py::make_tuple(py::int_(py::str(p.numerator.str())), py::int_(py::str(p.denominator.str())));
    });
    m.def("prob", [](std::uint64_t q, std::uint64_t n, std::uint64_t k) { return tbsim::run_prob({q, n, k}); });
    m.def(
        "empirical_attack_rate",
        [](std::uint64_t q, std::uint64_t n, std::uint64_t k, std::uint64_t trials, std::uint64_t seed) {
            auto r = tbsim::empirical_attack_rate({q, n, k}, trials, seed);
            py::dict out;
            out["closed_form"] = r.closed_form;
            out["empirical"] = r.empirical;
            out["hits"] = r.hits;
            out["trials"] = r.trials;
            out["stderr"] = r.stderr_;
            out["within_tolerance"] = r.within_tolerance;
            return out;
        },
        py::arg("q"), py::arg("n"), py::arg("k"), py::arg("trials"), py::arg("seed") = 0);

    m.def("run_single", [](const std::string& config_json) {
        auto config = config_from(config_json);
        std::optional<tbsim::SingleRun> run;
        {
            py::gil_scoped_release release;
            run = tbsim::run_single(config, std::nullopt);
        }
        return py::make_tuple(tbsim::to_json(run->report).dump(), run->events_jsonl, run->summary);
    });
    m.def("run_montecarlo", [](const std::string& config_json) {
        auto config = config_from(config_json);
        std::optional<tbsim::MonteCarloResult> r;
        {
            py::gil_scoped_release release;
            r = tbsim::run_montecarlo(config);
        }
        std::ostringstream trials;
        std::ostringstream summary;
        tbsim::write_trials_csv(trials, *r);
        tbsim::write_summary_csv(summary, *r);
        return py::make_tuple(trials.str(), summary.str());
    });
}
