#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cove/cli/commands.hpp"
#include "cove/core/config.hpp"
#include "cove/core/text.hpp"
#include "cove/knowledge/knowledge_gap.hpp"
#include "cove/metrics/scores.hpp"
#include "cove/metrics/text_metrics.hpp"
#include "cove/veracity/veracity.hpp"

namespace py = pybind11;
using namespace cove;

namespace {

// Structured values cross the boundary as JSON text; the Python side decodes them.

std::string dump(const Json& j) { return j.dump(); }

VeracityLabel label(const std::string& s) {
    auto l = label_from_name(s);
    if (!l) throw py::value_error("unknown veracity label '" + s + "'");
    return *l;
}

cli::ProviderSetup providers(const std::string& mode, const std::string& cache) {
    cli::ProviderSetup p;
    p.mode = mode;
    p.cache = cache;
    return p;
}

py::tuple finish(int code, const std::ostringstream& log) { return py::make_tuple(code, log.str()); }

}  // namespace

PYBIND11_MODULE(_cove, m) {
    m.doc() = "Bindings for the cove pipeline, metrics and commands";

    py::register_exception<Error>(m, "CoveError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("match_key", [](const std::string& s) { return text::match_key(s); });
    m.def("porter_stem", [](const std::string& s) { return metrics::porter_stem(s); });
    m.def("meteor", [](const std::string& p, const std::string& r) { return metrics::meteor(p, r); });
    m.def("rouge_l", [](const std::string& p, const std::string& r) { return metrics::rouge_l(p, r); });
    m.def("date_delta", [](std::optional<std::string> p, const std::string& r) { return metrics::date_delta(p, r); });
    m.def("people_prf", [](const std::vector<std::string>& p, const std::vector<std::string>& r) {
        const auto s = metrics::people_prf(p, r);
        return py::make_tuple(s.recall, s.precision, s.f1);
    });
    m.def("fleiss_kappa", &metrics::fleiss_kappa);
    m.def("veracity_report_json", [](const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
        std::vector<VeracityLabel> p, g;
        for (const auto& s : pred) p.push_back(label(s));
        for (const auto& s : gold) g.push_back(label(s));
        const auto r = metrics::veracity_report(p, g);
        return dump({{"accuracy", r.accuracy},
                     {"recall_accurate", r.recall_accurate},
                     {"recall_ooc", r.recall_ooc},
                     {"macro_f1", r.macro_f1},
                     {"count", r.count}});
    });

    m.def("parse_verdict", [](const std::string& completion) {
        const auto v = veracity::parse_verdict(completion);
        return py::make_tuple(std::string(raw_name(v.value)), v.reasoning);
    });
    m.def("map_verdict", [](const std::string& raw, std::optional<std::string> majority) {
        veracity::RawVerdict v;
        auto r = raw_from_name(raw);
        if (!r) throw py::value_error("unknown raw label '" + raw + "'");
        v.value = *r;
        std::optional<VeracityLabel> maj;
        if (majority) maj = label(*majority);
        return std::string(label_name(veracity::map_verdict(v, maj).label));
    });
    m.def("should_trigger_json", [](const std::string& target, const std::string& context_json) {
        if (target != "date" && target != "location") throw py::value_error("target must be date or location");
        const auto c = Json::parse(context_json).get<ContextSummary>();
        return gap::should_trigger(target == "date" ? gap::Target::Date : gap::Target::Location, c);
    });

    m.def("config_json", [](const std::string& text) {
        Json j = parse_config(text);
        return dump(j);
    });
    m.def("toggles_from_row_json", [](const std::string& bits) {
        Json j = cli::toggles_from_row(bits);
        return dump(j);
    });
    m.def("ablation_rows", [] {
        std::vector<std::string> names;
        for (const auto& r : cli::standard_ablation_rows()) names.push_back(r.name);
        return names;
    });

    m.def(
        "run",
        [](const std::string& input, const std::string& out, const std::string& config, const std::string& cache,
           const std::string& mode, const std::string& toggles, std::optional<int> workers) {
            cli::RunOptions o;
            o.input = input;
            o.out = out;
            o.config = config;
            o.toggles = toggles;
            o.workers = workers;
            o.providers = providers(mode, cache);
            std::ostringstream log;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::cmd_run(o, log);
            }
            return finish(code, log);
        },
        py::arg("input"), py::arg("out"), py::arg("config") = "", py::arg("cache") = "", py::arg("mode") = "replay",
        py::arg("toggles") = "", py::arg("workers") = py::none());

    m.def(
        "evaluate",
        [](const std::string& predictions, const std::string& gold, const std::string& gazetteer) {
            cli::EvalOptions o{predictions, gold, gazetteer, predictions};
            std::ostringstream log;
            const int code = cli::cmd_eval(o, log);
            return finish(code, log);
        },
        py::arg("predictions"), py::arg("gold"), py::arg("gazetteer") = "");
}
