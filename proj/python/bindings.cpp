// Python module ixrl._core. JSON documents cross the boundary as strings;
// the package wrapper turns them into dicts.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ixrl/errors.hpp"
#include "ixrl/pipeline.hpp"
#include "ixrl/stats.hpp"

namespace py = pybind11;
using namespace ixrl;

namespace {

RunConfig make_config(const std::string& config_path, const std::string& profile, std::optional<int> train,
                      std::optional<int> test) {
    RunConfig c = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
    if (!profile.empty()) c.profile = profile_by_name(profile);
    if (train) c.schedule.episodes_train = *train;
    if (test) c.schedule.episodes_test = *test;
    c.schedule.validate();
    return c;
}

py::tuple observation_tuple(const frogger::Observation& o) {
    return py::make_tuple(std::string(to_string(o.north)), std::string(to_string(o.south)),
                          std::string(to_string(o.east)), std::string(to_string(o.west)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interestingness analysis and highlight summaries for tabular RL agents";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
    py::register_exception<ProvenanceError>(m, "ProvenanceError", base.ptr());
    py::register_exception<IntegrityError>(m, "IntegrityError", base.ptr());

    m.def("evenness", [](const std::vector<double>& p) { return evenness(p); }, py::arg("p"));
    m.def("jsd", [](const std::vector<double>& p, const std::vector<double>& q) { return jsd(p, q); },
          py::arg("p"), py::arg("q"));
    m.def(
        "outliers",
        [](const std::vector<double>& v, double lambda) {
            const auto s = outliers(v, lambda);
            return py::make_tuple(s.high, s.low);
        },
        py::arg("values"), py::arg("lam"));
    m.def("softmax", [](const std::vector<double>& q, double beta) { return softmax(q, beta); }, py::arg("q"),
          py::arg("beta"));
    m.def("encode", [](int n, int s, int e, int w) {
        return frogger::encode({static_cast<frogger::Feature>(n), static_cast<frogger::Feature>(s),
                                static_cast<frogger::Feature>(e), static_cast<frogger::Feature>(w)});
    });
    m.def("describe", [](int s) { return frogger::describe(frogger::decode(s)); }, py::arg("state"));

    py::class_<frogger::Game>(m, "Game")
        .def(py::init([](const std::string& profile) {
                 const auto p = profile_by_name(profile);
                 return frogger::Game(frogger::GameConfig::standard(), p.perception(), p.r_river);
             }),
             py::arg("profile") = "optimized")
        .def("reset", [](frogger::Game& g, std::uint64_t seed) { return observation_tuple(g.reset(seed)); })
        .def("step",
             [](frogger::Game& g, const std::string& action) {
                 const auto o = g.step(frogger::parse_action(action));
                 py::dict d;
                 d["observation"] = observation_tuple(o.next_observation);
                 d["state"] = frogger::encode(o.next_observation);
                 d["reward"] = o.reward;
                 d["death"] = o.death_cause ? py::object(py::str(std::string(to_string(*o.death_cause))))
                                            : py::object(py::none());
                 d["level"] = o.level;
                 d["reached_pad"] = o.reached_pad;
                 d["done"] = o.episode_done;
                 return d;
             })
        .def_property_readonly("level", &frogger::Game::level)
        .def_property_readonly("lives", &frogger::Game::lives)
        .def_property_readonly("score", &frogger::Game::score)
        .def_property_readonly("game_over", &frogger::Game::game_over)
        .def("render", &frogger::Game::render_ascii);

    m.def(
        "_train",
        [](const std::filesystem::path& out, const std::string& profile, std::uint64_t seed,
           std::optional<int> train, std::optional<int> test, const std::string& config) {
            const auto c = make_config(config, profile, train, test);
            py::gil_scoped_release release;
            const auto a = train_to_files(c, seed, out);
            return std::make_tuple(a.trace, a.dataset, a.performance, a.trace_hash);
        },
        py::arg("out"), py::arg("profile"), py::arg("seed"), py::arg("episodes_train"), py::arg("episodes_test"),
        py::arg("config"));
    m.def(
        "_analyze",
        [](const std::filesystem::path& input, const std::string& phase, const std::string& config) {
            const auto c = make_config(config, "", std::nullopt, std::nullopt);
            const auto p = parse_phase_filter(phase);
            py::gil_scoped_release release;
            return analyze_file(input, c.analysis, p).to_json().dump();
        },
        py::arg("input"), py::arg("phase"), py::arg("config"));
    m.def(
        "_save_report",
        [](const std::string& json, const std::filesystem::path& out) {
            InterestingnessReport::from_json(nlohmann::json::parse(json)).save(out);
        },
        py::arg("json"), py::arg("out"));
    m.def(
        "_digest",
        [](const std::filesystem::path& report, int rows) {
            return format_digest(InterestingnessReport::load(report), rows);
        },
        py::arg("report"), py::arg("rows"));
    m.def(
        "_summarize",
        [](const std::filesystem::path& trace, const std::filesystem::path& report,
           const std::vector<std::string>& techniques, const std::string& phase, const std::filesystem::path& out,
           bool ppm) {
            std::vector<Technique> ts;
            for (const auto& t : techniques) ts.push_back(parse_technique(t));
            if (ts.empty()) ts = all_techniques();
            SummarySpec base;
            base.phase = parse_phase_filter(phase);
            py::gil_scoped_release release;
            const auto a = summarize_to_files(trace, report, ts, base, out, ppm);
            std::vector<std::string> manifests;
            for (const auto& m : a.contents) manifests.push_back(m.to_json().dump());
            return std::make_pair(manifests, a.frames);
        },
        py::arg("trace"), py::arg("report"), py::arg("techniques"), py::arg("phase"), py::arg("out"),
        py::arg("ppm"));
    m.def("techniques", [] {
        std::vector<std::string> out;
        for (Technique t : all_techniques()) out.emplace_back(to_string(t));
        return out;
    });
}
