#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bfdst/api_json.hpp"
#include "bfdst/bundle.hpp"
#include "bfdst/dst_model.hpp"

namespace py = pybind11;
using namespace bfdst;

namespace {

// JSON crosses the boundary as text; the Python wrapper decodes it.
struct Model {
  Bundle bundle;
  std::string version;

  explicit Model(const std::string& dir) : bundle(load_bundle(dir)) {
    version = model_version(bundle.network);
  }

  std::string catalog() const { return model_catalog_json(bundle.network, version).dump(); }

  std::string run_query(const std::string& locks_json, const std::vector<std::string>& targets) const {
    const auto& n = bundle.network;
    const auto locks = parse_locks(n, ojson::parse(locks_json));
    std::vector<VarId> ids;
    for (const auto& t : targets) ids.push_back(resolve_node(n, t).id);
    return scenario_result_json(n, query(n, locks, ids), locks, version).dump();
  }

  std::string compare(const std::string& scenarios_json) const {
    const auto& n = bundle.network;
    std::vector<LockSet> scenarios;
    for (const auto& s : ojson::parse(scenarios_json)) scenarios.push_back(parse_locks(n, s));
    return comparison_json(n, compare_scenarios(n, scenarios), version).dump();
  }

  std::vector<std::pair<std::string, std::string>> validate() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& d : validate_biofouling_model(bundle.network)) out.emplace_back(d.code, d.message);
    return out;
  }

  std::string table(const std::string& id) const {
    std::ostringstream out;
    write_table_tsv(out, bundle.network, id);
    return out.str();
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ship biofouling influence diagram engine";

  py::register_exception<LockError>(m, "LockError", PyExc_ValueError);

  py::class_<Model>(m, "Model")
      .def(py::init<const std::string&>(), py::arg("model_dir"))
      .def_readonly("version", &Model::version)
      .def("catalog_json", &Model::catalog)
      .def("query_json", &Model::run_query, py::arg("locks_json"), py::arg("targets"),
           py::call_guard<py::gil_scoped_release>())
      .def("compare_json", &Model::compare, py::arg("scenarios_json"),
           py::call_guard<py::gil_scoped_release>())
      .def("validate", &Model::validate)
      .def("table_tsv", &Model::table, py::arg("node"));

  m.def("nis_state_for_count", [](double c) { return kNisValueStates[nis_state_for_count(c)]; },
        py::arg("count"));

  m.def(
      "fit_salinity",
      [](const std::string& salinity_path, std::int64_t iterations, int chains, std::int64_t thin,
         std::int64_t burn_in, std::uint64_t seed) {
        McmcConfig c;
        c.iterations = iterations;
        c.chains = chains;
        c.thin = thin;
        c.burn_in = burn_in;
        c.seed = seed;
        c.validate();
        const auto obs = load_salinity(salinity_path);
        PosteriorSamples post;
        {
          py::gil_scoped_release release;
          post = fit_salinity_model(obs, PriorConfig{}, c);
        }
        py::dict out;
        for (const auto& s : post.summary) {
          out[py::str(s.name)] = py::dict(py::arg("mean") = s.mean, py::arg("sd") = s.sd,
                                          py::arg("rhat") = s.rhat);
        }
        return py::make_tuple(out, post.draws.size(), post.flagged);
      },
      py::arg("salinity_path"), py::arg("iterations") = 50000, py::arg("chains") = 3,
      py::arg("thin") = 10, py::arg("burn_in") = 20000, py::arg("seed") = 1);

  m.def("coating_cost", [](double wsa_km2, int coating) {
    return coating_cost_value(wsa_km2, static_cast<Coating>(coating), EconParams{});
  }, py::arg("wsa_km2"), py::arg("coating"));
  m.def("iwc_cost", [](double wsa_km2, double times, int mode, double off_hire_days) {
    return iwc_cost_value(wsa_km2, times, static_cast<CollectMode>(mode), off_hire_days, EconParams{});
  }, py::arg("wsa_km2"), py::arg("times"), py::arg("mode"), py::arg("off_hire_days") = 0.0);
}
