// dst: batch interface to the biofouling decision model.
// Exit codes: 0 ok, 2 inconsistent scenario, 1 error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bfdst/api_json.hpp"
#include "bfdst/bundle.hpp"
#include "bfdst/dst_model.hpp"

using namespace bfdst;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInconsistent = 2;

std::string default_model_dir() {
  if (const char* d = std::getenv("BFDST_MODEL_DIR")) return d;
  return "data/bundle";
}

void print_utilities(const Network& n, const std::vector<UtilityValue>& values) {
  std::size_t w = 7;
  for (const auto& u : n.utilities()) w = std::max(w, u.name.size());
  std::cout << std::left << std::setw(static_cast<int>(w) + 2) << "utility" << std::setw(12)
            << "units" << "expected\n";
  for (const auto& uv : values) {
    const auto* u = n.utility(uv.id);
    std::cout << std::left << std::setw(static_cast<int>(w) + 2) << u->name << std::setw(12)
              << u->units << format_number(uv.expected) << '\n';
  }
}

void print_posterior(const Network& n, const Posterior& p) {
  const auto& v = n.variable(p.id);
  std::cout << p.id << '\n';
  for (std::size_t s = 0; s < p.probs.size(); ++s) {
    std::cout << "  " << std::left << std::setw(16) << v.states.label(s) << std::fixed
              << std::setprecision(4) << p.probs[s] << '\n';
    std::cout.unsetf(std::ios::floatfield);
  }
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

McmcConfig mcmc_from_flags(std::int64_t iters, int chains, std::int64_t thin,
                           std::int64_t burn_in, std::uint64_t seed) {
  McmcConfig c;
  c.iterations = iters;
  c.chains = chains;
  c.thin = thin;
  c.burn_in = burn_in;
  c.seed = seed;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ship biofouling decision model: validate, query, compare, refit NIS"};
  app.require_subcommand(1);

  std::string model_dir = default_model_dir();
  auto add_model_dir = [&](CLI::App* sub) {
    sub->add_option("--model-dir", model_dir, "Model bundle directory")->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "Check a model bundle");
  add_model_dir(validate);

  std::vector<std::string> locks, targets;
  bool as_json = false;
  auto* q = app.add_subcommand("query", "Run one scenario");
  add_model_dir(q);
  q->add_option("--lock", locks, "Node=State (repeatable)");
  q->add_option("--target", targets, "Chance node to report (repeatable)");
  q->add_flag("--json", as_json, "Emit the service's ScenarioResult JSON");

  std::string scenario_file;
  auto* cmp = app.add_subcommand("compare", "Compare lock sets from a JSON file");
  add_model_dir(cmp);
  cmp->add_option("--scenario-file", scenario_file, "JSON list of lock sets")->required();
  cmp->add_flag("--json", as_json, "Emit the service's comparison JSON");

  auto* nis = app.add_subcommand("nis", "Salinity model and NIS distributions");
  nis->require_subcommand(1);
  std::string species_path, salinity_path, out_path, rule_name = "containment";
  std::int64_t iters = 50000, thin = 10, burn_in = 20000;
  int chains = 3;
  std::uint64_t seed = 1;
  auto add_mcmc = [&](CLI::App* sub) {
    sub->add_option("--iters", iters, "Iterations per chain")->capture_default_str();
    sub->add_option("--chains", chains, "Chains")->capture_default_str();
    sub->add_option("--thin", thin, "Thinning interval")->capture_default_str();
    sub->add_option("--burn-in", burn_in, "Burn-in iterations")->capture_default_str();
    sub->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", out_path, "Output file (default stdout)");
  };
  auto* fit = nis->add_subcommand("fit", "Fit the salinity model and write posterior draws");
  fit->add_option("--species", species_path, "Species tolerance table");
  fit->add_option("--salinity", salinity_path, "Salinity observations")->required();
  add_mcmc(fit);
  auto* routes = nis->add_subcommand("routes", "Fit and write per-route NIS distributions");
  add_model_dir(routes);
  routes->add_option("--species", species_path, "Species table (default: bundle)");
  routes->add_option("--salinity", salinity_path, "Salinity observations (default: bundle)");
  routes->add_option("--rule", rule_name, "containment or overlap")->capture_default_str();
  add_mcmc(routes);

  std::string node_id;
  auto* exp = app.add_subcommand("export-cpt", "Print a CPT or utility table as TSV");
  add_model_dir(exp);
  exp->add_option("--node", node_id, "Node or utility id")->required();
  exp->add_option("--out", out_path, "Output file (default stdout)");

  bool from_params = false;
  auto* exm = app.add_subcommand("export-model", "Write the network as JSON");
  add_model_dir(exm);
  exm->add_option("--out", out_path, "Output file (default stdout)");
  exm->add_flag("--from-params", from_params, "Build from parameter files, ignoring network.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*validate) {
      const auto b = load_bundle(model_dir);
      auto diags = validate_biofouling_model(b.network);
      for (const auto& d : diags) std::cout << d.code << ": " << d.message << '\n';
      if (b.network_from_file && serialize_network(b.network) != serialize_network(build_from_params(b))) {
        std::cout << "note: network.json differs from the network built from parameter files\n";
      }
      std::cout << (diags.empty() ? "ok" : "invalid") << " model " << model_version(b.network)
                << '\n';
      return diags.empty() ? kOk : kError;
    }

    if (*q) {
      const auto b = load_bundle(model_dir);
      const auto& n = b.network;
      LockSet ls;
      for (const auto& l : locks) {
        auto [id, s] = parse_lock_arg(n, l);
        ls[id] = s;
      }
      std::vector<VarId> tgt;
      for (const auto& t : targets) tgt.push_back(resolve_node(n, t).id);
      const auto r = query(n, ls, tgt);
      if (as_json) {
        std::cout << scenario_result_json(n, r, ls, model_version(n)).dump() << '\n';
      } else if (!r.consistent) {
        std::cout << "inconsistent: " << r.reason << '\n';
      } else {
        print_utilities(n, r.utilities);
        for (const auto& t : tgt) print_posterior(n, *r.posterior(t));
      }
      if (!r.consistent && !as_json) std::cerr << "inconsistent scenario\n";
      return r.consistent ? kOk : kInconsistent;
    }

    if (*cmp) {
      const auto b = load_bundle(model_dir);
      const auto& n = b.network;
      std::ifstream in(scenario_file);
      if (!in) throw std::runtime_error("cannot open " + scenario_file);
      auto doc = ojson::parse(in);
      const ojson list = doc.is_object() && doc.contains("scenarios") ? doc["scenarios"] : doc;
      if (!list.is_array()) throw LockError("scenario file must hold a list of lock sets");
      std::vector<LockSet> scenarios;
      for (const auto& s : list) {
        scenarios.push_back(parse_locks(n, s.is_object() && s.contains("locks") ? s["locks"] : s));
      }
      const auto rows = compare_scenarios(n, scenarios);
      if (as_json) {
        std::cout << comparison_json(n, rows, model_version(n)).dump() << '\n';
      } else {
        for (std::size_t i = 0; i < rows.size(); ++i) {
          std::cout << "scenario " << i + 1 << ": " << locks_to_json(n, rows[i].locks).dump()
                    << '\n';
          if (!rows[i].consistent) {
            std::cout << "inconsistent: " << rows[i].reason << '\n';
          } else {
            print_utilities(n, rows[i].utilities);
          }
        }
      }
      bool any_inconsistent = false;
      for (const auto& r : rows) any_inconsistent |= !r.consistent;
      return any_inconsistent ? kInconsistent : kOk;
    }

    if (*fit) {
      const auto obs = load_salinity(salinity_path);
      if (!species_path.empty()) load_species_table(species_path);  // validates only
      const auto post = fit_salinity_model(obs, PriorConfig{},
                                           mcmc_from_flags(iters, chains, thin, burn_in, seed));
      std::ofstream file;
      write_posterior(open_out(out_path, file), post);
      std::cerr << "draws " << post.draws.size() << ", max split R-hat "
                << format_number(post.max_rhat()) << (post.flagged ? " (not converged)" : "")
                << '\n';
      return kOk;
    }

    if (*routes) {
      const auto b = load_bundle(model_dir);
      const auto species = species_path.empty() ? b.species : load_species_table(species_path);
      const auto obs = salinity_path.empty() ? b.salinity : load_salinity(salinity_path);
      const auto rule = parse_survival_rule(rule_name);
      if (!rule) throw std::runtime_error("--rule must be containment or overlap");
      const auto post =
          fit_salinity_model(obs, PriorConfig{}, mcmc_from_flags(iters, chains, thin, burn_in, seed));
      std::vector<RouteNisDistribution> out;
      for (const auto& r : b.params.routes) {
        out.push_back(route_nis_distribution(r, species, post, *rule));
        if (!out.back().warning.empty()) std::cerr << "warning: " << out.back().warning << '\n';
      }
      std::ofstream file;
      write_nis_routes(open_out(out_path, file), out);
      return kOk;
    }

    if (*exp) {
      const auto b = load_bundle(model_dir);
      std::ofstream file;
      write_table_tsv(open_out(out_path, file), b.network, node_id);
      return kOk;
    }

    if (*exm) {
      const auto b = load_bundle(model_dir);
      const auto n = from_params ? build_from_params(b) : b.network;
      if (out_path.empty() || out_path == "-") {
        std::cout << network_to_json(n).dump(1) << '\n';
      } else {
        save_network_file(n, out_path);
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
