#include "bfdst/api_json.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

namespace bfdst {

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const bool same = std::tolower(static_cast<unsigned char>(a[i - 1])) ==
                        std::tolower(static_cast<unsigned char>(b[j - 1]));
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (same ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string nearest(std::string_view word, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::numeric_limits<std::size_t>::max();
  for (const auto& c : candidates) {
    const auto d = edit_distance(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

const Variable& resolve_node(const Network& n, std::string_view id) {
  if (const auto* v = n.find(std::string(id))) return *v;
  std::vector<std::string> ids;
  for (const auto& v : n.variables()) ids.push_back(v.id);
  throw LockError("unknown node '" + std::string(id) + "'; did you mean '" + nearest(id, ids) +
                  "'?");
}

std::size_t resolve_state(const Network& n, const VarId& node, std::string_view state) {
  const auto& v = resolve_node(n, node);
  if (auto i = v.states.find(state)) return *i;
  std::size_t idx = 0;
  const auto* end = state.data() + state.size();
  auto [ptr, ec] = std::from_chars(state.data(), end, idx);
  if (ec == std::errc() && ptr == end && idx < v.states.size() &&
      v.states.kind() == StateSpace::Kind::labeled) {
    return idx;
  }
  throw LockError("unknown state '" + std::string(state) + "' for node '" + node +
                  "'; did you mean '" + nearest(state, v.states.labels()) + "'?");
}

LockSet parse_locks(const Network& n, const ojson& locks) {
  LockSet out;
  if (locks.is_null()) return out;
  if (!locks.is_object()) throw LockError("locks must be an object of node: state");
  for (const auto& [key, value] : locks.items()) {
    const auto& v = resolve_node(n, key);
    if (value.is_string()) {
      out[v.id] = resolve_state(n, v.id, value.get<std::string>());
    } else if (value.is_number_unsigned() || value.is_number_integer()) {
      const auto i = value.get<long long>();
      if (i < 0 || static_cast<std::size_t>(i) >= v.states.size()) {
        throw LockError("state index " + std::to_string(i) + " out of range for node '" + v.id +
                        "'");
      }
      out[v.id] = static_cast<std::size_t>(i);
    } else {
      throw LockError("lock for '" + v.id + "' must be a state label or index");
    }
  }
  return out;
}

std::pair<VarId, std::size_t> parse_lock_arg(const Network& n, std::string_view arg) {
  const auto eq = arg.find('=');
  if (eq == std::string_view::npos) {
    throw LockError("lock '" + std::string(arg) + "' must look like Node=State");
  }
  const auto& v = resolve_node(n, arg.substr(0, eq));
  return {v.id, resolve_state(n, v.id, arg.substr(eq + 1))};
}

ojson locks_to_json(const Network& n, const LockSet& locks) {
  ojson j = ojson::object();
  // Network order keeps output stable across map orderings.
  for (const auto& v : n.variables()) {
    if (auto it = locks.find(v.id); it != locks.end()) j[v.id] = v.states.label(it->second);
  }
  return j;
}

ojson model_catalog_json(const Network& n, const std::string& version) {
  ojson j;
  j["modelVersion"] = version;
  ojson nodes = ojson::array();
  for (const auto& v : n.variables()) {
    ojson jv;
    jv["id"] = v.id;
    jv["name"] = v.name;
    jv["kind"] = std::string(to_string(v.kind));
    jv["units"] = v.units;
    jv["states"] = state_space_to_json(v.states);
    jv["parents"] = n.parents(v.id);
    if (const Cpt* c = n.cpt(v.id)) {
      const auto flagged =
          static_cast<std::size_t>(std::count(c->reconstructed.begin(), c->reconstructed.end(), true));
      jv["cpt"] = {{"scope", c->factor.scope()},
                   {"cells", c->factor.size()},
                   {"reconstructed", flagged > 0},
                   {"reconstructedCells", flagged}};
    }
    if (const auto* c = n.constraint_for(v.id)) {
      jv["admissibility"] = {{"dependsOn", n.parents(v.id)}, {"message", c->message}};
    }
    nodes.push_back(std::move(jv));
  }
  for (const auto& u : n.utilities()) {
    ojson ju;
    ju["id"] = u.id;
    ju["name"] = u.name;
    ju["kind"] = "utility";
    ju["units"] = u.units;
    ju["parents"] = u.parents;
    nodes.push_back(std::move(ju));
  }
  j["nodes"] = std::move(nodes);
  return j;
}

namespace {

ojson utilities_json(const Network& n, const std::vector<UtilityValue>& values) {
  ojson out = ojson::array();
  for (const auto& uv : values) {
    const auto* u = n.utility(uv.id);
    out.push_back({{"id", uv.id},
                   {"name", u ? u->name : uv.id},
                   {"units", u ? u->units : ""},
                   {"expected", uv.expected}});
  }
  return out;
}

}  // namespace

ojson scenario_result_json(const Network& n, const ScenarioResult& r, const LockSet& locks,
                           const std::string& version) {
  ojson j;
  j["modelVersion"] = version;
  j["locks"] = locks_to_json(n, locks);
  j["consistent"] = r.consistent;
  j["reason"] = r.consistent ? ojson(nullptr) : ojson(r.reason);
  ojson post = ojson::object();
  for (const auto& p : r.posteriors) {
    post[p.id] = {{"states", n.variable(p.id).states.labels()}, {"probs", p.probs}};
  }
  j["posteriors"] = std::move(post);
  j["utilities"] = utilities_json(n, r.utilities);
  return j;
}

ojson comparison_json(const Network& n, const std::vector<ComparisonRow>& rows,
                      const std::string& version) {
  ojson j;
  j["modelVersion"] = version;
  ojson columns = ojson::array();
  for (const auto& u : n.utilities()) columns.push_back(u.id);
  j["columns"] = std::move(columns);
  ojson out = ojson::array();
  for (const auto& row : rows) {
    out.push_back({{"locks", locks_to_json(n, row.locks)},
                   {"consistent", row.consistent},
                   {"reason", row.consistent ? ojson(nullptr) : ojson(row.reason)},
                   {"utilities", utilities_json(n, row.utilities)}});
  }
  j["rows"] = std::move(out);
  return j;
}

ojson error_json(const std::string& code, const std::string& message, const std::string& detail) {
  return {{"error", {{"code", code}, {"message", message}, {"detail", detail}}}};
}

ojson species_json(const std::vector<SpeciesRecord>& species) {
  ojson out = ojson::array();
  for (const auto& s : species) {
    ojson present = ojson::object();
    for (auto a : kAreas) present[area_code(a)] = s.present_in(a);
    out.push_back({{"name", s.name},
                   {"salMinTol", s.sal_min},
                   {"salMaxTol", s.sal_max},
                   {"present", std::move(present)}});
  }
  return out;
}

ojson routes_json(const std::vector<Route>& routes, const std::vector<bool>& sediment_high) {
  ojson out = ojson::array();
  for (std::size_t i = 0; i < routes.size(); ++i) {
    const auto& r = routes[i];
    out.push_back({{"id", r.id},
                   {"departure", area_code(r.departure)},
                   {"arrival", area_code(r.arrival)},
                   {"ice", r.ice},
                   {"sediment", i < sediment_high.size() && sediment_high[i] ? "high" : "low"}});
  }
  return out;
}

McmcConfig mcmc_from_json(const ojson& j) {
  McmcConfig c = McmcConfig::desk();
  if (j.is_null()) return c;
  if (!j.is_object()) throw ValidationError("mcmcConfig must be an object");
  auto read = [&](const char* key, auto& out) {
    if (j.contains(key)) {
      try {
        out = j.at(key).get<std::decay_t<decltype(out)>>();
      } catch (const nlohmann::json::exception&) {
        throw ValidationError(std::string("mcmcConfig.") + key + " has the wrong type");
      }
    }
  };
  read("iterations", c.iterations);
  read("chains", c.chains);
  read("thin", c.thin);
  read("burnIn", c.burn_in);
  read("seed", c.seed);
  c.validate();
  return c;
}

void write_table_tsv(std::ostream& out, const Network& n, const std::string& id) {
  std::vector<VarId> parents;
  const std::vector<double>* data = nullptr;
  std::vector<std::string> columns;
  if (const Cpt* c = n.cpt(id)) {
    // CPT scope is parents then the node itself.
    parents.assign(c->factor.scope().begin(), c->factor.scope().end() - 1);
    data = &c->factor.data();
    columns = n.variable(id).states.labels();
  } else if (const auto* u = n.utility(id)) {
    parents = u->parents;
    data = &u->table;
    columns = {"utility"};
  } else {
    std::vector<std::string> ids;
    for (const auto& v : n.variables()) {
      if (v.kind == VarKind::chance) ids.push_back(v.id);
    }
    for (const auto& u : n.utilities()) ids.push_back(u.id);
    throw LockError("no table for '" + id + "'; did you mean '" + nearest(id, ids) + "'?");
  }
  for (const auto& p : parents) out << p << '\t';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "\t" : "") << columns[i];
  out << '\n';
  std::vector<std::size_t> idx(parents.size(), 0);
  const std::size_t width = columns.size();
  for (std::size_t row = 0; row * width < data->size(); ++row) {
    for (std::size_t k = 0; k < parents.size(); ++k) {
      out << n.variable(parents[k]).states.label(idx[k]) << '\t';
    }
    for (std::size_t s = 0; s < width; ++s) {
      out << (s ? "\t" : "") << format_number((*data)[row * width + s]);
    }
    out << '\n';
    for (std::size_t k = parents.size(); k-- > 0;) {
      if (++idx[k] < n.variable(parents[k]).states.size()) break;
      idx[k] = 0;
    }
  }
}

}  // namespace bfdst
