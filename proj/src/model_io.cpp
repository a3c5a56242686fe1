#include "bfdst/model_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bfdst {

namespace {

std::string kind_name(StateSpace::Kind k) {
  switch (k) {
    case StateSpace::Kind::labeled: return "labeled";
    case StateSpace::Kind::numbered: return "numbered";
    case StateSpace::Kind::interval: return "interval";
  }
  return "labeled";
}

template <typename T>
T field(const ojson& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw StructuralError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(where + ": bad field '" + key + "': " + e.what());
  }
}

std::vector<std::size_t> cards_for(const Network& n, const std::vector<VarId>& scope,
                                   const std::string& where) {
  std::vector<std::size_t> out;
  for (const auto& v : scope) {
    const auto* var = n.find(v);
    if (!var) throw StructuralError(where + ": unknown variable '" + v + "'");
    out.push_back(var->states.size());
  }
  return out;
}

}  // namespace

ojson state_space_to_json(const StateSpace& s) {
  ojson j;
  j["type"] = kind_name(s.kind());
  switch (s.kind()) {
    case StateSpace::Kind::labeled: j["labels"] = s.labels(); break;
    case StateSpace::Kind::numbered: j["values"] = s.values(); break;
    case StateSpace::Kind::interval: j["boundaries"] = s.values(); break;
  }
  return j;
}

StateSpace state_space_from_json(const ojson& j) {
  const auto type = field<std::string>(j, "type", "states");
  if (type == "labeled") {
    return StateSpace::labeled(field<std::vector<std::string>>(j, "labels", "states"));
  }
  if (type == "numbered") {
    return StateSpace::numbered(field<std::vector<double>>(j, "values", "states"));
  }
  if (type == "interval") {
    return StateSpace::interval(field<std::vector<double>>(j, "boundaries", "states"));
  }
  throw StructuralError("unknown state-space type '" + type + "'");
}

ojson network_to_json(const Network& n) {
  ojson doc;
  doc["format"] = kNetworkFormat;
  ojson vars = ojson::array();
  for (const auto& v : n.variables()) {
    ojson jv;
    jv["id"] = v.id;
    jv["name"] = v.name;
    jv["kind"] = std::string(to_string(v.kind));
    jv["units"] = v.units;
    jv["states"] = state_space_to_json(v.states);
    jv["parents"] = n.parents(v.id);
    vars.push_back(std::move(jv));
  }
  doc["variables"] = std::move(vars);

  ojson cpts = ojson::array();
  for (const auto& v : n.variables()) {
    const Cpt* c = n.cpt(v.id);
    if (!c) continue;
    ojson jc;
    jc["node"] = v.id;
    jc["scope"] = c->factor.scope();
    jc["data"] = c->factor.data();
    if (!c->reconstructed.empty()) {
      std::vector<bool> flags(c->reconstructed.begin(), c->reconstructed.end());
      jc["reconstructed"] = flags;
    }
    cpts.push_back(std::move(jc));
  }
  doc["cpts"] = std::move(cpts);

  ojson cons = ojson::array();
  for (const auto& c : n.constraints()) {
    ojson jc;
    jc["decision"] = c.decision;
    jc["scope"] = c.table.scope();
    jc["data"] = c.table.data();
    jc["message"] = c.message;
    cons.push_back(std::move(jc));
  }
  doc["constraints"] = std::move(cons);

  ojson utils = ojson::array();
  for (const auto& u : n.utilities()) {
    ojson ju;
    ju["id"] = u.id;
    ju["name"] = u.name;
    ju["units"] = u.units;
    ju["parents"] = u.parents;
    ju["table"] = u.table;
    utils.push_back(std::move(ju));
  }
  doc["utilities"] = std::move(utils);
  return doc;
}

Network network_from_json(const ojson& doc) {
  const auto format = field<std::string>(doc, "format", "network");
  if (format != kNetworkFormat) throw StructuralError("unsupported network format '" + format + "'");
  Network n;
  for (const auto& jv : field<ojson>(doc, "variables", "network")) {
    const auto id = field<std::string>(jv, "id", "variable");
    const auto where = "variable " + id;
    const auto kind = field<std::string>(jv, "kind", where);
    if (kind != "chance" && kind != "decision") {
      throw StructuralError(where + ": unknown kind '" + kind + "'");
    }
    Variable v{id, field<std::string>(jv, "name", where),
               kind == "chance" ? VarKind::chance : VarKind::decision,
               state_space_from_json(field<ojson>(jv, "states", where)),
               jv.value("units", std::string())};
    n.add_variable(std::move(v), field<std::vector<std::string>>(jv, "parents", where));
  }
  for (const auto& jc : field<ojson>(doc, "cpts", "network")) {
    const auto node = field<std::string>(jc, "node", "cpt");
    const auto where = "cpt " + node;
    auto scope = field<std::vector<std::string>>(jc, "scope", where);
    auto cards = cards_for(n, scope, where);
    Factor f(std::move(scope), std::move(cards), field<std::vector<double>>(jc, "data", where));
    std::vector<bool> flags;
    if (jc.contains("reconstructed")) flags = field<std::vector<bool>>(jc, "reconstructed", where);
    n.set_cpt(node, std::move(f), std::move(flags));
  }
  if (doc.contains("constraints")) {
    for (const auto& jc : doc.at("constraints")) {
      const auto d = field<std::string>(jc, "decision", "constraint");
      const auto where = "constraint " + d;
      auto scope = field<std::vector<std::string>>(jc, "scope", where);
      auto cards = cards_for(n, scope, where);
      n.add_constraint({d,
                        Factor(std::move(scope), std::move(cards),
                               field<std::vector<double>>(jc, "data", where)),
                        jc.value("message", std::string())});
    }
  }
  for (const auto& ju : field<ojson>(doc, "utilities", "network")) {
    const auto id = field<std::string>(ju, "id", "utility");
    const auto where = "utility " + id;
    n.add_utility({id, field<std::string>(ju, "name", where),
                   field<std::vector<std::string>>(ju, "parents", where),
                   field<std::vector<double>>(ju, "table", where), ju.value("units", std::string())});
  }
  return n;
}

Network load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ojson doc;
  try {
    doc = ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw StructuralError(path + ": " + e.what());
  }
  return network_from_json(doc);
}

void save_network_file(const Network& n, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << network_to_json(n).dump(1) << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot replace " + path);
  }
}

std::string serialize_network(const Network& n) { return network_to_json(n).dump(); }

std::string model_version(const Network& n) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : serialize_network(n)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bfdst
