#include "bfdst/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace bfdst {

// ------------------------------------------------------------------- Network

void Network::add_variable(Variable v, std::vector<VarId> parents) {
  if (v.id.empty()) throw StructuralError("variable id must not be empty");
  if (index_.contains(v.id)) {
    throw StructuralError("duplicate variable id '" + v.id + "'");
  }
  if (v.states.size() == 0) {
    throw StructuralError("variable '" + v.id + "' has no states");
  }
  index_[v.id] = variables_.size();
  parents_[v.id] = std::move(parents);
  variables_.push_back(std::move(v));
}

void Network::set_cpt(const VarId& node, Factor f, std::vector<bool> reconstructed) {
  if (!reconstructed.empty() && reconstructed.size() != f.size()) {
    throw StructuralError("reconstructed flags for '" + node +
                          "' do not match the CPT size");
  }
  cpts_[node] = Cpt{std::move(f), std::move(reconstructed)};
}

void Network::add_constraint(DecisionConstraint c) {
  constraints_.push_back(std::move(c));
}

void Network::add_utility(UtilityNode u) {
  for (const auto& existing : utilities_) {
    if (existing.id == u.id) {
      throw StructuralError("duplicate utility id '" + u.id + "'");
    }
  }
  utilities_.push_back(std::move(u));
}

void Network::replace_utility_table(const std::string& id,
                                    std::vector<double> table) {
  for (auto& u : utilities_) {
    if (u.id == id) {
      u.table = std::move(table);
      return;
    }
  }
  throw StructuralError("unknown utility '" + id + "'");
}

void Network::add_parent(const VarId& node, const VarId& parent) {
  auto it = parents_.find(node);
  if (it == parents_.end()) throw StructuralError("unknown variable '" + node + "'");
  it->second.push_back(parent);
}

const Variable* Network::find(const VarId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &variables_[it->second];
}

const Variable& Network::variable(const VarId& id) const {
  if (const auto* v = find(id)) return *v;
  throw StructuralError("unknown variable '" + id + "'");
}

const std::vector<VarId>& Network::parents(const VarId& id) const {
  auto it = parents_.find(id);
  if (it == parents_.end()) throw StructuralError("unknown variable '" + id + "'");
  return it->second;
}

const Cpt* Network::cpt(const VarId& id) const {
  auto it = cpts_.find(id);
  return it == cpts_.end() ? nullptr : &it->second;
}

const DecisionConstraint* Network::constraint_for(const VarId& decision) const {
  for (const auto& c : constraints_) {
    if (c.decision == decision) return &c;
  }
  return nullptr;
}

const UtilityNode* Network::utility(const std::string& id) const {
  for (const auto& u : utilities_) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

std::size_t Network::count(VarKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      variables_.begin(), variables_.end(),
      [kind](const Variable& v) { return v.kind == kind; }));
}

std::size_t Network::edge_count() const {
  std::size_t edges = 0;
  for (const auto& [_, ps] : parents_) edges += ps.size();
  for (const auto& u : utilities_) edges += u.parents.size();
  return edges;
}

// ---------------------------------------------------------------- validation

namespace {

std::string config_string(const Network& n, const std::vector<VarId>& vars,
                          std::size_t flat) {
  std::vector<std::size_t> idx(vars.size());
  for (std::size_t d = vars.size(); d-- > 0;) {
    const std::size_t k = n.variable(vars[d]).states.size();
    idx[d] = flat % k;
    flat /= k;
  }
  std::string s = "(";
  for (std::size_t d = 0; d < vars.size(); ++d) {
    if (d) s += ", ";
    s += vars[d] + "=" + n.variable(vars[d]).states.label(idx[d]);
  }
  return s + ")";
}

std::optional<std::vector<VarId>> find_cycle(const Network& n) {
  enum class Mark { none, active, done };
  std::map<VarId, Mark> mark;
  std::vector<VarId> stack;
  std::optional<std::vector<VarId>> found;
  std::function<void(const VarId&)> visit = [&](const VarId& v) {
    if (found) return;
    mark[v] = Mark::active;
    stack.push_back(v);
    for (const auto& p : n.parents(v)) {
      if (!n.find(p)) continue;
      if (mark[p] == Mark::active) {
        auto start = std::find(stack.begin(), stack.end(), p);
        found = std::vector<VarId>(start, stack.end());
        found->push_back(p);
        return;
      }
      if (mark[p] == Mark::none) visit(p);
      if (found) return;
    }
    stack.pop_back();
    mark[v] = Mark::done;
  };
  for (const auto& v : n.variables()) {
    if (mark[v.id] == Mark::none) visit(v.id);
    if (found) break;
  }
  return found;
}

std::vector<std::size_t> cards_of(const Network& n, const std::vector<VarId>& vars) {
  std::vector<std::size_t> out;
  for (const auto& v : vars) out.push_back(n.variable(v).states.size());
  return out;
}

}  // namespace

std::vector<Diagnostic> validate_network(const Network& n) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string code, std::string msg) {
    out.push_back({std::move(code), std::move(msg)});
  };

  bool references_ok = true;
  for (const auto& v : n.variables()) {
    std::set<VarId> seen;
    for (const auto& p : n.parents(v.id)) {
      if (!n.find(p)) {
        add("unknown_parent", "node " + v.id + " lists undeclared parent " + p);
        references_ok = false;
      } else if (!seen.insert(p).second) {
        add("duplicate_parent", "node " + v.id + " lists parent " + p + " twice");
      }
    }
  }
  if (auto cycle = find_cycle(n)) {
    std::string path;
    for (std::size_t i = 0; i < cycle->size(); ++i) {
      path += (i ? " <- " : "") + (*cycle)[i];
    }
    add("cycle", "cycle: " + path);
  }
  for (const auto& [id, _] : n.cpts()) {
    const auto* v = n.find(id);
    if (!v || v->kind != VarKind::chance) {
      add("stray_cpt", "CPT given for " + id + ", which is not a chance node");
    }
  }
  if (!references_ok) return out;

  for (const auto& v : n.variables()) {
    if (v.kind != VarKind::chance) continue;
    const Cpt* c = n.cpt(v.id);
    if (!c) {
      add("missing_cpt", "chance node " + v.id + " has no CPT");
      continue;
    }
    std::vector<VarId> expected = n.parents(v.id);
    expected.push_back(v.id);
    if (c->factor.scope() != expected || c->factor.cards() != cards_of(n, expected)) {
      add("scope", "CPT scope of " + v.id + " does not equal its parents then itself");
      continue;
    }
    const std::size_t k = v.states.size();
    const auto& d = c->factor.data();
    for (std::size_t row = 0; row * k < d.size(); ++row) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += d[row * k + j];
      if (std::abs(s - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "unnormalized CPT for " << v.id << " at parent configuration "
            << config_string(n, n.parents(v.id), row) << ": column sums to " << s;
        add("unnormalized_cpt", msg.str());
      }
    }
  }

  for (const auto& c : n.constraints()) {
    const auto* d = n.find(c.decision);
    if (!d || d->kind != VarKind::decision) {
      add("constraint", "admissibility table targets non-decision " + c.decision);
      continue;
    }
    std::vector<VarId> expected = n.parents(c.decision);
    expected.push_back(c.decision);
    if (c.table.scope() != expected || c.table.cards() != cards_of(n, expected)) {
      add("constraint", "admissibility table of " + c.decision +
                            " does not cover its parents then itself");
      continue;
    }
    for (double x : c.table.data()) {
      if (x != 0.0 && x != 1.0) {
        add("constraint", "admissibility table of " + c.decision + " is not 0/1");
        break;
      }
    }
  }

  for (const auto& u : n.utilities()) {
    bool ok = true;
    for (const auto& p : u.parents) {
      if (!n.find(p)) {
        add("unknown_parent", "utility " + u.id + " lists undeclared parent " + p);
        ok = false;
      }
    }
    if (!ok) continue;
    std::size_t size = 1;
    for (auto c : cards_of(n, u.parents)) size *= c;
    if (u.table.size() != size) {
      add("utility_table", "utility " + u.id + " table has " +
                               std::to_string(u.table.size()) + " entries, expected " +
                               std::to_string(size));
    }
    for (double x : u.table) {
      if (!std::isfinite(x)) {
        add("utility_table", "utility " + u.id + " has a non-finite entry");
        break;
      }
    }
  }
  return out;
}

// --------------------------------------------------------------------- query

const Posterior* ScenarioResult::posterior(const VarId& id) const {
  for (const auto& p : posteriors) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

std::optional<double> ScenarioResult::utility(const std::string& id) const {
  for (const auto& u : utilities) {
    if (u.id == id) return u.expected;
  }
  return std::nullopt;
}

void check_locks(const Network& n, const LockSet& locks) {
  for (const auto& [id, state] : locks) {
    const auto* v = n.find(id);
    if (!v) throw LockError("unknown node '" + id + "'");
    if (state >= v->states.size()) {
      throw LockError("state " + std::to_string(state) + " out of range for '" +
                      id + "'");
    }
  }
}

namespace {

Factor decision_factor(const Network& n, const Variable& d, bool locked) {
  const std::size_t k = d.states.size();
  if (const auto* c = n.constraint_for(d.id)) {
    if (locked) return c->table;
    std::vector<double> data = c->table.data();
    for (std::size_t row = 0; row * k < data.size(); ++row) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += data[row * k + j];
      if (s > 0.0) {
        for (std::size_t j = 0; j < k; ++j) data[row * k + j] /= s;
      }
    }
    return Factor(c->table.scope(), c->table.cards(), std::move(data));
  }
  if (locked) return Factor({d.id}, {k}, std::vector<double>(k, 1.0));
  return Factor({d.id}, {k}, std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

struct OwnedFactor {
  VarId owner;
  Factor factor;
};

std::vector<OwnedFactor> owned_factors(const Network& n, const LockSet& locks) {
  std::vector<OwnedFactor> out;
  for (const auto& v : n.variables()) {
    if (v.kind == VarKind::chance) {
      const Cpt* c = n.cpt(v.id);
      if (!c) throw StructuralError("chance node " + v.id + " has no CPT");
      out.push_back({v.id, c->factor});
    } else {
      out.push_back({v.id, decision_factor(n, v, locks.contains(v.id))});
    }
  }
  return out;
}

std::set<VarId> ancestral_closure(const Network& n, const std::set<VarId>& seeds) {
  std::set<VarId> out;
  std::vector<VarId> todo(seeds.begin(), seeds.end());
  while (!todo.empty()) {
    VarId v = todo.back();
    todo.pop_back();
    if (!out.insert(v).second) continue;
    for (const auto& p : n.parents(v)) todo.push_back(p);
  }
  return out;
}

class Engine {
 public:
  Engine(const Network& n, const LockSet& locks) : n_(n), locks_(locks) {
    for (auto& of : owned_factors(n, locks)) {
      Factor f = std::move(of.factor);
      for (const auto& [id, state] : locks) {
        if (f.contains(id)) f = factor_reduce(f, id, state);
      }
      reduced_.push_back({of.owner, std::move(f)});
    }
  }

  // Unnormalized joint over the unlocked variables in `keep`, pruned to the
  // ancestors of keep and the locked variables.
  Factor joint(const std::vector<VarId>& keep) const {
    std::set<VarId> seeds(keep.begin(), keep.end());
    for (const auto& [id, _] : locks_) seeds.insert(id);
    const auto relevant = ancestral_closure(n_, seeds);
    std::vector<Factor> fs;
    for (const auto& of : reduced_) {
      if (relevant.contains(of.owner)) fs.push_back(of.factor);
    }
    if (fs.empty()) fs.push_back(Factor());
    return eliminate(fs, keep);
  }

 private:
  const Network& n_;
  const LockSet& locks_;
  std::vector<OwnedFactor> reduced_;
};

std::string lock_string(const Network& n, const LockSet& locks) {
  std::string s;
  for (const auto& [id, state] : locks) {
    if (!s.empty()) s += ", ";
    s += id + "=" + n.variable(id).states.label(state);
  }
  return s;
}

std::string inconsistency_reason(const Network& n, const LockSet& locks) {
  for (const auto& c : n.constraints()) {
    if (!locks.contains(c.decision)) continue;
    Factor t = c.table;
    for (const auto& [id, state] : locks) {
      if (t.contains(id)) t = factor_reduce(t, id, state);
    }
    if (t.sum() == 0.0) return c.message;
  }
  return "locked states have zero joint probability (" + lock_string(n, locks) + ")";
}

}  // namespace

std::vector<Factor> semantic_factors(const Network& n) {
  std::vector<Factor> out;
  for (auto& of : owned_factors(n, {})) out.push_back(std::move(of.factor));
  return out;
}

ScenarioResult query(const Network& n, const LockSet& locks,
                     const std::vector<VarId>& targets) {
  check_locks(n, locks);
  std::vector<VarId> wanted = targets;
  if (wanted.empty()) {
    for (const auto& v : n.variables()) {
      if (v.kind == VarKind::chance) wanted.push_back(v.id);
    }
  }
  for (const auto& t : wanted) n.variable(t);

  ScenarioResult r;
  const Engine engine(n, locks);
  const double z = engine.joint({}).scalar_value();
  if (!(z > 0.0)) {
    r.consistent = false;
    r.reason = inconsistency_reason(n, locks);
    return r;
  }

  for (const auto& t : wanted) {
    const std::size_t k = n.variable(t).states.size();
    Posterior p{t, std::vector<double>(k, 0.0)};
    if (auto it = locks.find(t); it != locks.end()) {
      p.probs[it->second] = 1.0;
    } else {
      const Factor f = engine.joint({t});
      const double s = f.sum();
      for (std::size_t i = 0; i < k; ++i) p.probs[i] = f.data()[i] / s;
    }
    r.posteriors.push_back(std::move(p));
  }

  for (const auto& u : n.utilities()) {
    std::vector<VarId> free;
    for (const auto& p : u.parents) {
      if (!locks.contains(p)) free.push_back(p);
    }
    const Factor f = engine.joint(free);
    const double s = f.sum();
    const auto cards = cards_of(n, u.parents);
    // Walk the free-parent joint; place each cell into the full parent table.
    double eu = 0.0;
    std::vector<std::size_t> idx(u.parents.size(), 0);
    for (std::size_t cell = 0; cell < f.size(); ++cell) {
      std::size_t rem = cell;
      for (std::size_t d = u.parents.size(); d-- > 0;) {
        const auto& pid = u.parents[d];
        if (auto it = locks.find(pid); it != locks.end()) {
          idx[d] = it->second;
        } else {
          idx[d] = rem % cards[d];
          rem /= cards[d];
        }
      }
      std::size_t flat = 0;
      for (std::size_t d = 0; d < idx.size(); ++d) flat = flat * cards[d] + idx[d];
      eu += f.data()[cell] / s * u.table[flat];
    }
    r.utilities.push_back({u.id, eu});
  }
  return r;
}

std::vector<SweepRow> sweep_decision(const Network& n, const LockSet& locks,
                                     const VarId& d) {
  const auto& v = n.variable(d);
  if (v.kind != VarKind::decision) throw LockError("'" + d + "' is not a decision");
  if (locks.contains(d)) throw LockError("cannot sweep locked decision '" + d + "'");
  std::vector<SweepRow> out;
  for (std::size_t s = 0; s < v.states.size(); ++s) {
    LockSet l = locks;
    l[d] = s;
    out.push_back({s, query(n, l)});
  }
  return out;
}

std::vector<ComparisonRow> compare_scenarios(const Network& n,
                                             const std::vector<LockSet>& scenarios) {
  if (scenarios.empty()) throw LockError("compare needs at least one scenario");
  std::vector<ComparisonRow> out;
  for (const auto& locks : scenarios) {
    // Posteriors are not part of a comparison row; ask for the cheapest one.
    const auto& first = n.variables().front().id;
    ScenarioResult r = query(n, locks, {first});
    out.push_back({locks, r.consistent, r.reason, std::move(r.utilities)});
  }
  return out;
}

}  // namespace bfdst
