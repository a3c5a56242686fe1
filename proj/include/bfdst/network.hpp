#pragma once
// Influence diagram container and run-mode query semantics: unlocked
// decisions are uniform, locks are hard evidence, utilities are reported
// per node as conditional expectations.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bfdst/factor.hpp"

namespace bfdst {

class LockError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct UtilityNode {
  std::string id;
  std::string name;
  std::vector<VarId> parents;
  std::vector<double> table;  // row-major over parents, last fastest
  std::string units;
};

// CPT of a chance node. Scope is parents in declared order, then the node.
struct Cpt {
  Factor factor;
  std::vector<bool> reconstructed;  // per cell; empty means none
};

// 0/1 admissibility table for a decision with parents. Scope is the
// decision's parents, then the decision.
struct DecisionConstraint {
  VarId decision;
  Factor table;
  std::string message;
};

using LockSet = std::map<VarId, std::size_t>;

class Network {
 public:
  void add_variable(Variable v, std::vector<VarId> parents = {});
  void set_cpt(const VarId& node, Factor f, std::vector<bool> reconstructed = {});
  void add_constraint(DecisionConstraint c);
  void add_utility(UtilityNode u);

  // Test hooks: overwrite pieces of an already built network.
  void replace_utility_table(const std::string& id, std::vector<double> table);
  void add_parent(const VarId& node, const VarId& parent);

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(const VarId& id) const;
  const Variable* find(const VarId& id) const;
  const std::vector<VarId>& parents(const VarId& id) const;
  const Cpt* cpt(const VarId& id) const;
  const std::map<VarId, Cpt>& cpts() const { return cpts_; }
  const std::vector<DecisionConstraint>& constraints() const { return constraints_; }
  const DecisionConstraint* constraint_for(const VarId& decision) const;
  const std::vector<UtilityNode>& utilities() const { return utilities_; }
  const UtilityNode* utility(const std::string& id) const;

  std::size_t count(VarKind kind) const;
  std::size_t edge_count() const;

 private:
  std::vector<Variable> variables_;
  std::map<VarId, std::size_t> index_;
  std::map<VarId, std::vector<VarId>> parents_;
  std::map<VarId, Cpt> cpts_;
  std::vector<DecisionConstraint> constraints_;
  std::vector<UtilityNode> utilities_;
};

struct Diagnostic {
  std::string code;  // cycle, unnormalized_cpt, missing_cpt, scope, ...
  std::string message;
};

std::vector<Diagnostic> validate_network(const Network& n);

struct Posterior {
  VarId id;
  std::vector<double> probs;
};

struct UtilityValue {
  std::string id;
  double expected = 0.0;
};

struct ScenarioResult {
  bool consistent = true;
  std::string reason;
  std::vector<Posterior> posteriors;   // network order
  std::vector<UtilityValue> utilities;  // network order; empty if inconsistent

  const Posterior* posterior(const VarId& id) const;
  std::optional<double> utility(const std::string& id) const;
};

// Throws LockError on unknown ids or out-of-range states.
void check_locks(const Network& n, const LockSet& locks);

// Targets default to every chance node when empty.
ScenarioResult query(const Network& n, const LockSet& locks,
                     const std::vector<VarId>& targets = {});

struct SweepRow {
  std::size_t state;
  ScenarioResult result;
};

// One query per state of `d` with the other locks held. Throws LockError if
// `d` is already locked or is not a decision.
std::vector<SweepRow> sweep_decision(const Network& n, const LockSet& locks,
                                     const VarId& d);

struct ComparisonRow {
  LockSet locks;
  bool consistent = true;
  std::string reason;
  std::vector<UtilityValue> utilities;
};

std::vector<ComparisonRow> compare_scenarios(const Network& n,
                                             const std::vector<LockSet>& scenarios);

// Factors the query semantics multiply together with no locks applied:
// chance CPTs plus a uniform (or admissible-uniform) table per decision.
std::vector<Factor> semantic_factors(const Network& n);

}  // namespace bfdst
