#pragma once
// Test-side oracles. Nothing here calls the engine's factor algebra or
// query code; tables are read through scope/cards/data only.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "bfdst/dst_model.hpp"
#include "bfdst/network.hpp"

namespace oracle {

using bfdst::Factor;
using bfdst::LockSet;
using bfdst::Network;
using bfdst::VarId;

// Cell of `f` at the assignment `a` (variable id -> state).
double cell(const Factor& f, const std::map<VarId, std::size_t>& a);

// Visits every assignment of `vars` (last fastest).
template <class Fn>
void for_each_assignment(const std::vector<VarId>& vars, const std::vector<std::size_t>& cards,
                         Fn&& fn) {
  std::map<VarId, std::size_t> a;
  for (const auto& v : vars) a[v] = 0;
  std::size_t total = 1;
  for (auto c : cards) total *= c;
  for (std::size_t i = 0; i < total; ++i) {
    fn(static_cast<const std::map<VarId, std::size_t>&>(a));
    for (std::size_t k = vars.size(); k-- > 0;) {
      if (++a[vars[k]] < cards[k]) break;
      a[vars[k]] = 0;
    }
  }
}

// Joint over `vars` (in that order) as a flat table.
std::vector<double> joint_table(const std::vector<Factor>& factors, const std::vector<VarId>& vars,
                                const std::vector<std::size_t>& cards);

struct QueryAnswer {
  bool consistent = true;
  std::map<VarId, std::vector<double>> marginals;
  std::map<std::string, double> utilities;
};

// Run-mode semantics by full enumeration: unlocked decisions uniform (or
// row-normalized admissibility), locked decisions weighted by their
// admissibility table, locks as indicator evidence.
QueryAnswer enumerate_query(const Network& n, const LockSet& locks);

struct RandomNetOptions {
  std::size_t max_vars = 12;
  std::size_t max_states = 4;
  std::size_t max_joint = 200000;
  bool with_constraint = true;
};

Network random_network(std::mt19937_64& rng, const RandomNetOptions& opt = {});

double rel_err(double a, double b);

// Expected utilities of the biofouling model with all 11 decisions locked,
// summed by hand over the remaining chance nodes. Probabilities come from
// the network's CPTs; every deterministic link and utility is recomputed
// from interval midpoints with the test's own binning.
std::map<std::string, double> closed_form_utilities(const Network& n, const bfdst::ModelParams& p,
                                                    const LockSet& decisions);

// Hand arithmetic for the cost and emission formulas.
namespace hand {
double copper_kg_per_year(double wsa_km2, double iwc_times, double peak_flux);
double iwc_cost(double wsa_m2, double times, bool collect, double off_hire_days);
double coating_cost(double price_per_m2, double wsa_m2);
}  // namespace hand

}  // namespace oracle
