#pragma once
// JSON shapes shared by the HTTP service, the CLI and the Python module.

#include <iosfwd>
#include <string>
#include <vector>

#include "bfdst/model_io.hpp"
#include "bfdst/network.hpp"
#include "bfdst/nis_model.hpp"

namespace bfdst {

std::size_t edit_distance(std::string_view a, std::string_view b);
std::string nearest(std::string_view word, const std::vector<std::string>& candidates);

// Resolves a state given as a label or a decimal index. Throws LockError
// naming the nearest valid label.
std::size_t resolve_state(const Network& n, const VarId& node, std::string_view state);

// Throws LockError naming the nearest valid node.
const Variable& resolve_node(const Network& n, std::string_view id);

// {"Node": "label" | index, ...}
LockSet parse_locks(const Network& n, const ojson& locks);

// "Node=State"
std::pair<VarId, std::size_t> parse_lock_arg(const Network& n, std::string_view arg);

ojson locks_to_json(const Network& n, const LockSet& locks);

ojson model_catalog_json(const Network& n, const std::string& version);

ojson scenario_result_json(const Network& n, const ScenarioResult& r, const LockSet& locks,
                           const std::string& version);

ojson comparison_json(const Network& n, const std::vector<ComparisonRow>& rows,
                      const std::string& version);

ojson error_json(const std::string& code, const std::string& message,
                 const std::string& detail = "");

ojson species_json(const std::vector<SpeciesRecord>& species);
ojson routes_json(const std::vector<Route>& routes, const std::vector<bool>& sediment_high);

// Reads the optional MCMC fields (iterations, chains, thin, burnIn, seed)
// over the desk defaults.
McmcConfig mcmc_from_json(const ojson& j);

// Conditional table of a chance node, or the table of a utility, as TSV:
// one row per parent configuration, one column per state.
void write_table_tsv(std::ostream& out, const Network& n, const std::string& id);

}  // namespace bfdst
