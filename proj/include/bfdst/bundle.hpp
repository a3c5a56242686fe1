#pragma once
// Model bundle directory: flat key = value parameter files, route and
// sediment catalogs, species and salinity tables, per-route NIS
// distributions, and an optional prebuilt network.json that takes
// precedence over the parameter files.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bfdst/dst_model.hpp"

namespace bfdst {

struct Bundle {
  std::string dir;
  ModelParams params;
  std::vector<SpeciesRecord> species;
  std::vector<SalinityObservation> salinity;
  std::vector<RouteNisDistribution> nis;
  Network network;
  bool network_from_file = false;
};

// `key = value` lines; '#' starts a comment. Duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(std::istream& in);

void load_econ(std::istream& in, EconParams& p);
void load_emissions(std::istream& in, EmissionParams& p);
void load_drag(std::istream& in, DragModel& p);
void load_risk(std::istream& in, RiskParams& p);

std::vector<Route> parse_routes(std::istream& in);
// Sediment class per route, in `routes` order.
std::vector<bool> parse_sediment(std::istream& in, const std::vector<Route>& routes);

std::vector<RouteNisDistribution> parse_nis_routes(std::istream& in);
void write_nis_routes(std::ostream& out, const std::vector<RouteNisDistribution>& nis);

// Parameters only; no network.json, species or salinity.
ModelParams load_params(const std::string& dir);

Bundle load_bundle(const std::string& dir);

// Network built from the bundle's parameter files, ignoring network.json.
Network build_from_params(const Bundle& b);

// Copy of `n` with the NISvalue CPT replaced by the given per-route rows.
Network with_nis(const Network& n, const std::vector<RouteNisDistribution>& nis);

}  // namespace bfdst
