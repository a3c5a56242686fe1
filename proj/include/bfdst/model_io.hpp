#pragma once
// Network file format: one JSON document with variables, CPTs (flat,
// row-major, explicit scope), admissibility constraints and utilities.

#include <string>

#include <json.hpp>

#include "bfdst/network.hpp"

namespace bfdst {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kNetworkFormat = "bfdst-network/1";

ojson network_to_json(const Network& n);
Network network_from_json(const ojson& doc);

Network load_network_file(const std::string& path);
void save_network_file(const Network& n, const std::string& path);

// Canonical serialized form; equal networks give equal strings.
std::string serialize_network(const Network& n);

// 16 hex digits of FNV-1a over the canonical serialization.
std::string model_version(const Network& n);

ojson state_space_to_json(const StateSpace& s);
StateSpace state_space_from_json(const ojson& j);

}  // namespace bfdst
