#include "bfdst/bundle.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bfdst/model_io.hpp"

namespace bfdst {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class Keys {
 public:
  Keys(std::map<std::string, std::string> kv, std::string file)
      : kv_(std::move(kv)), file_(std::move(file)) {}

  void num(const std::string& key, double& out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    try {
      std::size_t used = 0;
      out = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw BuildError(file_ + ": bad number for '" + key + "': " + it->second);
    }
    kv_.erase(it);
  }

  void flag(const std::string& key, bool& out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return;
    if (it->second == "true") {
      out = true;
    } else if (it->second == "false") {
      out = false;
    } else {
      throw BuildError(file_ + ": '" + key + "' must be true or false");
    }
    kv_.erase(it);
  }

  void finish() const {
    if (!kv_.empty()) throw BuildError(file_ + ": unknown key '" + kv_.begin()->first + "'");
  }

 private:
  std::map<std::string, std::string> kv_;
  std::string file_;
};

std::vector<std::vector<std::string>> read_rows(std::istream& in, const std::string& file,
                                                const std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields;
    std::string f;
    std::istringstream ss(t);
    while (std::getline(ss, f, '\t')) fields.push_back(trim(f));
    if (!seen_header) {
      if (fields != header) throw ParseError(file + ": unexpected header", lineno);
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(file + ": expected " + std::to_string(header.size()) + " fields", lineno);
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::ifstream open(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return in;
}

const char* kCoatingKeys[] = {"hard", "biocidal", "fouling_release"};
const char* kModeKeys[] = {"no_collect", "collect", "no_iwc"};
const char* kFoulingKeys[] = {"soft", "hard"};
const char* kShipKeys[] = {"bulker", "container", "general_cargo", "passenger", "roro", "tanker"};
const char* kNstmKeys[] = {"0_10", "10_20", "20_30", "30_40", "40_50", "50_100"};

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
    auto key = trim(t.substr(0, eq));
    auto value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError("empty key or value", lineno);
    if (!out.emplace(key, value).second) throw ParseError("duplicate key '" + key + "'", lineno);
  }
  return out;
}

void load_econ(std::istream& in, EconParams& p) {
  Keys k(parse_key_values(in), "econ");
  for (std::size_t i = 0; i < 3; ++i) {
    k.num(std::string("coating_cost_per_m2.") + kCoatingKeys[i], p.coating_cost_per_m2[i]);
  }
  k.flag("application_included", p.application_included);
  k.num("application_cost_per_m2", p.application_cost_per_m2);
  k.num("coating_life_years", p.coating_life_years);
  k.num("iwc_price_per_m2", p.iwc_price_per_m2);
  k.num("cleaned_fraction", p.cleaned_fraction);
  k.num("collect_surcharge", p.collect_surcharge);
  k.num("off_hire_per_day", p.off_hire_per_day);
  k.num("fuel_price_per_tonne.light", p.fuel_price_light);
  k.num("fuel_price_per_tonne.heavy", p.fuel_price_heavy);
  k.finish();
  p.validate();
}

void load_emissions(std::istream& in, EmissionParams& p) {
  Keys k(parse_key_values(in), "emissions");
  k.num("baseline_cu_flux", p.baseline_cu);
  k.num("peak_cu_flux.soft", p.peak_cu_soft);
  k.num("peak_cu_flux.hard", p.peak_cu_hard);
  k.num("peak_days", p.peak_days);
  k.num("co2_per_fuel_tonne.heavy", p.co2_heavy);
  k.num("co2_per_fuel_tonne.light", p.co2_light);
  k.num("niche_fouling_multiplier", p.niche_multiplier);
  k.num("sediment_threshold", p.sediment_threshold);
  k.finish();
  p.validate();
}

void load_drag(std::istream& in, DragModel& p) {
  Keys k(parse_key_values(in), "drag");
  for (std::size_t i = 0; i < 6; ++i) k.num(std::string("increase.") + kNstmKeys[i], p.increase[i]);
  k.finish();
  p.validate();
}

void load_risk(std::istream& in, RiskParams& p) {
  Keys k(parse_key_values(in), "risk");
  k.num("nis_scale", p.nis_scale);
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t m = 0; m < 3; ++m) {
      k.num(std::string("nis_multiplier.") + kFoulingKeys[t] + "." + kModeKeys[m],
            p.nis_multiplier[t][m]);
    }
  }
  for (std::size_t s = 0; s < 6; ++s) {
    k.num(std::string("niche_fraction.") + kShipKeys[s], p.niche_fraction[s]);
  }
  k.finish();
  p.validate();
}

std::vector<Route> parse_routes(std::istream& in) {
  std::vector<Route> out;
  for (const auto& row : read_rows(in, "routes", {"route", "departure", "arrival", "ice"})) {
    Route r;
    r.id = row[0];
    auto dep = parse_area(row[1]);
    auto arr = parse_area(row[2]);
    if (!dep || !arr) throw BuildError("routes: unknown area on route " + r.id);
    r.departure = *dep;
    r.arrival = *arr;
    if (row[3] != "yes" && row[3] != "no") throw BuildError("routes: ice flag must be yes or no");
    r.ice = row[3] == "yes";
    out.push_back(r);
  }
  return out;
}

std::vector<bool> parse_sediment(std::istream& in, const std::vector<Route>& routes) {
  std::map<std::string, bool> cls;
  for (const auto& row : read_rows(in, "sediment", {"route", "class"})) {
    if (row[1] != "low" && row[1] != "high") {
      throw BuildError("sediment: class must be low or high on route " + row[0]);
    }
    cls[row[0]] = row[1] == "high";
  }
  std::vector<bool> out;
  for (const auto& r : routes) {
    auto it = cls.find(r.id);
    if (it == cls.end()) throw BuildError("sediment: no class for route " + r.id);
    out.push_back(it->second);
  }
  return out;
}

std::vector<RouteNisDistribution> parse_nis_routes(std::istream& in) {
  std::vector<std::string> header{"route"};
  for (double v : kNisValueStates) header.push_back("p_" + format_number(v));
  std::vector<RouteNisDistribution> out;
  for (const auto& row : read_rows(in, "nis_routes", header)) {
    RouteNisDistribution d;
    d.route = row[0];
    double total = 0.0;
    for (std::size_t i = 1; i < row.size(); ++i) {
      double p = -1.0;
      try {
        p = std::stod(row[i]);
      } catch (const std::exception&) {
        throw BuildError("nis_routes: bad probability on route " + d.route);
      }
      if (!(p >= 0.0)) throw BuildError("nis_routes: negative probability on route " + d.route);
      d.mapped.push_back(p);
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw BuildError("nis_routes: row for route " + d.route + " does not sum to 1");
    }
    out.push_back(std::move(d));
  }
  return out;
}

void write_nis_routes(std::ostream& out, const std::vector<RouteNisDistribution>& nis) {
  out << "route";
  for (double v : kNisValueStates) out << "\tp_" << format_number(v);
  out << '\n';
  for (const auto& d : nis) {
    out << d.route;
    for (double p : d.mapped) out << '\t' << format_number(p);
    out << '\n';
  }
}

ModelParams load_params(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) throw std::runtime_error("model directory not found: " + dir);
  ModelParams p = ModelParams::defaults();
  auto maybe = [&](const char* name, auto&& loader) {
    const auto path = root / name;
    if (fs::exists(path)) {
      auto in = open(path);
      loader(in);
    }
  };
  maybe("econ.txt", [&](std::istream& in) { load_econ(in, p.econ); });
  maybe("emissions.txt", [&](std::istream& in) { load_emissions(in, p.emis); });
  maybe("drag.txt", [&](std::istream& in) { load_drag(in, p.drag); });
  maybe("risk.txt", [&](std::istream& in) { load_risk(in, p.risk); });
  maybe("routes.tsv", [&](std::istream& in) { p.routes = parse_routes(in); });
  maybe("sediment.tsv", [&](std::istream& in) { p.sediment_high = parse_sediment(in, p.routes); });
  return p;
}

Network build_from_params(const Bundle& b) { return build_network(b.params, b.nis); }

Bundle load_bundle(const std::string& dir) {
  Bundle b;
  b.dir = dir;
  b.params = load_params(dir);
  const fs::path root(dir);
  if (fs::exists(root / "species.tsv")) b.species = load_species_table((root / "species.tsv").string());
  if (fs::exists(root / "salinity.tsv")) b.salinity = load_salinity((root / "salinity.tsv").string());
  {
    auto in = open(root / "nis_routes.tsv");
    b.nis = parse_nis_routes(in);
  }
  if (fs::exists(root / "network.json")) {
    b.network = load_network_file((root / "network.json").string());
    b.network_from_file = true;
  } else {
    b.network = build_from_params(b);
  }
  return b;
}

Network with_nis(const Network& n, const std::vector<RouteNisDistribution>& nis) {
  const auto& routes = n.variable(node::Routes).states;
  std::map<std::string, const RouteNisDistribution*> by_route;
  for (const auto& d : nis) by_route[d.route] = &d;
  std::vector<double> data;
  for (const auto& label : routes.labels()) {
    auto it = by_route.find(label);
    if (it == by_route.end()) throw BuildError("missing NIS distribution for route " + label);
    if (it->second->mapped.size() != kNisValueStates.size()) {
      throw BuildError("NIS distribution for route " + label + " has the wrong length");
    }
    data.insert(data.end(), it->second->mapped.begin(), it->second->mapped.end());
  }
  Network out = n;
  out.set_cpt(node::NISvalue,
              Factor({node::Routes, node::NISvalue}, {routes.size(), kNisValueStates.size()},
                     std::move(data)));
  return out;
}

}  // namespace bfdst
