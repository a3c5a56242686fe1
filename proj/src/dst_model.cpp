#include "bfdst/dst_model.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace bfdst {

// ---------------------------------------------------------------- parameters

double EconParams::coating_price(Coating c) const {
  const double base = coating_cost_per_m2[static_cast<std::size_t>(c)];
  return application_included ? base : base + application_cost_per_m2;
}

void EconParams::validate() const {
  for (double p : coating_cost_per_m2) {
    if (!(p > 0.0)) throw BuildError("coating prices must be positive");
  }
  if (!(application_cost_per_m2 >= 0.0)) throw BuildError("application cost must be nonnegative");
  if (!(coating_life_years > 0.0)) throw BuildError("coating life must be positive");
  if (!(iwc_price_per_m2 > 0.0)) throw BuildError("IWC price must be positive");
  if (!(cleaned_fraction > 0.0 && cleaned_fraction <= 1.0)) {
    throw BuildError("cleaned fraction must lie in (0, 1]");
  }
  if (!(collect_surcharge >= 0.0 && collect_surcharge <= 1.0)) {
    throw BuildError("collect surcharge must lie in [0, 1]");
  }
  if (!(off_hire_per_day > 0.0)) throw BuildError("off-hire rate must be positive");
  if (!(fuel_price_light > 0.0 && fuel_price_heavy > 0.0)) {
    throw BuildError("fuel prices must be positive");
  }
}

void EmissionParams::validate() const {
  if (!(baseline_cu > 0.0)) throw BuildError("baseline copper flux must be positive");
  if (!(peak_cu_soft >= baseline_cu && peak_cu_hard >= baseline_cu)) {
    throw BuildError("peak copper flux must not be below the baseline");
  }
  if (!(peak_days >= 0.0 && peak_days * 12.0 <= 365.0)) {
    throw BuildError("peak days out of range");
  }
  if (!(co2_heavy > 0.0 && co2_light > 0.0)) throw BuildError("CO2 factors must be positive");
  if (!(niche_multiplier >= 1.0)) throw BuildError("niche multiplier must be at least 1");
  if (!(sediment_threshold > 0.0)) throw BuildError("sediment threshold must be positive");
}

void DragModel::validate() const {
  for (std::size_t i = 1; i < increase.size(); ++i) {
    if (increase[i] < increase[i - 1]) throw BuildError("drag map must be nondecreasing");
  }
  if (!(increase[0] >= 0.02 && increase[0] <= 0.04)) {
    throw BuildError("first drag bucket must lie in [0.02, 0.04]");
  }
}

void RiskParams::validate() const {
  if (!(nis_scale > 0.0)) throw BuildError("NIS scale must be positive");
  for (const auto& row : nis_multiplier) {
    const double no_collect = row[0], collect = row[1], no_iwc = row[2];
    if (!(0.0 <= collect && collect < no_iwc && no_iwc < no_collect)) {
      throw BuildError("NIS multipliers must order collect < no-IWC < no-collect");
    }
  }
  for (double f : niche_fraction) {
    if (!(f > 0.0 && f < 1.0)) throw BuildError("niche fractions must lie in (0, 1)");
  }
}

std::vector<Route> ModelParams::default_routes() {
  using A = Area;
  struct Row {
    const char* id;
    A dep, arr;
  };
  const Row rows[] = {
      {"1A", A::NS, A::SWB},  {"1B", A::SWB, A::NS},  {"2A", A::NS, A::GoF},
      {"2B", A::GoF, A::NS},  {"3A", A::NS, A::GoB},  {"3B", A::GoB, A::NS},
      {"4A", A::SWB, A::BP},  {"4B", A::BP, A::SWB},  {"5A", A::SWB, A::GoR},
      {"5B", A::GoR, A::SWB}, {"6A", A::GoF, A::BP},  {"6B", A::BP, A::GoF},
      {"7A", A::GoF, A::GoF}, {"7B", A::GoF, A::GoF}, {"8A", A::SWB, A::BP},
      {"8B", A::BP, A::SWB},  {"9A", A::SWB, A::BP},  {"9B", A::BP, A::SWB},
      {"10A", A::SWB, A::SWB}, {"10B", A::SWB, A::SWB},
  };
  std::vector<Route> out;
  for (const auto& r : rows) {
    auto icy = [](A a) { return a == A::GoB || a == A::GoF || a == A::GoR; };
    out.push_back({r.id, r.dep, r.arr, icy(r.dep) || icy(r.arr)});
  }
  return out;
}

std::vector<bool> ModelParams::default_sediment() {
  return {true,  false, false, false, true,  false, true,  true,  false, true,
          true,  false, false, false, false, true,  false, true,  true,  true};
}

ModelParams ModelParams::defaults() {
  ModelParams p;
  p.routes = default_routes();
  p.sediment_high = default_sediment();
  return p;
}

// ------------------------------------------------------------------ formulas

double ecotox_pressure_value(double wsa_km2, Coating coating, double iwc_times,
                             IwcMethod method, const EmissionParams& e) {
  if (coating != Coating::biocidal) return 0.0;
  const double area = km2_to_cm2(wsa_km2);
  const double peak = method == IwcMethod::hard ? e.peak_cu_hard : e.peak_cu_soft;
  const double peak_days = e.peak_days * iwc_times;
  const double ug = e.baseline_cu * area * (365.0 - peak_days) + peak * area * peak_days;
  return ug * 1e-9;
}

double iwc_cost_value(double wsa_km2, double iwc_times, CollectMode mode,
                      double off_hire_days, const EconParams& p) {
  if (mode == CollectMode::no_iwc) return 0.0;
  const double surcharge = mode == CollectMode::collect ? p.collect_surcharge : 0.0;
  const double cleaning =
      p.iwc_price_per_m2 * (1.0 + surcharge) * p.cleaned_fraction * km2_to_m2(wsa_km2);
  return -(cleaning * iwc_times + p.off_hire_per_day * off_hire_days * iwc_times);
}

double coating_cost_value(double wsa_km2, Coating coating, const EconParams& p) {
  return -p.coating_price(coating) * km2_to_m2(wsa_km2) / p.coating_life_years;
}

FuelChain fuel_chain_values(double theoretical, double drag_fraction, FuelType fuel,
                            double hours, const EconParams& p, const EmissionParams& e) {
  FuelChain c{};
  c.real_fuel = theoretical * (1.0 + drag_fraction);
  const bool heavy = fuel == FuelType::heavy;
  c.co2_per_hour = c.real_fuel * (heavy ? e.co2_heavy : e.co2_light);
  c.cost_per_hour = -c.real_fuel / 1000.0 * (heavy ? p.fuel_price_heavy : p.fuel_price_light);
  c.cost_per_year = c.cost_per_hour * hours;
  c.co2_per_year = c.co2_per_hour * hours;
  return c;
}

double potential_risk_value(double nis_value, double nstm_mid, double area_hm2, bool niche,
                            const EmissionParams& e) {
  return nis_value * nstm_mid * area_hm2 * (niche ? e.niche_multiplier : 1.0);
}

double sediment_risk_value(bool high_copper, Coating coating) {
  if (coating != Coating::biocidal) return 0.0;
  return high_copper ? -100.0 : -50.0;
}

double nis_risk_value(double risk_wsa_mid, double risk_niche_mid, std::size_t fouling_type,
                      CollectMode mode, const RiskParams& r) {
  const double m = r.nis_multiplier.at(fouling_type)[static_cast<std::size_t>(mode)];
  return -r.nis_scale * (risk_wsa_mid + risk_niche_mid) * m;
}

// ------------------------------------------------------------ transcriptions

BiofoulingColumn biofouling_cpt(Coating coating, std::size_t time, std::size_t iwc) {
  if (time >= 5 || iwc >= kIwcTimes.size()) throw RangeError("biofouling parent state out of range");
  using Cells = std::vector<std::pair<std::size_t, double>>;
  BiofoulingColumn col;
  auto set = [&](const Cells& cells) {
    for (auto [s, p] : cells) col.probs[s] = p;
  };
  const Cells clean{{0, 1.0}};
  if (coating == Coating::fouling_release) {
    set(clean);
    return col;
  }
  // [iwc][time] for hard and biocidal coatings.
  static const std::array<std::array<Cells, 5>, 4> hard{{
      {{{{0, 1.0}}, {{5, 1.0}}, {{5, 1.0}}, {{5, 1.0}}, {{5, 1.0}}}},
      {{{{0, 1.0}}, {{0, 1.0}}, {{2, 0.7}, {3, 0.3}}, {{3, 0.6}, {4, 0.4}}, {{4, 0.4}, {5, 0.6}}}},
      {{{{0, 1.0}}, {{0, 1.0}}, {{1, 0.7}, {2, 0.3}}, {{2, 0.6}, {3, 0.4}}, {{3, 0.5}, {4, 0.5}}}},
      {{{{0, 1.0}}, {{0, 1.0}}, {{0, 0.7}, {1, 0.3}}, {{1, 0.6}, {2, 0.4}}, {{2, 0.4}, {3, 0.6}}}},
  }};
  static const std::array<std::array<Cells, 5>, 4> biocidal{{
      {{{{0, 1.0}}, {{0, 1.0}}, {{1, 1.0}}, {{4, 1.0}}, {{5, 1.0}}}},
      {{{{0, 1.0}}, {{0, 1.0}}, {{0, 0.7}, {1, 0.3}}, {{2, 0.6}, {3, 0.4}}, {{3, 0.4}, {4, 0.6}}}},
      {{{{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{1, 0.6}, {2, 0.4}}, {{2, 0.5}, {3, 0.5}}}},
      {{{{0, 1.0}}, {{0, 1.0}}, {{0, 1.0}}, {{0, 0.7}, {1, 0.3}}, {{1, 0.6}, {2, 0.4}}}},
  }};
  set(coating == Coating::hard ? hard[iwc][time] : biocidal[iwc][time]);
  // Columns shown in the published table excerpt: every IWC=0 column, the
  // first time step at two cleanings, and the hard column after one year.
  const bool shown = iwc == 0 || (iwc == 1 && time == 0) ||
                     (iwc == 1 && time == 1 && coating == Coating::hard);
  col.reconstructed = !shown;
  return col;
}

std::vector<double> wsa_cpt(std::size_t ship) {
  static const std::array<std::array<double, 12>, 6> rows{{
      {1.58873e-4, 0.00301329, 0.34364, 0.403583, 0.248493, 1.58873e-4, 1.58873e-4,
       1.58873e-4, 1.58873e-4, 1.58873e-4, 1.58873e-4, 1.58873e-4},
      {5.88568e-5, 5.88568e-5, 0.555222, 0.370168, 0.0740806, 5.88568e-5, 5.88568e-5,
       5.88568e-5, 5.88568e-5, 5.88568e-5, 5.88568e-5, 5.88568e-5},
      {0.0106709, 0.0319514, 0.916743, 0.039106, 2.14085e-4, 3.97537e-4, 2.14085e-4,
       3.06324e-5, 2.14085e-4, 2.14085e-4, 3.06324e-5, 2.14085e-4},
      {0.112046, 0.00610589, 0.677391, 0.184323, 0.0189771, 1.65322e-4, 1.65322e-4,
       1.65322e-4, 1.65322e-4, 1.65322e-4, 1.65322e-4, 1.65322e-4},
      {5.09397e-4, 0.00286012, 0.442681, 0.5534, 2.74324e-4, 3.92517e-5, 3.92517e-5,
       3.92517e-5, 3.92517e-5, 3.92517e-5, 3.92517e-5, 3.92517e-5},
      {0.0560839, 0.283236, 0.51303, 0.131625, 0.0154078, 8.82073e-5, 8.82073e-5,
       8.82073e-5, 8.82073e-5, 8.82073e-5, 8.82073e-5, 8.82073e-5},
  }};
  if (ship >= rows.size()) throw RangeError("ship type state out of range");
  return {rows[ship].begin(), rows[ship].end()};
}

// ------------------------------------------------------------------- catalog

namespace {

std::vector<double> steps(double from, double to, double by) {
  std::vector<double> out;
  for (double v = from; v <= to + 1e-9; v += by) out.push_back(v);
  return out;
}

std::vector<double> concat(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Variable decision(VarId id, std::string name, StateSpace s, std::string units = "") {
  return {std::move(id), std::move(name), VarKind::decision, std::move(s), std::move(units)};
}

Variable chance(VarId id, std::string name, StateSpace s, std::string units = "") {
  return {std::move(id), std::move(name), VarKind::chance, std::move(s), std::move(units)};
}

}  // namespace

std::vector<NodeSpec> node_catalog(const ModelParams& params) {
  using S = StateSpace;
  std::vector<std::string> route_labels;
  for (const auto& r : params.routes) route_labels.push_back(r.id);
  const std::vector<double> nstm{0, 10, 20, 30, 40, 50, 100};

  std::vector<NodeSpec> out;
  auto add = [&](Variable v, std::vector<VarId> parents = {}) {
    out.push_back({std::move(v), std::move(parents)});
  };
  add(decision(node::ShipType, "Ship type",
               S::labeled({"bulker", "container", "general-cargo", "passenger", "RoRo", "tanker"})));
  add(decision(node::TheoreticalFuel, "Theoretical fuel consumption",
               S::interval({1000, 2000, 3000, 4000, 5000}), "kg/h"));
  add(decision(node::FuelType, "Fuel type", S::labeled({"light", "heavy"})));
  add(decision(node::AnnualHours, "Annual shipping hours",
               S::interval({1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 8760}), "h/year"));
  add(decision(node::Routes, "Routes", S::labeled(route_labels)));
  add(decision(node::TimeSinceCoating, "Time since coating", S::numbered({0, 1, 2, 3, 4}),
               "years"));
  add(decision(node::CoatingType, "Coating type",
               S::labeled({"hard", "biocidal", "fouling-release"})),
      {node::Routes});
  add(decision(node::IWCtimes, "In-water cleaning times/growing season",
               S::numbered({kIwcTimes.begin(), kIwcTimes.end()}), "times"));
  add(decision(node::IWCmethodPast, "In-water cleaning method (in the past)",
               S::labeled({"soft", "hard"})));
  add(decision(node::OffHire, "Off hire costs", S::labeled({"none", "1-day", "2-days"}), "days"));
  add(decision(node::IWCcollect, "In-water cleaning and collecting in the destination port",
               S::labeled({"IWC+no-collect", "IWC+collect", "no-IWC"})));

  const std::vector<VarId> fouling_parents{node::CoatingType, node::TimeSinceCoating,
                                           node::IWCtimes};
  add(chance(node::BiofoulingAvg, "Biofouling pressure NSTM average", S::interval(nstm), "NSTM"),
      fouling_parents);
  add(chance(node::BiofoulingMax, "Biofouling pressure NSTM maximum", S::interval(nstm), "NSTM"),
      fouling_parents);
  add(chance(node::WSA, "Wetted surface area",
             S::interval({0, 5e-4, 1e-3, 5e-3, 0.01, 0.02, 0.04, 0.06, 0.08, 0.1, 0.2, 1.0, 1.04}),
             "km2"),
      {node::ShipType});
  add(chance(node::WSAnoNiche, "WSA without niche areas", S::interval(steps(0, 100, 5)), "hm2"),
      {node::WSA, node::ShipType});
  add(chance(node::NicheAreas, "Niche areas", S::interval(steps(0, 30, 2)), "hm2"),
      {node::WSA, node::ShipType});
  add(chance(node::FuelReal, "Fuel consumption real", S::interval(steps(1000, 7000, 1000)), "kg/h"),
      {node::TheoreticalFuel, node::BiofoulingAvg});
  add(chance(node::CO2hr, "Air emissions CO2",
             S::interval(concat({2000, 3000, 4000, 5000}, steps(6000, 24000, 2000))), "kg/h"),
      {node::FuelReal, node::FuelType});
  add(chance(node::FoulingType, "Fouling type", S::labeled({"soft", "hard"})),
      {node::BiofoulingMax});
  add(chance(node::NISvalue, "NIS value",
             S::numbered({kNisValueStates.begin(), kNisValueStates.end()}), "species"),
      {node::Routes});
  add(chance(node::PotentialRiskWSA, "Potential risk in WSA (without niche areas)",
             S::interval(concat({0, 25, 50, 100, 500, 1000}, steps(5000, 55000, 5000)))),
      {node::NISvalue, node::WSAnoNiche, node::BiofoulingMax});
  add(chance(node::PotentialRiskNiche, "Potential risk in niche areas",
             S::interval(concat({0, 25, 50, 100, 500, 1000}, steps(5000, 45000, 5000)))),
      {node::NicheAreas, node::NISvalue, node::BiofoulingMax});
  add(chance(node::CopperEmission, "Copper emissions", S::numbered({0, params.emis.baseline_cu}),
             "ug/cm2/day"),
      {node::CoatingType});
  add(chance(node::EcotoxPressure, "Ecotoxicological pressure",
             S::interval(concat({0, 0, 25, 50, 100, 500, 1000}, steps(5000, 45000, 5000))),
             "kg/year"),
      {node::IWCmethodPast, node::IWCtimes, node::CopperEmission, node::WSA});
  add(chance(node::SedimentCu, "Sediment copper concentration", S::labeled({"low", "high"})),
      {node::Routes});
  return out;
}

// --------------------------------------------------------------------- build

namespace {

struct Builder {
  const ModelParams& p;
  Network& n;

  const StateSpace& states(const VarId& id) const { return n.variable(id).states; }
  std::size_t card(const VarId& id) const { return states(id).size(); }

  std::vector<std::size_t> cards(const std::vector<VarId>& vars) const {
    std::vector<std::size_t> out;
    for (const auto& v : vars) out.push_back(card(v));
    return out;
  }

  // Calls fn(parent state indices) for every parent configuration in
  // row-major order.
  void for_each_config(const std::vector<VarId>& parents,
                       const std::function<void(const std::vector<std::size_t>&)>& fn) const {
    const auto c = cards(parents);
    std::vector<std::size_t> idx(parents.size(), 0);
    while (true) {
      fn(idx);
      std::size_t d = parents.size();
      while (d > 0) {
        --d;
        if (++idx[d] < c[d]) break;
        idx[d] = 0;
        if (d == 0) return;
      }
      if (parents.empty()) return;
    }
  }

  // CPT where each parent configuration maps to a distribution over the node.
  void cpt(const VarId& node,
           const std::function<std::vector<double>(const std::vector<std::size_t>&)>& column,
           const std::function<bool(const std::vector<std::size_t>&)>& reconstructed = {}) {
    const auto& parents = n.parents(node);
    const std::size_t k = card(node);
    std::vector<double> data;
    std::vector<bool> flags;
    for_each_config(parents, [&](const std::vector<std::size_t>& idx) {
      auto col = column(idx);
      if (col.size() != k) throw BuildError("CPT column size mismatch for " + node);
      double s = 0.0;
      for (double x : col) s += x;
      if (std::abs(s - 1.0) > 1e-6) {
        throw BuildError("CPT column for " + node + " sums to " + format_number(s));
      }
      data.insert(data.end(), col.begin(), col.end());
      const bool r = reconstructed && reconstructed(idx);
      flags.insert(flags.end(), k, r);
    });
    std::vector<VarId> scope = parents;
    scope.push_back(node);
    auto c = cards(scope);
    if (!reconstructed) flags.clear();
    n.set_cpt(node, Factor(std::move(scope), std::move(c), std::move(data)), std::move(flags));
  }

  // Deterministic CPT: all mass on the bin holding value(parent states).
  void deterministic(const VarId& node,
                     const std::function<double(const std::vector<std::size_t>&)>& value) {
    const auto& s = states(node);
    cpt(node, [&](const std::vector<std::size_t>& idx) {
      std::vector<double> col(s.size(), 0.0);
      col[s.bin(value(idx))] = 1.0;
      return col;
    });
  }

  double mid(const VarId& id, std::size_t i) const { return states(id).value(i); }

  void utility(const std::string& id, std::string name, std::string units,
               std::vector<VarId> parents,
               const std::function<double(const std::vector<std::size_t>&)>& value) {
    std::vector<double> table;
    for_each_config(parents, [&](const std::vector<std::size_t>& idx) {
      table.push_back(value(idx));
    });
    n.add_utility({id, std::move(name), std::move(parents), std::move(table), std::move(units)});
  }
};

}  // namespace

Network build_network(const ModelParams& params, const std::vector<RouteNisDistribution>& nis) {
  params.econ.validate();
  params.emis.validate();
  params.drag.validate();
  params.risk.validate();
  if (params.routes.empty()) throw BuildError("route catalog is empty");
  if (params.sediment_high.size() != params.routes.size()) {
    throw BuildError("sediment classification does not cover every route");
  }
  std::map<std::string, const RouteNisDistribution*> nis_by_route;
  for (const auto& d : nis) nis_by_route[d.route] = &d;
  for (const auto& r : params.routes) {
    auto it = nis_by_route.find(r.id);
    if (it == nis_by_route.end()) throw BuildError("missing NIS distribution for route " + r.id);
    if (it->second->mapped.size() != kNisValueStates.size()) {
      throw BuildError("NIS distribution for route " + r.id + " has the wrong length");
    }
  }

  Network n;
  for (auto& spec : node_catalog(params)) n.add_variable(std::move(spec.var), std::move(spec.parents));
  Builder b{params, n};
  const auto& e = params.emis;
  const auto& econ = params.econ;

  // Coating admissibility: fouling release only on ice-free routes.
  {
    std::vector<double> table;
    for (const auto& r : params.routes) {
      table.insert(table.end(), {1.0, 1.0, r.ice ? 0.0 : 1.0});
    }
    n.add_constraint({node::CoatingType,
                      Factor({node::Routes, node::CoatingType}, {params.routes.size(), 3},
                             std::move(table)),
                      "fouling release coating does not resist ice friction; it is only "
                      "admissible on ice-free routes"});
  }

  for (const auto& id : {node::BiofoulingAvg, node::BiofoulingMax}) {
    b.cpt(
        id,
        [](const std::vector<std::size_t>& i) {
          const auto col = biofouling_cpt(static_cast<Coating>(i[0]), i[1], i[2]);
          return std::vector<double>(col.probs.begin(), col.probs.end());
        },
        [](const std::vector<std::size_t>& i) {
          return biofouling_cpt(static_cast<Coating>(i[0]), i[1], i[2]).reconstructed;
        });
  }
  // Transcribed rows sum to 1 only within 1e-6; renormalize for the CPT.
  b.cpt(node::WSA, [](const std::vector<std::size_t>& i) {
    auto row = wsa_cpt(i[0]);
    double s = 0.0;
    for (double x : row) s += x;
    for (double& x : row) x /= s;
    return row;
  });
  b.deterministic(node::WSAnoNiche, [&](const std::vector<std::size_t>& i) {
    return km2_to_hm2(b.mid(node::WSA, i[0])) * (1.0 - params.risk.niche_fraction.at(i[1]));
  });
  b.deterministic(node::NicheAreas, [&](const std::vector<std::size_t>& i) {
    return km2_to_hm2(b.mid(node::WSA, i[0])) * params.risk.niche_fraction.at(i[1]);
  });
  b.deterministic(node::FuelReal, [&](const std::vector<std::size_t>& i) {
    return b.mid(node::TheoreticalFuel, i[0]) * (1.0 + params.drag.increase.at(i[1]));
  });
  b.deterministic(node::CO2hr, [&](const std::vector<std::size_t>& i) {
    const bool heavy = static_cast<FuelType>(i[1]) == FuelType::heavy;
    return b.mid(node::FuelReal, i[0]) * (heavy ? e.co2_heavy : e.co2_light);
  });
  b.cpt(node::FoulingType, [](const std::vector<std::size_t>& i) {
    if (i[0] <= 2) return std::vector<double>{1.0, 0.0};
    if (i[0] == 3) return std::vector<double>{0.5, 0.5};
    return std::vector<double>{0.0, 1.0};
  });
  b.cpt(node::NISvalue, [&](const std::vector<std::size_t>& i) {
    return nis_by_route.at(params.routes[i[0]].id)->mapped;
  });
  b.deterministic(node::PotentialRiskWSA, [&](const std::vector<std::size_t>& i) {
    return potential_risk_value(b.mid(node::NISvalue, i[0]), b.mid(node::BiofoulingMax, i[2]),
                                b.mid(node::WSAnoNiche, i[1]), false, e);
  });
  b.deterministic(node::PotentialRiskNiche, [&](const std::vector<std::size_t>& i) {
    return potential_risk_value(b.mid(node::NISvalue, i[1]), b.mid(node::BiofoulingMax, i[2]),
                                b.mid(node::NicheAreas, i[0]), true, e);
  });
  b.cpt(node::CopperEmission, [](const std::vector<std::size_t>& i) {
    return static_cast<Coating>(i[0]) == Coating::biocidal ? std::vector<double>{0.0, 1.0}
                                                            : std::vector<double>{1.0, 0.0};
  });
  b.deterministic(node::EcotoxPressure, [&](const std::vector<std::size_t>& i) {
    const double copper = b.mid(node::CopperEmission, i[2]);
    if (copper == 0.0) return 0.0;
    const double area = km2_to_cm2(b.mid(node::WSA, i[3]));
    const double n_iwc = b.mid(node::IWCtimes, i[1]);
    const double peak =
        static_cast<IwcMethod>(i[0]) == IwcMethod::hard ? e.peak_cu_hard : e.peak_cu_soft;
    const double days = e.peak_days * n_iwc;
    return (copper * area * (365.0 - days) + peak * area * days) * 1e-9;
  });
  b.cpt(node::SedimentCu, [&](const std::vector<std::size_t>& i) {
    return params.sediment_high[i[0]] ? std::vector<double>{0.0, 1.0}
                                      : std::vector<double>{1.0, 0.0};
  });

  b.utility(util::FuelCostHour, "Fuel costs", "EUR/h", {node::FuelReal, node::FuelType},
            [&](const std::vector<std::size_t>& i) {
              return fuel_chain_values(b.mid(node::FuelReal, i[0]), 0.0,
                                       static_cast<FuelType>(i[1]), 1.0, econ, e)
                  .cost_per_hour;
            });
  b.utility(util::FuelCostYear, "Fuel costs", "EUR/year",
            {node::FuelReal, node::FuelType, node::AnnualHours},
            [&](const std::vector<std::size_t>& i) {
              return fuel_chain_values(b.mid(node::FuelReal, i[0]), 0.0,
                                       static_cast<FuelType>(i[1]), b.mid(node::AnnualHours, i[2]),
                                       econ, e)
                  .cost_per_year;
            });
  b.utility(util::CO2Hour, "CO2 emissions", "kg/h", {node::CO2hr},
            [&](const std::vector<std::size_t>& i) { return -b.mid(node::CO2hr, i[0]); });
  b.utility(util::CO2Year, "CO2 emissions", "kg/year", {node::AnnualHours, node::CO2hr},
            [&](const std::vector<std::size_t>& i) {
              return -b.mid(node::CO2hr, i[1]) * b.mid(node::AnnualHours, i[0]);
            });
  b.utility(util::IWCCost, "In-water cleaning costs", "EUR/year",
            {node::IWCtimes, node::WSA, node::OffHire, node::IWCcollect},
            [&](const std::vector<std::size_t>& i) {
              return iwc_cost_value(b.mid(node::WSA, i[1]), b.mid(node::IWCtimes, i[0]),
                                    static_cast<CollectMode>(i[3]), kOffHireDays.at(i[2]), econ);
            });
  b.utility(util::CoatingCost, "Coating costs", "EUR/year", {node::WSA, node::CoatingType},
            [&](const std::vector<std::size_t>& i) {
              return coating_cost_value(b.mid(node::WSA, i[0]), static_cast<Coating>(i[1]), econ);
            });
  b.utility(util::NISRisk, "NIS introduction risk/arrival", "risk score",
            {node::PotentialRiskWSA, node::PotentialRiskNiche, node::IWCcollect,
             node::FoulingType},
            [&](const std::vector<std::size_t>& i) {
              return nis_risk_value(b.mid(node::PotentialRiskWSA, i[0]),
                                    b.mid(node::PotentialRiskNiche, i[1]), i[3],
                                    static_cast<CollectMode>(i[2]), params.risk);
            });
  b.utility(util::EcotoxRisk, "Ecotoxicological risk", "kg/year", {node::EcotoxPressure},
            [&](const std::vector<std::size_t>& i) { return -b.mid(node::EcotoxPressure, i[0]); });
  b.utility(util::SedimentRisk, "Sediment eco-toxicological risk", "risk score",
            {node::SedimentCu, node::CoatingType}, [&](const std::vector<std::size_t>& i) {
              return sediment_risk_value(i[0] == 1, static_cast<Coating>(i[1]));
            });
  return n;
}

std::vector<Diagnostic> validate_biofouling_model(const Network& n) {
  auto out = validate_network(n);
  const ModelParams defaults = ModelParams::defaults();
  std::set<VarId> expected;
  for (const auto& spec : node_catalog(defaults)) expected.insert(spec.var.id);
  for (const auto& id : expected) {
    if (!n.find(id)) out.push_back({"missing_node", "model lacks node " + id});
  }
  for (const auto& v : n.variables()) {
    if (!expected.contains(v.id)) out.push_back({"extra_node", "unexpected node " + v.id});
  }
  for (const auto& id : {util::FuelCostHour, util::FuelCostYear, util::CO2Hour, util::CO2Year,
                         util::IWCCost, util::CoatingCost, util::NISRisk, util::EcotoxRisk,
                         util::SedimentRisk}) {
    if (!n.utility(id)) out.push_back({"missing_node", "model lacks utility " + id});
  }
  const auto counts = std::to_string(n.count(VarKind::decision)) + "/" +
                      std::to_string(n.count(VarKind::chance)) + "/" +
                      std::to_string(n.utilities().size());
  if (counts != "11/14/9") {
    out.push_back({"node_counts", "expected 11 decisions, 14 chance nodes and 9 utilities, got " +
                                      counts});
  }
  return out;
}

}  // namespace bfdst
