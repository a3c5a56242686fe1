#include "oracles.hpp"

#include <cmath>

namespace oracle {

double cell(const Factor& f, const std::map<VarId, std::size_t>& a) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < f.scope().size(); ++k) {
    idx = idx * f.cards()[k] + a.at(f.scope()[k]);
  }
  return f.data()[idx];
}

std::vector<double> joint_table(const std::vector<Factor>& factors, const std::vector<VarId>& vars,
                                const std::vector<std::size_t>& cards) {
  std::vector<double> out;
  for_each_assignment(vars, cards, [&](const auto& a) {
    double p = 1.0;
    for (const auto& f : factors) p *= cell(f, a);
    out.push_back(p);
  });
  return out;
}

QueryAnswer enumerate_query(const Network& n, const LockSet& locks) {
  std::vector<VarId> vars;
  std::vector<std::size_t> cards;
  for (const auto& v : n.variables()) {
    vars.push_back(v.id);
    cards.push_back(v.states.size());
  }
  QueryAnswer ans;
  std::map<VarId, std::vector<double>> mass;
  for (const auto& v : n.variables()) {
    if (v.kind == bfdst::VarKind::chance) mass[v.id].assign(v.states.size(), 0.0);
  }
  std::map<std::string, double> eu;
  double z = 0.0;
  for_each_assignment(vars, cards, [&](const auto& a) {
    for (const auto& [id, s] : locks) {
      if (a.at(id) != s) return;
    }
    double p = 1.0;
    for (const auto& v : n.variables()) {
      const std::size_t k = v.states.size();
      if (v.kind == bfdst::VarKind::chance) {
        p *= cell(n.cpt(v.id)->factor, a);
      } else if (const auto* c = n.constraint_for(v.id)) {
        const double w = cell(c->table, a);
        if (locks.contains(v.id)) {
          p *= w;
        } else {
          double row = 0.0;
          auto b = a;
          for (std::size_t s = 0; s < k; ++s) {
            b[v.id] = s;
            row += cell(c->table, b);
          }
          p *= row > 0.0 ? w / row : 0.0;
        }
      } else if (!locks.contains(v.id)) {
        p /= static_cast<double>(k);
      }
    }
    if (p == 0.0) return;
    z += p;
    for (auto& [id, m] : mass) m[a.at(id)] += p;
    for (const auto& u : n.utilities()) {
      std::size_t idx = 0;
      for (const auto& par : u.parents) idx = idx * n.variable(par).states.size() + a.at(par);
      eu[u.id] += p * u.table[idx];
    }
  });
  if (z == 0.0) {
    ans.consistent = false;
    return ans;
  }
  for (auto& [id, m] : mass) {
    for (auto& x : m) x /= z;
    ans.marginals[id] = m;
  }
  for (const auto& u : n.utilities()) ans.utilities[u.id] = eu[u.id] / z;
  return ans;
}

namespace {

std::vector<double> random_column(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> col(k);
  double s = 0.0;
  for (auto& x : col) {
    x = u(rng) < 0.15 ? 0.0 : u(rng);
    s += x;
  }
  if (s == 0.0) {
    col[0] = 1.0;
    s = 1.0;
  }
  for (auto& x : col) x /= s;
  return col;
}

}  // namespace

Network random_network(std::mt19937_64& rng, const RandomNetOptions& opt) {
  std::uniform_int_distribution<std::size_t> nvars(3, opt.max_vars);
  std::uniform_int_distribution<std::size_t> nstates(2, opt.max_states);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const std::size_t count = nvars(rng);
  std::vector<std::size_t> cards(count);
  std::size_t joint = 1;
  for (auto& c : cards) {
    c = nstates(rng);
    joint *= c;
  }
  for (std::size_t i = 0; joint > opt.max_joint; i = (i + 1) % count) {
    if (cards[i] > 2) {
      joint = joint / cards[i] * (cards[i] - 1);
      --cards[i];
    }
  }
  const std::size_t decisions = std::min<std::size_t>(count / 3 + 1, 3);

  Network n;
  std::vector<VarId> ids;
  for (std::size_t i = 0; i < count; ++i) {
    // Zero-padded ids keep lexicographic and creation order aligned.
    VarId id = std::string(i < 10 ? "V0" : "V") + std::to_string(i);
    const bool is_decision = i < decisions;
    std::vector<VarId> parents;
    for (std::size_t j = 0; j < i && parents.size() < 3; ++j) {
      if (u01(rng) < (is_decision ? 0.5 : 0.35)) parents.push_back(ids[j]);
    }
    std::vector<std::string> labels;
    for (std::size_t s = 0; s < cards[i]; ++s) labels.push_back("s" + std::to_string(s));
    n.add_variable({id, id, is_decision ? bfdst::VarKind::decision : bfdst::VarKind::chance,
                    bfdst::StateSpace::labeled(labels), ""},
                   is_decision ? std::vector<VarId>{} : parents);
    if (!is_decision) {
      std::vector<VarId> scope = parents;
      scope.push_back(id);
      std::vector<std::size_t> sc;
      std::size_t rows = 1;
      for (const auto& p : parents) {
        sc.push_back(n.variable(p).states.size());
        rows *= sc.back();
      }
      sc.push_back(cards[i]);
      std::vector<double> data;
      for (std::size_t r = 0; r < rows; ++r) {
        auto col = random_column(rng, cards[i]);
        data.insert(data.end(), col.begin(), col.end());
      }
      n.set_cpt(id, Factor(scope, sc, data));
    }
    ids.push_back(id);
  }
  // A second-tier decision with a constraint on an earlier decision.
  if (opt.with_constraint && decisions >= 2) {
    const VarId d = ids[1], p = ids[0];
    n.add_parent(d, p);
    const std::size_t kp = n.variable(p).states.size(), kd = n.variable(d).states.size();
    std::vector<double> t;
    for (std::size_t a = 0; a < kp; ++a) {
      for (std::size_t b = 0; b < kd; ++b) t.push_back((a + b) % 3 == 2 ? 0.0 : 1.0);
    }
    n.add_constraint({d, Factor({p, d}, {kp, kd}, t), "combination not admissible"});
  }
  for (int k = 0; k < 2; ++k) {
    bfdst::UtilityNode u;
    u.id = "U" + std::to_string(k);
    u.name = u.id;
    std::size_t rows = 1;
    for (const auto& id : ids) {
      if (u.parents.size() < 3 && u01(rng) < 0.4) {
        u.parents.push_back(id);
        rows *= n.variable(id).states.size();
      }
    }
    if (u.parents.empty()) {
      u.parents.push_back(ids.back());
      rows = n.variable(ids.back()).states.size();
    }
    for (std::size_t r = 0; r < rows; ++r) u.table.push_back(-1000.0 * u01(rng));
    n.add_utility(u);
  }
  return n;
}

double rel_err(double a, double b) {
  if (b == 0.0) return std::abs(a);
  return std::abs(a - b) / std::abs(b);
}

namespace hand {

double copper_kg_per_year(double wsa_km2, double iwc_times, double peak_flux) {
  const double cm2 = wsa_km2 * 1e10;
  const double peak_days = 7.0 * iwc_times;
  const double micrograms = 7.0 * cm2 * (365.0 - peak_days) + peak_flux * cm2 * peak_days;
  return micrograms / 1e9;
}

double iwc_cost(double wsa_m2, double times, bool collect, double off_hire_days) {
  const double per_m2 = collect ? 4.5 : 3.0;
  return -(per_m2 * 0.4 * wsa_m2 * times + 20000.0 * off_hire_days * times);
}

double coating_cost(double price_per_m2, double wsa_m2) { return -price_per_m2 * wsa_m2 / 5.0; }

}  // namespace hand

namespace {

struct Bins {
  std::vector<double> b;
  std::size_t size() const { return b.size() - 1; }
  double mid(std::size_t i) const { return (b[i] + b[i + 1]) / 2.0; }
  std::size_t bin(double v) const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (b[i] == b[i + 1] ? v == b[i] : (v >= b[i] && v < b[i + 1])) return i;
    }
    return v < b.front() ? 0 : size() - 1;
  }
};

std::vector<double> range(double from, double to, double by) {
  std::vector<double> out;
  for (double v = from; v <= to + 1e-9; v += by) out.push_back(v);
  return out;
}

const Bins kTheo{{1000, 2000, 3000, 4000, 5000}};
const Bins kHours{{1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 8760}};
const Bins kWsa{{0, 5e-4, 1e-3, 5e-3, .01, .02, .04, .06, .08, .1, .2, 1.0, 1.04}};
const Bins kNoNiche{range(0, 100, 5)};
const Bins kNiche{range(0, 30, 2)};
const Bins kFuel{range(1000, 7000, 1000)};
const Bins kCo2{{2000, 3000, 4000, 5000, 6000, 8000, 10000, 12000, 14000, 16000, 18000, 20000,
                 22000, 24000}};
const Bins kNstm{{0, 10, 20, 30, 40, 50, 100}};
const Bins kRiskWsa{{0, 25, 50, 100, 500, 1000, 5000, 10000, 15000, 20000, 25000, 30000, 35000,
                     40000, 45000, 50000, 55000}};
const Bins kRiskNiche{{0, 25, 50, 100, 500, 1000, 5000, 10000, 15000, 20000, 25000, 30000, 35000,
                       40000, 45000}};
const Bins kEcotox{{0, 0, 25, 50, 100, 500, 1000, 5000, 10000, 15000, 20000, 25000, 30000, 35000,
                    40000, 45000}};
const double kNisValues[] = {1, 3, 7, 9, 10, 15, 17, 18, 30, 31, 32, 33, 36, 53};

std::vector<double> column(const Network& n, const VarId& node,
                           std::map<VarId, std::size_t> parents) {
  const auto& f = n.cpt(node)->factor;
  std::vector<double> out;
  for (std::size_t s = 0; s < f.cards().back(); ++s) {
    parents[node] = s;
    out.push_back(cell(f, parents));
  }
  return out;
}

}  // namespace

std::map<std::string, double> closed_form_utilities(const Network& n, const bfdst::ModelParams& p,
                                                    const LockSet& d) {
  namespace nd = bfdst::node;
  const std::size_t ship = d.at(nd::ShipType), theo = d.at(nd::TheoreticalFuel),
                    fuel = d.at(nd::FuelType), hours = d.at(nd::AnnualHours),
                    route = d.at(nd::Routes), time = d.at(nd::TimeSinceCoating),
                    coating = d.at(nd::CoatingType), iwc = d.at(nd::IWCtimes),
                    method = d.at(nd::IWCmethodPast), off = d.at(nd::OffHire),
                    mode = d.at(nd::IWCcollect);
  const bool heavy = fuel == 1;
  const double price = heavy ? p.econ.fuel_price_heavy : p.econ.fuel_price_light;
  const double co2f = heavy ? p.emis.co2_heavy : p.emis.co2_light;
  const double iwc_times[] = {0, 2, 6, 12};
  const double coat_price[] = {30, 20, 50};

  const auto pw = column(n, nd::WSA, {{nd::ShipType, ship}});
  const std::map<VarId, std::size_t> fouling_parents{
      {nd::CoatingType, coating}, {nd::TimeSinceCoating, time}, {nd::IWCtimes, iwc}};
  const auto pavg = column(n, nd::BiofoulingAvg, fouling_parents);
  const auto pmax = column(n, nd::BiofoulingMax, fouling_parents);
  const auto pnis = column(n, nd::NISvalue, {{nd::Routes, route}});

  std::map<std::string, double> u;
  for (std::size_t a = 0; a < 6; ++a) {
    const double real = kFuel.mid(kFuel.bin(kTheo.mid(theo) * (1.0 + p.drag.increase[a])));
    const double co2 = kCo2.mid(kCo2.bin(real * co2f));
    u["FuelCostHour"] += pavg[a] * (-real / 1000.0 * price);
    u["FuelCostYear"] += pavg[a] * (-real / 1000.0 * price * kHours.mid(hours));
    u["CO2Hour"] += pavg[a] * -co2;
    u["CO2Year"] += pavg[a] * -co2 * kHours.mid(hours);
  }
  const double peak = method == 1 ? p.emis.peak_cu_hard : p.emis.peak_cu_soft;
  const double nf = p.risk.niche_fraction[ship];
  for (std::size_t w = 0; w < kWsa.size(); ++w) {
    const double km2 = kWsa.mid(w);
    const double m2 = km2 * 1e6;
    u["IWCCost"] += pw[w] * (mode == 2 ? 0.0 : hand::iwc_cost(m2, iwc_times[iwc], mode == 1,
                                                               static_cast<double>(off)));
    u["CoatingCost"] += pw[w] * hand::coating_cost(coat_price[coating], m2);
    const double copper = coating == 1 ? hand::copper_kg_per_year(km2, iwc_times[iwc], peak) : 0.0;
    u["EcotoxRisk"] += pw[w] * -kEcotox.mid(kEcotox.bin(copper));
    const double hull = kNoNiche.mid(kNoNiche.bin(km2 * 100.0 * (1.0 - nf)));
    const double niche = kNiche.mid(kNiche.bin(km2 * 100.0 * nf));
    for (std::size_t m = 0; m < 6; ++m) {
      const double pft[2] = {m <= 2 ? 1.0 : (m == 3 ? 0.5 : 0.0), m <= 2 ? 0.0 : (m == 3 ? 0.5 : 1.0)};
      for (std::size_t k = 0; k < 14; ++k) {
        const double w_risk = kRiskWsa.mid(kRiskWsa.bin(kNisValues[k] * kNstm.mid(m) * hull));
        const double n_risk = kRiskNiche.mid(kRiskNiche.bin(kNisValues[k] * kNstm.mid(m) * niche * 2.6));
        for (std::size_t ft = 0; ft < 2; ++ft) {
          const double mult = p.risk.nis_multiplier[ft][mode];
          u["NISRisk"] += pw[w] * pmax[m] * pnis[k] * pft[ft] * -p.risk.nis_scale * (w_risk + n_risk) * mult;
        }
      }
    }
  }
  u["SedimentRisk"] = coating == 1 ? (p.sediment_high[route] ? -100.0 : -50.0) : 0.0;
  return u;
}

}  // namespace oracle
