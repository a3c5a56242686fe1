#include <cmath>
#include <random>
#include <set>

#include "bfdst/bundle.hpp"
#include "bfdst/dst_model.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bfdst;

namespace {

const Bundle& bundle() {
  static const Bundle b = load_bundle(BFDST_SOURCE_DIR "/data/bundle");
  return b;
}

const Network& model() { return bundle().network; }

std::size_t state_of(const Network& n, const VarId& id, const std::string& label) {
  const auto s = n.variable(id).states.find(label);
  REQUIRE(s.has_value());
  return *s;
}

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

std::vector<double> cdf(const std::array<double, 6>& p) {
  std::vector<double> out;
  double s = 0.0;
  for (double x : p) out.push_back(s += x);
  return out;
}

LockSet tanker(std::size_t collect) {
  const auto& n = model();
  return {{node::ShipType, state_of(n, node::ShipType, "tanker")},
          {node::FuelType, state_of(n, node::FuelType, "heavy")},
          {node::CoatingType, state_of(n, node::CoatingType, "hard")},
          {node::Routes, state_of(n, node::Routes, "2A")},
          {node::IWCcollect, collect}};
}

}  // namespace

TEST_CASE("model structure") {
  const auto& n = model();
  CHECK(n.count(VarKind::decision) == 11);
  CHECK(n.count(VarKind::chance) == 14);
  CHECK(n.utilities().size() == 9);
  CHECK(n.variables().size() + n.utilities().size() == 34);
  CHECK(n.edge_count() == 51);
  CHECK(n.variable(node::Routes).states.size() == 20);
  CHECK(validate_biofouling_model(n).empty());

  CHECK(n.parents(node::FuelReal) == std::vector<VarId>{node::TheoreticalFuel, node::BiofoulingAvg});
  CHECK(n.parents(node::PotentialRiskWSA) ==
        std::vector<VarId>{node::NISvalue, node::WSAnoNiche, node::BiofoulingMax});
  CHECK(n.parents(node::EcotoxPressure) ==
        std::vector<VarId>{node::IWCmethodPast, node::IWCtimes, node::CopperEmission, node::WSA});
  CHECK(n.utility(util::NISRisk)->parents ==
        std::vector<VarId>{node::PotentialRiskWSA, node::PotentialRiskNiche, node::IWCcollect,
                           node::FoulingType});
  CHECK(n.utility(util::IWCCost)->parents ==
        std::vector<VarId>{node::IWCtimes, node::WSA, node::OffHire, node::IWCcollect});

  SUBCASE("a missing node or count mismatch is reported") {
    Network m;
    m.add_variable({node::ShipType, "Ship", VarKind::decision, StateSpace::labeled({"a"}), ""});
    const auto ds = validate_biofouling_model(m);
    std::set<std::string> codes;
    for (const auto& d : ds) codes.insert(d.code);
    CHECK(codes.contains("missing_node"));
    CHECK(codes.contains("node_counts"));
  }
}

TEST_CASE("utility tables hold the published values") {
  const auto& n = model();
  CHECK(n.utility(util::EcotoxRisk)->table ==
        std::vector<double>{0, -12.5, -37.5, -75, -300, -750, -3000, -7500, -12500, -17500, -22500,
                            -27500, -32500, -37500, -42500});
  CHECK(n.utility(util::CO2Hour)->table ==
        std::vector<double>{-2500, -3500, -4500, -5500, -7000, -9000, -11000, -13000, -15000,
                            -17000, -19000, -21000, -23000});
  // Rows: SedimentCu low/high; columns: hard, biocidal, fouling release.
  CHECK(n.utility(util::SedimentRisk)->table == std::vector<double>{0, -50, 0, 0, -100, 0});
  const auto& wsa = n.variable(node::WSA).states;
  REQUIRE(wsa.size() == 12);
  CHECK(wsa.bounds(0).second == 5e-4);
  CHECK(wsa.bounds(11) == std::pair<double, double>{1.0, 1.04});
  std::vector<double> nis;
  for (std::size_t i = 0; i < n.variable(node::NISvalue).states.size(); ++i) {
    nis.push_back(n.variable(node::NISvalue).states.value(i));
  }
  CHECK(nis == std::vector<double>{1, 3, 7, 9, 10, 15, 17, 18, 30, 31, 32, 33, 36, 53});
}

TEST_CASE("biofouling columns") {
  const auto& n = model();
  SUBCASE("IWC = 0 matches the published column argmax") {
    const char* want[5][3] = {{"0-10", "0-10", "0-10"},
                              {"50-100", "0-10", "0-10"},
                              {"50-100", "10-20", "0-10"},
                              {"50-100", "40-50", "0-10"},
                              {"50-100", "50-100", "0-10"}};
    for (std::size_t t = 0; t < 5; ++t) {
      for (std::size_t c = 0; c < 3; ++c) {
        if (c == 2) continue;  // fouling release is always clean; checked below
        const auto r = query(n, {{node::TimeSinceCoating, t}, {node::CoatingType, c},
                                 {node::IWCtimes, 0}});
        REQUIRE(r.consistent);
        const auto& p = r.posterior(node::BiofoulingAvg)->probs;
        CHECK(n.variable(node::BiofoulingAvg).states.label(argmax(p)) == want[t][c]);
        CHECK(p[argmax(p)] == doctest::Approx(1.0));
      }
    }
  }
  SUBCASE("two cleanings") {
    for (std::size_t c = 0; c < 3; ++c) CHECK(biofouling_cpt(static_cast<Coating>(c), 0, 1).probs[0] == 1.0);
    CHECK(biofouling_cpt(Coating::hard, 1, 1).probs[0] == 1.0);
  }
  SUBCASE("fouling release stays clean") {
    for (std::size_t t = 0; t < 5; ++t) {
      for (std::size_t i = 0; i < 4; ++i) CHECK(biofouling_cpt(Coating::fouling_release, t, i).probs[0] == 1.0);
    }
  }
  SUBCASE("more cleaning and less time never shift mass upward") {
    for (auto c : {Coating::hard, Coating::biocidal}) {
      for (std::size_t t = 0; t < 5; ++t) {
        for (std::size_t i = 0; i < 4; ++i) {
          const auto here = cdf(biofouling_cpt(c, t, i).probs);
          if (i + 1 < 4) {
            const auto more = cdf(biofouling_cpt(c, t, i + 1).probs);
            for (std::size_t s = 0; s < 6; ++s) CHECK(more[s] >= here[s] - 1e-12);
          }
          if (t + 1 < 5) {
            const auto later = cdf(biofouling_cpt(c, t + 1, i).probs);
            for (std::size_t s = 0; s < 6; ++s) CHECK(later[s] <= here[s] + 1e-12);
          }
        }
      }
    }
  }
  SUBCASE("reconstructed columns are flagged") {
    CHECK_FALSE(biofouling_cpt(Coating::biocidal, 3, 0).reconstructed);
    CHECK_FALSE(biofouling_cpt(Coating::hard, 1, 1).reconstructed);
    CHECK(biofouling_cpt(Coating::biocidal, 1, 1).reconstructed);
    CHECK(biofouling_cpt(Coating::hard, 4, 3).reconstructed);
    const auto* cpt = n.cpt(node::BiofoulingAvg);
    REQUIRE(cpt->reconstructed.size() == cpt->factor.data().size());
    CHECK(n.cpt(node::BiofoulingMax)->factor.data() == cpt->factor.data());
  }
  CHECK_THROWS_AS(biofouling_cpt(Coating::hard, 5, 0), RangeError);
}

TEST_CASE("small CPTs") {
  const auto& n = model();
  CHECK(n.cpt(node::CopperEmission)->factor.data() == std::vector<double>{1, 0, 0, 1, 1, 0});
  CHECK(n.cpt(node::FoulingType)->factor.data() ==
        std::vector<double>{1, 0, 1, 0, 1, 0, 0.5, 0.5, 0, 1, 0, 1});
}

TEST_CASE("WSA rows") {
  for (std::size_t s = 0; s < 6; ++s) {
    const auto row = wsa_cpt(s);
    REQUIRE(row.size() == 12);
    double sum = 0.0;
    for (double x : row) sum += x;
    CHECK(std::abs(sum - 1.0) <= 1e-6);
  }
  CHECK(wsa_cpt(0)[0] == 1.58873e-4);
  CHECK(wsa_cpt(0)[2] == 0.34364);
  CHECK_THROWS_AS(wsa_cpt(6), RangeError);

  SUBCASE("sampling the stored CPT recovers each row") {
    const auto& f = model().cpt(node::WSA)->factor;
    std::mt19937_64 rng(31);
    const int draws = 200000;
    for (std::size_t s = 0; s < 6; ++s) {
      const std::vector<double> row(f.data().begin() + s * 12, f.data().begin() + (s + 1) * 12);
      std::discrete_distribution<std::size_t> d(row.begin(), row.end());
      std::vector<int> hits(12, 0);
      for (int k = 0; k < draws; ++k) ++hits[d(rng)];
      const auto raw = wsa_cpt(s);
      for (std::size_t i = 0; i < 12; ++i) {
        const double se = std::sqrt(raw[i] * (1 - raw[i]) / draws);
        CHECK(std::abs(hits[i] / double(draws) - raw[i]) <= 5 * se + 1e-5);
      }
    }
  }
}

TEST_CASE("formula spot values") {
  const EconParams econ;
  const EmissionParams e;
  CHECK(ecotox_pressure_value(0.01, Coating::biocidal, 0, IwcMethod::soft, e) == doctest::Approx(255.5).epsilon(1e-12));
  CHECK(ecotox_pressure_value(0.01, Coating::biocidal, 2, IwcMethod::hard, e) == doctest::Approx(280.7).epsilon(1e-12));
  CHECK(ecotox_pressure_value(0.01, Coating::hard, 2, IwcMethod::hard, e) == 0.0);
  CHECK(oracle::hand::copper_kg_per_year(0.01, 2, 12.0) ==
        doctest::Approx(ecotox_pressure_value(0.01, Coating::biocidal, 2, IwcMethod::soft, e)));
  const auto& eco = model().variable(node::EcotoxPressure).states;
  CHECK(eco.bounds(eco.bin(255.5)) == std::pair<double, double>{100, 500});

  CHECK(iwc_cost_value(0.01, 2, CollectMode::no_collect, 0, econ) == doctest::Approx(-24000));
  CHECK(iwc_cost_value(0.01, 2, CollectMode::collect, 0, econ) == doctest::Approx(-36000));
  CHECK(iwc_cost_value(0.01, 2, CollectMode::no_iwc, 2, econ) == 0.0);
  CHECK(iwc_cost_value(0.01, 2, CollectMode::no_collect, 1, econ) == doctest::Approx(-64000));
  CHECK(coating_cost_value(0.01, Coating::biocidal, econ) == doctest::Approx(-40000));
  CHECK(coating_cost_value(0.01, Coating::hard, econ) == doctest::Approx(-60000));
  CHECK(coating_cost_value(0.01, Coating::fouling_release, econ) == doctest::Approx(-100000));

  const auto f = fuel_chain_values(3000, 0.02, FuelType::heavy, 5000, econ, e);
  CHECK(f.real_fuel == doctest::Approx(3060));
  CHECK(f.co2_per_hour == doctest::Approx(3000 * 1.02 * 3.114));
  CHECK(f.cost_per_hour == doctest::Approx(-3.06 * 450));
  CHECK(f.cost_per_year == doctest::Approx(-3.06 * 450 * 5000));
  CHECK(f.co2_per_year == doctest::Approx(3000 * 1.02 * 3.114 * 5000));

  CHECK(potential_risk_value(1, 5, 2, false, e) == 10.0);
  CHECK(potential_risk_value(1, 5, 2, true, e) == doctest::Approx(26.0));
  const auto& prw = model().variable(node::PotentialRiskWSA).states;
  CHECK(prw.bin(potential_risk_value(53, 75, 100, false, e)) == prw.size() - 1);

  CHECK(sediment_risk_value(true, Coating::biocidal) == -100.0);
  CHECK(sediment_risk_value(false, Coating::biocidal) == -50.0);
  CHECK(sediment_risk_value(true, Coating::hard) == 0.0);
  CHECK(nis_risk_value(100, 50, 0, CollectMode::collect, RiskParams{}) == doctest::Approx(-0.0375));
}

TEST_CASE("parameter validation") {
  auto p = ModelParams::defaults();
  p.risk.nis_multiplier[0] = {1.0, 2.0, 0.5};
  CHECK_THROWS_AS(build_network(p, bundle().nis), BuildError);
  p = ModelParams::defaults();
  p.drag.increase[0] = 0.1;
  CHECK_THROWS_AS(build_network(p, bundle().nis), BuildError);
  p = ModelParams::defaults();
  auto nis = bundle().nis;
  nis.pop_back();
  CHECK_THROWS_WITH_AS(build_network(p, nis), doctest::Contains("10B"), BuildError);
}

TEST_CASE("locked queries match the closed-form oracle") {
  const auto& n = model();
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int t = 0; t < 12; ++t) {
    LockSet locks;
    for (const auto& v : n.variables()) {
      if (v.kind == VarKind::decision) locks[v.id] = rng() % v.states.size();
    }
    const auto r = query(n, locks);
    if (!r.consistent) continue;
    ++checked;
    const auto want = oracle::closed_form_utilities(n, bundle().params, locks);
    for (const auto& u : r.utilities) {
      INFO(u.id);
      CHECK(std::abs(u.expected - want.at(u.id)) <= 1e-9 * std::max(1.0, std::abs(want.at(u.id))));
    }
  }
  CHECK(checked >= 6);
}

TEST_CASE("locking a chance node") {
  const auto r = query(model(), {{node::EcotoxPressure, 2}});
  REQUIRE(r.consistent);
  CHECK(*r.utility(util::EcotoxRisk) == -37.5);
}

TEST_CASE("coating admissibility follows ice") {
  const auto& n = model();
  const auto& routes = bundle().params.routes;
  for (std::size_t i = 0; i < routes.size(); ++i) {
    const auto r = query(n, {{node::Routes, i}, {node::CoatingType, 2}});
    CHECK(r.consistent == !routes[i].ice);
    if (!r.consistent) CHECK(r.reason.find("ice") != std::string::npos);
  }
}

TEST_CASE("tanker on route 2A") {
  const auto& n = model();
  const auto collect = query(n, tanker(1));
  const auto no_collect = query(n, tanker(0));
  const auto no_iwc = query(n, tanker(2));
  CHECK(*collect.utility(util::IWCCost) == doctest::Approx(-128450.25).epsilon(1e-7));
  CHECK(*no_collect.utility(util::IWCCost) == doctest::Approx(-118966.83).epsilon(1e-7));
  CHECK(*no_iwc.utility(util::IWCCost) == 0.0);
  CHECK(*collect.utility(util::NISRisk) > *no_iwc.utility(util::NISRisk));
  CHECK(*no_iwc.utility(util::NISRisk) > *no_collect.utility(util::NISRisk));
  for (const auto* r : {&collect, &no_collect, &no_iwc}) {
    for (const auto& u : r->utilities) CHECK(u.expected <= 0.0);
    CHECK(*r->utility(util::EcotoxRisk) == 0.0);
    CHECK(*r->utility(util::SedimentRisk) == 0.0);
  }
}
