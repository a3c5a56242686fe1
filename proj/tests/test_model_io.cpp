#include <filesystem>
#include <fstream>
#include <sstream>

#include "bfdst/bundle.hpp"
#include "bfdst/model_io.hpp"
#include "doctest.h"

using namespace bfdst;
namespace fs = std::filesystem;

namespace {

const Bundle& bundle() {
  static const Bundle b = load_bundle(BFDST_SOURCE_DIR "/data/bundle");
  return b;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("bfdst_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("network JSON round trip") {
  const auto& n = bundle().network;
  const auto back = network_from_json(network_to_json(n));
  CHECK(serialize_network(back) == serialize_network(n));
  CHECK(model_version(back) == model_version(n));
  CHECK(model_version(n).size() == 16);
  CHECK(back.cpt(node::BiofoulingAvg)->reconstructed == n.cpt(node::BiofoulingAvg)->reconstructed);
  CHECK(back.constraints().size() == 1);

  const auto dir = scratch("roundtrip");
  save_network_file(n, (dir / "net.json").string());
  CHECK(model_version(load_network_file((dir / "net.json").string())) == model_version(n));
  fs::remove_all(dir);
}

TEST_CASE("bundled network equals a fresh build from the parameter files") {
  CHECK(bundle().network_from_file);
  CHECK(serialize_network(build_from_params(bundle())) == serialize_network(bundle().network));
}

TEST_CASE("model version tracks content") {
  auto n = bundle().network;
  const auto v = model_version(n);
  CHECK(model_version(n) == v);
  auto table = n.utility(util::SedimentRisk)->table;
  table[1] = -51.0;
  n.replace_utility_table(util::SedimentRisk, table);
  CHECK(model_version(n) != v);
}

TEST_CASE("malformed network documents") {
  auto doc = network_to_json(bundle().network);
  SUBCASE("wrong format tag") {
    doc["format"] = "other/9";
    CHECK_THROWS_AS(network_from_json(doc), StructuralError);
  }
  SUBCASE("unknown state-space type") {
    doc["variables"][0]["states"]["type"] = "fuzzy";
    CHECK_THROWS_AS(network_from_json(doc), StructuralError);
  }
  SUBCASE("missing file") { CHECK_THROWS(load_network_file("/nonexistent/net.json")); }
}

TEST_CASE("state space JSON") {
  for (const auto& s : {StateSpace::labeled({"a", "b"}), StateSpace::numbered({1, 3}),
                        StateSpace::interval({0, 0, 25})}) {
    const auto back = state_space_from_json(state_space_to_json(s));
    CHECK(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(back.label(i) == s.label(i));
  }
}

TEST_CASE("parameter files") {
  SUBCASE("comments and spacing") {
    std::istringstream in("# c\n a = 1 \n\nb=2 # trailing\n");
    const auto kv = parse_key_values(in);
    CHECK(kv.at("a") == "1");
    CHECK(kv.at("b") == "2");
  }
  SUBCASE("duplicate key reports the line") {
    std::istringstream in("a = 1\na = 2\n");
    try {
      parse_key_values(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("unknown key") {
    std::istringstream in("iwc_price_per_m2 = 3\nspeed = 12\n");
    EconParams p;
    CHECK_THROWS_WITH_AS(load_econ(in, p), doctest::Contains("speed"), BuildError);
  }
  SUBCASE("bad number") {
    std::istringstream in("iwc_price_per_m2 = 3x\n");
    EconParams p;
    CHECK_THROWS_AS(load_econ(in, p), BuildError);
  }
  SUBCASE("loaded parameters equal the defaults") {
    const auto p = load_params(BFDST_SOURCE_DIR "/data/bundle");
    const auto d = ModelParams::defaults();
    CHECK(p.econ.fuel_price_heavy == d.econ.fuel_price_heavy);
    CHECK(p.emis.co2_heavy == d.emis.co2_heavy);
    CHECK(p.drag.increase == d.drag.increase);
    CHECK(p.risk.niche_fraction == d.risk.niche_fraction);
    CHECK(p.sediment_high == d.sediment_high);
    REQUIRE(p.routes.size() == d.routes.size());
    for (std::size_t i = 0; i < p.routes.size(); ++i) {
      CHECK(p.routes[i].id == d.routes[i].id);
      CHECK(p.routes[i].ice == d.routes[i].ice);
    }
  }
}

TEST_CASE("route catalogs") {
  const auto routes = ModelParams::default_routes();
  SUBCASE("unknown area") {
    std::istringstream in("route\tdeparture\tarrival\tice\n1A\tNS\tMars\tno\n");
    CHECK_THROWS_AS(parse_routes(in), BuildError);
  }
  SUBCASE("sediment must cover every route") {
    std::istringstream in("route\tclass\n1A\thigh\n");
    CHECK_THROWS_AS(parse_sediment(in, routes), BuildError);
  }
  SUBCASE("NIS rows sum to one and round trip") {
    const auto& nis = bundle().nis;
    REQUIRE(nis.size() == 20);
    for (const auto& d : nis) {
      double s = 0;
      for (double x : d.mapped) s += x;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
    std::stringstream buf;
    write_nis_routes(buf, nis);
    const auto back = parse_nis_routes(buf);
    REQUIRE(back.size() == nis.size());
    for (std::size_t i = 0; i < nis.size(); ++i) {
      CHECK(back[i].route == nis[i].route);
      CHECK(back[i].mapped == nis[i].mapped);
    }
  }
  SUBCASE("a row that does not sum to one") {
    std::istringstream in(
        "route\tp_1\tp_3\tp_7\tp_9\tp_10\tp_15\tp_17\tp_18\tp_30\tp_31\tp_32\tp_33\tp_36\tp_53\n"
        "1A\t0.5\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\n");
    CHECK_THROWS_AS(parse_nis_routes(in), BuildError);
  }
}

TEST_CASE("with_nis swaps only the NIS table") {
  const auto& n = bundle().network;
  std::vector<RouteNisDistribution> nis;
  for (const auto& r : bundle().params.routes) nis.push_back(point_mass_distribution(r.id, 0));
  const auto m = with_nis(n, nis);
  CHECK(model_version(m) != model_version(n));
  CHECK(m.cpt(node::WSA)->factor.data() == n.cpt(node::WSA)->factor.data());
  const auto& f = m.cpt(node::NISvalue)->factor;
  for (std::size_t r = 0; r < 20; ++r) CHECK(f.data()[r * 14] == 1.0);
  nis.pop_back();
  CHECK_THROWS_AS(with_nis(n, nis), BuildError);
}

TEST_CASE("bundle directory errors") {
  CHECK_THROWS(load_bundle("/nonexistent/bundle"));
  const auto dir = scratch("partial");
  for (const auto& e : fs::directory_iterator(BFDST_SOURCE_DIR "/data/bundle")) {
    if (e.path().filename() != "network.json") fs::copy(e.path(), dir / e.path().filename());
  }
  const auto b = load_bundle(dir.string());
  CHECK_FALSE(b.network_from_file);
  CHECK(model_version(b.network) == model_version(bundle().network));
  std::ofstream(dir / "econ.txt", std::ios::app) << "mystery = 1\n";
  CHECK_THROWS_AS(load_bundle(dir.string()), BuildError);
  fs::remove_all(dir);
}
