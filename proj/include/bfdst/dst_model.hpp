#pragma once
// The ship biofouling influence diagram: 11 decisions, 14 chance nodes and
// 9 utilities, with deterministic CPTs built from cost and emission rules.

#include <array>
#include <string>
#include <vector>

#include "bfdst/network.hpp"
#include "bfdst/nis_model.hpp"

namespace bfdst {

enum class Coating { hard, biocidal, fouling_release };
enum class FuelType { light, heavy };
enum class IwcMethod { soft, hard };
enum class CollectMode { no_collect, collect, no_iwc };

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EconParams {
  std::array<double, 3> coating_cost_per_m2{30.0, 20.0, 50.0};  // Coating order
  bool application_included = true;
  double application_cost_per_m2 = 2.0;
  double coating_life_years = 5.0;
  double iwc_price_per_m2 = 3.0;
  double cleaned_fraction = 0.4;
  double collect_surcharge = 0.5;
  double off_hire_per_day = 20000.0;
  double fuel_price_light = 650.0;  // €/t
  double fuel_price_heavy = 450.0;  // €/t

  double coating_price(Coating c) const;
  void validate() const;
};

struct EmissionParams {
  double baseline_cu = 7.0;   // µg/cm²/day, biocidal coating
  double peak_cu_soft = 12.0;
  double peak_cu_hard = 25.0;
  double peak_days = 7.0;     // per cleaning
  double co2_heavy = 3.114;   // t CO2 per t fuel
  double co2_light = 3.206;
  double niche_multiplier = 2.6;
  double sediment_threshold = 52.0;  // mg/kg

  void validate() const;
};

struct DragModel {
  // Fractional fuel penalty per BiofoulingAvg state.
  std::array<double, 6> increase{0.02, 0.04, 0.07, 0.11, 0.16, 0.25};
  void validate() const;
};

struct RiskParams {
  double nis_scale = 1e-3;
  // [fouling type soft/hard][IWC-collect mode]
  std::array<std::array<double, 3>, 2> nis_multiplier{{{2.0, 0.25, 1.0}, {2.0, 0.25, 1.0}}};
  // Share of WSA made up by niche areas, per ShipType state.
  std::array<double, 6> niche_fraction{0.08, 0.10, 0.10, 0.12, 0.12, 0.07};
  void validate() const;
};

struct ModelParams {
  EconParams econ;
  EmissionParams emis;
  DragModel drag;
  RiskParams risk;
  std::vector<Route> routes;
  std::vector<bool> sediment_high;  // per route

  static std::vector<Route> default_routes();
  static std::vector<bool> default_sediment();
  static ModelParams defaults();
};

namespace node {
inline const VarId ShipType = "ShipType";
inline const VarId TheoreticalFuel = "TheoreticalFuel";
inline const VarId FuelType = "FuelType";
inline const VarId AnnualHours = "AnnualHours";
inline const VarId Routes = "Routes";
inline const VarId TimeSinceCoating = "TimeSinceCoating";
inline const VarId CoatingType = "CoatingType";
inline const VarId IWCtimes = "IWCtimes";
inline const VarId IWCmethodPast = "IWCmethodPast";
inline const VarId OffHire = "OffHire";
inline const VarId IWCcollect = "IWCcollect";
inline const VarId BiofoulingAvg = "BiofoulingAvg";
inline const VarId BiofoulingMax = "BiofoulingMax";
inline const VarId WSA = "WSA";
inline const VarId WSAnoNiche = "WSAnoNiche";
inline const VarId NicheAreas = "NicheAreas";
inline const VarId FuelReal = "FuelReal";
inline const VarId CO2hr = "CO2hr";
inline const VarId FoulingType = "FoulingType";
inline const VarId NISvalue = "NISvalue";
inline const VarId PotentialRiskWSA = "PotentialRiskWSA";
inline const VarId PotentialRiskNiche = "PotentialRiskNiche";
inline const VarId CopperEmission = "CopperEmission";
inline const VarId EcotoxPressure = "EcotoxPressure";
inline const VarId SedimentCu = "SedimentCu";
}  // namespace node

namespace util {
inline const std::string FuelCostHour = "FuelCostHour";
inline const std::string FuelCostYear = "FuelCostYear";
inline const std::string CO2Hour = "CO2Hour";
inline const std::string CO2Year = "CO2Year";
inline const std::string IWCCost = "IWCCost";
inline const std::string CoatingCost = "CoatingCost";
inline const std::string NISRisk = "NISRisk";
inline const std::string EcotoxRisk = "EcotoxRisk";
inline const std::string SedimentRisk = "SedimentRisk";
}  // namespace util

inline constexpr std::array<double, 4> kIwcTimes{0, 2, 6, 12};
inline constexpr std::array<double, 3> kOffHireDays{0, 1, 2};

// Unit conversions from km².
inline double km2_to_m2(double a) { return a * 1e6; }
inline double km2_to_hm2(double a) { return a * 100.0; }
inline double km2_to_cm2(double a) { return a * 1e10; }

// kg of copper per year.
double ecotox_pressure_value(double wsa_km2, Coating coating, double iwc_times,
                             IwcMethod method, const EmissionParams& e);

// €/year, at most zero.
double iwc_cost_value(double wsa_km2, double iwc_times, CollectMode mode,
                      double off_hire_days, const EconParams& p);
double coating_cost_value(double wsa_km2, Coating coating, const EconParams& p);

struct FuelChain {
  double real_fuel;       // kg/h
  double co2_per_hour;    // kg/h
  double cost_per_hour;   // €/h, at most zero
  double cost_per_year;   // €/year, at most zero
  double co2_per_year;    // kg/year
};

FuelChain fuel_chain_values(double theoretical, double drag_fraction, FuelType fuel,
                            double hours, const EconParams& p, const EmissionParams& e);

double potential_risk_value(double nis_value, double nstm_mid, double area_hm2,
                            bool niche, const EmissionParams& e);

double sediment_risk_value(bool high_copper, Coating coating);

// fouling_type: 0 soft, 1 hard.
double nis_risk_value(double risk_wsa_mid, double risk_niche_mid, std::size_t fouling_type,
                      CollectMode mode, const RiskParams& r);

struct BiofoulingColumn {
  std::array<double, 6> probs{};
  bool reconstructed = false;
};

// time and iwc are state indices of TimeSinceCoating and IWCtimes.
BiofoulingColumn biofouling_cpt(Coating coating, std::size_t time, std::size_t iwc);

// Distribution over the 12 WSA intervals for a ShipType state.
std::vector<double> wsa_cpt(std::size_t ship);

// Chance and decision variables with parents, in model declaration order.
struct NodeSpec {
  Variable var;
  std::vector<VarId> parents;
};
std::vector<NodeSpec> node_catalog(const ModelParams& params);

// Throws BuildError when a route lacks a NIS distribution.
Network build_network(const ModelParams& params,
                      const std::vector<RouteNisDistribution>& nis);

// validate_network plus the bundled-model checks (node set, counts).
std::vector<Diagnostic> validate_biofouling_model(const Network& n);

}  // namespace bfdst
