#pragma once
// Hierarchical salinity model and per-route survivor counts of
// non-indigenous species.
//
//   x_ik ~ N(mu_xk, C mu_xk)      y_ik ~ N(mu_yk, C mu_yk)
//   mu_xk ~ N(nu_x, sigma_x2)     mu_yk ~ N(nu_y, sigma_y2)
//   C ~ LogNormal(mean, sd), sigma2 ~ U(0, 10), nu ~ U(0, 35)

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfdst {

enum class Area { GoB, GoF, GoR, BP, SWB, NS };
inline constexpr std::size_t kAreaCount = 6;
inline constexpr std::array<Area, kAreaCount> kAreas{Area::GoB, Area::GoF, Area::GoR,
                                                    Area::BP,  Area::SWB, Area::NS};

std::string area_code(Area a);
std::string area_name(Area a);
// Accepts the short code (case-insensitive) or the full name.
std::optional<Area> parse_area(std::string_view s);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpeciesRecord {
  std::string name;
  double sal_min = 0.0;
  double sal_max = 0.0;
  std::array<bool, kAreaCount> present{};

  bool present_in(Area a) const { return present[static_cast<std::size_t>(a)]; }
};

std::vector<SpeciesRecord> parse_species_table(std::istream& in);
std::vector<SpeciesRecord> load_species_table(const std::string& path);

struct SalinityObservation {
  Area area = Area::GoB;
  int month = 0;
  double x_min = 0.0;
  double y_max = 0.0;
};

std::vector<SalinityObservation> parse_salinity(std::istream& in);
std::vector<SalinityObservation> load_salinity(const std::string& path);

struct PriorConfig {
  double c_mean = 0.1;
  double c_sd = 0.1;
  double sigma_x2_lo = 0.0, sigma_x2_hi = 10.0;
  double sigma_y2_lo = 0.0, sigma_y2_hi = 10.0;
  double nu_x_lo = 0.0, nu_x_hi = 35.0;
  double nu_y_lo = 0.0, nu_y_hi = 35.0;

  // Parameters of log C.
  double log_c_mu() const;
  double log_c_sd() const;
  void validate() const;
};

struct McmcConfig {
  std::int64_t iterations = 50000;
  int chains = 3;
  std::int64_t thin = 10;
  std::int64_t burn_in = 20000;
  std::uint64_t seed = 1;
  bool parallel = true;

  static McmcConfig desk() { return {}; }
  static McmcConfig reference_protocol() { return {500000, 3, 100, 200000, 1, true}; }

  // Iteration i (1-based) is kept when i > burn_in and (i - burn_in) % thin == 0.
  std::int64_t retained_per_chain() const;
  std::int64_t retained_total() const { return retained_per_chain() * chains; }
  void validate() const;
};

struct Draw {
  int chain = 0;
  std::int64_t iteration = 0;
  std::array<double, kAreaCount> mu_x{};
  std::array<double, kAreaCount> mu_y{};
  double c = 0.0;
  double sigma_x2 = 0.0;
  double sigma_y2 = 0.0;
  double nu_x = 0.0;
  double nu_y = 0.0;
};

struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double rhat = 0.0;
};

struct PosteriorSamples {
  std::vector<Draw> draws;  // ordered by (chain, iteration)
  std::vector<ParamSummary> summary;
  std::vector<double> acceptance;  // per parameter, after burn-in, summary order
  bool flagged = false;            // some split R-hat above 1.1
  double mu_order_violation = 0.0;  // fraction of (draw, area) with mu_x > mu_y

  double max_rhat() const;
  const ParamSummary* param(const std::string& name) const;
};

// Parameter names in summary order: mu_x[GoB..NS], mu_y[GoB..NS], C,
// sigma_x2, sigma_y2, nu_x, nu_y.
std::vector<std::string> parameter_names();
std::vector<double> parameter_vector(const Draw& d);

PosteriorSamples fit_salinity_model(const std::vector<SalinityObservation>& obs,
                                    const PriorConfig& prior, const McmcConfig& mcmc);

// Split R-hat over equal-length chains.
double split_rhat(const std::vector<std::vector<double>>& chains);

// One draw per line, tab separated, header first.
void write_posterior(std::ostream& out, const PosteriorSamples& post);

enum class SurvivalRule { containment, overlap };

std::string to_string(SurvivalRule r);
std::optional<SurvivalRule> parse_survival_rule(std::string_view s);

// Containment: sal_min <= mu_x[arrival] and mu_y[arrival] <= sal_max.
// Overlap: the two intervals intersect.
bool species_survival(const Draw& d, const SpeciesRecord& s, Area arrival,
                      SurvivalRule rule = SurvivalRule::containment);

inline constexpr std::array<double, 14> kNisValueStates{
    1, 3, 7, 9, 10, 15, 17, 18, 30, 31, 32, 33, 36, 53};

// Index of the nearest NIS-value state, ties to the smaller state.
std::size_t nis_state_for_count(double count);

struct Route {
  std::string id;
  Area departure = Area::NS;
  Area arrival = Area::NS;
  bool ice = false;
};

struct RouteNisDistribution {
  std::string route;
  std::vector<double> counts;  // over 0..species.size()
  std::vector<double> mapped;  // over kNisValueStates
  std::string warning;

  double mean_count() const;
  double mean_mapped() const;
};

RouteNisDistribution route_nis_distribution(
    const Route& route, const std::vector<SpeciesRecord>& species,
    const PosteriorSamples& post, SurvivalRule rule = SurvivalRule::containment);

// Point mass on a single NIS-value state.
RouteNisDistribution point_mass_distribution(const std::string& route,
                                             std::size_t state);

}  // namespace bfdst
