#include "bfdst/nis_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "bfdst/factor.hpp"

namespace bfdst {

namespace {

constexpr std::array<const char*, kAreaCount> kCodes{"GoB", "GoF", "GoR",
                                                     "BP",  "SWB", "NS"};
constexpr std::array<const char*, kAreaCount> kNames{
    "Gulf of Bothnia", "Gulf of Finland",     "Gulf of Riga",
    "Baltic Proper",   "Southwestern Baltic", "North Sea"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Tab separated when the line has a tab, otherwise comma separated.
std::vector<std::string> split_fields(const std::string& line) {
  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(trim(field));
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& what, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad " + what + " '" + s + "'", line);
  }
}

bool parse_flag(const std::string& s, std::size_t line) {
  const auto v = lower(s);
  if (v == "yes" || v == "1" || v == "true") return true;
  if (v == "no" || v == "0" || v == "false") return false;
  throw ParseError("bad presence flag '" + s + "'", line);
}

// Reads data rows, skipping blank and '#' lines, checking the header once.
template <typename Fn>
void read_table(std::istream& in, const std::vector<std::string>& header, Fn&& row) {
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fields = split_fields(t);
    if (!seen_header) {
      std::vector<std::string> got;
      for (const auto& f : fields) got.push_back(lower(f));
      if (got != header) throw ParseError("header does not match the expected columns", lineno);
      seen_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    row(fields, lineno);
  }
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

}  // namespace

std::string area_code(Area a) { return kCodes[static_cast<std::size_t>(a)]; }
std::string area_name(Area a) { return kNames[static_cast<std::size_t>(a)]; }

std::optional<Area> parse_area(std::string_view s) {
  const auto v = lower(trim(s));
  for (std::size_t i = 0; i < kAreaCount; ++i) {
    if (v == lower(kCodes[i]) || v == lower(kNames[i])) return kAreas[i];
  }
  return std::nullopt;
}

// ------------------------------------------------------------------ parsing

std::vector<SpeciesRecord> parse_species_table(std::istream& in) {
  std::vector<std::string> header{"name", "sal_min_tol", "sal_max_tol"};
  for (auto code : kCodes) header.push_back(lower(std::string("present_") + code));
  std::vector<SpeciesRecord> out;
  read_table(in, header, [&](const std::vector<std::string>& f, std::size_t line) {
    SpeciesRecord r;
    r.name = f[0];
    if (r.name.empty()) throw ParseError("empty species name", line);
    r.sal_min = parse_double(f[1], "sal_min_tol", line);
    r.sal_max = parse_double(f[2], "sal_max_tol", line);
    if (r.sal_min < 0.0) {
      throw ValidationError(r.name + ": negative minimum tolerance (line " +
                            std::to_string(line) + ")");
    }
    if (r.sal_min > r.sal_max) {
      throw ValidationError(r.name + ": sal_min_tol exceeds sal_max_tol (line " +
                            std::to_string(line) + ")");
    }
    for (std::size_t a = 0; a < kAreaCount; ++a) r.present[a] = parse_flag(f[3 + a], line);
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<SpeciesRecord> load_species_table(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_species_table(in);
}

std::vector<SalinityObservation> parse_salinity(std::istream& in) {
  std::vector<SalinityObservation> out;
  read_table(in, {"area", "month", "x_min", "y_max"},
             [&](const std::vector<std::string>& f, std::size_t line) {
               SalinityObservation o;
               auto a = parse_area(f[0]);
               if (!a) throw ParseError("unknown area '" + f[0] + "'", line);
               o.area = *a;
               o.month = static_cast<int>(parse_double(f[1], "month", line));
               o.x_min = parse_double(f[2], "x_min", line);
               o.y_max = parse_double(f[3], "y_max", line);
               if (!(0.0 <= o.x_min && o.x_min <= o.y_max && o.y_max <= 40.0)) {
                 throw ValidationError("salinity row outside 0 <= x_min <= y_max <= 40 (line " +
                                       std::to_string(line) + ")");
               }
               out.push_back(o);
             });
  return out;
}

std::vector<SalinityObservation> load_salinity(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_salinity(in);
}

// ------------------------------------------------------------------- config

double PriorConfig::log_c_sd() const {
  return std::sqrt(std::log1p((c_sd * c_sd) / (c_mean * c_mean)));
}

double PriorConfig::log_c_mu() const {
  const double s = log_c_sd();
  return std::log(c_mean) - 0.5 * s * s;
}

void PriorConfig::validate() const {
  if (!(c_mean > 0.0 && c_sd > 0.0)) throw ValidationError("C prior needs positive mean and sd");
  auto range = [](double lo, double hi, const char* what) {
    if (!(lo < hi) || lo < 0.0) throw ValidationError(std::string(what) + " range is empty");
  };
  range(sigma_x2_lo, sigma_x2_hi, "sigma_x2");
  range(sigma_y2_lo, sigma_y2_hi, "sigma_y2");
  range(nu_x_lo, nu_x_hi, "nu_x");
  range(nu_y_lo, nu_y_hi, "nu_y");
}

std::int64_t McmcConfig::retained_per_chain() const {
  if (iterations <= burn_in || thin <= 0) return 0;
  return (iterations - burn_in) / thin;
}

void McmcConfig::validate() const {
  if (chains < 2) throw ValidationError("MCMC needs at least 2 chains");
  if (thin < 1) throw ValidationError("thinning must be at least 1");
  if (burn_in < 0 || iterations <= burn_in) {
    throw ValidationError("iterations must exceed burn-in");
  }
  if (retained_per_chain() < 4) throw ValidationError("too few retained draws per chain");
}

// --------------------------------------------------------------------- MCMC

std::vector<std::string> parameter_names() {
  std::vector<std::string> out;
  for (auto c : kCodes) out.push_back(std::string("mu_x_") + c);
  for (auto c : kCodes) out.push_back(std::string("mu_y_") + c);
  for (auto n : {"C", "sigma_x2", "sigma_y2", "nu_x", "nu_y"}) out.emplace_back(n);
  return out;
}

std::vector<double> parameter_vector(const Draw& d) {
  std::vector<double> v(d.mu_x.begin(), d.mu_x.end());
  v.insert(v.end(), d.mu_y.begin(), d.mu_y.end());
  v.insert(v.end(), {d.c, d.sigma_x2, d.sigma_y2, d.nu_x, d.nu_y});
  return v;
}

double PosteriorSamples::max_rhat() const {
  double m = 0.0;
  for (const auto& p : summary) m = std::max(m, p.rhat);
  return m;
}

const ParamSummary* PosteriorSamples::param(const std::string& name) const {
  for (const auto& p : summary) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

constexpr std::size_t kParams = 2 * kAreaCount + 5;
constexpr std::size_t kC = 2 * kAreaCount;
constexpr std::size_t kSx2 = kC + 1;
constexpr std::size_t kSy2 = kC + 2;
constexpr std::size_t kNuX = kC + 3;
constexpr std::size_t kNuY = kC + 4;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Stats {
  double n = 0.0, s = 0.0, ss = 0.0;
};

struct Data {
  std::array<Stats, kAreaCount> x{};
  std::array<Stats, kAreaCount> y{};
};

double loglik(double mu, double c, const Stats& st) {
  if (st.n == 0.0) return 0.0;
  if (!(mu > 0.0) || !(c > 0.0)) return kNegInf;
  const double sigma = c * mu;
  const double sq = st.ss - 2.0 * mu * st.s + st.n * mu * mu;
  return -st.n * std::log(sigma) - sq / (2.0 * sigma * sigma);
}

struct ChainState {
  std::array<double, kAreaCount> mu_x{}, mu_y{};
  double log_c = 0.0, log_sx2 = 0.0, log_sy2 = 0.0, nu_x = 0.0, nu_y = 0.0;
};

struct ChainResult {
  std::vector<Draw> draws;
  std::array<double, kParams> accepted{};
  std::int64_t post_burn_iterations = 0;
};

class Sampler {
 public:
  Sampler(const Data& data, const PriorConfig& prior, const McmcConfig& cfg, int chain)
      : data_(data), prior_(prior), cfg_(cfg), chain_(chain) {
    std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed >> 32),
                      static_cast<std::uint64_t>(cfg.seed & 0xffffffffu),
                      static_cast<std::uint64_t>(chain)};
    rng_.seed(seq);
    log_c_mu_ = prior.log_c_mu();
    log_c_sd_ = prior.log_c_sd();
    steps_.fill(0.5);
    steps_[kC] = 0.3;
    steps_[kNuX] = steps_[kNuY] = 1.0;
  }

  ChainResult run() {
    init();
    ChainResult out;
    std::array<double, kParams> batch{};
    constexpr std::int64_t kBatch = 50;
    for (std::int64_t it = 1; it <= cfg_.iterations; ++it) {
      std::array<bool, kParams> acc = sweep();
      const bool burning = it <= cfg_.burn_in;
      for (std::size_t p = 0; p < kParams; ++p) {
        if (burning) {
          batch[p] += acc[p];
        } else {
          out.accepted[p] += acc[p];
        }
      }
      if (burning && it % kBatch == 0) {
        for (std::size_t p = 0; p < kParams; ++p) {
          const double rate = batch[p] / kBatch;
          if (rate < 0.2) steps_[p] *= 0.8;
          if (rate > 0.5) steps_[p] *= 1.25;
          batch[p] = 0.0;
        }
      }
      if (!burning) {
        ++out.post_burn_iterations;
        if ((it - cfg_.burn_in) % cfg_.thin == 0) out.draws.push_back(snapshot(it));
      }
    }
    return out;
  }

 private:
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool accept(double log_ratio) {
    if (log_ratio >= 0.0) return true;
    if (!std::isfinite(log_ratio)) return false;
    return std::log(uniform(0.0, 1.0)) < log_ratio;
  }

  void init() {
    auto start = [&](const Stats& st) {
      if (st.n > 0.0) return (st.s / st.n) * std::exp(0.05 * normal());
      return uniform(1.0, 30.0);
    };
    for (std::size_t k = 0; k < kAreaCount; ++k) {
      s_.mu_x[k] = start(data_.x[k]);
      s_.mu_y[k] = start(data_.y[k]);
    }
    s_.log_c = log_c_mu_ + 0.5 * log_c_sd_ * normal();
    auto mid_log = [&](double lo, double hi) {
      return std::log(lo + (hi - lo) * uniform(0.1, 0.9));
    };
    s_.log_sx2 = mid_log(prior_.sigma_x2_lo, prior_.sigma_x2_hi);
    s_.log_sy2 = mid_log(prior_.sigma_y2_lo, prior_.sigma_y2_hi);
    auto mean_of = [](const std::array<double, kAreaCount>& m) {
      return std::accumulate(m.begin(), m.end(), 0.0) / kAreaCount;
    };
    auto clamp_inside = [](double v, double lo, double hi) {
      const double pad = 1e-6 * (hi - lo);
      return std::clamp(v, lo + pad, hi - pad);
    };
    s_.nu_x = clamp_inside(mean_of(s_.mu_x) + normal(), prior_.nu_x_lo, prior_.nu_x_hi);
    s_.nu_y = clamp_inside(mean_of(s_.mu_y) + normal(), prior_.nu_y_lo, prior_.nu_y_hi);
  }

  double mu_target(double mu, double nu, double log_s2, const Stats& st, double c) const {
    if (!(mu > 0.0)) return kNegInf;
    const double s2 = std::exp(log_s2);
    return -(mu - nu) * (mu - nu) / (2.0 * s2) + loglik(mu, c, st);
  }

  static double spread(const std::array<double, kAreaCount>& mu, double nu) {
    double s = 0.0;
    for (double m : mu) s += (m - nu) * (m - nu);
    return s;
  }

  double sigma_target(double log_s2, double sq, double lo, double hi) const {
    const double s2 = std::exp(log_s2);
    if (!(s2 > lo && s2 < hi)) return kNegInf;
    // Uniform prior on s2; the log-scale walk adds the Jacobian s2.
    return -0.5 * kAreaCount * log_s2 - sq / (2.0 * s2) + log_s2;
  }

  double c_target(double log_c) const {
    const double c = std::exp(log_c);
    double lp = -(log_c - log_c_mu_) * (log_c - log_c_mu_) / (2.0 * log_c_sd_ * log_c_sd_);
    for (std::size_t k = 0; k < kAreaCount; ++k) {
      lp += loglik(s_.mu_x[k], c, data_.x[k]) + loglik(s_.mu_y[k], c, data_.y[k]);
    }
    return lp;
  }

  std::array<bool, kParams> sweep() {
    std::array<bool, kParams> acc{};
    const double c = std::exp(s_.log_c);
    for (std::size_t k = 0; k < kAreaCount; ++k) {
      {
        const double cur = s_.mu_x[k];
        const double prop = cur + steps_[k] * normal();
        const double r = mu_target(prop, s_.nu_x, s_.log_sx2, data_.x[k], c) -
                         mu_target(cur, s_.nu_x, s_.log_sx2, data_.x[k], c);
        if ((acc[k] = accept(r))) s_.mu_x[k] = prop;
      }
      {
        const std::size_t p = kAreaCount + k;
        const double cur = s_.mu_y[k];
        const double prop = cur + steps_[p] * normal();
        const double r = mu_target(prop, s_.nu_y, s_.log_sy2, data_.y[k], c) -
                         mu_target(cur, s_.nu_y, s_.log_sy2, data_.y[k], c);
        if ((acc[p] = accept(r))) s_.mu_y[k] = prop;
      }
    }
    {
      const double prop = s_.log_c + steps_[kC] * normal();
      if ((acc[kC] = accept(c_target(prop) - c_target(s_.log_c)))) s_.log_c = prop;
    }
    {
      const double sq = spread(s_.mu_x, s_.nu_x);
      const double prop = s_.log_sx2 + steps_[kSx2] * normal();
      const double r = sigma_target(prop, sq, prior_.sigma_x2_lo, prior_.sigma_x2_hi) -
                       sigma_target(s_.log_sx2, sq, prior_.sigma_x2_lo, prior_.sigma_x2_hi);
      if ((acc[kSx2] = accept(r))) s_.log_sx2 = prop;
    }
    {
      const double sq = spread(s_.mu_y, s_.nu_y);
      const double prop = s_.log_sy2 + steps_[kSy2] * normal();
      const double r = sigma_target(prop, sq, prior_.sigma_y2_lo, prior_.sigma_y2_hi) -
                       sigma_target(s_.log_sy2, sq, prior_.sigma_y2_lo, prior_.sigma_y2_hi);
      if ((acc[kSy2] = accept(r))) s_.log_sy2 = prop;
    }
    auto nu_step = [&](double& nu, const std::array<double, kAreaCount>& mu,
                       double log_s2, double lo, double hi, std::size_t p) {
      const double prop = nu + steps_[p] * normal();
      if (!(prop > lo && prop < hi)) return false;
      const double s2 = std::exp(log_s2);
      const double r = (spread(mu, nu) - spread(mu, prop)) / (2.0 * s2);
      if (!accept(r)) return false;
      nu = prop;
      return true;
    };
    acc[kNuX] = nu_step(s_.nu_x, s_.mu_x, s_.log_sx2, prior_.nu_x_lo, prior_.nu_x_hi, kNuX);
    acc[kNuY] = nu_step(s_.nu_y, s_.mu_y, s_.log_sy2, prior_.nu_y_lo, prior_.nu_y_hi, kNuY);
    return acc;
  }

  Draw snapshot(std::int64_t it) const {
    Draw d;
    d.chain = chain_;
    d.iteration = it;
    d.mu_x = s_.mu_x;
    d.mu_y = s_.mu_y;
    d.c = std::exp(s_.log_c);
    d.sigma_x2 = std::exp(s_.log_sx2);
    d.sigma_y2 = std::exp(s_.log_sy2);
    d.nu_x = s_.nu_x;
    d.nu_y = s_.nu_y;
    return d;
  }

  const Data& data_;
  const PriorConfig& prior_;
  const McmcConfig& cfg_;
  int chain_;
  std::mt19937_64 rng_;
  double log_c_mu_ = 0.0, log_c_sd_ = 1.0;
  std::array<double, kParams> steps_{};
  ChainState s_;
};

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
  if (chains.empty()) throw ValidationError("split R-hat needs at least one chain");
  const std::size_t len = chains.front().size();
  for (const auto& c : chains) {
    if (c.size() != len) throw ValidationError("split R-hat needs equal-length chains");
  }
  const std::size_t half = len / 2;
  if (half < 2) throw ValidationError("split R-hat needs at least 4 draws per chain");
  std::vector<std::vector<double>> parts;
  for (const auto& c : chains) {
    parts.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    parts.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
  }
  const double n = static_cast<double>(half);
  std::vector<double> means, vars;
  for (const auto& p : parts) {
    means.push_back(mean_of(p));
    vars.push_back(variance_of(p));
  }
  const double w = mean_of(vars);
  const double b = n * variance_of(means);
  if (w == 0.0) return b == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

PosteriorSamples fit_salinity_model(const std::vector<SalinityObservation>& obs,
                                    const PriorConfig& prior, const McmcConfig& mcmc) {
  prior.validate();
  mcmc.validate();
  if (obs.empty()) throw ValidationError("salinity model needs at least one observation");
  Data data;
  for (const auto& o : obs) {
    auto& x = data.x[static_cast<std::size_t>(o.area)];
    auto& y = data.y[static_cast<std::size_t>(o.area)];
    x.n += 1.0;
    x.s += o.x_min;
    x.ss += o.x_min * o.x_min;
    y.n += 1.0;
    y.s += o.y_max;
    y.ss += o.y_max * o.y_max;
  }

  std::vector<ChainResult> results(static_cast<std::size_t>(mcmc.chains));
  auto run_chain = [&](int c) {
    results[static_cast<std::size_t>(c)] = Sampler(data, prior, mcmc, c).run();
  };
  if (mcmc.parallel && mcmc.chains > 1) {
    std::vector<std::thread> threads;
    for (int c = 0; c < mcmc.chains; ++c) threads.emplace_back(run_chain, c);
    for (auto& t : threads) t.join();
  } else {
    for (int c = 0; c < mcmc.chains; ++c) run_chain(c);
  }

  PosteriorSamples post;
  const auto names = parameter_names();
  std::vector<std::vector<std::vector<double>>> traces(
      names.size(), std::vector<std::vector<double>>(results.size()));
  post.acceptance.assign(names.size(), 0.0);
  std::int64_t post_iters = 0;
  for (std::size_t c = 0; c < results.size(); ++c) {
    for (const auto& d : results[c].draws) {
      const auto v = parameter_vector(d);
      for (std::size_t p = 0; p < v.size(); ++p) traces[p][c].push_back(v[p]);
      post.draws.push_back(d);
    }
    for (std::size_t p = 0; p < names.size(); ++p) {
      post.acceptance[p] += results[c].accepted[p];
    }
    post_iters += results[c].post_burn_iterations;
  }
  for (auto& a : post.acceptance) a /= static_cast<double>(post_iters);

  for (std::size_t p = 0; p < names.size(); ++p) {
    std::vector<double> all;
    for (const auto& t : traces[p]) all.insert(all.end(), t.begin(), t.end());
    ParamSummary s{names[p], mean_of(all), std::sqrt(variance_of(all)), split_rhat(traces[p])};
    post.summary.push_back(s);
  }
  post.flagged = post.max_rhat() > 1.1;

  std::size_t violations = 0;
  for (const auto& d : post.draws) {
    for (std::size_t k = 0; k < kAreaCount; ++k) violations += d.mu_x[k] > d.mu_y[k];
  }
  post.mu_order_violation =
      static_cast<double>(violations) / static_cast<double>(post.draws.size() * kAreaCount);
  return post;
}

void write_posterior(std::ostream& out, const PosteriorSamples& post) {
  out << "chain\titeration";
  for (const auto& n : parameter_names()) out << '\t' << n;
  out << '\n';
  for (const auto& d : post.draws) {
    out << d.chain << '\t' << d.iteration;
    for (double v : parameter_vector(d)) out << '\t' << format_number(v);
    out << '\n';
  }
}

// ----------------------------------------------------------------- survival

std::string to_string(SurvivalRule r) {
  return r == SurvivalRule::containment ? "containment" : "overlap";
}

std::optional<SurvivalRule> parse_survival_rule(std::string_view s) {
  if (s == "containment") return SurvivalRule::containment;
  if (s == "overlap") return SurvivalRule::overlap;
  return std::nullopt;
}

bool species_survival(const Draw& d, const SpeciesRecord& s, Area arrival,
                      SurvivalRule rule) {
  const auto k = static_cast<std::size_t>(arrival);
  const double lo = d.mu_x[k];
  const double hi = d.mu_y[k];
  if (rule == SurvivalRule::containment) {
    return lo - s.sal_min >= 0.0 && s.sal_max - hi >= 0.0;
  }
  return std::min(hi, s.sal_max) - std::max(lo, s.sal_min) >= 0.0;
}

std::size_t nis_state_for_count(double count) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNisValueStates.size(); ++i) {
    if (std::abs(kNisValueStates[i] - count) < std::abs(kNisValueStates[best] - count)) {
      best = i;
    }
  }
  return best;
}

double RouteNisDistribution::mean_count() const {
  double m = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) m += static_cast<double>(i) * counts[i];
  return m;
}

double RouteNisDistribution::mean_mapped() const {
  double m = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) m += kNisValueStates[i] * mapped[i];
  return m;
}

RouteNisDistribution point_mass_distribution(const std::string& route, std::size_t state) {
  if (state >= kNisValueStates.size()) throw RangeError("NIS-value state out of range");
  RouteNisDistribution r;
  r.route = route;
  r.mapped.assign(kNisValueStates.size(), 0.0);
  r.mapped[state] = 1.0;
  const auto count = static_cast<std::size_t>(kNisValueStates[state]);
  r.counts.assign(count + 1, 0.0);
  r.counts[count] = 1.0;
  return r;
}

RouteNisDistribution route_nis_distribution(const Route& route,
                                            const std::vector<SpeciesRecord>& species,
                                            const PosteriorSamples& post, SurvivalRule rule) {
  RouteNisDistribution r;
  r.route = route.id;
  r.counts.assign(species.size() + 1, 0.0);
  r.mapped.assign(kNisValueStates.size(), 0.0);

  std::vector<const SpeciesRecord*> pool;
  for (const auto& s : species) {
    if (s.present_in(route.departure)) pool.push_back(&s);
  }
  if (pool.empty() || post.draws.empty()) {
    r.warning = pool.empty() ? "no species present at departure area " +
                                   area_name(route.departure)
                             : "posterior has no draws";
    r.counts[0] = 1.0;
    r.mapped[nis_state_for_count(0.0)] = 1.0;
    return r;
  }
  const double w = 1.0 / static_cast<double>(post.draws.size());
  for (const auto& d : post.draws) {
    std::size_t n = 0;
    for (const auto* s : pool) n += species_survival(d, *s, route.arrival, rule);
    r.counts[n] += w;
  }
  for (std::size_t c = 0; c < r.counts.size(); ++c) {
    if (r.counts[c] > 0.0) r.mapped[nis_state_for_count(static_cast<double>(c))] += r.counts[c];
  }
  return r;
}

}  // namespace bfdst
