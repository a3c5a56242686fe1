#include "bfdst/service.hpp"

#include "bfdst/api_json.hpp"

namespace bfdst {

ModelHolder::ModelHolder(Network n) { swap(std::move(n)); }

std::shared_ptr<const ModelSnapshot> ModelHolder::get() const {
  std::lock_guard lk(mu_);
  return current_;
}

std::shared_ptr<const ModelSnapshot> ModelHolder::swap(Network n) {
  auto version = model_version(n);
  auto next = std::make_shared<const ModelSnapshot>(ModelSnapshot{std::move(n), std::move(version)});
  std::lock_guard lk(mu_);
  current_ = next;
  return next;
}

namespace {

struct ApiFailure {
  int status;
  std::string code;
  std::string message;
  std::string detail;
};

HttpResponse reply(int status, ojson body, const std::string& version) {
  if (!body.contains("modelVersion")) body["modelVersion"] = version;
  return {status, body.dump()};
}

ojson parse_body(const std::string& body) {
  if (body.empty()) return ojson::object();
  try {
    return ojson::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ApiFailure{400, "bad_lock", "request body is not valid JSON", e.what()};
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string p = path.substr(0, path.find('?'));
  std::size_t i = 0;
  while (i < p.size()) {
    const auto j = p.find('/', i);
    const auto end = j == std::string::npos ? p.size() : j;
    if (end > i) parts.push_back(p.substr(i, end - i));
    i = end + 1;
  }
  return parts;
}

std::vector<LockSet> scenarios_from(const Network& n, const ojson& list) {
  if (!list.is_array()) throw LockError("scenarios must be an array of lock sets");
  std::vector<LockSet> out;
  for (const auto& s : list) {
    out.push_back(parse_locks(n, s.is_object() && s.contains("locks") ? s["locks"] : s));
  }
  return out;
}

}  // namespace

Service::Service(Bundle bundle, const std::string& store_path)
    : bundle_(std::move(bundle)), model_(bundle_.network), store_(store_path) {}

Service::~Service() {
  if (worker_.joinable()) worker_.join();
}

void Service::wait_for_refit() {
  std::thread t;
  {
    std::lock_guard lk(jobs_mu_);
    t.swap(worker_);
  }
  if (t.joinable()) t.join();
}

HttpResponse Service::handle(const std::string& method, const std::string& path,
                             const std::string& body) {
  // One snapshot per request: every field of the response comes from it.
  const auto snap = model_.get();
  try {
    return route(method, path, body, *snap);
  } catch (const ApiFailure& f) {
    return reply(f.status, error_json(f.code, f.message, f.detail), snap->version);
  } catch (const LockError& e) {
    return reply(400, error_json("bad_lock", e.what()), snap->version);
  } catch (const std::exception& e) {
    return reply(400, error_json("model_error", e.what()), snap->version);
  }
}

HttpResponse Service::route(const std::string& method, const std::string& path,
                            const std::string& body, const ModelSnapshot& snap) {
  const auto parts = split_path(path);
  const auto& n = snap.network;
  const auto& v = snap.version;
  auto not_found = [&](const std::string& what) {
    return reply(404, error_json("not_found", what + " not found", path), v);
  };
  if (parts.size() < 2 || parts[0] != "api") return not_found("endpoint");
  const auto& ep = parts[1];

  if (ep == "model" && parts.size() == 2 && method == "GET") {
    return reply(200, model_catalog_json(n, v), v);
  }
  if (ep == "query" && parts.size() == 2 && method == "POST") {
    const auto j = parse_body(body);
    const auto locks = parse_locks(n, j.value("locks", ojson::object()));
    std::vector<VarId> targets;
    if (j.contains("targets")) {
      for (const auto& t : j["targets"]) targets.push_back(resolve_node(n, t.get<std::string>()).id);
    }
    return reply(200, scenario_result_json(n, query(n, locks, targets), locks, v), v);
  }
  if (ep == "compare" && parts.size() == 2 && method == "POST") {
    const auto j = parse_body(body);
    const auto scenarios = scenarios_from(n, j.value("scenarios", ojson()));
    return reply(200, comparison_json(n, compare_scenarios(n, scenarios), v), v);
  }
  if (ep == "routes" && parts.size() == 2 && method == "GET") {
    return reply(200, {{"modelVersion", v}, {"routes", routes_json(bundle_.params.routes, bundle_.params.sediment_high)}}, v);
  }
  if (ep == "species" && parts.size() == 2 && method == "GET") {
    return reply(200, {{"modelVersion", v}, {"species", species_json(bundle_.species)}}, v);
  }
  if (ep == "scenarios") {
    if (parts.size() == 2 && method == "GET") {
      ojson list = ojson::array();
      for (const auto& s : store_.list()) list.push_back(stored_scenario_json(s));
      return reply(200, {{"modelVersion", v}, {"scenarios", std::move(list)}}, v);
    }
    if (parts.size() == 2 && method == "POST") {
      const auto j = parse_body(body);
      if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
        throw ApiFailure{400, "bad_lock", "scenario needs a non-empty name", ""};
      }
      const auto locks = parse_locks(n, j.value("locks", ojson::object()));
      std::optional<std::string> note;
      if (j.contains("note") && j["note"].is_string()) note = j["note"].get<std::string>();
      auto s = store_.create(j["name"].get<std::string>(), locks_to_json(n, locks), note);
      ojson out = stored_scenario_json(s);
      return reply(201, std::move(out), v);
    }
    if (parts.size() == 3 && method == "GET") {
      auto s = store_.get(parts[2]);
      if (!s) return not_found("scenario " + parts[2]);
      return reply(200, stored_scenario_json(*s), v);
    }
    if (parts.size() == 3 && method == "DELETE") {
      if (!store_.remove(parts[2])) return not_found("scenario " + parts[2]);
      return reply(200, {{"deleted", parts[2]}}, v);
    }
  }
  if (ep == "nis" && parts.size() >= 3 && parts[2] == "refit") {
    if (parts.size() == 3 && method == "POST") return start_refit(parse_body(body), snap);
    if (parts.size() == 4 && method == "GET") {
      std::lock_guard lk(jobs_mu_);
      auto it = jobs_.find(parts[3]);
      if (it == jobs_.end()) return not_found("refit job " + parts[3]);
      return reply(200, job_json(it->second), v);
    }
  }
  return not_found("endpoint");
}

ojson Service::job_json(const RefitJob& job) const {
  ojson j;
  j["jobId"] = job.id;
  j["status"] = job.status;
  j["previousVersion"] = job.previous_version;
  j["resultVersion"] = job.model_version.empty() ? ojson(nullptr) : ojson(job.model_version);
  j["error"] = job.error.empty() ? ojson(nullptr) : ojson(job.error);
  j["maxRhat"] = job.max_rhat;
  j["flagged"] = job.flagged;
  j["warnings"] = job.warnings;
  return j;
}

HttpResponse Service::start_refit(const ojson& body, const ModelSnapshot& snap) {
  if (bundle_.salinity.empty() || bundle_.species.empty()) {
    throw ApiFailure{400, "model_error", "refit needs species and salinity tables in the bundle",
                     bundle_.dir};
  }
  if (!body.is_object()) throw ApiFailure{400, "model_error", "body must be an object", ""};
  McmcConfig cfg = mcmc_from_json(body.value("mcmcConfig", ojson()));
  SurvivalRule rule = SurvivalRule::containment;
  if (body.contains("rule")) {
    auto r = parse_survival_rule(body["rule"].get<std::string>());
    if (!r) throw ApiFailure{400, "model_error", "rule must be containment or overlap", ""};
    rule = *r;
  }
  RefitJob job;
  {
    std::lock_guard lk(jobs_mu_);
    if (refit_running_) {
      throw ApiFailure{409, "model_error", "a refit is already running", ""};
    }
    if (worker_.joinable()) worker_.join();
    job.id = "r" + std::to_string(next_job_++);
    job.status = "running";
    job.previous_version = snap.version;
    jobs_[job.id] = job;
    refit_running_ = true;
    worker_ = std::thread(&Service::run_refit, this, job.id, cfg, rule);
  }
  return reply(202, job_json(job), snap.version);
}

void Service::run_refit(std::string id, McmcConfig cfg, SurvivalRule rule) {
  RefitJob result;
  try {
    const auto post = fit_salinity_model(bundle_.salinity, PriorConfig{}, cfg);
    std::vector<RouteNisDistribution> nis;
    for (const auto& r : bundle_.params.routes) {
      nis.push_back(route_nis_distribution(r, bundle_.species, post, rule));
      if (!nis.back().warning.empty()) result.warnings.push_back(nis.back().warning);
    }
    result.max_rhat = post.max_rhat();
    result.flagged = post.flagged;
    // Build from the snapshot current at completion so other swaps are kept.
    auto next = with_nis(model_.get()->network, nis);
    result.model_version = model_.swap(std::move(next))->version;
    result.status = "done";
  } catch (const std::exception& e) {
    result.status = "failed";
    result.error = e.what();
  }
  std::lock_guard lk(jobs_mu_);
  auto& job = jobs_[id];
  job.status = result.status;
  job.error = result.error;
  job.model_version = result.model_version;
  job.max_rhat = result.max_rhat;
  job.flagged = result.flagged;
  job.warnings = result.warnings;
  refit_running_ = false;
}

}  // namespace bfdst
