#pragma once
// Scenario service. `Service::handle` is a pure method/path/body dispatcher
// so it can be exercised without sockets; `serve` wires it to an HTTP
// listener.

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "bfdst/bundle.hpp"
#include "bfdst/scenario_store.hpp"

namespace bfdst {

struct ModelSnapshot {
  Network network;
  std::string version;
};

// Readers take a shared_ptr copy and keep using it after a swap.
class ModelHolder {
 public:
  explicit ModelHolder(Network n);
  std::shared_ptr<const ModelSnapshot> get() const;
  // Returns the snapshot now current.
  std::shared_ptr<const ModelSnapshot> swap(Network n);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const ModelSnapshot> current_;
};

struct HttpResponse {
  int status = 200;
  std::string body;
};

struct RefitJob {
  std::string id;
  std::string status;  // running, done, failed
  std::string previous_version;
  std::string model_version;
  std::string error;
  double max_rhat = 0.0;
  bool flagged = false;
  std::vector<std::string> warnings;
};

class Service {
 public:
  Service(Bundle bundle, const std::string& store_path = "");
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::string& body);

  std::shared_ptr<const ModelSnapshot> snapshot() const { return model_.get(); }
  void swap_model(Network n) { model_.swap(std::move(n)); }

  // Blocks until no refit is running.
  void wait_for_refit();

  const Bundle& bundle() const { return bundle_; }
  ScenarioStore& store() { return store_; }

 private:
  HttpResponse route(const std::string& method, const std::string& path, const std::string& body,
                     const ModelSnapshot& snap);
  HttpResponse start_refit(const ojson& body, const ModelSnapshot& snap);
  void run_refit(std::string id, McmcConfig cfg, SurvivalRule rule);
  ojson job_json(const RefitJob& job) const;

  Bundle bundle_;
  ModelHolder model_;
  ScenarioStore store_;

  std::mutex jobs_mu_;
  std::map<std::string, RefitJob> jobs_;
  std::uint64_t next_job_ = 1;
  bool refit_running_ = false;
  std::thread worker_;
};

// Blocks serving HTTP on host:port. Static files under ui_dir are served
// from / when the directory exists.
bool serve(Service& svc, const std::string& host, int port, const std::string& ui_dir);

}  // namespace bfdst
