#pragma once
// Named lock sets persisted as JSON lines. Each line is a put or a delete;
// the file is rewritten with live records only on open and whenever dead
// lines outnumber live ones.

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bfdst/model_io.hpp"

namespace bfdst {

struct StoredScenario {
  std::string id;
  std::string name;
  ojson locks = ojson::object();  // node id -> state label
  std::string created_at;         // UTC, ISO 8601
  std::optional<std::string> note;
};

ojson stored_scenario_json(const StoredScenario& s);
StoredScenario stored_scenario_from_json(const ojson& j);

class ScenarioStore {
 public:
  // Empty path keeps everything in memory.
  explicit ScenarioStore(std::string path = "");

  StoredScenario create(const std::string& name, ojson locks,
                        std::optional<std::string> note = std::nullopt);
  std::vector<StoredScenario> list() const;
  std::optional<StoredScenario> get(const std::string& id) const;
  bool remove(const std::string& id);

  const std::string& path() const { return path_; }
  std::size_t log_lines() const;

 private:
  void append(const ojson& line);
  void compact();

  std::string path_;
  mutable std::mutex mu_;
  std::vector<StoredScenario> items_;
  std::uint64_t next_id_ = 1;
  std::size_t log_lines_ = 0;
};

}  // namespace bfdst
