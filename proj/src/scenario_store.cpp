#include "bfdst/scenario_store.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace bfdst {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t id_number(const std::string& id) {
  if (id.size() < 2 || id[0] != 's') return 0;
  try {
    return std::stoull(id.substr(1));
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

ojson stored_scenario_json(const StoredScenario& s) {
  ojson j;
  j["id"] = s.id;
  j["name"] = s.name;
  j["locks"] = s.locks;
  j["createdAt"] = s.created_at;
  if (s.note) j["note"] = *s.note;
  return j;
}

StoredScenario stored_scenario_from_json(const ojson& j) {
  StoredScenario s;
  s.id = j.at("id").get<std::string>();
  s.name = j.at("name").get<std::string>();
  s.locks = j.at("locks");
  s.created_at = j.at("createdAt").get<std::string>();
  if (j.contains("note") && !j["note"].is_null()) s.note = j["note"].get<std::string>();
  return s;
}

ScenarioStore::ScenarioStore(std::string path) : path_(std::move(path)) {
  if (path_.empty() || !fs::exists(path_)) return;
  std::ifstream in(path_);
  if (!in) throw std::runtime_error("cannot open scenario store " + path_);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    ojson rec;
    try {
      rec = ojson::parse(line);
      const auto op = rec.at("op").get<std::string>();
      if (op == "put") {
        auto s = stored_scenario_from_json(rec.at("scenario"));
        next_id_ = std::max(next_id_, id_number(s.id) + 1);
        std::erase_if(items_, [&](const StoredScenario& x) { return x.id == s.id; });
        items_.push_back(std::move(s));
      } else if (op == "seq") {
        next_id_ = std::max(next_id_, rec.at("next").get<std::uint64_t>());
      } else if (op == "delete") {
        const auto id = rec.at("id").get<std::string>();
        std::erase_if(items_, [&](const StoredScenario& x) { return x.id == id; });
      } else {
        throw std::runtime_error("unknown op " + op);
      }
    } catch (const std::exception& e) {
      // A torn final line from a crash mid-append is dropped; anything else
      // is corruption.
      if (in.peek() == EOF) break;
      throw std::runtime_error(path_ + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  compact();
}

void ScenarioStore::append(const ojson& line) {
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  out << line.dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot write scenario store " + path_);
  ++log_lines_;
  if (log_lines_ > 2 * items_.size() + 8) compact();
}

void ScenarioStore::compact() {
  if (path_.empty()) return;
  const auto tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    // Keeps ids of deleted scenarios from being reused.
    out << ojson{{"op", "seq"}, {"next", next_id_}}.dump() << '\n';
    for (const auto& s : items_) {
      out << ojson{{"op", "put"}, {"scenario", stored_scenario_json(s)}}.dump() << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("cannot write scenario store " + tmp);
  }
  fs::rename(tmp, path_);
  log_lines_ = items_.size() + 1;
}

StoredScenario ScenarioStore::create(const std::string& name, ojson locks,
                                     std::optional<std::string> note) {
  std::lock_guard lk(mu_);
  StoredScenario s;
  s.id = "s" + std::to_string(next_id_++);
  s.name = name;
  s.locks = std::move(locks);
  s.created_at = utc_now();
  s.note = std::move(note);
  items_.push_back(s);
  append({{"op", "put"}, {"scenario", stored_scenario_json(s)}});
  return s;
}

std::vector<StoredScenario> ScenarioStore::list() const {
  std::lock_guard lk(mu_);
  return items_;
}

std::optional<StoredScenario> ScenarioStore::get(const std::string& id) const {
  std::lock_guard lk(mu_);
  for (const auto& s : items_) {
    if (s.id == id) return s;
  }
  return std::nullopt;
}

bool ScenarioStore::remove(const std::string& id) {
  std::lock_guard lk(mu_);
  const auto n = std::erase_if(items_, [&](const StoredScenario& x) { return x.id == id; });
  if (n == 0) return false;
  append({{"op", "delete"}, {"id", id}});
  return true;
}

std::size_t ScenarioStore::log_lines() const {
  std::lock_guard lk(mu_);
  return log_lines_;
}

}  // namespace bfdst
