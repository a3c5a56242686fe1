#include <filesystem>

#include "bfdst/service.hpp"
#include "httplib.h"

namespace bfdst {

bool serve(Service& svc, const std::string& host, int port, const std::string& ui_dir) {
  httplib::Server server;
  auto bridge = [&svc](const char* method) {
    return [&svc, method](const httplib::Request& req, httplib::Response& res) {
      const auto r = svc.handle(method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
  };
  server.Get(R"(/api/.*)", bridge("GET"));
  server.Post(R"(/api/.*)", bridge("POST"));
  server.Delete(R"(/api/.*)", bridge("DELETE"));
  if (!ui_dir.empty() && std::filesystem::is_directory(ui_dir)) {
    server.set_mount_point("/", ui_dir);
  }
  return server.listen(host, port);
}

}  // namespace bfdst
