// dst-service: HTTP scenario service over a model bundle.

#include <iostream>

#include "CLI11.hpp"
#include "bfdst/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Biofouling decision model HTTP service"};
  std::string addr = "127.0.0.1:8080";
  std::string model_dir = "data/bundle";
  std::string ui_dir;
  std::string store = "scenarios.jsonl";
  app.add_option("--addr", addr, "host:port to listen on")->capture_default_str();
  app.add_option("--model-dir", model_dir, "Model bundle directory")->capture_default_str();
  app.add_option("--ui-dir", ui_dir, "Static UI assets served from /");
  app.add_option("--store", store, "Scenario store file")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos) throw std::runtime_error("--addr must be host:port");
    const std::string host = addr.substr(0, colon);
    const int port = std::stoi(addr.substr(colon + 1));
    bfdst::Service svc(bfdst::load_bundle(model_dir), store);
    std::cerr << "model " << svc.snapshot()->version << " listening on " << addr << '\n';
    if (!bfdst::serve(svc, host, port, ui_dir)) {
      std::cerr << "error: cannot listen on " << addr << '\n';
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
