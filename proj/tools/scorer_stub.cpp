// Minimal external scorer speaking the line-delimited JSON protocol.
// Modes: "uniform" (default) answers 0.9 for every action; "garbage"
// answers a malformed line, for protocol-violation tests.
#include <iostream>
#include <string>

#include "json.hpp"

int main(int argc, char** argv) {
  std::string mode = argc > 1 ? argv[1] : "uniform";
  std::string line;
  while (std::getline(std::cin, line)) {
    if (mode == "garbage") {
      std::cout << "not json at all\n" << std::flush;
      continue;
    }
    nlohmann::json req = nlohmann::json::parse(line);
    std::size_t n = req.at("actions").size();
    nlohmann::json resp;
    resp["weights"] = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) resp["weights"].push_back(0.9);
    std::cout << resp.dump() << "\n" << std::flush;
  }
  return 0;
}
