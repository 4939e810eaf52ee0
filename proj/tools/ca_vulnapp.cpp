// Serves the vulnerable demo page on loopback.

#include <CLI11.hpp>

#include <iostream>

#include "vulnerable_app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ca-vulnapp: deliberately vulnerable demo page"};
  int port = 8081;
  app.add_option("--port", port, "loopback port")->check(CLI::Range(1, 65535));
  CLI11_PARSE(app, argc, argv);

  httplib::Server server;
  ctxaudit::demo::install_vulnerable_routes(server);
  std::cerr << "ca-vulnapp: listening on 127.0.0.1:" << port << "\n";
  if (!server.listen("127.0.0.1", port)) {
    std::cerr << "ca-vulnapp: cannot bind port " << port << "\n";
    return 1;
  }
  return 0;
}
