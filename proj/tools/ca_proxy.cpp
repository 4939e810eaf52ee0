// Intercepting HTTP proxy that blocks responses carrying injected content.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <mutex>

#include "ctxaudit/proxy.hpp"

namespace {

ctxaudit::ProxyServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ca-proxy: reflected content-injection blocking proxy"};
  ctxaudit::ProxyConfig config;
  std::string listen = "127.0.0.1:8080";
  std::string upstream;
  std::string mode = "block";
  std::string log_path;

  app.add_option("--listen", listen, "host:port to listen on (port 0 picks a free port)");
  app.add_option("--upstream", upstream, "reverse mode upstream host:port; omit for forward mode");
  app.add_option("--mode", mode, "block or log")->check(CLI::IsMember({"block", "log"}));
  app.add_option("--block-status", config.block_status, "status for blocked responses")->check(CLI::Range(400, 599));
  app.add_option("--min-reflect-len", config.reflection.min_length, "minimum reflected value length")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-reflections", config.reflection.max_reflections_per_param, "spans per parameter value")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-body", config.max_body, "largest analyzed body in bytes")->check(CLI::PositiveNumber);
  app.add_flag("--fail-closed", config.fail_closed, "block when analysis faults");
  app.add_option("--log", log_path, "append JSON log records to this file instead of stdout");
  CLI11_PARSE(app, argc, argv);

  const std::size_t colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "ca-proxy: --listen expects host:port\n";
    return 2;
  }
  config.listen_host = listen.substr(0, colon);
  try {
    config.listen_port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    std::cerr << "ca-proxy: invalid port in --listen\n";
    return 2;
  }
  if (!upstream.empty()) config.upstream = upstream;
  config.mode = mode == "log" ? ctxaudit::ProxyMode::LogOnly : ctxaudit::ProxyMode::Block;

  std::ofstream log_file;
  if (!log_path.empty()) {
    log_file.open(log_path, std::ios::app);
    if (!log_file) {
      std::cerr << "ca-proxy: cannot open log file " << log_path << "\n";
      return 2;
    }
  }
  std::ostream& log_out = log_path.empty() ? std::cout : log_file;

  try {
    ctxaudit::ProxyServer server(config, [&log_out](const std::string& line) { log_out << line << std::endl; });
    if (!server.bind()) {
      std::cerr << "ca-proxy: cannot bind " << listen << " or resolve the upstream\n";
      return 1;
    }
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "ca-proxy: listening on " << config.listen_host << ":" << server.port()
              << (config.upstream ? " -> " + *config.upstream : std::string(" (forward mode)")) << "\n";
    server.run();
    g_server = nullptr;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ca-proxy: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
