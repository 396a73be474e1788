#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "mfc/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Mean-field-type control solver (deterministic, congestion)"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = -1;

  CLI::App* solve_cmd =
      app.add_subcommand("solve", "run a scenario and write outputs");
  solve_cmd->add_option("config", config_path, "config file")->required();
  solve_cmd->add_option("--out", out_dir, "output directory");
  solve_cmd->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI::App* check_cmd =
      app.add_subcommand("check", "validate a config without running");
  check_cmd->add_option("config", config_path, "config file")->required();

  CLI::App* scen_cmd =
      app.add_subcommand("scenarios", "list built-in scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (scen_cmd->parsed()) {
      for (const std::string& name : mfc::scenario_names())
        std::printf("%s\n", name.c_str());
      return 0;
    }
    mfc::RunConfig cfg = mfc::parse_config_file(config_path);
    if (check_cmd->parsed()) {
      mfc::resolve_run(cfg);
      std::printf("ok\n");
      return 0;
    }
    mfc::RunOverrides ov;
    ov.out_dir = out_dir;
    ov.threads = threads;
    return mfc::execute_run(cfg, ov);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
