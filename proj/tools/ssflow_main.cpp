#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"

int main(int argc, char** argv) {
  using namespace ssflow::cli;
  CLI::App app{"Forward self-similar harmonic map heat flow solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  long long seed = -1;
  int threads = -1;
  std::string solution_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (run.out)");
    sub->add_option("--seed", seed, "Seed for sampled diagnostics (run.seed)");
    sub->add_option("--threads", threads, "Worker threads, 0 = all (run.threads)");
    sub->add_option("--set", overrides, "Override section.key=value")->take_all();
  };
  auto* solve = app.add_subcommand("solve", "Run the Picard iteration");
  auto* oracle = app.add_subcommand("oracle", "Solve the corotational profile ODE");
  auto* verify = app.add_subcommand("verify", "Run the diagnostics on a solution");
  auto* sweep = app.add_subcommand("sweep", "Solve over a list of angles");
  auto* print = app.add_subcommand("print-config", "Print the effective configuration");
  for (auto* sub : {solve, oracle, verify, sweep, print}) add_common(sub);
  verify->add_option("--solution", solution_dir, "Directory written by solve (default: --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    RunConfig config = load_config(config_path, overrides);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (seed >= 0) set_value(config, "run", "seed", std::to_string(seed));
    if (threads >= 0) config.threads = threads;

    if (*print) return cmd_print_config(config, std::cout);
    if (*solve) return cmd_solve(config, std::cerr);
    if (*oracle) return cmd_oracle(config, std::cerr);
    if (*verify) return cmd_verify(config, solution_dir.empty() ? config.out_dir : solution_dir, std::cout,
                                   std::cerr);
    if (*sweep) return cmd_sweep(config, std::cerr);
  } catch (const ssflow::Error& e) {
    std::cerr << error_record(e) << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"Internal\",\"message\":\"" << e.what() << "\"}\n";
    return kExitConfig;
  }
  return kExitConfig;
}
