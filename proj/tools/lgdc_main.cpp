// lgdc: command-line front end for the latent graph diffusion pipeline.
//
//   lgdc <command> --config <path> [--seed N] [--out DIR] [--teacher-force]
//                  [--steps T] [--noise-kind uniform|marginal] [--lambda-e X]
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration or usage error,
// 3 missing upstream artifact.

#include "lgdc/config.hpp"
#include "lgdc/error.hpp"
#include "lgdc/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMissing = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent graph diffusion with spectrum-preserving coarsening"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "run";
  bool teacher_force = false;
  std::optional<int> steps;
  std::optional<std::string> noise_kind;
  std::optional<double> lambda_e;

  app.add_option("command", command, "gen-data | coarsen | train | sample | eval | flops | export-dot")
      ->required()
      ->check(CLI::IsMember(lgdc::Pipeline::commands()));
  app.add_option("--config", config_path, "flat key = value configuration file")->required();
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "artifact directory")->capture_default_str();
  app.add_flag("--teacher-force", teacher_force, "sample: rebuild test graphs from their supervision pairs");
  app.add_option("--steps", steps, "override the diffusion step count");
  app.add_option("--noise-kind", noise_kind, "override the transition kind")->check(CLI::IsMember({"uniform", "marginal"}));
  app.add_option("--lambda-e", lambda_e, "override the edge loss weight");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    lgdc::RunConfig config = lgdc::load_config(config_path);
    if (seed) config.seed = *seed;
    if (steps) config.steps = *steps;
    if (noise_kind) config.noise_kind = lgdc::parse_noise_kind(*noise_kind);
    if (lambda_e) config.lambda_e = *lambda_e;
    lgdc::Pipeline pipeline(config, out_dir);
    pipeline.run(command, teacher_force);
  } catch (const lgdc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lgdc::MissingArtifactError& e) {
    std::cerr << "missing artifact: " << e.what() << '\n';
    return kExitMissing;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
