#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "stripcgm/config.hpp"
#include "stripcgm/experiments.hpp"
#include "stripcgm/svgplot.hpp"

namespace {

int run_experiment(const std::string& name, const std::string& config_path,
                   long long seed, long long replicas, int workers,
                   const std::string& out_dir) {
  using namespace stripcgm;
  try {
    ExperimentConfig cfg =
        config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
    cfg.set("experiment", name);
    if (seed >= 0) cfg.set("seed", std::to_string(seed));
    if (replicas > 0) cfg.set("replicas", std::to_string(replicas));
    if (workers > 0) cfg.set("workers", std::to_string(workers));
    std::string out = out_dir;
    if (out.empty()) {
      const char* env = std::getenv("STRIP_CGM_OUT");
      out = env != nullptr ? env : "out";
    }
    const RunManifest man = run(cfg, out);
    std::cout << man.experiment << ": wrote " << man.outputs.front().first << " ("
              << man.wall_clock_ms << " ms)\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strip-cgm: TASEP / corner-growth experiment driver"};
  app.require_subcommand(1);

  std::string config_path, out_dir, csv_path, kind = "loglog", svg_path;
  long long seed = -1, replicas = 0;
  int workers = 0;

  for (const std::string& name : stripcgm::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--seed", seed, "master seed (overrides config)");
    sub->add_option("--replicas", replicas, "replica count (overrides config)");
    sub->add_option("--workers", workers, "worker pool size (overrides config)");
    sub->add_option("--out", out_dir, "output directory (default $STRIP_CGM_OUT or ./out)");
    sub->callback([&app, name, &config_path, &seed, &replicas, &workers, &out_dir] {
      std::exit(run_experiment(name, config_path, seed, replicas, workers, out_dir));
    });
  }

  CLI::App* plot = app.add_subcommand("plot", "render a CSV as SVG");
  plot->add_option("--csv", csv_path, "input CSV")->required();
  plot->add_option("--kind", kind, "loglog | hist | sitemap");
  plot->add_option("--out", svg_path, "output SVG path")->required();
  plot->callback([&] {
    try {
      stripcgm::plot(csv_path, kind, svg_path);
      std::exit(0);
    } catch (const std::exception& e) {
      std::cerr << "plot error: " << e.what() << "\n";
      std::exit(2);
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}
