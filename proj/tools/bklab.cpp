// bklab: run kernel / envelope / markov / zeros experiments from a config
// file and aggregate their records.

#include <CLI11.hpp>

#include <iostream>

#include "bk/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int precision = 0;
  int workers = -1;
  double grid_scale = 0.0;
};

void attach(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "experiment config file")->required();
  sub->add_option("--out", o.out_dir, "output directory (overrides config)");
  sub->add_option("--seed", o.seed, "base seed (overrides config)")
      ->each([&o](const std::string&) { o.seed_set = true; });
  sub->add_option("--precision", o.precision, "starting precision in bits (overrides config)");
  sub->add_option("--workers", o.workers, "worker pool size (overrides config)");
  sub->add_option("--grid-scale", o.grid_scale, "evaluation grid density factor");
}

int run_experiment(const CommonOpts& o, const std::string& tag) {
  bk::ExperimentConfig cfg;
  try {
    cfg = bk::parse_config_file(o.config_path);
  } catch (const bk::ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.what() << "\n";
    return 4;
  }
  if (cfg.tag != tag) {
    std::cerr << "config error: config is for experiment '" << cfg.tag
              << "' but the subcommand expects '" << tag << "'\n";
    return 4;
  }
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.seed_set) cfg.seed = o.seed;
  if (o.precision > 0) cfg.precision_bits = o.precision;
  if (o.workers >= 0) cfg.workers = o.workers;
  if (o.grid_scale > 0) cfg.grid_scale = o.grid_scale;

  bk::RunResult res = bk::run(cfg);
  if (res.summary.contains("error")) std::cerr << "error: " << res.summary["error"] << "\n";
  std::cout << res.summary.dump(2) << "\n";
  if (!res.csv_path.empty())
    std::cerr << "wrote " << res.csv_path << " and " << res.json_path << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted Bergman kernel / extremal envelope / random zeros laboratory"};
  app.require_subcommand(1);

  CommonOpts ok, oe, om, oz;
  attach(app.add_subcommand("kernel", "kernel growth experiment"), ok);
  attach(app.add_subcommand("envelope", "envelope convergence-rate experiment"), oe);
  attach(app.add_subcommand("markov", "Markov factor experiment"), om);
  attach(app.add_subcommand("zeros", "random-zero deviation experiment"), oz);

  auto* rep = app.add_subcommand("report", "aggregate experiment records");
  std::vector<std::string> records;
  std::string rep_out = "results";
  rep->add_option("records", records, "JSON summary files")->required();
  rep->add_option("--out", rep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("kernel")) return run_experiment(ok, "kernel_growth");
    if (app.got_subcommand("envelope")) return run_experiment(oe, "envelope_rate");
    if (app.got_subcommand("markov")) return run_experiment(om, "markov");
    if (app.got_subcommand("zeros")) return run_experiment(oz, "zeros_deviation");
    if (app.got_subcommand("report")) return bk::report(records, rep_out);
  } catch (const bk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
