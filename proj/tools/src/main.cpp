#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "fusionclust/errors.hpp"
#include "fusionclust_cli/commands.hpp"

using fusionclust::cli::CliConfig;
using fusionclust::cli::OutputFormat;

namespace {

// Flags of one subcommand, bound to a scratch config so that only the
// options actually given override the --config file.
struct Flags {
  CliConfig values;
  std::string format = "json";
  std::string config_path;
  std::map<std::string, CLI::Option*> options;
  CLI::Option* no_adjustment = nullptr;
  CLI::Option* timing = nullptr;
};

void add_flags(CLI::App& app, Flags& f) {
  f.options["input"] = app.add_option("-i,--input", f.values.input_path, "CSV data file");
  f.options["mixture"] =
      app.add_option("-m,--mixture", f.values.mixture_spec, "Mixture string, e.g. 0.3*normal(-4,1)+0.7*normal(4,1)");
  f.options["alpha"] = app.add_option("-a,--alpha", f.values.alpha, "BMT threshold in (0, 0.5]");
  f.options["seed"] = app.add_option("-s,--seed", f.values.seed, "Base seed");
  f.options["replicates"] = app.add_option("-r,--replicates", f.values.replicates, "Replicates");
  f.options["n"] = app.add_option("-n,--n", f.values.n, "Sample size");
  f.options["format"] =
      app.add_option("-f,--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  f.options["output"] = app.add_option("-o,--output", f.values.output_path, "Output file (stdout if absent)");
  f.options["grid_step"] = app.add_option("--grid-step", f.values.grid_step, "Population scan step");
  f.options["n_list"] = app.add_option("--n-list", f.values.n_list, "Sample sizes for consistency")->delimiter(',');
  f.options["threads"] = app.add_option("--threads", f.values.threads, "Worker threads (0: FUSIONCLUST_THREADS or hardware)");
  f.no_adjustment = app.add_flag("--no-adjustment", "Disable the 50% adjustment");
  f.timing = app.add_flag("--timing", "Report wall-clock runtimes");
  app.add_option("-c,--config", f.config_path, "JSON config file");
}

CliConfig resolve(const std::string& subcommand, const Flags& f) {
  CliConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw fusionclust::ParseError("cannot open config " + f.config_path, 0);
    fusionclust::cli::apply_config(c, fusionclust::Json::parse(in));
  }
  c.subcommand = subcommand;
  const auto given = [&](const char* name) { return f.options.at(name)->count() > 0; };
  if (given("input")) c.input_path = f.values.input_path;
  if (given("mixture")) c.mixture_spec = f.values.mixture_spec;
  if (given("alpha")) c.alpha = f.values.alpha;
  if (given("seed")) c.seed = f.values.seed;
  if (given("replicates")) c.replicates = f.values.replicates;
  if (given("n")) c.n = f.values.n;
  if (given("format")) c.output_format = f.format == "csv" ? OutputFormat::csv : OutputFormat::json;
  if (given("output")) c.output_path = f.values.output_path;
  if (given("grid_step")) c.grid_step = f.values.grid_step;
  if (given("n_list")) c.n_list = f.values.n_list;
  if (given("threads")) c.threads = f.values.threads;
  if (f.no_adjustment->count() > 0) c.adjustment_enabled = false;
  if (f.timing->count() > 0) c.timing = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex-clustering solution paths and the Big Merge Tracker"};
  app.require_subcommand(1);
  std::map<std::string, std::unique_ptr<Flags>> flags;
  for (const std::string& name : fusionclust::cli::subcommands()) {
    auto* sub = app.add_subcommand(name);
    flags[name] = std::make_unique<Flags>();
    add_flags(*sub, *flags[name]);
  }
  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  CliConfig config;
  try {
    config = resolve(name, *flags.at(name));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  const auto result = fusionclust::cli::run_command(config);
  if (result.exit_code != 0) {
    std::cerr << result.diagnostics << '\n';
    return result.exit_code;
  }
  if (config.output_path) {
    std::ofstream out(*config.output_path, std::ios::binary);
    if (!out || !(out << result.output)) {
      std::cerr << "error: cannot write " << *config.output_path << '\n';
      return 1;
    }
  } else {
    std::cout << result.output;
  }
  return 0;
}
