#include "fusionclust_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "fusionclust/bmt.hpp"
#include "fusionclust/errors.hpp"
#include "fusionclust/mixture_parser.hpp"
#include "fusionclust_cli/csv.hpp"

namespace fusionclust::cli {

namespace {

bool needs_data(const std::string& s) { return s == "path" || s == "bmt" || s == "cluster"; }

bool needs_mixture(const std::string& s) {
  return s == "population" || s == "simulate-modality" || s == "simulate-k" ||
         s == "simulate-scale" || s == "consistency";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

BmtConfig bmt_config(const CliConfig& c) {
  BmtConfig b;
  b.alpha = c.alpha;
  b.adjustment_enabled = c.adjustment_enabled;
  b.validate();
  return b;
}

// Input file, or n draws from the mixture when no file is given.
DataMatrix load_data(const CliConfig& c) {
  if (c.input_path) return read_csv(*c.input_path);
  const ProductMixture product = parse_product(*c.mixture_spec);
  ExperimentSpec spec{product, *c.n, 1, c.alpha, c.seed, c.adjustment_enabled, 1};
  return draw_replicate(spec, 0);
}

std::vector<double> univariate(const DataMatrix& data, const std::string& what) {
  if (data.cols() != 1) {
    throw std::invalid_argument(what + " expects one column, got " + std::to_string(data.cols()));
  }
  const auto col = data.column(0);
  return {col.begin(), col.end()};
}

ExperimentSpec experiment_spec(const CliConfig& c, std::size_t default_n) {
  ExperimentSpec spec{parse_product(*c.mixture_spec), c.n.value_or(default_n), c.replicates,
                      c.alpha, c.seed, c.adjustment_enabled, c.threads};
  spec.validate();
  return spec;
}

PopulationOptions population_options(const CliConfig& c) {
  PopulationOptions o;
  o.grid_step = c.grid_step;
  return o;
}

std::string run_path(const CliConfig& c) {
  const std::vector<double> x = univariate(load_data(c), "path");
  const ClusterPath path = build_merge_path(SortedSample::from_values(x));
  if (c.output_format == OutputFormat::csv) return events_csv(path.events());
  return dump(path_to_json(path));
}

std::string run_bmt_command(const CliConfig& c, bool labels_only) {
  const DataMatrix data = load_data(c);
  const BmtConfig config = bmt_config(c);
  if (data.cols() == 1) {
    const SortedSample sample = SortedSample::from_values(data.column(0));
    const BmtResult res = run_bmt(sample, config);
    const std::vector<std::size_t> labels = assign_labels(data.column(0), res.split_points);
    if (c.output_format == OutputFormat::csv) return labels_csv(labels);
    Json j = labels_only ? Json{{"split_points", res.split_points},
                                {"num_clusters", res.num_clusters}}
                         : Json(res);
    j["alpha"] = c.alpha;
    j["n"] = sample.n();
    j["labels"] = labels;
    return dump(j);
  }
  const MultivariateBmtResult res = run_bmt_multivariate(data, config);
  if (c.output_format == OutputFormat::csv) return labels_csv(res.joint_labels);
  Json dims = Json::array();
  for (std::size_t d = 0; d < res.per_dimension.size(); ++d) {
    Json dim = labels_only ? Json{{"split_points", res.per_dimension[d].split_points},
                                  {"num_clusters", res.per_dimension[d].num_clusters}}
                           : Json(res.per_dimension[d]);
    dims.push_back(dim);
  }
  return dump(Json{{"alpha", c.alpha},
                   {"n", data.rows()},
                   {"dimensions", dims},
                   {"joint_cluster_count", res.joint_cluster_count},
                   {"occupied_cluster_count", res.occupied_cluster_count},
                   {"labels", res.joint_labels}});
}

std::string run_population(const CliConfig& c) {
  const MixtureModel m = parse_mixture(*c.mixture_spec);
  const PopulationSplit split = find_population_split(m, population_options(c));
  Json j{{"mixture", m.describe()}, {"population_split", split}};
  if (m.size() == 2) j["misclassification"] = misclassification_analysis(m, split);
  if (c.output_format == OutputFormat::csv) {
    std::string out = "split,L_star,s_star,R_star,d_min,second_split_found\n";
    const auto field = [](const Json& v) {
      return v.is_null() ? std::string() : format_double(v.get<double>());
    };
    const Json& p = j["population_split"];
    out += std::string(split.has_split() ? "yes" : "no") + "," + field(p["L_star"]) + "," +
           field(p["s_star"]) + "," + field(p["R_star"]) + "," + field(p["d_min"]) + "," +
           (split.second_split_found ? "yes" : "no") + "\n";
    return out;
  }
  return dump(j);
}

std::string run_table1(const CliConfig& c) {
  std::vector<Table1Row> rows;
  if (c.mixture_spec) {
    rows.push_back(table1_row(parse_mixture(*c.mixture_spec), population_options(c)));
  } else {
    rows = table1_grid(population_options(c));
  }
  if (c.output_format == OutputFormat::csv) return table1_csv(rows);
  return dump(Json{{"rows", rows}});
}

std::string summary_output(const CliConfig& c, const ExperimentSpec& spec,
                           ReplicationSummary s) {
  if (!c.timing) s.mean_runtime_seconds = 0.0;
  if (c.output_format == OutputFormat::csv) return summary_csv(s, c.timing);
  Json j = s;
  if (!c.timing) j.erase("mean_runtime_seconds");
  Json mixture = Json::array();
  for (const MixtureModel& m : spec.mixture) mixture.push_back(m.describe());
  return dump(Json{{"mixture", mixture},
                   {"n", spec.n},
                   {"alpha", spec.alpha},
                   {"seed", spec.base_seed},
                   {"summary", j}});
}

std::string run_consistency(const CliConfig& c) {
  const MixtureModel m = parse_mixture(*c.mixture_spec);
  const std::vector<std::size_t> n_list =
      c.n_list.empty() ? std::vector<std::size_t>{1000, 10000, 100000} : c.n_list;
  const ConsistencyReport r = run_consistency_check(m, n_list, c.replicates, c.seed, c.alpha, c.threads);
  if (c.output_format == OutputFormat::csv) return consistency_csv(r);
  return dump(Json{{"mixture", m.describe()}, {"report", r}});
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{
      "path",           "bmt",        "cluster",        "population", "table1",
      "simulate-modality", "simulate-k", "simulate-scale", "consistency"};
  return names;
}

void CliConfig::validate() const {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
  }
  if (needs_data(subcommand)) {
    if (input_path.has_value() == mixture_spec.has_value()) {
      throw std::invalid_argument(subcommand + " needs exactly one of --input or --mixture");
    }
    if (mixture_spec && !n) throw std::invalid_argument("--mixture data generation needs --n");
  }
  if (needs_mixture(subcommand)) {
    if (!mixture_spec) throw std::invalid_argument(subcommand + " needs --mixture");
    if (input_path) throw std::invalid_argument(subcommand + " does not read --input");
  }
  if (subcommand == "table1" && input_path) {
    throw std::invalid_argument("table1 does not read --input");
  }
  if (n && *n == 0) throw std::invalid_argument("--n must be positive");
  if (replicates == 0) throw std::invalid_argument("--replicates must be positive");
  if (grid_step && !(*grid_step > 0.0)) throw std::invalid_argument("--grid-step must be positive");
  if (std::find(n_list.begin(), n_list.end(), std::size_t{0}) != n_list.end()) {
    throw std::invalid_argument("--n-list entries must be positive");
  }
}

void apply_config(CliConfig& c, const Json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object", 0);
  for (const auto& [key, v] : j.items()) {
    if (key == "subcommand") c.subcommand = v.get<std::string>();
    else if (key == "input") c.input_path = v.get<std::string>();
    else if (key == "mixture") c.mixture_spec = v.get<std::string>();
    else if (key == "alpha") c.alpha = v.get<double>();
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "replicates") c.replicates = v.get<std::size_t>();
    else if (key == "n") c.n = v.get<std::size_t>();
    else if (key == "format") {
      const auto f = v.get<std::string>();
      if (f != "json" && f != "csv") throw ParseError("format must be json or csv", 0);
      c.output_format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
    } else if (key == "output") c.output_path = v.get<std::string>();
    else if (key == "adjustment") c.adjustment_enabled = v.get<bool>();
    else if (key == "grid_step") c.grid_step = v.get<double>();
    else if (key == "n_list") c.n_list = v.get<std::vector<std::size_t>>();
    else if (key == "threads") c.threads = v.get<std::size_t>();
    else if (key == "timing") c.timing = v.get<bool>();
    else throw ParseError("unknown config key '" + key + "'", 0);
  }
}

CommandResult run_command(const CliConfig& c) {
  CommandResult result;
  try {
    c.validate();
    const std::string& s = c.subcommand;
    if (s == "path") {
      result.output = run_path(c);
    } else if (s == "bmt" || s == "cluster") {
      result.output = run_bmt_command(c, s == "cluster");
    } else if (s == "population") {
      result.output = run_population(c);
    } else if (s == "table1") {
      result.output = run_table1(c);
    } else if (s == "simulate-modality") {
      const ExperimentSpec spec = experiment_spec(c, 10000);
      result.output = summary_output(c, spec, run_modality_experiment(spec));
    } else if (s == "simulate-k") {
      const ExperimentSpec spec = experiment_spec(c, 5000);
      result.output = summary_output(c, spec, run_k_experiment(spec));
    } else if (s == "simulate-scale") {
      const ExperimentSpec spec = experiment_spec(c, 10000);
      result.output = summary_output(c, spec, run_scale_experiment(spec));
    } else {
      result.output = run_consistency(c);
    }
  } catch (const ParseError& e) {
    result.exit_code = 3;
    result.diagnostics = std::string("parse error: ") + e.what();
  } catch (const std::invalid_argument& e) {
    result.exit_code = 2;
    result.diagnostics = std::string("invalid argument: ") + e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.diagnostics = std::string("error: ") + e.what();
  }
  return result;
}

}  // namespace fusionclust::cli
