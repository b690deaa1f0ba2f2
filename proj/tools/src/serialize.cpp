#include "fusionclust_cli/serialize.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace fusionclust {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) {
  return v ? number(*v) : Json(nullptr);
}

double read_number(const Json& j, double if_null) {
  return j.is_null() ? if_null : j.get<double>();
}

std::optional<double> read_optional(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

void to_json(Json& j, const MergeEvent& e) {
  j = Json{{"lambda", e.lambda},
           {"left_size", e.left_size},
           {"right_size", e.right_size},
           {"left_mean", e.left_mean},
           {"right_mean", e.right_mean},
           {"left_max", e.left_max},
           {"right_min", e.right_min},
           {"merged_span", {e.merged_span.first, e.merged_span.second}},
           {"first", e.first},
           {"split", e.split},
           {"last", e.last}};
}

void from_json(const Json& j, MergeEvent& e) {
  e.lambda = j.at("lambda").get<double>();
  e.left_size = j.at("left_size").get<std::size_t>();
  e.right_size = j.at("right_size").get<std::size_t>();
  e.left_mean = j.at("left_mean").get<double>();
  e.right_mean = j.at("right_mean").get<double>();
  e.left_max = j.at("left_max").get<double>();
  e.right_min = j.at("right_min").get<double>();
  e.merged_span = {j.at("merged_span").at(0).get<double>(), j.at("merged_span").at(1).get<double>()};
  e.first = j.at("first").get<std::size_t>();
  e.split = j.at("split").get<std::size_t>();
  e.last = j.at("last").get<std::size_t>();
}

void to_json(Json& j, const BigMerge& b) {
  j = Json{{"event", b.event}, {"mass_after", b.mass_after}, {"split_point", b.split_point}};
}

void from_json(const Json& j, BigMerge& b) {
  b.event = j.at("event").get<MergeEvent>();
  b.mass_after = j.at("mass_after").get<double>();
  b.split_point = j.at("split_point").get<double>();
}

void to_json(Json& j, const BmtResult& r) {
  j = Json{{"split_points", r.split_points},
           {"num_clusters", r.num_clusters},
           {"discarded_by_adjustment", r.discarded_by_adjustment},
           {"big_merges", r.big_merges}};
}

void from_json(const Json& j, BmtResult& r) {
  r.split_points = j.at("split_points").get<std::vector<double>>();
  r.num_clusters = j.at("num_clusters").get<std::size_t>();
  r.discarded_by_adjustment = j.at("discarded_by_adjustment").get<bool>();
  r.big_merges = j.at("big_merges").get<std::vector<BigMerge>>();
}

void to_json(Json& j, const PopulationSplit& p) {
  j = Json::object();
  j["split"] = p.has_split();
  if (p.has_split()) {
    const Split& s = p.split();
    j["L_star"] = s.L_star;
    j["s_star"] = s.s_star;
    j["R_star"] = s.R_star;
  } else {
    j["L_star"] = nullptr;
    j["s_star"] = nullptr;
    j["R_star"] = nullptr;
  }
  j["d_min"] = optional_number(p.d_min());
  j["second_split_found"] = p.second_split_found;
}

void from_json(const Json& j, PopulationSplit& p) {
  const std::optional<double> d_min = read_optional(j.at("d_min"));
  if (j.at("split").get<bool>()) {
    p.outcome = Split{j.at("L_star").get<double>(), j.at("s_star").get<double>(),
                      j.at("R_star").get<double>(), d_min};
  } else {
    p.outcome = NoSplit{d_min};
  }
  p.second_split_found = j.at("second_split_found").get<bool>();
}

void to_json(Json& j, const McReport& r) {
  j = Json{{"s_mc", r.s_mc},
           {"mce_oracle", r.mce_oracle},
           {"mce_procedure", r.mce_procedure},
           {"excess", r.excess}};
}

void from_json(const Json& j, McReport& r) {
  r.s_mc = j.at("s_mc").get<double>();
  r.mce_oracle = j.at("mce_oracle").get<double>();
  r.mce_procedure = j.at("mce_procedure").get<double>();
  r.excess = j.at("excess").get<double>();
}

void to_json(Json& j, const Table1Row& r) {
  j = Json{{"p1", r.p1},
           {"p2", r.p2},
           {"mu1", r.mu1},
           {"mu2", r.mu2},
           {"d_min", optional_number(r.d_min)},
           {"s_star", optional_number(r.s_star)},
           {"L_star", optional_number(r.L_star)},
           {"R_star", optional_number(r.R_star)},
           {"second_split", r.second_split ? Json(*r.second_split) : Json(nullptr)},
           {"s_mc", r.s_mc},
           {"excess_mce", r.excess_mce}};
}

void from_json(const Json& j, Table1Row& r) {
  r.p1 = j.at("p1").get<double>();
  r.p2 = j.at("p2").get<double>();
  r.mu1 = j.at("mu1").get<double>();
  r.mu2 = j.at("mu2").get<double>();
  r.d_min = read_optional(j.at("d_min"));
  r.s_star = read_optional(j.at("s_star"));
  r.L_star = read_optional(j.at("L_star"));
  r.R_star = read_optional(j.at("R_star"));
  r.second_split =
      j.at("second_split").is_null() ? std::nullopt : std::optional(j.at("second_split").get<bool>());
  r.s_mc = j.at("s_mc").get<double>();
  r.excess_mce = j.at("excess_mce").get<double>();
}

void to_json(Json& j, const ReplicationSummary& s) {
  Json histogram = Json::object();
  for (const auto& [k, count] : s.k_histogram) histogram[std::to_string(k)] = count;
  j = Json{{"replicates", s.replicates},
           {"k_histogram", histogram},
           {"modal_k", s.modal_k()},
           {"multimodal_rate", s.multimodal_rate},
           {"true_k", s.true_k ? Json(*s.true_k) : Json(nullptr)},
           {"mse_mean", optional_number(s.mse_mean)},
           {"mse_sd", optional_number(s.mse_sd)},
           {"oracle_mse", optional_number(s.oracle_mse)},
           {"mean_runtime_seconds", s.mean_runtime_seconds},
           {"k_values", s.k_values},
           {"mse_values", s.mse_values}};
}

void from_json(const Json& j, ReplicationSummary& s) {
  s.replicates = j.at("replicates").get<std::size_t>();
  s.k_histogram.clear();
  for (const auto& [k, count] : j.at("k_histogram").items()) {
    s.k_histogram[std::stoul(k)] = count.get<std::size_t>();
  }
  s.multimodal_rate = j.at("multimodal_rate").get<double>();
  s.true_k.reset();
  if (!j.at("true_k").is_null()) s.true_k = j.at("true_k").get<std::size_t>();
  s.mse_mean = read_optional(j.at("mse_mean"));
  s.mse_sd = read_optional(j.at("mse_sd"));
  s.oracle_mse = read_optional(j.at("oracle_mse"));
  s.mean_runtime_seconds = j.value("mean_runtime_seconds", 0.0);
  s.k_values = j.at("k_values").get<std::vector<std::size_t>>();
  s.mse_values = j.at("mse_values").get<std::vector<double>>();
}

void to_json(Json& j, const ConsistencyReport& r) {
  Json rows = Json::array();
  for (const ConsistencyRow& row : r.rows) {
    rows.push_back(Json{{"n", row.n}, {"median_error", number(row.median_error)}});
  }
  j = Json{{"status", to_string(r.status)},
           {"population_split", optional_number(r.population_split)},
           {"rows", rows},
           {"non_increasing", r.non_increasing}};
}

void from_json(const Json& j, ConsistencyReport& r) {
  const auto status = j.at("status").get<std::string>();
  r.status = status == "ok" ? ConsistencyStatus::ok : ConsistencyStatus::no_population_split;
  r.population_split = read_optional(j.at("population_split"));
  r.rows.clear();
  for (const Json& row : j.at("rows")) {
    r.rows.push_back({row.at("n").get<std::size_t>(),
                      read_number(row.at("median_error"), std::numeric_limits<double>::infinity())});
  }
  r.non_increasing = j.at("non_increasing").get<bool>();
}

namespace cli {

Json path_to_json(const ClusterPath& path) {
  return Json{{"n", path.sample().n()},
              {"distinct", path.sample().size()},
              {"events", path.events()}};
}

std::vector<MergeEvent> events_from_json(const Json& j) {
  return j.at("events").get<std::vector<MergeEvent>>();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

std::string events_csv(const std::vector<MergeEvent>& events) {
  std::ostringstream out;
  out << "step,lambda,left_size,right_size,left_mean,right_mean,left_max,right_min\n";
  for (std::size_t i = 0; i < events.size(); ++i) {
    const MergeEvent& e = events[i];
    out << i + 1 << ',' << format_double(e.lambda) << ',' << e.left_size << ',' << e.right_size
        << ',' << format_double(e.left_mean) << ',' << format_double(e.right_mean) << ','
        << format_double(e.left_max) << ',' << format_double(e.right_min) << '\n';
  }
  return out.str();
}

std::string labels_csv(std::span<const std::size_t> labels) {
  std::ostringstream out;
  out << "row,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i + 1 << ',' << labels[i] << '\n';
  return out.str();
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
  std::ostringstream out;
  out << "p1,p2,mu1,mu2,d_min,s_star,L_star,R_star,second_split,s_mc,excess_mce\n";
  for (const Table1Row& r : rows) {
    out << format_double(r.p1) << ',' << format_double(r.p2) << ',' << format_double(r.mu1) << ','
        << format_double(r.mu2) << ',' << opt(r.d_min) << ',' << opt(r.s_star) << ','
        << opt(r.L_star) << ',' << opt(r.R_star) << ','
        << (r.second_split ? (*r.second_split ? "yes" : "no") : "") << ','
        << format_double(r.s_mc) << ',' << format_double(r.excess_mce) << '\n';
  }
  return out.str();
}

std::string summary_csv(const ReplicationSummary& s, bool with_runtime) {
  std::ostringstream out;
  out << "replicates,modal_k,modal_share,multimodal_rate,mse_mean,mse_sd,oracle_mse";
  if (with_runtime) out << ",mean_runtime_seconds";
  out << '\n';
  out << s.replicates << ',' << s.modal_k() << ',' << format_double(s.share(s.modal_k())) << ','
      << format_double(s.multimodal_rate) << ',' << opt(s.mse_mean) << ',' << opt(s.mse_sd) << ','
      << opt(s.oracle_mse);
  if (with_runtime) out << ',' << format_double(s.mean_runtime_seconds);
  out << '\n';
  return out.str();
}

std::string consistency_csv(const ConsistencyReport& r) {
  std::ostringstream out;
  out << "n,median_error\n";
  for (const ConsistencyRow& row : r.rows) {
    out << row.n << ',' << format_double(row.median_error) << '\n';
  }
  return out.str();
}

}  // namespace cli
}  // namespace fusionclust
