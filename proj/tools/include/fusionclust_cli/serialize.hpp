#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fusionclust/bmt.hpp"
#include "fusionclust/experiments.hpp"
#include "fusionclust/fusion_path.hpp"
#include "fusionclust/population.hpp"

namespace fusionclust {

using Json = nlohmann::ordered_json;

// Non-finite doubles and empty optionals are written as null.

void to_json(Json& j, const MergeEvent& e);
void from_json(const Json& j, MergeEvent& e);
void to_json(Json& j, const BigMerge& b);
void from_json(const Json& j, BigMerge& b);
void to_json(Json& j, const BmtResult& r);
void from_json(const Json& j, BmtResult& r);
void to_json(Json& j, const PopulationSplit& p);
void from_json(const Json& j, PopulationSplit& p);
void to_json(Json& j, const McReport& r);
void from_json(const Json& j, McReport& r);
void to_json(Json& j, const Table1Row& r);
void from_json(const Json& j, Table1Row& r);
void to_json(Json& j, const ReplicationSummary& s);
void from_json(const Json& j, ReplicationSummary& s);
void to_json(Json& j, const ConsistencyReport& r);
void from_json(const Json& j, ConsistencyReport& r);

namespace cli {

/// {"n", "distinct", "events": [...]}.
Json path_to_json(const ClusterPath& path);
std::vector<MergeEvent> events_from_json(const Json& j);

/// Flat CSV projections with a header row.
std::string events_csv(const std::vector<MergeEvent>& events);
std::string labels_csv(std::span<const std::size_t> labels);
std::string table1_csv(const std::vector<Table1Row>& rows);
std::string summary_csv(const ReplicationSummary& s, bool with_runtime);
std::string consistency_csv(const ConsistencyReport& r);

/// Shortest round-trip decimal form, "nan"/"inf" for non-finite values.
std::string format_double(double v);

}  // namespace cli
}  // namespace fusionclust
