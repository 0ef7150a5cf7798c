#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "wbp/measure.hpp"
#include "wbp/plan.hpp"
#include "wbp/solver.hpp"

namespace wbp::io {

using json = nlohmann::json;

// File formats (one JSON record per file):
//   pair     {"kind":"half_plane"}
//            {"kind":"euclidean_box","lo":[...],"hi":[...]}
//            {"kind":"finite","dist":[[...],...],"A":[...]}
//   measure  {"pair": <pair object or path to a pair file>,
//             "atoms":[{"point":[...],"mass":m},...]}
//   diagram  {"points":[[b,d],...]}   (optional "pair", half_plane default)
//   plan     {"entries":[{"src":[...],"dst":[...],"mass":m},...],"p":p,"pair":{...}}
//   duals    {"phi":[{"point":[...],"value":v},...],"psi":[...]}
// Finite-pair points are node indices, written as [i] (a bare i is accepted).
// Malformed input raises Error(parse_error) naming the file and the position.

json to_json(const Point& point);
json to_json(const MetricPair& pair);
json to_json(const DiscreteMeasure& measure);
json to_json(const PersistenceDiagram& diagram);
json to_json(const TransportPlan& plan);
json to_json(const DualPotentials& duals);

MetricPair pair_from_json(const json& doc, const std::string& origin);
DiscreteMeasure measure_from_json(const json& doc, const std::filesystem::path& origin);
PersistenceDiagram diagram_from_json(const json& doc, const std::string& origin);
/// Uses the plan's embedded pair when `pair` is null.
TransportPlan plan_from_json(const json& doc, PairPtr pair, const std::string& origin);
DualPotentials duals_from_json(const json& doc, const std::string& origin);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

MetricPair load_pair(const std::filesystem::path& path);
DiscreteMeasure load_measure(const std::filesystem::path& path);
PersistenceDiagram load_diagram(const std::filesystem::path& path);
TransportPlan load_plan(const std::filesystem::path& path, PairPtr pair);
DualPotentials load_duals(const std::filesystem::path& path);

}  // namespace wbp::io
