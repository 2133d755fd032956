#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stsc/detect.hpp"
#include "stsc/metrics.hpp"
#include "stsc/model.hpp"

namespace stsc {

// FNV-1a 64-bit over raw bytes; hex form is 16 lowercase digits.
uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Name + content digest of one input file, recorded in findings output.
struct InputDigest {
    std::string input;    // basename as passed on the command line
    std::string fnv1a64;  // hex digest of the file bytes
};

// {"schema_version":1, "generated_from":[...], "findings":[...]}; key order,
// numeric formatting, and finding order are all stable. `run_metadata` is
// appended only when non-empty (it breaks byte-identity by design).
std::string export_findings_json(const std::vector<Finding>& findings,
                                 const std::vector<InputDigest>& generated_from,
                                 const json& run_metadata = json());

// Inverse of export_findings_json for the findings themselves.
// Throws std::runtime_error on malformed documents or unknown schema versions.
std::vector<Finding> parse_findings_json(std::string_view bytes);

// Architecture overlay: one cluster per component, actors inside their
// assigned cluster (first assignment by component id wins; extra assignments
// become dashed gray links), social edges solid (strong) or dashed (weak),
// component dependencies as cluster-to-cluster arrows.
std::string export_overlay_dot(const CommGraph& graph, const ArchitectureModel& model,
                               const std::vector<EdgeStrength>& strengths);

// window_start,actor,in_degree,out_degree,total_degree,betweenness_raw,betweenness_norm
// Rows sorted by (window, actor); reals at fixed 6-decimal precision.
std::string export_timeseries_csv(const CentralitySeries& series);

struct ParsedCsvRow {
    std::string window_start;
    std::string actor;
    int in_degree = 0;
    int out_degree = 0;
    int total_degree = 0;
    double betweenness_raw = 0.0;
    double betweenness_norm = 0.0;
};

// Companion reader for round-trip checks and downstream tooling.
std::vector<ParsedCsvRow> parse_timeseries_csv(std::string_view bytes);

}  // namespace stsc
