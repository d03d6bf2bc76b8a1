// report.hpp — canonical JSON and pretty-text reports for pipeline results,
// with a deterministic content hash.
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "insep/pipeline.hpp"

namespace insep {

// canonical JSON (sorted keys) for the full analysis; "schema": 1; the
// "hash" field is the FNV-1a digest of the serialisation without it
nlohmann::json report_json(const AnalysisResult& res);

// subset report for a single stage; stage is one of the CLI command names
nlohmann::json stage_json(const AnalysisResult& res, const std::string& stage);

// human-readable rendering of a (stage or full) report
std::string report_text(const nlohmann::json& j);

// FNV-1a over the canonical serialisation (excluding a top-level "hash")
std::string report_hash(const nlohmann::json& j);

}  // namespace insep
