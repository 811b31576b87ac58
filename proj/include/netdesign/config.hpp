#pragma once

#include <string>

#include "netdesign/study.hpp"

namespace netdesign {

// Parses a study configuration from JSON. Every key must be known; unknown
// keys raise std::invalid_argument with the offending path. Missing keys take
// the documented defaults.
StudyConfig parse_study_config(const std::string& json_text);

// Canonical JSON echo of an effective configuration (every field explicit);
// written next to study reports for reproducibility.
std::string study_config_json(const StudyConfig& cfg);

// Worker-count resolution: explicit value, else NETDESIGN_WORKERS, else
// hardware concurrency.
int resolve_workers(int configured);

}  // namespace netdesign
