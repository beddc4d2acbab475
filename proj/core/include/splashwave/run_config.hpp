#pragma once

#include <string>

#include "splashwave/evolution.hpp"
#include "splashwave/presets.hpp"

namespace splashwave {

/// Run description parsed from flat "key = value" text (# comments allowed).
struct ParsedRun {
    RunConfig config;
    PresetSpec preset;
};

/// Parses the numeric run configuration; unknown keys and malformed lines
/// raise ParseError with the 1-based line number.
RunConfig parse_config(const std::string& text);

/// parse_config plus the preset selection and custom coefficient tables.
ParsedRun parse_run_file(const std::string& text);

std::string format_config(const RunConfig& config, const PresetSpec& preset);

}  // namespace splashwave
