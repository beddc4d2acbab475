#pragma once

#include <filesystem>
#include <string>

#include "splashwave/evolution.hpp"
#include "splashwave/run_config.hpp"

namespace splashwave {

inline constexpr int kSnapshotSchemaVersion = 1;

/// Snapshot files are self-describing JSON with a schema version; numbers
/// round-trip exactly (shortest round-trip decimals). Loading a different
/// schema version raises SchemaMismatch.
void save_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot load_snapshot(const std::filesystem::path& path);

/// Trajectory directory layout:
///   run.json            config, gauge, abort cause, snapshot count
///   snapshot_NNNNNN.json
///   diagnostics.csv     one row per step
void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj,
                     const PresetSpec& preset = {});
Trajectory load_trajectory(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace splashwave
