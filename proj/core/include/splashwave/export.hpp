#pragma once

#include <filesystem>

#include "splashwave/evolution.hpp"

namespace splashwave {

/// Per-snapshot CSV with columns
///   alpha, z1_tilde, z2_tilde, z1_phys, z2_phys, omega, phi
/// (17 significant digits; z1_phys is the full coordinate, alpha included).
void export_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap);

/// One CSV per snapshot plus the time-indexed diagnostics table.
void export_csv(const std::filesystem::path& dir, const Trajectory& traj);

enum class SvgFrame { tilde, physical };

/// Polyline of the requested frame; the tilde frame marks the five excluded
/// points q^0..q^4.
void export_svg(const std::filesystem::path& path, const Snapshot& snap, SvgFrame frame);

}  // namespace splashwave
