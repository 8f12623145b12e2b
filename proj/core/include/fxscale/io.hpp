#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "fxscale/moments.hpp"
#include "fxscale/panel.hpp"
#include "fxscale/scaling.hpp"
#include "fxscale/studies.hpp"
#include "fxscale/tick_data.hpp"

namespace fxscale {

// Writes are atomic: content goes to "<path>.tmp" and is renamed over the
// target, so a failed run never leaves a partial artifact behind.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

// FNV-1a 64 digest of a file's bytes, hex-encoded ("fnv1a64:...").
std::string file_digest(const std::filesystem::path& path);

// --- Panels -----------------------------------------------------------
// CSV: header "pair,bin_0,...,bin_{Q-1}", one row per pair, plus a JSON
// sidecar "<path>.meta.json" {kind, dt_minutes, t0, t1}. The binary form
// ("FXP1" magic) stores the same header fields followed by bin-major
// little-endian 64-bit counts; see README for the exact layout.
void write_panel_csv(const ActivityPanel& panel,
                     const std::filesystem::path& path);
ActivityPanel read_panel_csv(const std::filesystem::path& path);

void write_panel_fxp1(const ActivityPanel& panel,
                      const std::filesystem::path& path);
ActivityPanel read_panel_fxp1(const std::filesystem::path& path);

// Dispatch on extension: ".fxp" binary, anything else CSV.
void write_panel(const ActivityPanel& panel, const std::filesystem::path& path);
ActivityPanel read_panel(const std::filesystem::path& path);

// --- Tick streams -----------------------------------------------------
// Canonical tick CSV plus a "<path>.meta.json" span sidecar {t0, t1} so a
// later parse can recover the intended window even where the first/last
// bins are empty. parse_tick_stream_file honors the sidecar when present.
void write_tick_csv(const TickStream& stream, const std::filesystem::path& path);
TickStream parse_tick_stream_file(const std::filesystem::path& path,
                                  OrderPolicy policy);

std::string rejects_to_json(const std::vector<Reject>& rejects);

// --- Analysis reports --------------------------------------------------
std::string corr_summary_to_json(const CorrSummary& summary);
std::string pd_summary_to_json(const PDCorrSummary& summary);
void write_corr_csv(const CorrSummary& summary,
                    const std::filesystem::path& path);
void write_pd_corr_csv(const PDCorrSummary& summary,
                       const std::filesystem::path& path);

std::string fit_report_to_json(
    const ScalingFit& fit,
    const std::optional<BootstrapResult>& bootstrap = std::nullopt);

std::string sweep_to_csv(const SweepCurve& curve);
std::string lag_profile_to_csv(const LagProfile& profile);

std::string rolling_to_jsonl(const RollingReport& report,
                             bool include_matrices = false);
std::string rolling_to_csv(const RollingReport& report);

std::string regression_to_json(const RegressionResult& result);

}  // namespace fxscale
