#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mimocdma/sim.hpp"

namespace mimocdma {

/// Shortest round-trip decimal, '.' separator, independent of locale.
std::string format_double(double v);

/// "a:step:b" (inclusive) or a comma list "a,b,c".
std::vector<double> parse_snr_grid(std::string_view text);

/// Applies one `key = value` setting. Throws ConfigError on unknown keys or
/// malformed values.
void apply_setting(SimConfig& cfg, std::string_view key, std::string_view value);

/// Flat key-value text: one `key = value` per line, '#' starts a comment.
/// Keys mirror SimConfig field names; `profile = fast|table1` applies a preset.
SimConfig parse_config_text(std::string_view text, SimConfig base = {});
SimConfig load_config_file(const std::filesystem::path& path, SimConfig base = {});

/// Header `modulation,snr_db,bits,errors,ber,ci95`.
std::string ber_csv(const std::vector<BerRecord>& table);
/// Header `modulation,reference,at_snr_db,gain_db,flag`.
std::string gain_csv(const std::vector<GainRecord>& gains);

std::string version_string();

/// JSON run manifest: configuration, seed, version, wall time and per-point
/// diagnostics (frames, singular-channel redraws).
std::string manifest_json(const SimConfig& cfg, const std::vector<BerRecord>& table,
                          double wall_time_s);
SimConfig config_from_manifest(std::string_view json_text);

struct EmittedFiles {
    std::filesystem::path ber_csv;
    std::filesystem::path gain_csv;
    std::filesystem::path manifest;
};

/// Writes ber.csv, gains.csv and manifest.json into `dir` (created if
/// missing). Throws IoError naming the path that could not be written.
EmittedFiles emit_results(const SimConfig& cfg, const std::vector<BerRecord>& table,
                          const std::vector<GainRecord>& gains, const std::filesystem::path& dir,
                          double wall_time_s);

/// One line per point, `scheme,label,real,imag`, with a header.
std::string constellation_fixture();

}  // namespace mimocdma
