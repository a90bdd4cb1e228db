#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace leafangle {

/// Every threshold the pipeline uses. Immutable once loaded.
struct PipelineConfig {
    double slope_band_low_deg = 80.0;
    double slope_band_high_deg = 90.0;
    double boundary_min_px = 100.0;
    double orientation_bin_deg = 1.0;
    double outlier_threshold_deg = 8.0;
    double min_instance_score = 0.5;
    double sharpness_warn_threshold = 100.0;
    int roi_padding_px = 10;

    /// Throws ValidationError naming the first key that breaks an invariant.
    void validate() const;

    /// Snapshot of every effective key, used by run manifests.
    nlohmann::json to_json() const;

    bool operator==(const PipelineConfig&) const = default;
};

/// Names of all config keys in declaration order (snake_case, as in the file).
const std::vector<std::string>& config_keys();

/// Overlay a single key onto `config`. Throws ValidationError for unknown keys
/// and ParseError when `value` does not parse as the key's type. Does not
/// validate cross-key invariants.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

/// Defaults overlaid with the keys of a flat YAML mapping (JSON also works).
/// An absent source yields the defaults. Result is validated.
PipelineConfig load_config(std::optional<std::string_view> source = std::nullopt);

PipelineConfig load_config_file(const std::filesystem::path& path);

}  // namespace leafangle
