#include "leafangle/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "leafangle/errors.hpp"

namespace leafangle {

namespace {

double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    auto first = text.data();
    auto last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("config key '" + std::string(key) + "': '" + std::string(text) + "' is not a number");
    }
    return v;
}

int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    auto first = text.data();
    auto last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("config key '" + std::string(key) + "': '" + std::string(text) + "' is not an integer");
    }
    return v;
}

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ValidationError(key, std::string("config key '") + key + "' " + what);
}

}  // namespace

void PipelineConfig::validate() const {
    require(std::isfinite(slope_band_low_deg) && slope_band_low_deg >= 0.0, "slope_band_low_deg",
            "must be >= 0");
    require(std::isfinite(slope_band_high_deg) && slope_band_high_deg <= 90.0, "slope_band_high_deg",
            "must be <= 90");
    require(slope_band_low_deg <= 90.0, "slope_band_low_deg", "must be <= 90");
    require(slope_band_low_deg < slope_band_high_deg, "slope_band_low_deg",
            "must be < slope_band_high_deg");
    require(std::isfinite(boundary_min_px) && boundary_min_px >= 0.0, "boundary_min_px", "must be >= 0");
    require(std::isfinite(orientation_bin_deg) && orientation_bin_deg > 0.0, "orientation_bin_deg",
            "must be > 0");
    require(std::isfinite(outlier_threshold_deg) && outlier_threshold_deg > 0.0, "outlier_threshold_deg",
            "must be > 0");
    require(min_instance_score >= 0.0 && min_instance_score <= 1.0, "min_instance_score",
            "must lie in [0, 1]");
    require(std::isfinite(sharpness_warn_threshold) && sharpness_warn_threshold >= 0.0,
            "sharpness_warn_threshold", "must be >= 0");
    require(roi_padding_px >= 0, "roi_padding_px", "must be >= 0");
}

nlohmann::json PipelineConfig::to_json() const {
    return {
        {"slope_band_low_deg", slope_band_low_deg},
        {"slope_band_high_deg", slope_band_high_deg},
        {"boundary_min_px", boundary_min_px},
        {"orientation_bin_deg", orientation_bin_deg},
        {"outlier_threshold_deg", outlier_threshold_deg},
        {"min_instance_score", min_instance_score},
        {"sharpness_warn_threshold", sharpness_warn_threshold},
        {"roi_padding_px", roi_padding_px},
    };
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "slope_band_low_deg",    "slope_band_high_deg", "boundary_min_px",
        "orientation_bin_deg",   "outlier_threshold_deg", "min_instance_score",
        "sharpness_warn_threshold", "roi_padding_px",
    };
    return keys;
}

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value) {
    if (key == "slope_band_low_deg") config.slope_band_low_deg = parse_double(key, value);
    else if (key == "slope_band_high_deg") config.slope_band_high_deg = parse_double(key, value);
    else if (key == "boundary_min_px") config.boundary_min_px = parse_double(key, value);
    else if (key == "orientation_bin_deg") config.orientation_bin_deg = parse_double(key, value);
    else if (key == "outlier_threshold_deg") config.outlier_threshold_deg = parse_double(key, value);
    else if (key == "min_instance_score") config.min_instance_score = parse_double(key, value);
    else if (key == "sharpness_warn_threshold") config.sharpness_warn_threshold = parse_double(key, value);
    else if (key == "roi_padding_px") config.roi_padding_px = parse_int(key, value);
    else throw ValidationError(std::string(key), "unknown config key '" + std::string(key) + "'");
}

PipelineConfig load_config(std::optional<std::string_view> source) {
    PipelineConfig config;
    if (!source) return config;

    YAML::Node root;
    try {
        root = YAML::Load(std::string(*source));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string("malformed config document: ") + e.what());
    }
    if (root.IsNull()) {
        config.validate();
        return config;
    }
    if (!root.IsMap()) throw ParseError("config document must be a key-value mapping");

    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!kv.second.IsScalar()) {
            throw ParseError("config key '" + key + "' must have a scalar value");
        }
        set_config_value(config, key, kv.second.Scalar());
    }
    config.validate();
    return config;
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

}  // namespace leafangle
