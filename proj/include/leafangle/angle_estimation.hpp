#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leafangle/config.hpp"
#include "leafangle/detection.hpp"
#include "leafangle/roi.hpp"

namespace leafangle {

enum class Selection { mode, median };

std::string_view to_string(Selection selection);

enum class EstimateFlag : std::uint8_t {
    low_sharpness = 1u << 0,
    multi_instance = 1u << 1,
    median_fallback = 1u << 2,
};

class EstimateFlags {
public:
    void set(EstimateFlag flag) { bits_ |= static_cast<std::uint8_t>(flag); }
    bool has(EstimateFlag flag) const { return (bits_ & static_cast<std::uint8_t>(flag)) != 0; }
    bool empty() const { return bits_ == 0; }

    /// "low_sharpness;multi_instance;median_fallback" subset in that order.
    std::string to_string() const;

    bool operator==(const EstimateFlags&) const = default;

private:
    std::uint8_t bits_ = 0;
};

struct AngleEstimate {
    std::string image_id;
    double angle_deg = 0.0;
    std::size_t segments_total = 0;
    std::size_t segments_retained = 0;
    std::size_t segments_in_mode = 0;
    Selection selection = Selection::mode;
    EstimateFlags flags;
};

/// Drops a segment only when its orientation falls inside the slope band
/// (inclusive) AND it lies closer than boundary_min_px to the border.
/// Survivors keep their input order.
std::vector<LineSegment> filter_segments(std::span<const LineSegment> segments, int width, int height,
                                         const PipelineConfig& config);

/// Bin index of an orientation: floor(orientation / orientation_bin_deg).
long orientation_bin(double orientation, const PipelineConfig& config);

struct DominantSegments {
    std::vector<LineSegment> segments;  // input order
    Selection selection = Selection::mode;
    long bin = 0;
};

/// Most populated orientation bin when any bin holds two or more segments;
/// ties go to the bin holding the longest segment, then the smaller index.
/// Otherwise the lower-median orientation segment. Throws NoLeafLinesError.
DominantSegments select_dominant_segments(std::span<const LineSegment> retained,
                                          const PipelineConfig& config,
                                          std::string_view image_id = {});

/// Full per-image estimate. When `roi` is given the segments are taken to be
/// in the crop's frame and boundary distances use the crop size.
AngleEstimate estimate_angle(const DetectionRecord& record, const RoiImage* roi,
                             const PipelineConfig& config);

inline AngleEstimate estimate_angle(const DetectionRecord& record, const PipelineConfig& config) {
    return estimate_angle(record, nullptr, config);
}

}  // namespace leafangle
