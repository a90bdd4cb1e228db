#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "leafangle/image.hpp"

namespace leafangle {

/// Image coordinates, y grows downward. After parsing, endpoints lie in
/// [0, width-1] x [0, height-1] and the segment has positive length.
struct LineSegment {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    double score = 1.0;

    bool operator==(const LineSegment&) const = default;
};

struct Point {
    double x = 0, y = 0;
    bool operator==(const Point&) const = default;
};

struct PolygonMask {
    std::vector<Point> vertices;
    bool operator==(const PolygonMask&) const = default;
};

/// Uncompressed COCO RLE: column-major runs, alternating background/foreground,
/// starting with background.
struct RleMask {
    std::vector<std::uint64_t> counts;
    bool operator==(const RleMask&) const = default;
};

using MaskEncoding = std::variant<PolygonMask, RleMask>;

struct InstanceDetection {
    double score = 1.0;
    std::array<double, 4> bbox{};  // x, y, w, h
    MaskEncoding mask;

    bool operator==(const InstanceDetection&) const = default;
};

struct DetectionRecord {
    std::string image_id;
    int width = 0;
    int height = 0;
    std::string source;
    std::vector<InstanceDetection> instances;
    std::vector<LineSegment> segments;

    bool operator==(const DetectionRecord&) const = default;
};

/// Endpoints may overshoot the pixel grid by up to this much before parsing
/// fails; anything inside the tolerance is clamped onto the grid.
inline constexpr double kClampTolerancePx = 1.0;

/// Clamp one coordinate to [0, extent-1]. Throws GeometryError if `v` lies
/// outside [-kClampTolerancePx, extent + kClampTolerancePx].
double clamp_coordinate(double v, int extent);

DetectionRecord parse_detection_record(const nlohmann::json& doc);
DetectionRecord parse_detection_record(std::string_view text);
inline DetectionRecord parse_detection_record(const std::string& text) {
    return parse_detection_record(std::string_view(text));
}
inline DetectionRecord parse_detection_record(const char* text) {
    return parse_detection_record(std::string_view(text));
}

nlohmann::json to_json(const DetectionRecord& record);
std::string serialize_detection_record(const DetectionRecord& record);

/// Rasterize an encoding onto a width x height grid. Polygons use the even-odd
/// rule sampled at integer pixel centers; RLE counts must sum to width*height.
InstanceMask decode_mask(const MaskEncoding& encoding, int width, int height);

/// A batch is either a directory of *.json documents or one document holding a
/// record or a list of records. Documents that fail to parse are reported in
/// `failures` rather than aborting the batch.
struct BatchLoadFailure {
    std::string source;  // file name or "<path>[index]"
    std::string kind;
    std::string message;
};

struct Batch {
    std::vector<DetectionRecord> records;  // sorted by image_id
    std::vector<BatchLoadFailure> failures;
};

/// Throws IoError when the path is unreadable and SchemaError on duplicate ids.
Batch load_batch(const std::filesystem::path& path);

}  // namespace leafangle
