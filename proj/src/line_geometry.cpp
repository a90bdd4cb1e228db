#include "leafangle/line_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "leafangle/errors.hpp"

namespace leafangle {

double orientation_deg(const LineSegment& segment) {
    const double dx = std::abs(segment.x2 - segment.x1);
    const double dy = std::abs(segment.y2 - segment.y1);
    if (dx == 0.0 && dy == 0.0) throw GeometryError("orientation of a zero-length segment");
    return std::atan2(dy, dx) * (180.0 / std::numbers::pi);
}

double segment_length(const LineSegment& segment) {
    return std::hypot(segment.x2 - segment.x1, segment.y2 - segment.y1);
}

double point_border_distance(double x, double y, int width, int height) {
    return std::min({x, y, (width - 1) - x, (height - 1) - y});
}

double boundary_distance(const LineSegment& segment, int width, int height) {
    return std::min(point_border_distance(segment.x1, segment.y1, width, height),
                    point_border_distance(segment.x2, segment.y2, width, height));
}

}  // namespace leafangle
