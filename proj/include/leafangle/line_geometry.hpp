#pragma once

#include "leafangle/detection.hpp"

namespace leafangle {

/// Unsigned orientation with the horizontal, in [0, 90] degrees. Endpoint
/// order and the y-down convention do not matter. Throws GeometryError on a
/// zero-length segment.
double orientation_deg(const LineSegment& segment);

double segment_length(const LineSegment& segment);

/// Smallest distance from any point of the segment to the pixel-grid border
/// (columns 0 and width-1, rows 0 and height-1). Border distance is concave
/// along the segment, so checking the endpoints suffices.
double boundary_distance(const LineSegment& segment, int width, int height);

/// Border distance of a single point.
double point_border_distance(double x, double y, int width, int height);

}  // namespace leafangle
