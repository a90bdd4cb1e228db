#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "leafangle/config.hpp"
#include "leafangle/detection.hpp"
#include "leafangle/image.hpp"

namespace leafangle {

struct RoiImage {
    Image pixels;
    int offset_x = 0;  // crop origin in the source image
    int offset_y = 0;
    double sharpness = 0.0;
};

struct PrimaryInstance {
    std::size_t index = 0;  // position in the record's instance list
    std::size_t area = 0;
    InstanceMask mask;
};

/// Largest-area instance among those scoring at least `min_instance_score`.
/// Equal areas resolve to the lowest index. Throws NoInstanceError.
PrimaryInstance select_primary_instance(std::span<const InstanceDetection> instances, int width,
                                        int height, const PipelineConfig& config,
                                        std::string_view image_id = {});

/// Pixelwise AND: keeps pixels under set mask bits, zeroes the rest.
Image apply_mask(const Image& image, const InstanceMask& mask);

/// Tight box around the mask's set pixels, grown by `roi_padding_px` and
/// clipped to the image, cut from `image`. Sharpness is computed on the crop.
RoiImage crop_roi(const Image& image, const InstanceMask& mask, const PipelineConfig& config);

/// 0.299 R + 0.587 G + 0.114 B for 3/4-channel images; single-channel is
/// returned as doubles unchanged.
std::vector<double> luminance(const Image& image);

/// Variance of the 4-neighbour Laplacian over interior pixels of the
/// luminance image. Throws MetricError below 3x3.
double sharpness_score(const Image& image);

}  // namespace leafangle
