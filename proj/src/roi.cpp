#include "leafangle/roi.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "leafangle/errors.hpp"

namespace leafangle {

PrimaryInstance select_primary_instance(std::span<const InstanceDetection> instances, int width,
                                        int height, const PipelineConfig& config,
                                        std::string_view image_id) {
    std::optional<PrimaryInstance> best;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (instances[i].score < config.min_instance_score) continue;
        InstanceMask mask = decode_mask(instances[i].mask, width, height);
        const std::size_t area = mask.area();
        // Strict comparison keeps the lowest index on equal areas.
        if (!best || area > best->area) best = PrimaryInstance{i, area, std::move(mask)};
    }
    if (!best) {
        throw NoInstanceError(std::string(image_id), "image '" + std::string(image_id) +
                                                         "': no instance scores at least " +
                                                         std::to_string(config.min_instance_score));
    }
    return std::move(*best);
}

Image apply_mask(const Image& image, const InstanceMask& mask) {
    if (image.width != mask.width || image.height != mask.height) {
        throw ShapeError("image is " + std::to_string(image.width) + "x" + std::to_string(image.height) +
                         " but mask is " + std::to_string(mask.width) + "x" + std::to_string(mask.height));
    }
    Image out(image.width, image.height, image.channels);
    const std::size_t n = mask.bits.size();
    const auto c = static_cast<std::size_t>(image.channels);
    for (std::size_t p = 0; p < n; ++p) {
        if (!mask.bits[p]) continue;
        std::copy_n(image.data.begin() + static_cast<std::ptrdiff_t>(p * c), c,
                    out.data.begin() + static_cast<std::ptrdiff_t>(p * c));
    }
    return out;
}

RoiImage crop_roi(const Image& image, const InstanceMask& mask, const PipelineConfig& config) {
    if (image.width != mask.width || image.height != mask.height) {
        throw ShapeError("image and mask dimensions differ");
    }
    int min_x = std::numeric_limits<int>::max(), min_y = std::numeric_limits<int>::max();
    int max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.test(x, y)) continue;
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x < 0) throw NoInstanceError("", "mask has no set pixels");

    const int pad = config.roi_padding_px;
    const int x0 = std::max(0, min_x - pad);
    const int y0 = std::max(0, min_y - pad);
    const int x1 = std::min(image.width - 1, max_x + pad);
    const int y1 = std::min(image.height - 1, max_y + pad);

    RoiImage roi;
    roi.offset_x = x0;
    roi.offset_y = y0;
    roi.pixels = Image(x1 - x0 + 1, y1 - y0 + 1, image.channels);
    const auto c = static_cast<std::size_t>(image.channels);
    for (int y = y0; y <= y1; ++y) {
        const auto src = (static_cast<std::size_t>(y) * image.width + x0) * c;
        const auto dst = static_cast<std::size_t>(y - y0) * roi.pixels.width * c;
        std::copy_n(image.data.begin() + static_cast<std::ptrdiff_t>(src), roi.pixels.width * c,
                    roi.pixels.data.begin() + static_cast<std::ptrdiff_t>(dst));
    }
    roi.sharpness = roi.pixels.width >= 3 && roi.pixels.height >= 3 ? sharpness_score(roi.pixels) : 0.0;
    return roi;
}

std::vector<double> luminance(const Image& image) {
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    std::vector<double> out(n);
    const auto c = static_cast<std::size_t>(image.channels);
    for (std::size_t p = 0; p < n; ++p) {
        const auto* px = &image.data[p * c];
        out[p] = c >= 3 ? 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2] : static_cast<double>(px[0]);
    }
    return out;
}

double sharpness_score(const Image& image) {
    if (image.width < 3 || image.height < 3) {
        throw MetricError("sharpness needs at least a 3x3 image, got " + std::to_string(image.width) + "x" +
                          std::to_string(image.height));
    }
    const auto lum = luminance(image);
    const int w = image.width;
    auto at = [&](int x, int y) { return lum[static_cast<std::size_t>(y) * w + x]; };

    // Two-pass mean/variance keeps constant images at exactly zero.
    std::vector<double> response;
    response.reserve(static_cast<std::size_t>(w - 2) * (image.height - 2));
    for (int y = 1; y + 1 < image.height; ++y) {
        for (int x = 1; x + 1 < w; ++x) {
            response.push_back(at(x - 1, y) + at(x + 1, y) + at(x, y - 1) + at(x, y + 1) - 4.0 * at(x, y));
        }
    }
    double mean = 0.0;
    for (double r : response) mean += r;
    mean /= static_cast<double>(response.size());
    double var = 0.0;
    for (double r : response) var += (r - mean) * (r - mean);
    return var / static_cast<double>(response.size());
}

}  // namespace leafangle
