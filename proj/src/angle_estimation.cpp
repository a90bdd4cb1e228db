#include "leafangle/angle_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "leafangle/errors.hpp"
#include "leafangle/line_geometry.hpp"

namespace leafangle {

std::string_view to_string(Selection selection) {
    return selection == Selection::mode ? "mode" : "median";
}

std::string EstimateFlags::to_string() const {
    std::string out;
    auto add = [&](EstimateFlag f, const char* name) {
        if (!has(f)) return;
        if (!out.empty()) out += ';';
        out += name;
    };
    add(EstimateFlag::low_sharpness, "low_sharpness");
    add(EstimateFlag::multi_instance, "multi_instance");
    add(EstimateFlag::median_fallback, "median_fallback");
    return out;
}

std::vector<LineSegment> filter_segments(std::span<const LineSegment> segments, int width, int height,
                                         const PipelineConfig& config) {
    std::vector<LineSegment> kept;
    kept.reserve(segments.size());
    for (const auto& s : segments) {
        const double theta = orientation_deg(s);
        const bool in_band = theta >= config.slope_band_low_deg && theta <= config.slope_band_high_deg;
        const bool near_border = boundary_distance(s, width, height) < config.boundary_min_px;
        if (!(in_band && near_border)) kept.push_back(s);
    }
    return kept;
}

long orientation_bin(double orientation, const PipelineConfig& config) {
    return static_cast<long>(std::floor(orientation / config.orientation_bin_deg));
}

DominantSegments select_dominant_segments(std::span<const LineSegment> retained,
                                          const PipelineConfig& config, std::string_view image_id) {
    if (retained.empty()) {
        throw NoLeafLinesError(std::string(image_id),
                               "image '" + std::string(image_id) + "': no segments left to estimate from");
    }

    struct BinStats {
        std::size_t count = 0;
        double longest = 0.0;
    };
    std::vector<double> orientation(retained.size());
    std::vector<long> bin(retained.size());
    std::map<long, BinStats> bins;
    for (std::size_t i = 0; i < retained.size(); ++i) {
        orientation[i] = orientation_deg(retained[i]);
        bin[i] = orientation_bin(orientation[i], config);
        auto& st = bins[bin[i]];
        ++st.count;
        st.longest = std::max(st.longest, segment_length(retained[i]));
    }

    // std::map iterates in ascending bin order, so strict comparisons below
    // leave the smaller index in place on a full tie.
    auto best = bins.begin();
    for (auto it = std::next(bins.begin()); it != bins.end(); ++it) {
        const auto& [b, st] = *it;
        if (st.count > best->second.count ||
            (st.count == best->second.count && st.longest > best->second.longest)) {
            best = it;
        }
    }

    DominantSegments out;
    if (best->second.count >= 2) {
        out.selection = Selection::mode;
        out.bin = best->first;
        for (std::size_t i = 0; i < retained.size(); ++i) {
            if (bin[i] == out.bin) out.segments.push_back(retained[i]);
        }
        return out;
    }

    // Every bin is a singleton, so orientations are pairwise distinct and the
    // lower median is a unique segment regardless of input order.
    std::vector<std::size_t> order(retained.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return orientation[a] < orientation[b]; });
    const std::size_t pick = order[(order.size() - 1) / 2];
    out.selection = Selection::median;
    out.bin = bin[pick];
    out.segments.push_back(retained[pick]);
    return out;
}

AngleEstimate estimate_angle(const DetectionRecord& record, const RoiImage* roi, const PipelineConfig& config) {
    const bool any_instance =
        std::any_of(record.instances.begin(), record.instances.end(),
                    [&](const InstanceDetection& d) { return d.score >= config.min_instance_score; });
    if (!any_instance) {
        throw NoInstanceError(record.image_id, "image '" + record.image_id + "': no instance scores at least " +
                                                   std::to_string(config.min_instance_score));
    }

    const int width = roi ? roi->pixels.width : record.width;
    const int height = roi ? roi->pixels.height : record.height;

    AngleEstimate est;
    est.image_id = record.image_id;
    est.segments_total = record.segments.size();

    const auto retained = filter_segments(record.segments, width, height, config);
    est.segments_retained = retained.size();
    if (retained.empty()) {
        throw NoLeafLinesError(record.image_id,
                               "image '" + record.image_id + "': " +
                                   (record.segments.empty() ? std::string("no segments detected")
                                                            : "all " + std::to_string(record.segments.size()) +
                                                                  " segments filtered as stem"));
    }

    const auto dominant = select_dominant_segments(retained, config, record.image_id);
    est.selection = dominant.selection;
    est.segments_in_mode = dominant.segments.size();

    // Summed in sorted order so the mean is bit-identical under permutation.
    std::vector<double> thetas;
    thetas.reserve(dominant.segments.size());
    for (const auto& s : dominant.segments) thetas.push_back(orientation_deg(s));
    std::sort(thetas.begin(), thetas.end());
    double sum = 0.0;
    for (double t : thetas) sum += t;
    est.angle_deg = sum / static_cast<double>(thetas.size());

    if (roi && roi->sharpness < config.sharpness_warn_threshold) est.flags.set(EstimateFlag::low_sharpness);
    if (record.instances.size() > 1) est.flags.set(EstimateFlag::multi_instance);
    if (dominant.selection == Selection::median) est.flags.set(EstimateFlag::median_fallback);
    return est;
}

}  // namespace leafangle
