#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "leafangle/config.hpp"

namespace leafangle {

struct Measurement {
    std::string image_id;
    double angle_deg = 0.0;
};

/// One rater's (or the algorithm's) angles. Ids must be unique; angles must
/// lie in [0, 180]. Values above 90 are accepted and reported as flagged.
struct MeasurementSet {
    std::string label;
    std::vector<Measurement> entries;

    /// Throws ValidationError on duplicate ids or out-of-range angles.
    void validate() const;
};

struct Outlier {
    std::string image_id;
    double alg_deg = 0.0;
    double manual_deg = 0.0;
    double abs_diff_deg = 0.0;
};

struct EvaluationReport {
    std::string label;  // "<alg label> vs <manual label>"
    std::size_t n_common = 0;
    std::size_t only_in_alg = 0;
    std::size_t only_in_manual = 0;
    double cosine_similarity = 0.0;
    double implied_angle_deg = 0.0;
    std::vector<Outlier> outliers;  // sorted by image_id
    double mean_signed_diff_deg = 0.0;
    double mean_abs_diff_deg = 0.0;
    /// NaN when every common image is an outlier.
    double non_outlier_mean_abs_diff_deg = 0.0;
    std::vector<std::string> above_90;  // common ids where either side exceeds 90
};

/// a.b / (|a| |b|) for nonnegative vectors, clamped to [0, 1].
/// Throws ShapeError on length mismatch or empty input, UndefinedSimilarityError
/// when either vector is all zeros, ValidationError on negative entries.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// arccos(similarity) in degrees, similarity clamped to [-1, 1] first.
double implied_angle_deg(double similarity);

/// Joins by image_id (never by position) and computes every report field
/// over the intersection. Throws JoinError when the intersection is empty.
EvaluationReport compare(const MeasurementSet& alg, const MeasurementSet& manual,
                         const PipelineConfig& config);

nlohmann::json to_json(const EvaluationReport& report);

}  // namespace leafangle
