#include "leafangle/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "leafangle/errors.hpp"

namespace leafangle {

void MeasurementSet::validate() const {
    std::set<std::string_view> seen;
    for (const auto& m : entries) {
        if (m.image_id.empty()) throw ValidationError("image_id", "measurement set '" + label + "': empty image_id");
        if (!seen.insert(m.image_id).second) {
            throw ValidationError("image_id", "measurement set '" + label + "': duplicate image_id '" +
                                                  m.image_id + "'");
        }
        if (!std::isfinite(m.angle_deg) || m.angle_deg < 0.0 || m.angle_deg > 180.0) {
            throw ValidationError("angle_deg", "measurement set '" + label + "': angle for '" + m.image_id +
                                                   "' outside [0, 180]");
        }
    }
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ShapeError("cosine similarity of vectors with lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
    }
    if (a.empty()) throw ShapeError("cosine similarity of empty vectors");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0.0 || b[i] < 0.0) throw ValidationError("angle_deg", "cosine similarity expects nonnegative entries");
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw UndefinedSimilarityError("cosine similarity with a zero vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

double implied_angle_deg(double similarity) {
    return std::acos(std::clamp(similarity, -1.0, 1.0)) * (180.0 / std::numbers::pi);
}

EvaluationReport compare(const MeasurementSet& alg, const MeasurementSet& manual, const PipelineConfig& config) {
    alg.validate();
    manual.validate();

    std::map<std::string_view, double> lookup;
    for (const auto& m : manual.entries) lookup.emplace(m.image_id, m.angle_deg);

    struct Pair {
        std::string_view id;
        double alg, manual;
    };
    std::vector<Pair> pairs;
    for (const auto& m : alg.entries) {
        if (auto it = lookup.find(m.image_id); it != lookup.end()) pairs.push_back({m.image_id, m.angle_deg, it->second});
    }
    if (pairs.empty()) {
        throw JoinError(alg.entries.size(), manual.entries.size(),
                        "no common image_id between '" + alg.label + "' (" + std::to_string(alg.entries.size()) +
                            " entries) and '" + manual.label + "' (" + std::to_string(manual.entries.size()) +
                            " entries)");
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.id < b.id; });

    EvaluationReport r;
    r.label = alg.label + " vs " + manual.label;
    r.n_common = pairs.size();
    r.only_in_alg = alg.entries.size() - pairs.size();
    r.only_in_manual = manual.entries.size() - pairs.size();

    std::vector<double> a, b;
    a.reserve(pairs.size());
    b.reserve(pairs.size());
    double signed_sum = 0.0, abs_sum = 0.0, inlier_abs_sum = 0.0;
    std::size_t inliers = 0;
    for (const auto& p : pairs) {
        a.push_back(p.alg);
        b.push_back(p.manual);
        const double d = p.alg - p.manual;
        signed_sum += d;
        abs_sum += std::abs(d);
        if (std::abs(d) > config.outlier_threshold_deg) {
            r.outliers.push_back({std::string(p.id), p.alg, p.manual, std::abs(d)});
        } else {
            inlier_abs_sum += std::abs(d);
            ++inliers;
        }
        if (p.alg > 90.0 || p.manual > 90.0) r.above_90.emplace_back(p.id);
    }
    const auto n = static_cast<double>(pairs.size());
    r.cosine_similarity = cosine_similarity(a, b);
    r.implied_angle_deg = implied_angle_deg(r.cosine_similarity);
    r.mean_signed_diff_deg = signed_sum / n;
    r.mean_abs_diff_deg = abs_sum / n;
    r.non_outlier_mean_abs_diff_deg =
        inliers ? inlier_abs_sum / static_cast<double>(inliers) : std::numeric_limits<double>::quiet_NaN();
    return r;
}

nlohmann::json to_json(const EvaluationReport& report) {
    nlohmann::json outliers = nlohmann::json::array();
    for (const auto& o : report.outliers) {
        outliers.push_back({{"image_id", o.image_id},
                            {"alg_deg", o.alg_deg},
                            {"manual_deg", o.manual_deg},
                            {"abs_diff_deg", o.abs_diff_deg}});
    }
    nlohmann::json non_outlier = nullptr;
    if (std::isfinite(report.non_outlier_mean_abs_diff_deg)) non_outlier = report.non_outlier_mean_abs_diff_deg;
    return {{"label", report.label},
            {"n_common", report.n_common},
            {"only_in_alg", report.only_in_alg},
            {"only_in_manual", report.only_in_manual},
            {"cosine_similarity", report.cosine_similarity},
            {"implied_angle_deg", report.implied_angle_deg},
            {"outlier_count", report.outliers.size()},
            {"outliers", std::move(outliers)},
            {"mean_signed_diff_deg", report.mean_signed_diff_deg},
            {"mean_abs_diff_deg", report.mean_abs_diff_deg},
            {"non_outlier_mean_abs_diff_deg", std::move(non_outlier)},
            {"above_90", report.above_90}};
}

}  // namespace leafangle
