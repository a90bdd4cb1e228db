#pragma once

// Brute-force reference computations used by the unit and acceptance suites.
// Each one is written independently of the library code path it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "leafangle/detection.hpp"
#include "leafangle/evaluation.hpp"
#include "leafangle/image.hpp"
#include "leafangle/line_geometry.hpp"

namespace leafangle::oracle {

/// Expands runs into a flat column-major vector, then transposes.
inline std::vector<std::uint8_t> naive_rle_decode(const std::vector<std::uint64_t>& counts, int width,
                                                   int height) {
    std::vector<std::uint8_t> colmajor;
    std::uint8_t value = 0;
    for (auto c : counts) {
        for (std::uint64_t k = 0; k < c; ++k) colmajor.push_back(value);
        value = value ? 0 : 1;
    }
    std::vector<std::uint8_t> rowmajor(static_cast<std::size_t>(width) * height, 0);
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) {
            rowmajor[static_cast<std::size_t>(y) * width + x] = colmajor[static_cast<std::size_t>(x) * height + y];
        }
    }
    return rowmajor;
}

/// Even-odd test casting the ray toward -x. Agrees with a +x ray whenever the
/// point is not on an edge.
inline bool point_in_polygon(const std::vector<Point>& poly, double px, double py) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        if ((a.y <= py && b.y > py) || (b.y <= py && a.y > py)) {
            const double t = (py - a.y) / (b.y - a.y);
            if (a.x + t * (b.x - a.x) < px) inside = !inside;
        }
    }
    return inside;
}

inline std::vector<std::uint8_t> rasterize_polygon(const std::vector<Point>& poly, int width, int height) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height, 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            out[static_cast<std::size_t>(y) * width + x] = point_in_polygon(poly, x, y) ? 1 : 0;
        }
    }
    return out;
}

inline std::size_t count_set(const std::vector<std::uint8_t>& bits) {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](auto b) { return b != 0; }));
}

/// Index of the largest-area candidate, lowest index on ties; nullopt when
/// nothing passes the score floor.
inline std::optional<std::size_t> largest_area_index(const std::vector<std::size_t>& areas,
                                                     const std::vector<double>& scores, double floor) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < areas.size(); ++i) {
        if (scores[i] < floor) continue;
        bool beats_all = true;
        for (std::size_t j = 0; j < areas.size(); ++j) {
            if (j == i || scores[j] < floor) continue;
            if (areas[j] > areas[i] || (areas[j] == areas[i] && j < i)) beats_all = false;
        }
        if (beats_all) best = i;
    }
    return best;
}

inline Image select_pixels(const Image& img, const std::vector<std::uint8_t>& mask) {
    Image out = img;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                out.at(x, y, c) = mask[static_cast<std::size_t>(y) * img.width + x] ? img.at(x, y, c) : 0;
            }
        }
    }
    return out;
}

/// Laplacian by explicit 3x3 kernel convolution; variance by E[r^2] - E[r]^2
/// in long double.
inline double laplacian_variance(const std::vector<double>& lum, int width, int height) {
    static constexpr int kernel[3][3] = {{0, 1, 0}, {1, -4, 1}, {0, 1, 0}};
    long double s = 0, s2 = 0;
    long double n = 0;
    for (int y = 1; y < height - 1; ++y) {
        for (int x = 1; x < width - 1; ++x) {
            long double r = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    r += kernel[dy + 1][dx + 1] * lum[static_cast<std::size_t>(y + dy) * width + (x + dx)];
                }
            }
            s += r;
            s2 += r * r;
            n += 1;
        }
    }
    const long double mean = s / n;
    return static_cast<double>(s2 / n - mean * mean);
}

/// Minimum pointwise border distance over `samples` evenly spaced points.
inline double sampled_boundary_distance(const LineSegment& s, int width, int height, int samples = 1000) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double t = samples == 1 ? 0.0 : static_cast<double>(k) / (samples - 1);
        const double x = s.x1 + t * (s.x2 - s.x1);
        const double y = s.y1 + t * (s.y2 - s.y1);
        const double d = std::min(std::min(x, y), std::min((width - 1) - x, (height - 1) - y));
        best = std::min(best, d);
    }
    return best;
}

inline bool filter_removes(const LineSegment& s, int width, int height, double low, double high, double min_px) {
    const double theta = orientation_deg(s);
    if (theta < low || theta > high) return false;
    return sampled_boundary_distance(s, width, height, 2) < min_px;
}

struct SelectionOracle {
    std::vector<std::size_t> picked;  // indices into the input
    bool mode = false;
};

/// Walks every bin from the lowest to the highest occupied one, scoring
/// (count, longest, -bin) lexicographically. Falls back to the lower median
/// by rank counting when no bin holds two segments.
inline SelectionOracle select_exhaustive(const std::vector<LineSegment>& segs, double bin_width) {
    const std::size_t n = segs.size();
    std::vector<double> theta(n), len(n);
    std::vector<long> bin(n);
    for (std::size_t i = 0; i < n; ++i) {
        theta[i] = orientation_deg(segs[i]);
        len[i] = segment_length(segs[i]);
        bin[i] = static_cast<long>(std::floor(theta[i] / bin_width));
    }
    const long lo = *std::min_element(bin.begin(), bin.end());
    const long hi = *std::max_element(bin.begin(), bin.end());

    long best_bin = lo;
    std::size_t best_count = 0;
    double best_len = -1.0;
    for (long b = lo; b <= hi; ++b) {
        std::size_t count = 0;
        double longest = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (bin[i] != b) continue;
            ++count;
            longest = std::max(longest, len[i]);
        }
        if (count == 0) continue;
        const bool better = count > best_count || (count == best_count && longest > best_len) ||
                            (count == best_count && longest == best_len && b < best_bin);
        if (better) {
            best_bin = b;
            best_count = count;
            best_len = longest;
        }
    }

    SelectionOracle out;
    if (best_count >= 2) {
        out.mode = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (bin[i] == best_bin) out.picked.push_back(i);
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t below = 0;
        for (std::size_t j = 0; j < n; ++j) below += theta[j] < theta[i];
        if (below == (n - 1) / 2) out.picked.push_back(i);
    }
    return out;
}

struct ReportOracle {
    std::size_t n = 0;
    double similarity = 0.0;
    std::vector<std::string> outlier_ids;
    double mean_signed = 0.0;
    double mean_abs = 0.0;
    double non_outlier_mean_abs = 0.0;
};

/// Quadratic join by id and direct sums in long double.
inline ReportOracle evaluate_direct(const MeasurementSet& alg, const MeasurementSet& manual, double threshold) {
    std::vector<std::pair<std::string, std::pair<double, double>>> joined;
    for (const auto& a : alg.entries) {
        for (const auto& m : manual.entries) {
            if (a.image_id == m.image_id) joined.push_back({a.image_id, {a.angle_deg, m.angle_deg}});
        }
    }
    std::sort(joined.begin(), joined.end());
    ReportOracle r;
    r.n = joined.size();
    long double dot = 0, na = 0, nb = 0, sd = 0, sa = 0, sin = 0;
    std::size_t inliers = 0;
    for (const auto& [id, v] : joined) {
        const long double a = v.first, b = v.second;
        dot += a * b;
        na += a * a;
        nb += b * b;
        sd += a - b;
        sa += std::fabs(a - b);
        if (std::fabs(a - b) > threshold) {
            r.outlier_ids.push_back(id);
        } else {
            sin += std::fabs(a - b);
            ++inliers;
        }
    }
    r.similarity = static_cast<double>(dot / std::sqrt(na * nb));
    r.mean_signed = static_cast<double>(sd / r.n);
    r.mean_abs = static_cast<double>(sa / r.n);
    r.non_outlier_mean_abs = inliers ? static_cast<double>(sin / inliers) : std::nan("");
    return r;
}

/// Random measurement tables sharing most ids, in shuffled order.
inline std::pair<MeasurementSet, MeasurementSet> random_tables(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> angle(0.0, 90.0);
    std::normal_distribution<double> noise(0.0, 6.0);
    MeasurementSet a{"alg", {}}, b{"manual", {}};
    for (std::size_t i = 0; i < n; ++i) {
        const std::string id = "img" + std::to_string(i);
        const double truth = angle(rng);
        a.entries.push_back({id, truth});
        b.entries.push_back({id, std::clamp(truth + noise(rng), 0.0, 180.0)});
    }
    // A few ids present on one side only.
    a.entries.push_back({"only_alg", 12.0});
    b.entries.push_back({"only_manual", 34.0});
    std::shuffle(a.entries.begin(), a.entries.end(), rng);
    std::shuffle(b.entries.begin(), b.entries.end(), rng);
    return {a, b};
}

}  // namespace leafangle::oracle
