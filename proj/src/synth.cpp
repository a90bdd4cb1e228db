#include "leafangle/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "leafangle/angle_estimation.hpp"
#include "leafangle/errors.hpp"
#include "leafangle/line_geometry.hpp"

namespace leafangle {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

constexpr double kMarginPx = 20.0;
constexpr double kMinLengthPx = 40.0;
constexpr double kMaxLengthPx = 150.0;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * n)); }
    bool coin() { return uniform() < 0.5; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

private:
    std::mt19937_64 engine_;
};

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

/// Segment of orientation `theta` centred inside [x_lo, x_hi] x [y_lo, y_hi]
/// with both endpoints in that box. Tilt direction is random.
LineSegment place_in_box(Rng& rng, double theta, double x_lo, double x_hi, double y_lo, double y_hi,
                         double min_len, double max_len) {
    const double c = std::cos(radians(theta));
    const double s = std::sin(radians(theta));
    double fit = max_len;
    if (c > 1e-12) fit = std::min(fit, (x_hi - x_lo) / c);
    if (s > 1e-12) fit = std::min(fit, (y_hi - y_lo) / s);
    if (fit < min_len) throw GenerationError("image too small to place a segment with the required margins");
    const double len = rng.uniform(min_len, fit);
    const double ex = 0.5 * len * c;
    const double ey = 0.5 * len * s;
    const double cx = rng.uniform(x_lo + ex, x_hi - ex);
    const double cy = rng.uniform(y_lo + ey, y_hi - ey);
    const double dir = rng.coin() ? 1.0 : -1.0;
    LineSegment seg;
    seg.x1 = cx - ex;
    seg.x2 = cx + ex;
    seg.y1 = cy - dir * ey;
    seg.y2 = cy + dir * ey;
    seg.score = rng.uniform(0.6, 1.0);
    return seg;
}

}  // namespace

Fixture generate_fixture(const FixtureSpec& spec, const PipelineConfig& config) {
    if (!(spec.true_angle_deg > 0.0 && spec.true_angle_deg < 80.0)) {
        throw GenerationError("true_angle_deg must lie in (0, 80)");
    }
    if (spec.n_leaf_segments < 1 || spec.n_stem_segments < 0 || spec.n_distractors < 0) {
        throw GenerationError("need at least one leaf segment and non-negative stem/distractor counts");
    }
    if (!(spec.jitter_deg >= 0.0 && spec.jitter_deg < config.orientation_bin_deg / 2.0)) {
        throw GenerationError("jitter_deg must lie in [0, orientation_bin_deg / 2)");
    }
    if (spec.width <= 0 || spec.height <= 0) throw GenerationError("image size must be positive");

    Rng rng(spec.seed);
    const double W = spec.width - 1;
    const double H = spec.height - 1;

    DetectionRecord rec;
    rec.image_id = spec.image_id.empty() ? "synth_" + std::to_string(spec.seed) : spec.image_id;
    rec.width = spec.width;
    rec.height = spec.height;
    rec.source = "synth:seed=" + std::to_string(spec.seed) + ";frame=image";
    rec.instances.push_back(InstanceDetection{
        1.0,
        {0.0, 0.0, static_cast<double>(spec.width), static_cast<double>(spec.height)},
        PolygonMask{{{0, 0}, {static_cast<double>(spec.width), 0},
                     {static_cast<double>(spec.width), static_cast<double>(spec.height)},
                     {0, static_cast<double>(spec.height)}}}});

    // Leaf segments sit well inside the border so the filter never touches them.
    const double inner = config.boundary_min_px + kMarginPx;
    if (W - 2 * inner < kMinLengthPx * 0.5 || H - 2 * inner < kMinLengthPx * 0.5) {
        throw GenerationError("image " + std::to_string(spec.width) + "x" + std::to_string(spec.height) +
                              " leaves no interior beyond " + std::to_string(inner) + " px from the border");
    }
    std::vector<LineSegment> segments;
    std::set<long> leaf_bins;
    for (int i = 0; i < spec.n_leaf_segments; ++i) {
        const double theta =
            std::clamp(spec.true_angle_deg + rng.uniform(-spec.jitter_deg, spec.jitter_deg), 0.0, 90.0);
        auto seg = place_in_box(rng, theta, inner, W - inner, inner, H - inner, kMinLengthPx, kMaxLengthPx);
        leaf_bins.insert(orientation_bin(orientation_deg(seg), config));
        segments.push_back(seg);
    }

    // Stems hug the left or right border, inside boundary_min_px - 20.
    if (spec.n_stem_segments > 0) {
        const double outer = config.boundary_min_px - kMarginPx;
        if (outer <= 2.0) throw GenerationError("boundary_min_px too small to place stem segments");
        for (int i = 0; i < spec.n_stem_segments; ++i) {
            const double phi = rng.uniform(86.0, 90.0);
            const double x_hi = std::min(outer - 1.0, W);
            auto seg = place_in_box(rng, phi, 0.0, x_hi, 0.0, H, kMinLengthPx, 4 * kMaxLengthPx);
            if (rng.coin()) {
                seg.x1 = W - seg.x1;
                seg.x2 = W - seg.x2;
            }
            segments.push_back(seg);
        }
    }

    // Distractors take distinct singleton bins below the slope band.
    if (spec.n_distractors > 0) {
        std::vector<long> candidates;
        const long band_bin = static_cast<long>(std::floor(config.slope_band_low_deg / config.orientation_bin_deg));
        for (long b = 0; b < band_bin; ++b) {
            if (!leaf_bins.contains(b)) candidates.push_back(b);
        }
        if (static_cast<std::size_t>(spec.n_distractors) > candidates.size()) {
            throw GenerationError("not enough free orientation bins for " + std::to_string(spec.n_distractors) +
                                  " distractors");
        }
        rng.shuffle(candidates);
        for (int i = 0; i < spec.n_distractors; ++i) {
            const double theta = (static_cast<double>(candidates[i]) + rng.uniform(0.2, 0.8)) * config.orientation_bin_deg;
            segments.push_back(
                place_in_box(rng, theta, inner, W - inner, inner, H - inner, kMinLengthPx, kMaxLengthPx));
        }
    }

    rng.shuffle(segments);
    rec.segments = std::move(segments);
    return {std::move(rec), spec.true_angle_deg};
}

std::vector<Fixture> generate_suite(const SuiteSpec& suite, const PipelineConfig& config) {
    if (!(suite.min_angle_deg > 0.0 && suite.min_angle_deg <= suite.max_angle_deg && suite.max_angle_deg <= 80.0)) {
        throw GenerationError("suite angle range must satisfy 0 < min <= max <= 80");
    }
    if (suite.min_leaf < 1 || suite.max_leaf < suite.min_leaf || suite.max_stems < 0 || suite.max_distractors < 0) {
        throw GenerationError("invalid suite segment counts");
    }
    auto unit = [](std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; };
    auto pick = [&](std::uint64_t x, int lo, int hi) {
        return lo + static_cast<int>(std::min<double>(hi - lo, std::floor(unit(x) * (hi - lo + 1))));
    };

    std::vector<Fixture> out;
    out.reserve(suite.count);
    for (std::size_t i = 0; i < suite.count; ++i) {
        const std::uint64_t s0 = splitmix64(suite.seed + i);
        const std::uint64_t s1 = splitmix64(s0);
        const std::uint64_t s2 = splitmix64(s1);
        const std::uint64_t s3 = splitmix64(s2);
        const std::uint64_t s4 = splitmix64(s3);

        FixtureSpec spec;
        spec.seed = s0;
        spec.true_angle_deg = suite.min_angle_deg + (suite.max_angle_deg - suite.min_angle_deg) * unit(s1);
        if (spec.true_angle_deg >= 80.0) spec.true_angle_deg = std::nextafter(80.0, 0.0);
        spec.n_leaf_segments = pick(s2, suite.min_leaf, suite.max_leaf);
        spec.n_stem_segments = pick(s3, 0, suite.max_stems);
        spec.n_distractors = pick(s4, 0, suite.max_distractors);
        spec.jitter_deg = suite.jitter_deg;
        spec.width = suite.width;
        spec.height = suite.height;
        char id[32];
        std::snprintf(id, sizeof id, "synth_%05zu", i);
        spec.image_id = id;
        out.push_back(generate_fixture(spec, config));
    }
    return out;
}

}  // namespace leafangle
