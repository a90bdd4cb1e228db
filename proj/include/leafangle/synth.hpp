#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "leafangle/config.hpp"
#include "leafangle/detection.hpp"

namespace leafangle {

/// Parameters for one synthetic detection record with a known leaf angle.
struct FixtureSpec {
    double true_angle_deg = 35.0;  // (0, 80)
    int n_leaf_segments = 3;
    int n_stem_segments = 2;
    int n_distractors = 1;
    double jitter_deg = 0.3;
    int width = 1000;
    int height = 1000;
    std::uint64_t seed = 0;
    std::string image_id;  // defaults to "synth_<seed>"
};

struct Fixture {
    DetectionRecord record;
    double true_angle_deg = 0.0;
};

/// Deterministic in `spec` and `config`. Random draws come from
/// std::mt19937_64 seeded with `spec.seed`, turned into doubles by taking the
/// top 53 bits, so output does not depend on the standard library's
/// distribution implementations.
///
/// Leaf segments sit at truth +/- jitter, at least boundary_min_px + 20 from
/// the border. Stem segments are at 86..90 degrees, within
/// boundary_min_px - 20 of the left or right border. Distractors occupy
/// distinct bins below the slope band and away from the leaf bins. One
/// full-frame polygon instance is attached. Throws GenerationError when the
/// spec is invalid or cannot fit the image.
Fixture generate_fixture(const FixtureSpec& spec, const PipelineConfig& config = {});

/// A reproducible set of fixtures. Fixture i uses seed splitmix64(seed + i);
/// its angle and segment counts are drawn from further splitmix64 steps.
struct SuiteSpec {
    std::size_t count = 200;
    std::uint64_t seed = 1;
    double min_angle_deg = 10.0;
    double max_angle_deg = 80.0;
    int min_leaf = 3;
    int max_leaf = 6;
    int max_stems = 4;
    int max_distractors = 3;
    double jitter_deg = 0.3;
    int width = 1000;
    int height = 1000;
};

/// Ids are "synth_00000", "synth_00001", ...
std::vector<Fixture> generate_suite(const SuiteSpec& suite, const PipelineConfig& config = {});

/// SplitMix64 step, used to derive per-fixture seeds from a base seed.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace leafangle
