#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "leafangle/angle_estimation.hpp"
#include "leafangle/config.hpp"
#include "leafangle/detection.hpp"
#include "leafangle/evaluation.hpp"

namespace leafangle {

inline constexpr const char* kToolVersion = "0.1.0";

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitEmpty = 2 };

struct Reject {
    std::string image_id;
    std::string kind;
    std::string message;
};

struct EstimateResult {
    std::vector<AngleEstimate> estimates;  // sorted by image_id
    std::vector<Reject> rejects;           // sorted by image_id
};

/// Supplies the ROI for a record, or nullopt to run in the full-image frame.
/// May throw; the error becomes a reject for that record. Must be thread-safe.
using RoiProvider = std::function<std::optional<RoiImage>(const DetectionRecord&)>;

/// Runs estimate_angle over every record with `jobs` worker threads. Output
/// order never depends on scheduling.
EstimateResult estimate_batch(const std::vector<DetectionRecord>& records, const PipelineConfig& config,
                              unsigned jobs = 1, const RoiProvider& roi_provider = {});

std::string format_angles_table(const std::vector<AngleEstimate>& estimates);
std::string format_rejects_table(const std::vector<Reject>& rejects);

/// Reads an angles table (or any table with image_id and angle_deg columns).
MeasurementSet read_measurements(const std::filesystem::path& path, std::string label);
MeasurementSet parse_measurements(std::string_view text, std::string label);

struct RunManifest {
    std::string command;
    std::string tool_version = kToolVersion;
    PipelineConfig config;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::size_t processed = 0;
    std::size_t rejected = 0;
    double duration_s = 0.0;

    nlohmann::json to_json() const;
};

struct EstimateRunOptions {
    std::filesystem::path batch;
    std::filesystem::path out_dir;
    unsigned jobs = 1;
    RoiProvider roi_provider;
};

/// Writes angles.csv, rejects.csv, manifest.json into `out_dir`. Returns the
/// exit code (0 with at least one success, 2 otherwise). Throws IoError when
/// the batch cannot be read.
int run_estimate(const EstimateRunOptions& options, const PipelineConfig& config,
                 RunManifest* manifest_out = nullptr);

struct EvaluateRunOptions {
    std::filesystem::path angles;
    std::vector<std::filesystem::path> manual;  // one or two
    std::filesystem::path out_dir;
};

struct EvaluateResult {
    std::vector<EvaluationReport> reports;  // alg vs each manual, then inter-rater
};

EvaluateResult evaluate_tables(const MeasurementSet& alg, const std::vector<MeasurementSet>& manual,
                               const PipelineConfig& config);

std::string format_summary(const EvaluateResult& result);

/// Writes report.json and manifest.json into `out_dir`; the summary text is
/// returned through `summary_out`. JoinError propagates to the caller.
int run_evaluate(const EvaluateRunOptions& options, const PipelineConfig& config,
                 std::string* summary_out = nullptr);

}  // namespace leafangle
