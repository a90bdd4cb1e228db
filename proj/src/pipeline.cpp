#include "leafangle/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "leafangle/csv.hpp"
#include "leafangle/errors.hpp"

namespace leafangle {

namespace fs = std::filesystem;

namespace {

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

EstimateResult estimate_batch(const std::vector<DetectionRecord>& records, const PipelineConfig& config,
                              unsigned jobs, const RoiProvider& roi_provider) {
    struct Slot {
        std::optional<AngleEstimate> estimate;
        std::optional<Reject> reject;
    };
    std::vector<Slot> slots(records.size());

    auto work = [&](std::size_t i) {
        const auto& rec = records[i];
        try {
            std::optional<RoiImage> roi;
            if (roi_provider) roi = roi_provider(rec);
            slots[i].estimate = estimate_angle(rec, roi ? &*roi : nullptr, config);
        } catch (const Error& e) {
            slots[i].reject = Reject{rec.image_id, e.kind(), e.what()};
        } catch (const std::exception& e) {
            slots[i].reject = Reject{rec.image_id, "InternalError", e.what()};
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, records.size()))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < records.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        workers.reserve(jobs);
        for (unsigned t = 0; t < jobs; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < records.size(); i = next++) work(i);
            });
        }
    }

    EstimateResult result;
    for (auto& s : slots) {
        if (s.estimate) result.estimates.push_back(std::move(*s.estimate));
        if (s.reject) result.rejects.push_back(std::move(*s.reject));
    }
    std::sort(result.estimates.begin(), result.estimates.end(),
              [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
    std::sort(result.rejects.begin(), result.rejects.end(),
              [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
    return result;
}

std::string format_angles_table(const std::vector<AngleEstimate>& estimates) {
    csv::Table t;
    t.header = {"image_id", "angle_deg", "segments_total", "segments_retained", "segments_in_mode", "selection",
                "flags"};
    for (const auto& e : estimates) {
        t.rows.push_back({e.image_id, fixed2(e.angle_deg), std::to_string(e.segments_total),
                          std::to_string(e.segments_retained), std::to_string(e.segments_in_mode),
                          std::string(to_string(e.selection)), e.flags.to_string()});
    }
    return csv::write(t);
}

std::string format_rejects_table(const std::vector<Reject>& rejects) {
    csv::Table t;
    t.header = {"image_id", "error_kind", "message"};
    for (const auto& r : rejects) t.rows.push_back({r.image_id, r.kind, r.message});
    return csv::write(t);
}

MeasurementSet parse_measurements(std::string_view text, std::string label) {
    const auto table = csv::parse(text);
    const auto id_col = table.column("image_id");
    // Ground-truth tables from `synth` name the column true_angle_deg.
    const bool plain = std::find(table.header.begin(), table.header.end(), "angle_deg") != table.header.end();
    const auto angle_col = table.column(plain ? "angle_deg" : "true_angle_deg");
    MeasurementSet set;
    set.label = std::move(label);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        double angle = 0.0;
        try {
            std::size_t used = 0;
            angle = std::stod(row[angle_col], &used);
            if (used != row[angle_col].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError("table '" + set.label + "' row " + std::to_string(r + 1) + ": angle_deg '" +
                             row[angle_col] + "' is not a number");
        }
        set.entries.push_back({row[id_col], angle});
    }
    set.validate();
    return set;
}

MeasurementSet read_measurements(const fs::path& path, std::string label) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read table " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_measurements(ss.str(), std::move(label));
}

nlohmann::json RunManifest::to_json() const {
    return {{"command", command},     {"tool_version", tool_version},
            {"config", config.to_json()}, {"inputs", inputs},
            {"outputs", outputs},     {"counts", {{"processed", processed}, {"rejected", rejected}}},
            {"duration_s", duration_s}};
}

int run_estimate(const EstimateRunOptions& options, const PipelineConfig& config, RunManifest* manifest_out) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    auto batch = load_batch(options.batch);

    auto result = estimate_batch(batch.records, config, options.jobs, options.roi_provider);
    for (auto& f : batch.failures) result.rejects.push_back({f.source, f.kind, f.message});
    std::sort(result.rejects.begin(), result.rejects.end(),
              [](const auto& a, const auto& b) { return a.image_id < b.image_id; });

    ensure_dir(options.out_dir);
    const auto angles = options.out_dir / "angles.csv";
    const auto rejects = options.out_dir / "rejects.csv";
    const auto manifest_path = options.out_dir / "manifest.json";
    write_text(angles, format_angles_table(result.estimates));
    write_text(rejects, format_rejects_table(result.rejects));

    RunManifest manifest;
    manifest.command = "estimate";
    manifest.config = config;
    manifest.inputs = {options.batch.string()};
    manifest.outputs = {angles.string(), rejects.string()};
    manifest.processed = batch.records.size() + batch.failures.size();
    manifest.rejected = result.rejects.size();
    manifest.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(manifest_path, manifest.to_json().dump(2) + "\n");
    if (manifest_out) *manifest_out = manifest;

    return result.estimates.empty() ? kExitEmpty : kExitOk;
}

EvaluateResult evaluate_tables(const MeasurementSet& alg, const std::vector<MeasurementSet>& manual,
                               const PipelineConfig& config) {
    if (manual.empty() || manual.size() > 2) {
        throw ValidationError("manual", "evaluation takes one or two manual measurement sets");
    }
    EvaluateResult result;
    for (const auto& m : manual) result.reports.push_back(compare(alg, m, config));
    if (manual.size() == 2) result.reports.push_back(compare(manual[0], manual[1], config));
    return result;
}

std::string format_summary(const EvaluateResult& result) {
    std::ostringstream out;
    for (const auto& r : result.reports) {
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "%s: n=%zu similarity=%.4f implied_angle=%.2f deg outliers=%zu "
                      "mean_signed_diff=%.2f mean_abs_diff=%.2f non_outlier_mean_abs_diff=%.2f\n",
                      r.label.c_str(), r.n_common, r.cosine_similarity, r.implied_angle_deg, r.outliers.size(),
                      r.mean_signed_diff_deg, r.mean_abs_diff_deg, r.non_outlier_mean_abs_diff_deg);
        out << buf;
    }
    return out.str();
}

int run_evaluate(const EvaluateRunOptions& options, const PipelineConfig& config, std::string* summary_out) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    const auto alg = read_measurements(options.angles, options.angles.stem().string());
    std::vector<MeasurementSet> manual;
    for (const auto& p : options.manual) manual.push_back(read_measurements(p, p.stem().string()));

    const auto result = evaluate_tables(alg, manual, config);

    ensure_dir(options.out_dir);
    const auto report_path = options.out_dir / "report.json";
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : result.reports) reports.push_back(to_json(r));
    write_text(report_path, nlohmann::json{{"reports", std::move(reports)}}.dump(2) + "\n");

    RunManifest manifest;
    manifest.command = "evaluate";
    manifest.config = config;
    manifest.inputs.push_back(options.angles.string());
    for (const auto& p : options.manual) manifest.inputs.push_back(p.string());
    manifest.outputs = {report_path.string()};
    manifest.processed = result.reports.size();
    manifest.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_text(options.out_dir / "manifest.json", manifest.to_json().dump(2) + "\n");

    if (summary_out) *summary_out = format_summary(result);
    return kExitOk;
}

}  // namespace leafangle
