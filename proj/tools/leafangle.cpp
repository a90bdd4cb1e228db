// Command-line front end: estimate, evaluate, extract-roi, synth.

#include <algorithm>
#include <charconv>
#include <cstring>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "CLI11.hpp"

#include "leafangle/config.hpp"
#include "leafangle/csv.hpp"
#include "leafangle/detection.hpp"
#include "leafangle/errors.hpp"
#include "leafangle/pipeline.hpp"
#include "leafangle/roi.hpp"
#include "leafangle/synth.hpp"

namespace fs = std::filesystem;
using namespace leafangle;

namespace {

/// Flags shared by every subcommand. Flag values win over the config file,
/// which wins over built-in defaults.
struct ConfigFlags {
    std::string config_file;
    std::map<std::string, std::string> overrides;

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "YAML key-value config file")->check(CLI::ExistingFile);
        for (const auto& key : config_keys()) {
            std::string flag = "--" + key;
            std::replace(flag.begin(), flag.end(), '_', '-');
            app->add_option_function<std::string>(
                flag, [this, key](const std::string& v) { overrides[key] = v; }, "Override " + key);
        }
    }

    PipelineConfig resolve() const {
        PipelineConfig config = config_file.empty() ? load_config() : load_config_file(config_file);
        for (const auto& [k, v] : overrides) set_config_value(config, k, v);
        config.validate();
        return config;
    }
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Image load_image(const fs::path& path) {
    cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty()) throw IoError("cannot decode image " + path.string());
    cv::Mat rgb;
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
    Image img(rgb.cols, rgb.rows, 3);
    for (int y = 0; y < rgb.rows; ++y) {
        std::memcpy(&img.data[static_cast<std::size_t>(y) * rgb.cols * 3], rgb.ptr(y), static_cast<std::size_t>(rgb.cols) * 3);
    }
    return img;
}

void save_png(const fs::path& path, const Image& img) {
    const int type = img.channels == 1 ? CV_8UC1 : CV_8UC3;
    cv::Mat view(img.height, img.width, type, const_cast<std::uint8_t*>(img.data.data()));
    cv::Mat out;
    if (img.channels == 3) cv::cvtColor(view, out, cv::COLOR_RGB2BGR);
    else out = view;
    if (!cv::imwrite(path.string(), out)) throw IoError("cannot write " + path.string());
}

std::optional<fs::path> find_image(const fs::path& dir, const std::string& image_id) {
    for (const char* ext : {".png", ".jpg", ".jpeg", ".bmp", ".tif", ".tiff", ".ppm", ".pgm", ".JPG", ".JPEG", ".PNG"}) {
        auto p = dir / (image_id + ext);
        if (fs::is_regular_file(p)) return p;
    }
    return std::nullopt;
}

struct RoiResult {
    RoiImage roi;
    PrimaryInstance primary;
};

RoiResult extract(const DetectionRecord& record, const Image& image, const PipelineConfig& config) {
    if (image.width != record.width || image.height != record.height) {
        throw ShapeError("image " + record.image_id + " is " + std::to_string(image.width) + "x" +
                         std::to_string(image.height) + ", record says " + std::to_string(record.width) + "x" +
                         std::to_string(record.height));
    }
    auto primary = select_primary_instance(record.instances, record.width, record.height, config, record.image_id);
    auto roi = crop_roi(apply_mask(image, primary.mask), primary.mask, config);
    return {std::move(roi), std::move(primary)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leaf-stem angle estimation from detection records"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate one angle per detection record");
    ConfigFlags est_flags;
    EstimateRunOptions est_opts;
    std::string images_dir;
    est->add_option("--batch", est_opts.batch, "Directory of record documents or one document")->required();
    est->add_option("--out", est_opts.out_dir, "Output directory")->required();
    est->add_option("--jobs", est_opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
    est->add_option("--images", images_dir,
                    "Directory of source images named <image_id>.<ext>; segments are then read in the ROI frame");
    est_flags.attach(est);

    // evaluate
    auto* eva = app.add_subcommand("evaluate", "Compare an angles table with manual measurements");
    ConfigFlags eva_flags;
    EvaluateRunOptions eva_opts;
    eva->add_option("--angles", eva_opts.angles, "Angles table from estimate")->required()->check(CLI::ExistingFile);
    eva->add_option("--manual", eva_opts.manual, "Manual table(s): image_id,angle_deg")
        ->required()
        ->expected(1, 2)
        ->check(CLI::ExistingFile);
    eva->add_option("--out", eva_opts.out_dir, "Output directory")->required();
    eva_flags.attach(eva);

    // extract-roi
    auto* roi_cmd = app.add_subcommand("extract-roi", "Write the masked ROI crop of one image as PNG");
    ConfigFlags roi_flags;
    fs::path roi_record, roi_image, roi_out;
    roi_cmd->add_option("--record", roi_record, "Detection record document")->required()->check(CLI::ExistingFile);
    roi_cmd->add_option("--image", roi_image, "Source image")->required()->check(CLI::ExistingFile);
    roi_cmd->add_option("--out", roi_out, "Output directory")->required();
    roi_flags.attach(roi_cmd);

    // synth
    auto* syn = app.add_subcommand("synth", "Generate synthetic records with known angles");
    ConfigFlags syn_flags;
    SuiteSpec suite;
    fs::path syn_out;
    syn->add_option("--out", syn_out, "Output directory")->required();
    syn->add_option("--count", suite.count, "Number of records");
    syn->add_option("--seed", suite.seed, "Base seed");
    syn->add_option("--min-angle", suite.min_angle_deg, "Smallest true angle (deg)");
    syn->add_option("--max-angle", suite.max_angle_deg, "Largest true angle (deg)");
    syn->add_option("--min-leaf", suite.min_leaf, "Fewest leaf segments per record");
    syn->add_option("--max-leaf", suite.max_leaf, "Most leaf segments per record");
    syn->add_option("--max-stems", suite.max_stems, "Most stem segments per record");
    syn->add_option("--max-distractors", suite.max_distractors, "Most distractor segments per record");
    syn->add_option("--jitter", suite.jitter_deg, "Leaf orientation jitter (deg)");
    syn->add_option("--width", suite.width, "Image width");
    syn->add_option("--height", suite.height, "Image height");
    syn_flags.attach(syn);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*est) {
            const auto config = est_flags.resolve();
            if (!images_dir.empty()) {
                est_opts.roi_provider = [dir = fs::path(images_dir), &config](const DetectionRecord& rec) {
                    auto path = find_image(dir, rec.image_id);
                    if (!path) throw IoError("no image for '" + rec.image_id + "' in " + dir.string());
                    return std::optional<RoiImage>(extract(rec, load_image(*path), config).roi);
                };
            }
            RunManifest manifest;
            const int code = run_estimate(est_opts, config, &manifest);
            std::cerr << "estimate: " << manifest.processed - manifest.rejected << " estimated, " << manifest.rejected
                      << " rejected\n";
            return code;
        }
        if (*eva) {
            std::string summary;
            const int code = run_evaluate(eva_opts, eva_flags.resolve(), &summary);
            std::cout << summary;
            return code;
        }
        if (*roi_cmd) {
            const auto start = std::chrono::steady_clock::now();
            const auto config = roi_flags.resolve();
            const auto record = parse_detection_record(read_text(roi_record));
            const auto result = extract(record, load_image(roi_image), config);
            fs::create_directories(roi_out);
            const auto png = roi_out / (record.image_id + "_roi.png");
            const auto sidecar = roi_out / (record.image_id + "_roi.json");
            save_png(png, result.roi.pixels);
            nlohmann::json side{{"image_id", record.image_id},
                                {"instance_index", result.primary.index},
                                {"instance_area_px", result.primary.area},
                                {"offset", {result.roi.offset_x, result.roi.offset_y}},
                                {"width", result.roi.pixels.width},
                                {"height", result.roi.pixels.height},
                                {"sharpness", result.roi.sharpness},
                                {"low_sharpness", result.roi.sharpness < config.sharpness_warn_threshold}};
            write_text(sidecar, side.dump(2) + "\n");
            RunManifest manifest;
            manifest.command = "extract-roi";
            manifest.config = config;
            manifest.inputs = {roi_record.string(), roi_image.string()};
            manifest.outputs = {png.string(), sidecar.string()};
            manifest.processed = 1;
            manifest.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_text(roi_out / "manifest.json", manifest.to_json().dump(2) + "\n");
            return kExitOk;
        }
        if (*syn) {
            const auto start = std::chrono::steady_clock::now();
            const auto config = syn_flags.resolve();
            const auto fixtures = generate_suite(suite, config);
            const auto records_dir = syn_out / "records";
            fs::create_directories(records_dir);
            csv::Table truth;
            truth.header = {"image_id", "true_angle_deg"};
            for (const auto& f : fixtures) {
                write_text(records_dir / (f.record.image_id + ".json"), serialize_detection_record(f.record) + "\n");
                truth.rows.push_back({f.record.image_id, shortest(f.true_angle_deg)});
            }
            write_text(syn_out / "ground_truth.csv", csv::write(truth));
            RunManifest manifest;
            manifest.command = "synth";
            manifest.config = config;
            manifest.outputs = {records_dir.string(), (syn_out / "ground_truth.csv").string()};
            manifest.processed = fixtures.size();
            manifest.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_text(syn_out / "manifest.json", manifest.to_json().dump(2) + "\n");
            return kExitOk;
        }
    } catch (const JoinError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmpty;
    } catch (const Error& e) {
        std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
