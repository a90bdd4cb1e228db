#include "leafangle/detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "leafangle/errors.hpp"

namespace leafangle {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& name, const std::string& path) {
    auto it = obj.find(name);
    if (it == obj.end()) {
        throw SchemaError(path + name, "missing required field '" + path + name + "'");
    }
    return *it;
}

double number_field(const json& obj, const std::string& name, const std::string& path) {
    const auto& v = field(obj, name, path);
    if (!v.is_number()) throw SchemaError(path + name, "field '" + path + name + "' must be a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(path + name, "field '" + path + name + "' must be finite");
    return d;
}

double score_field(const json& obj, const std::string& name, const std::string& path) {
    double s = number_field(obj, name, path);
    if (s < 0.0 || s > 1.0) {
        throw SchemaError(path + name, "field '" + path + name + "' must lie in [0, 1]");
    }
    return s;
}

MaskEncoding parse_mask(const json& m, const std::string& path, int width, int height) {
    if (!m.is_object()) throw SchemaError(path, "field '" + path + "' must be an object");
    const bool has_poly = m.contains("polygon");
    const bool has_rle = m.contains("rle");
    if (m.contains("counts") || (has_rle && m["rle"].is_string())) {
        throw DecodeError("compressed RLE is not supported at '" + path + "'; emit uncompressed counts");
    }
    if (has_poly == has_rle) {
        throw SchemaError(path, "field '" + path + "' must hold exactly one of 'polygon' or 'rle'");
    }
    if (has_poly) {
        const auto& arr = m["polygon"];
        if (!arr.is_array()) throw SchemaError(path + ".polygon", "polygon must be an array of [x, y]");
        PolygonMask poly;
        for (const auto& v : arr) {
            if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
                throw SchemaError(path + ".polygon", "polygon vertices must be [x, y] number pairs");
            }
            Point p{v[0].get<double>(), v[1].get<double>()};
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
                throw SchemaError(path + ".polygon", "polygon vertices must be finite");
            }
            poly.vertices.push_back(p);
        }
        if (poly.vertices.size() < 3) {
            throw DecodeError("polygon at '" + path + "' has fewer than 3 vertices");
        }
        return poly;
    }
    const auto& arr = m["rle"];
    if (!arr.is_array()) throw SchemaError(path + ".rle", "rle must be an array of run lengths");
    RleMask rle;
    std::uint64_t total = 0;
    for (const auto& v : arr) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
            throw SchemaError(path + ".rle", "rle counts must be non-negative integers");
        }
        rle.counts.push_back(v.get<std::uint64_t>());
        total += rle.counts.back();
    }
    const auto expected = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
    if (total != expected) {
        throw DecodeError("rle at '" + path + "' sums to " + std::to_string(total) + ", expected " +
                          std::to_string(expected));
    }
    return rle;
}

InstanceMask decode_polygon(const PolygonMask& poly, int width, int height) {
    InstanceMask mask(width, height);
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        const double py = y;
        xs.clear();
        // Half-open in y so a vertex on the scanline is counted once.
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point& a = v[i];
            const Point& b = v[j];
            if ((a.y > py) != (b.y > py)) {
                xs.push_back(a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        // Pixel x is inside iff an odd number of crossings lie strictly to its
        // right, i.e. x in [xs[2k], xs[2k+1]).
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            const double lo = std::max(std::ceil(xs[k]), 0.0);
            const double hi = std::min(std::ceil(xs[k + 1]) - 1.0, static_cast<double>(width - 1));
            for (int x = static_cast<int>(lo); x <= static_cast<int>(hi) && lo <= hi; ++x) {
                mask.set(x, y);
            }
        }
    }
    return mask;
}

InstanceMask decode_rle(const RleMask& rle, int width, int height) {
    const auto total = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
    std::uint64_t sum = 0;
    for (auto c : rle.counts) sum += c;
    if (sum != total) {
        throw DecodeError("rle counts sum to " + std::to_string(sum) + ", expected " + std::to_string(total));
    }
    InstanceMask mask(width, height);
    std::uint64_t pos = 0;
    bool fg = false;
    for (auto c : rle.counts) {
        if (fg) {
            for (std::uint64_t k = pos; k < pos + c; ++k) {
                const auto x = static_cast<int>(k / height);
                const auto y = static_cast<int>(k % height);
                mask.set(x, y);
            }
        }
        pos += c;
        fg = !fg;
    }
    return mask;
}

}  // namespace

double clamp_coordinate(double v, int extent) {
    if (!std::isfinite(v) || v < -kClampTolerancePx || v > extent + kClampTolerancePx) {
        throw GeometryError("coordinate " + std::to_string(v) + " is outside [0, " + std::to_string(extent) +
                            "] by more than the clamp tolerance");
    }
    return std::clamp(v, 0.0, static_cast<double>(extent - 1));
}

DetectionRecord parse_detection_record(const json& doc) {
    if (!doc.is_object()) throw SchemaError("", "detection record must be a JSON object");

    DetectionRecord rec;
    const auto& id = field(doc, "image_id", "");
    if (!id.is_string() || id.get<std::string>().empty()) {
        throw SchemaError("image_id", "field 'image_id' must be a non-empty string");
    }
    rec.image_id = id.get<std::string>();

    for (auto [name, out] : {std::pair{"width", &rec.width}, std::pair{"height", &rec.height}}) {
        const auto& v = field(doc, name, "");
        if (!v.is_number_integer() || v.get<std::int64_t>() <= 0 || v.get<std::int64_t>() > 1'000'000) {
            throw SchemaError(name, std::string("field '") + name + "' must be a positive integer");
        }
        *out = v.get<int>();
    }

    if (auto it = doc.find("source"); it != doc.end()) {
        if (!it->is_string()) throw SchemaError("source", "field 'source' must be a string");
        rec.source = it->get<std::string>();
    }

    const auto& instances = field(doc, "instances", "");
    if (!instances.is_array()) throw SchemaError("instances", "field 'instances' must be an array");
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const std::string path = "instances[" + std::to_string(i) + "].";
        const auto& in = instances[i];
        if (!in.is_object()) throw SchemaError(path, "instance must be an object");
        InstanceDetection det;
        det.score = score_field(in, "score", path);
        const auto& bbox = field(in, "bbox", path);
        if (!bbox.is_array() || bbox.size() != 4) {
            throw SchemaError(path + "bbox", "field '" + path + "bbox' must be [x, y, w, h]");
        }
        for (std::size_t k = 0; k < 4; ++k) {
            if (!bbox[k].is_number()) throw SchemaError(path + "bbox", "bbox entries must be numbers");
            det.bbox[k] = bbox[k].get<double>();
        }
        const auto [bx, by, bw, bh] = det.bbox;
        const double tol = kClampTolerancePx;
        if (!(bw >= 0 && bh >= 0 && bx >= -tol && by >= -tol && bx + bw <= rec.width + tol &&
              by + bh <= rec.height + tol)) {
            throw GeometryError("image '" + rec.image_id + "' instance " + std::to_string(i) +
                                ": bbox outside image bounds");
        }
        det.mask = parse_mask(field(in, "mask", path), path + "mask", rec.width, rec.height);
        rec.instances.push_back(std::move(det));
    }

    const auto& segments = field(doc, "segments", "");
    if (!segments.is_array()) throw SchemaError("segments", "field 'segments' must be an array");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const std::string path = "segments[" + std::to_string(i) + "].";
        const auto& s = segments[i];
        if (!s.is_object()) throw SchemaError(path, "segment must be an object");
        LineSegment seg;
        const double x1 = number_field(s, "x1", path);
        const double y1 = number_field(s, "y1", path);
        const double x2 = number_field(s, "x2", path);
        const double y2 = number_field(s, "y2", path);
        seg.score = score_field(s, "score", path);
        try {
            seg.x1 = clamp_coordinate(x1, rec.width);
            seg.y1 = clamp_coordinate(y1, rec.height);
            seg.x2 = clamp_coordinate(x2, rec.width);
            seg.y2 = clamp_coordinate(y2, rec.height);
        } catch (const GeometryError& e) {
            throw GeometryError("image '" + rec.image_id + "' segment " + std::to_string(i) + ": " + e.what());
        }
        if (seg.x1 == seg.x2 && seg.y1 == seg.y2) {
            throw GeometryError("image '" + rec.image_id + "' segment " + std::to_string(i) +
                                ": zero length after clamping");
        }
        rec.segments.push_back(seg);
    }
    return rec;
}

DetectionRecord parse_detection_record(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed detection record: ") + e.what());
    }
    return parse_detection_record(doc);
}

json to_json(const DetectionRecord& record) {
    json instances = json::array();
    for (const auto& in : record.instances) {
        json mask;
        if (const auto* poly = std::get_if<PolygonMask>(&in.mask)) {
            json verts = json::array();
            for (const auto& p : poly->vertices) verts.push_back({p.x, p.y});
            mask["polygon"] = std::move(verts);
        } else {
            mask["rle"] = std::get<RleMask>(in.mask).counts;
        }
        instances.push_back({{"score", in.score},
                             {"bbox", {in.bbox[0], in.bbox[1], in.bbox[2], in.bbox[3]}},
                             {"mask", std::move(mask)}});
    }
    json segments = json::array();
    for (const auto& s : record.segments) {
        segments.push_back({{"x1", s.x1}, {"y1", s.y1}, {"x2", s.x2}, {"y2", s.y2}, {"score", s.score}});
    }
    return {{"image_id", record.image_id}, {"width", record.width},         {"height", record.height},
            {"source", record.source},     {"instances", std::move(instances)}, {"segments", std::move(segments)}};
}

std::string serialize_detection_record(const DetectionRecord& record) { return to_json(record).dump(); }

InstanceMask decode_mask(const MaskEncoding& encoding, int width, int height) {
    if (width <= 0 || height <= 0) throw DecodeError("mask grid must have positive dimensions");
    if (const auto* poly = std::get_if<PolygonMask>(&encoding)) {
        if (poly->vertices.size() < 3) throw DecodeError("polygon has fewer than 3 vertices");
        return decode_polygon(*poly, width, height);
    }
    return decode_rle(std::get<RleMask>(encoding), width, height);
}

namespace {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void load_document(const std::filesystem::path& path, Batch& batch) {
    const std::string name = path.filename().string();
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        batch.failures.push_back({name, "ParseError", e.what()});
        return;
    }
    auto take = [&](const json& d, const std::string& label) {
        try {
            batch.records.push_back(parse_detection_record(d));
        } catch (const Error& e) {
            batch.failures.push_back({label, e.kind(), e.what()});
        }
    };
    if (doc.is_array()) {
        for (std::size_t i = 0; i < doc.size(); ++i) take(doc[i], name + "[" + std::to_string(i) + "]");
    } else {
        take(doc, name);
    }
}

}  // namespace

Batch load_batch(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    Batch batch;
    if (fs::is_directory(path, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path, ec)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
        }
        if (ec) throw IoError("cannot list batch directory " + path.string() + ": " + ec.message());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) load_document(f, batch);
    } else if (fs::is_regular_file(path, ec)) {
        load_document(path, batch);
    } else {
        throw IoError("batch path " + path.string() + " is not a readable file or directory");
    }

    std::sort(batch.records.begin(), batch.records.end(),
              [](const auto& a, const auto& b) { return a.image_id < b.image_id; });
    for (std::size_t i = 1; i < batch.records.size(); ++i) {
        if (batch.records[i].image_id == batch.records[i - 1].image_id) {
            throw SchemaError("image_id", "duplicate image_id '" + batch.records[i].image_id + "' in batch");
        }
    }
    return batch;
}

}  // namespace leafangle
