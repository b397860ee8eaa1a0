#include "gazesynth/manifest.hpp"
#include "gazesynth/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace gazesynth {

using nlohmann::json;

std::size_t ManifestReport::passed() const
{
    std::size_t n = 0;
    for (const auto& e : entries) {
        n += e.ok() ? 1 : 0;
    }
    return n;
}

std::vector<SourceRecord> ManifestReport::valid_records() const
{
    std::vector<SourceRecord> out;
    for (const auto& e : entries) {
        if (e.record) {
            out.push_back(*e.record);
        }
    }
    return out;
}

namespace {

bool number_field(const json& obj, const char* key, double& out, std::vector<std::string>& reasons,
                  const std::string& context)
{
    if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number()) {
        reasons.push_back(context + "." + key + " missing or not a number");
        return false;
    }
    out = obj[key].get<double>();
    return true;
}

bool safe_id(const std::string& id)
{
    if (id.empty()) {
        return false;
    }
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-' || c == '.';
        if (!ok) {
            return false;
        }
    }
    return id != "." && id != "..";
}

ManifestEntry check_entry(const json& obj, int line, const std::filesystem::path& base,
                          std::set<std::string>& seen_ids)
{
    ManifestEntry entry;
    entry.line = line;
    auto& reasons = entry.reasons;

    std::string id;
    if (obj.contains("id") && obj["id"].is_string()) {
        id = obj["id"].get<std::string>();
        entry.id = id;
        if (!safe_id(id)) {
            reasons.push_back("id '" + id + "' must be non-empty and use [A-Za-z0-9_.-]");
        } else if (!seen_ids.insert(id).second) {
            reasons.push_back("duplicate id '" + id + "'");
        }
    } else {
        reasons.push_back("id missing or not a string");
    }
    std::string subject;
    if (obj.contains("subject") && obj["subject"].is_string()) {
        subject = obj["subject"].get<std::string>();
    }

    std::filesystem::path image;
    std::filesystem::path mesh;
    for (const char* key : {"image", "mesh"}) {
        if (!obj.contains(key) || !obj[key].is_string()) {
            reasons.push_back(std::string(key) + " path missing");
            continue;
        }
        const std::filesystem::path p = base / obj[key].get<std::string>();
        if (!std::filesystem::is_regular_file(p)) {
            reasons.push_back(std::string(key) + " file not found: " + p.string());
        }
        (std::string(key) == "image" ? image : mesh) = p;
    }

    std::optional<CameraIntrinsics> camera;
    {
        const json empty = json::object();
        const json& k = obj.contains("intrinsics") ? obj["intrinsics"] : empty;
        double fx = 0, fy = 0, cx = 0, cy = 0;
        bool ok = number_field(k, "fx", fx, reasons, "intrinsics");
        ok = number_field(k, "fy", fy, reasons, "intrinsics") && ok;
        ok = number_field(k, "cx", cx, reasons, "intrinsics") && ok;
        ok = number_field(k, "cy", cy, reasons, "intrinsics") && ok;
        if (ok) {
            try {
                camera.emplace(fx, fy, cx, cy);
            } catch (const Error& e) {
                reasons.push_back(std::string("intrinsics not invertible: ") + e.what());
            }
        }
    }

    std::optional<CropTransform> crop;
    {
        const json empty = json::object();
        const json& c = obj.contains("crop") ? obj["crop"] : empty;
        double cx = 0, cy = 0, w = 0, h = 0, sx = 0, sy = 0;
        bool ok = number_field(c, "cx", cx, reasons, "crop");
        ok = number_field(c, "cy", cy, reasons, "crop") && ok;
        ok = number_field(c, "w", w, reasons, "crop") && ok;
        ok = number_field(c, "h", h, reasons, "crop") && ok;
        ok = number_field(c, "scale_x", sx, reasons, "crop") && ok;
        ok = number_field(c, "scale_y", sy, reasons, "crop") && ok;
        if (ok) {
            try {
                crop.emplace(cx, cy, w, h, sx, sy);
            } catch (const Error& e) {
                reasons.push_back(std::string("crop invalid: ") + e.what());
            }
        }
    }

    std::optional<LandmarkSet2D> landmarks;
    if (obj.contains("landmarks") && obj["landmarks"].is_array()) {
        std::vector<Vec2> pts;
        bool ok = true;
        for (const auto& p : obj["landmarks"]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                ok = false;
                break;
            }
            pts.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        if (!ok) {
            reasons.push_back("landmarks must be [u, v] number pairs");
        } else {
            try {
                landmarks.emplace(std::move(pts));
            } catch (const Error& e) {
                reasons.push_back(e.what());
            }
        }
    } else {
        reasons.push_back("landmarks missing");
    }

    std::optional<Vec3> gaze;
    if (obj.contains("gaze_target") && obj["gaze_target"].is_array() &&
        obj["gaze_target"].size() == 3 && obj["gaze_target"][0].is_number() &&
        obj["gaze_target"][1].is_number() && obj["gaze_target"][2].is_number()) {
        gaze = Vec3(obj["gaze_target"][0].get<double>(), obj["gaze_target"][1].get<double>(),
                    obj["gaze_target"][2].get<double>());
    } else {
        reasons.push_back("gaze_target must be [x, y, z]");
    }

    if (reasons.empty()) {
        entry.record = SourceRecord{line,    id,      subject,    image, mesh, *camera,
                                    *crop,   *landmarks, *gaze};
    }
    return entry;
}

} // namespace

ManifestReport validate_manifest(const std::filesystem::path& manifest)
{
    std::ifstream in(manifest);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open manifest " + manifest.string());
    }
    ManifestReport report;
    report.path = manifest;
    const std::filesystem::path base = manifest.parent_path();
    std::set<std::string> seen_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::Parse,
                        manifest.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!obj.is_object()) {
            throw Error(ErrorCode::Parse,
                        manifest.string() + ":" + std::to_string(line_no) + ": not a JSON object");
        }
        report.entries.push_back(check_entry(obj, line_no, base, seen_ids));
    }
    return report;
}

std::string format_report(const ManifestReport& report)
{
    std::ostringstream out;
    for (const auto& e : report.entries) {
        out << "line " << e.line << " [" << (e.id.empty() ? "?" : e.id) << "] "
            << (e.ok() ? "PASS" : "FAIL");
        for (std::size_t i = 0; i < e.reasons.size(); ++i) {
            out << (i == 0 ? ": " : "; ") << e.reasons[i];
        }
        out << '\n';
    }
    out << report.passed() << "/" << report.entries.size() << " records passed\n";
    return out.str();
}

json to_json(const SourceRecord& r, const std::filesystem::path& base_dir)
{
    json lm = json::array();
    for (const auto& p : r.landmarks.points()) {
        lm.push_back({p.x(), p.y()});
    }
    return json{
        {"id", r.id},
        {"subject", r.subject},
        {"image", std::filesystem::relative(r.image, base_dir).generic_string()},
        {"mesh", std::filesystem::relative(r.mesh, base_dir).generic_string()},
        {"intrinsics",
         {{"fx", r.camera.fx()}, {"fy", r.camera.fy()}, {"cx", r.camera.cx()}, {"cy", r.camera.cy()}}},
        {"crop",
         {{"cx", r.crop.box_cx()},
          {"cy", r.crop.box_cy()},
          {"w", r.crop.box_w()},
          {"h", r.crop.box_h()},
          {"scale_x", r.crop.scale_x()},
          {"scale_y", r.crop.scale_y()}}},
        {"landmarks", lm},
        {"gaze_target", {r.gaze_target.x(), r.gaze_target.y(), r.gaze_target.z()}},
    };
}

} // namespace gazesynth
