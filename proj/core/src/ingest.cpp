#include "mcosq/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mcosq {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

VideoRelation parse_vr(std::istream& in, FeedFormat format) {
    std::vector<ObjectRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = strip(line);
        if (t.empty()) continue;
        if (format == FeedFormat::Csv) {
            if (!saw_header) {
                saw_header = true;
                if (t == "fid,id,class") continue; // header optional on input
            }
            auto fields = split(t, ',');
            if (fields.size() != 3)
                throw std::runtime_error("parse_vr: line " + std::to_string(line_no) +
                                         ": expected 3 fields, got " +
                                         std::to_string(fields.size()));
            ObjectRecord rec;
            try {
                rec.fid = std::stoull(strip(fields[0]));
            } catch (const std::exception&) {
                throw std::runtime_error("parse_vr: line " + std::to_string(line_no) +
                                         ": bad frame id '" + fields[0] + "'");
            }
            rec.id = strip(fields[1]);
            rec.label = strip(fields[2]);
            if (rec.id.empty() || rec.label.empty())
                throw std::runtime_error("parse_vr: line " + std::to_string(line_no) +
                                         ": empty id or class");
            records.push_back(std::move(rec));
        } else {
            nlohmann::json j = nlohmann::json::parse(t, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("fid") ||
                !j.contains("id") || !j.contains("class") || !j["fid"].is_number_integer())
                throw std::runtime_error("parse_vr: line " + std::to_string(line_no) +
                                         ": malformed record");
            ObjectRecord rec;
            rec.fid = j["fid"].get<std::uint64_t>();
            rec.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
            rec.label = j["class"].is_string() ? j["class"].get<std::string>() : j["class"].dump();
            records.push_back(std::move(rec));
        }
    }
    return VideoRelation::from_records(records);
}

VideoRelation parse_vr_file(const std::string& path, FeedFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_vr: cannot open " + path);
    return parse_vr(in, format);
}

void write_vr_csv(const VideoRelation& relation, std::ostream& out) {
    out << "fid,id,class\n";
    for (Fid f = 0; f < relation.frame_count(); ++f) {
        for (ObjId id : relation.object_set_of(f).members()) {
            out << f << ',' << relation.id_token(id) << ','
                << relation.label_token(relation.class_of(id)) << '\n';
        }
    }
}

VideoRelation filter_classes(const VideoRelation& relation,
                             const std::set<std::string>& wanted) {
    std::vector<ObjectRecord> records;
    for (Fid f = 0; f < relation.frame_count(); ++f) {
        for (ObjId id : relation.object_set_of(f).members()) {
            const std::string& label = relation.label_token(relation.class_of(id));
            if (!wanted.count(label)) continue;
            records.push_back({f, relation.id_token(id), label});
        }
    }
    return VideoRelation::from_records(records, relation.frame_count());
}

void FeedConfig::validate() const {
    if (n_frames == 0) throw std::invalid_argument("FeedConfig: n_frames must be >= 1");
    if (mean_objects_per_frame <= 0.0)
        throw std::invalid_argument("FeedConfig: mean_objects_per_frame must be positive");
    if (mean_frames_per_object <= 0.0)
        throw std::invalid_argument("FeedConfig: mean_frames_per_object must be positive");
    if (n_classes == 0) throw std::invalid_argument("FeedConfig: n_classes must be >= 1");
    if (class_weights.size() != n_classes)
        throw std::invalid_argument("FeedConfig: class_weights must have n_classes entries");
    double sum = 0.0;
    for (double w : class_weights) {
        if (w < 0.0) throw std::invalid_argument("FeedConfig: negative class weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("FeedConfig: class_weights must sum to 1");
}

FeedConfig preset_config(const std::string& name) {
    // frames, objects-per-frame, frames-per-object, occlusions-per-object
    struct Row {
        const char* name;
        std::uint64_t frames;
        double obj_f;
        double f_obj;
        std::uint32_t p_o;
    };
    static const Row rows[] = {
        {"V1", 1800, 7.37, 76.71, 4}, {"V2", 1700, 5.94, 79.84, 6},
        {"D1", 1150, 7.56, 48.61, 5}, {"D2", 1145, 8.99, 65.18, 7},
        {"M1", 1194, 6.75, 23.67, 3}, {"M2", 750, 11.59, 46.96, 3},
    };
    for (const Row& r : rows) {
        if (name == r.name) {
            FeedConfig cfg;
            cfg.n_frames = r.frames;
            cfg.mean_objects_per_frame = r.obj_f;
            cfg.mean_frames_per_object = r.f_obj;
            cfg.occlusion = r.p_o;
            return cfg;
        }
    }
    throw std::invalid_argument("preset_config: unknown preset '" + name + "'");
}

FeedConfig parse_feed_config(std::istream& in) {
    FeedConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("feed config: line " + std::to_string(line_no) +
                                     ": expected key=value");
        std::string key = strip(t.substr(0, eq));
        std::string value = strip(t.substr(eq + 1));
        try {
            if (key == "n_frames") cfg.n_frames = std::stoull(value);
            else if (key == "mean_objects_per_frame") cfg.mean_objects_per_frame = std::stod(value);
            else if (key == "mean_frames_per_object") cfg.mean_frames_per_object = std::stod(value);
            else if (key == "n_classes") cfg.n_classes = static_cast<std::uint32_t>(std::stoul(value));
            else if (key == "occlusion") cfg.occlusion = static_cast<std::uint32_t>(std::stoul(value));
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "class_weights") {
                cfg.class_weights.clear();
                for (const std::string& w : split(value, ','))
                    cfg.class_weights.push_back(std::stod(strip(w)));
            } else {
                throw std::runtime_error("feed config: line " + std::to_string(line_no) +
                                         ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("feed config: line " + std::to_string(line_no) +
                                     ": bad value for '" + key + "'");
        }
    }
    if (cfg.class_weights.size() != cfg.n_classes && cfg.n_classes <= 4 &&
        cfg.class_weights.size() == 4) {
        // default weights trimmed to the requested class count, renormalized
        cfg.class_weights.resize(cfg.n_classes);
        double sum = 0.0;
        for (double w : cfg.class_weights) sum += w;
        for (double& w : cfg.class_weights) w /= sum;
    }
    cfg.validate();
    return cfg;
}

FeedConfig parse_feed_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("feed config: cannot open " + path);
    return parse_feed_config(in);
}

namespace {

// splitmix64: per-id substream seeds so run plans are independent of how
// many ids exist and of the occlusion cap
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        state = splitmix64(state + 0x632be59bd9b4e019ULL);
        return state;
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }
    // geometric on {1,2,...} with the given mean
    std::uint64_t geometric(double mean) {
        if (mean <= 1.0) return 1;
        double p = 1.0 / mean;
        double u = unit();
        if (u <= 0.0) u = 0x1.0p-53;
        double v = std::floor(std::log(u) / std::log1p(-p));
        if (v < 0.0) v = 0.0;
        if (v > 1e9) v = 1e9;
        return 1 + static_cast<std::uint64_t>(v);
    }
};

const char* kClassNames[] = {"person", "car", "truck", "bus"};

} // namespace

VideoRelation generate_feed(const FeedConfig& config) {
    config.validate();
    const std::uint64_t n_ids = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(
               static_cast<double>(config.n_frames) * config.mean_objects_per_frame /
               config.mean_frames_per_object)));

    std::vector<double> cumulative(config.n_classes);
    double acc = 0.0;
    for (std::uint32_t c = 0; c < config.n_classes; ++c) {
        acc += config.class_weights[c];
        cumulative[c] = acc;
    }

    std::vector<ObjectRecord> records;
    records.reserve(static_cast<std::size_t>(
        std::min<double>(1e8, static_cast<double>(config.n_frames) *
                                  config.mean_objects_per_frame * 1.5)));

    for (std::uint64_t idx = 0; idx < n_ids; ++idx) {
        Rng rng{splitmix64(config.seed ^ (idx * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL))};

        double cu = rng.unit();
        std::uint32_t cls = 0;
        while (cls + 1 < config.n_classes && cu > cumulative[cls]) ++cls;
        std::string label = cls < 4 ? kClassNames[cls] : "class" + std::to_string(cls);

        Fid start = rng.below(config.n_frames);

        // desired extra runs drawn independently of the cap, so the run plan
        // for occlusion k is a prefix of the plan for k+1
        std::uint32_t desired = 0;
        while (desired < 63 && (rng.next() & 1) != 0) ++desired;
        std::uint32_t runs = 1 + std::min(desired, config.occlusion);

        std::string id = "o" + std::to_string(idx);
        Fid f = start;
        for (std::uint32_t r = 0; r < runs; ++r) {
            std::uint64_t len = rng.geometric(config.mean_frames_per_object);
            for (std::uint64_t k = 0; k < len && f + k < config.n_frames; ++k)
                records.push_back({f + k, id, label});
            std::uint64_t gap = 1 + rng.geometric(std::max(1.0, config.mean_frames_per_object / 4.0));
            f += len + gap;
            if (f >= config.n_frames) break;
        }
    }

    std::sort(records.begin(), records.end(), [](const ObjectRecord& a, const ObjectRecord& b) {
        if (a.fid != b.fid) return a.fid < b.fid;
        return a.id < b.id;
    });
    return VideoRelation::from_records(records, config.n_frames);
}

} // namespace mcosq
