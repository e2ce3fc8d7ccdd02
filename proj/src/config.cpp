#include "lesion/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lesion/error.hpp"

namespace lesion {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) {
        throw std::invalid_argument("trailing characters");
    }
    return d;
}

int parse_int(const std::string& v) {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) {
        throw std::invalid_argument("trailing characters");
    }
    return i;
}

std::uint64_t parse_u64(const std::string& v) {
    if (!v.empty() && v[0] == '-') {
        throw std::invalid_argument("negative");
    }
    std::size_t pos = 0;
    const auto u = std::stoull(v, &pos);
    if (pos != v.size()) {
        throw std::invalid_argument("trailing characters");
    }
    return u;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw std::invalid_argument("not a boolean");
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(trim(item)));
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> s = {
        {"preprocess.sharpen", [](auto& c, const auto& v) { c.preprocess.sharpen_enabled = parse_bool(v); }},
        {"preprocess.hair_removal", [](auto& c, const auto& v) { c.preprocess.hair_removal_enabled = parse_bool(v); }},
        {"preprocess.sharpen_first", [](auto& c, const auto& v) { c.preprocess.sharpen_first = parse_bool(v); }},
        {"preprocess.hair_line_length", [](auto& c, const auto& v) { c.preprocess.hair_line_length = parse_int(v); }},
        {"preprocess.hair_angles", [](auto& c, const auto& v) { c.preprocess.hair_angles = parse_list(v); }},
        {"preprocess.hair_threshold", [](auto& c, const auto& v) { c.preprocess.hair_threshold = parse_int(v); }},
        {"preprocess.inpaint_radius", [](auto& c, const auto& v) { c.preprocess.inpaint_radius = parse_int(v); }},
        {"watershed.sigma", [](auto& c, const auto& v) { c.segmentation.watershed.gaussian_sigma = parse_double(v); }},
        {"watershed.marker_erosion",
         [](auto& c, const auto& v) { c.segmentation.watershed.marker_erosion = parse_int(v); }},
        {"watershed.connectivity", [](auto& c, const auto& v) { c.segmentation.watershed.connectivity = parse_int(v); }},
        {"snake.alpha", [](auto& c, const auto& v) { c.segmentation.snake.weights.alpha = parse_double(v); }},
        {"snake.beta", [](auto& c, const auto& v) { c.segmentation.snake.weights.beta = parse_double(v); }},
        {"snake.w_img", [](auto& c, const auto& v) { c.segmentation.snake.weights.w_img = parse_double(v); }},
        {"snake.w_con", [](auto& c, const auto& v) { c.segmentation.snake.weights.w_con = parse_double(v); }},
        {"snake.max_iter", [](auto& c, const auto& v) { c.segmentation.snake.max_iter = parse_int(v); }},
        {"snake.tol", [](auto& c, const auto& v) { c.segmentation.snake.tol = parse_double(v); }},
        {"snake.sigma", [](auto& c, const auto& v) { c.segmentation.snake.sigma = parse_double(v); }},
        {"snake.resample_every", [](auto& c, const auto& v) { c.segmentation.snake.resample_every = parse_int(v); }},
        {"snake.point_spacing", [](auto& c, const auto& v) { c.segmentation.snake.point_spacing = parse_double(v); }},
        {"features.glcm_levels", [](auto& c, const auto& v) { c.features.glcm_levels = parse_int(v); }},
        {"features.glcm_distance", [](auto& c, const auto& v) { c.features.glcm_distance = parse_int(v); }},
        {"features.mm_per_pixel",
         [](auto& c, const auto& v) {
             if (v.empty() || v == "none") {
                 c.features.mm_per_pixel.reset();
             } else {
                 c.features.mm_per_pixel = parse_double(v);
             }
         }},
        {"svm.C", [](auto& c, const auto& v) { c.svm.hyper.C = parse_double(v); }},
        {"svm.epochs", [](auto& c, const auto& v) { c.svm.hyper.epochs = parse_int(v); }},
        {"svm.learning_rate", [](auto& c, const auto& v) { c.svm.hyper.learning_rate = parse_double(v); }},
        {"svm.seed", [](auto& c, const auto& v) { c.svm.hyper.seed = parse_u64(v); }},
        {"svm.rfe_target", [](auto& c, const auto& v) { c.svm.rfe_target = static_cast<std::size_t>(parse_u64(v)); }},
        {"mlp.learning_rate", [](auto& c, const auto& v) { c.mlp.learning_rate = parse_double(v); }},
        {"mlp.epochs", [](auto& c, const auto& v) { c.mlp.epochs = parse_int(v); }},
        {"mlp.seed", [](auto& c, const auto& v) { c.mlp.seed = parse_u64(v); }},
        {"pipeline.method", [](auto& c, const auto& v) { c.method = parse_mask_method(v); }},
        {"pipeline.roc_source", [](auto& c, const auto& v) { c.roc_source = parse_roc_source(v); }},
        {"pipeline.workers", [](auto& c, const auto& v) { c.workers = parse_int(v); }},
        {"pipeline.report_precision", [](auto& c, const auto& v) { c.report_precision = parse_int(v); }},
    };
    return s;
}

}  // namespace

const char* to_string(RocSource s) { return s == RocSource::Ann ? "ann" : "cascade"; }

RocSource parse_roc_source(const std::string& s) {
    if (s == "ann") {
        return RocSource::Ann;
    }
    if (s == "cascade") {
        return RocSource::Cascade;
    }
    throw std::invalid_argument("roc source must be 'ann' or 'cascade', got '" + s + "'");
}

void PipelineConfig::set_seed(std::uint64_t seed) {
    svm.hyper.seed = seed;
    mlp.seed = seed;
}

void PipelineConfig::validate() const {
    preprocess.validate();
    segmentation.watershed.validate();
    segmentation.snake.validate();
    features.validate();
    svm.hyper.validate();
    mlp.validate();
    if (svm.rfe_target < 1) {
        throw std::invalid_argument("svm.rfe_target must be >= 1");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be >= 1");
    }
    if (report_precision < 0 || report_precision > 17) {
        throw std::invalid_argument("report_precision must be in [0, 17]");
    }
}

void apply_config(std::istream& in, PipelineConfig& cfg, const std::string& origin) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto where = origin + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw DataError(where + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw DataError(where + ": unknown key '" + key + "'");
        }
        try {
            it->second(cfg, value);
        } catch (const std::exception& e) {
            throw DataError(where + ": bad value '" + value + "' for " + key + " (" + e.what() + ")");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(origin + ": " + e.what());
    }
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot read config " + path.string());
    }
    PipelineConfig cfg;
    apply_config(in, cfg, path.string());
    return cfg;
}

void write_config(std::ostream& out, const PipelineConfig& c) {
    const auto b = [](bool v) { return v ? "true" : "false"; };
    std::string angles;
    for (std::size_t i = 0; i < c.preprocess.hair_angles.size(); ++i) {
        angles += (i ? "," : "") + fmt(c.preprocess.hair_angles[i]);
    }
    const auto& ws = c.segmentation.watershed;
    const auto& sn = c.segmentation.snake;
    out << "preprocess.sharpen = " << b(c.preprocess.sharpen_enabled) << '\n'
        << "preprocess.hair_removal = " << b(c.preprocess.hair_removal_enabled) << '\n'
        << "preprocess.sharpen_first = " << b(c.preprocess.sharpen_first) << '\n'
        << "preprocess.hair_line_length = " << c.preprocess.hair_line_length << '\n'
        << "preprocess.hair_angles = " << angles << '\n'
        << "preprocess.hair_threshold = " << c.preprocess.hair_threshold << '\n'
        << "preprocess.inpaint_radius = " << c.preprocess.inpaint_radius << '\n'
        << "watershed.sigma = " << fmt(ws.gaussian_sigma) << '\n'
        << "watershed.marker_erosion = " << ws.marker_erosion << '\n'
        << "watershed.connectivity = " << ws.connectivity << '\n'
        << "snake.alpha = " << fmt(sn.weights.alpha) << '\n'
        << "snake.beta = " << fmt(sn.weights.beta) << '\n'
        << "snake.w_img = " << fmt(sn.weights.w_img) << '\n'
        << "snake.w_con = " << fmt(sn.weights.w_con) << '\n'
        << "snake.max_iter = " << sn.max_iter << '\n'
        << "snake.tol = " << fmt(sn.tol) << '\n'
        << "snake.sigma = " << fmt(sn.sigma) << '\n'
        << "snake.resample_every = " << sn.resample_every << '\n'
        << "snake.point_spacing = " << fmt(sn.point_spacing) << '\n'
        << "features.glcm_levels = " << c.features.glcm_levels << '\n'
        << "features.glcm_distance = " << c.features.glcm_distance << '\n'
        << "features.mm_per_pixel = " << (c.features.mm_per_pixel ? fmt(*c.features.mm_per_pixel) : "none") << '\n'
        << "svm.C = " << fmt(c.svm.hyper.C) << '\n'
        << "svm.epochs = " << c.svm.hyper.epochs << '\n'
        << "svm.learning_rate = " << fmt(c.svm.hyper.learning_rate) << '\n'
        << "svm.seed = " << c.svm.hyper.seed << '\n'
        << "svm.rfe_target = " << c.svm.rfe_target << '\n'
        << "mlp.learning_rate = " << fmt(c.mlp.learning_rate) << '\n'
        << "mlp.epochs = " << c.mlp.epochs << '\n'
        << "mlp.seed = " << c.mlp.seed << '\n'
        << "pipeline.method = " << to_string(c.method) << '\n'
        << "pipeline.roc_source = " << to_string(c.roc_source) << '\n'
        << "pipeline.workers = " << c.workers << '\n'
        << "pipeline.report_precision = " << c.report_precision << '\n';
}

}  // namespace lesion
