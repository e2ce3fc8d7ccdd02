#include "lesion/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lesion/error.hpp"

namespace lesion {

namespace {

using nlohmann::json;

std::string hash_hex() {
    std::ostringstream os;
    os << std::hex << feature_registry_hash();
    return os.str();
}

json header(const char* kind) {
    return {{"format_version", kModelFormatVersion}, {"kind", kind}, {"feature_registry_hash", hash_hex()}};
}

json parse_checked(const std::string& text, const char* kind) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("kind", "") != kind) {
        throw DataError(std::string("model file is not a ") + kind + " model");
    }
    if (j.value("format_version", -1) != kModelFormatVersion) {
        throw DataError("unsupported model format version");
    }
    if (j.value("feature_registry_hash", "") != hash_hex()) {
        throw DataError("model was trained against a different feature registry");
    }
    return j;
}

template <typename F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot read " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

std::string svm_model_to_json(const LinearSvmModel& m) {
    json j = header("linear_svm");
    j["selected"] = m.selected;
    j["weights"] = m.weights;
    j["bias"] = m.bias;
    j["feature_min"] = m.feature_min;
    j["feature_max"] = m.feature_max;
    j["decision_lo"] = m.decision_lo;
    j["decision_hi"] = m.decision_hi;
    j["hyper"] = {{"C", m.hyper.C},
                  {"epochs", m.hyper.epochs},
                  {"learning_rate", m.hyper.learning_rate},
                  {"seed", m.hyper.seed}};
    return j.dump(2) + "\n";
}

LinearSvmModel svm_model_from_json(const std::string& text) {
    const json j = parse_checked(text, "linear_svm");
    LinearSvmModel m = guarded([&] {
        LinearSvmModel r;
        r.selected = j.at("selected").get<std::vector<std::string>>();
        r.weights = j.at("weights").get<std::vector<double>>();
        r.bias = j.at("bias").get<double>();
        r.feature_min = j.at("feature_min").get<std::vector<double>>();
        r.feature_max = j.at("feature_max").get<std::vector<double>>();
        r.decision_lo = j.at("decision_lo").get<double>();
        r.decision_hi = j.at("decision_hi").get<double>();
        const json& h = j.at("hyper");
        r.hyper.C = h.at("C").get<double>();
        r.hyper.epochs = h.at("epochs").get<int>();
        r.hyper.learning_rate = h.at("learning_rate").get<double>();
        r.hyper.seed = h.at("seed").get<std::uint64_t>();
        return r;
    });
    const std::size_t n = m.selected.size();
    if (n == 0 || m.weights.size() != n || m.feature_min.size() != n || m.feature_max.size() != n) {
        throw DataError("SVM model arrays have inconsistent lengths");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m.feature_max[i] < m.feature_min[i]) {
            throw DataError("SVM model has inverted scaling bounds");
        }
        try {
            feature_index(m.selected[i]);
        } catch (const std::out_of_range&) {
            throw DataError("SVM model references unknown feature '" + m.selected[i] + "'");
        }
    }
    if (!(m.decision_hi > m.decision_lo)) {
        throw DataError("SVM model calibration bounds are not increasing");
    }
    return m;
}

std::string mlp_model_to_json(const MlpModel& m) {
    json j = header("mlp");
    j["topology"] = {kMlpInputs, kMlpHidden, 1};
    j["w1"] = m.w1;
    j["b1"] = m.b1;
    j["w2"] = m.w2;
    j["b2"] = m.b2;
    j["input_min"] = m.input_min;
    j["input_max"] = m.input_max;
    j["hyper"] = {{"learning_rate", m.hyper.learning_rate}, {"epochs", m.hyper.epochs}, {"seed", m.hyper.seed}};
    return j.dump(2) + "\n";
}

MlpModel mlp_model_from_json(const std::string& text) {
    const json j = parse_checked(text, "mlp");
    return guarded([&] {
        const auto topo = j.at("topology").get<std::vector<std::size_t>>();
        if (topo != std::vector<std::size_t>{kMlpInputs, kMlpHidden, 1}) {
            throw DataError("MLP model topology must be 8-10-1");
        }
        MlpModel m;
        m.w1 = j.at("w1").get<decltype(m.w1)>();
        m.b1 = j.at("b1").get<decltype(m.b1)>();
        m.w2 = j.at("w2").get<decltype(m.w2)>();
        m.b2 = j.at("b2").get<double>();
        m.input_min = j.at("input_min").get<MlpInput>();
        m.input_max = j.at("input_max").get<MlpInput>();
        const json& h = j.at("hyper");
        m.hyper.learning_rate = h.at("learning_rate").get<double>();
        m.hyper.epochs = h.at("epochs").get<int>();
        m.hyper.seed = h.at("seed").get<std::uint64_t>();
        return m;
    });
}

void save_svm_model(const std::filesystem::path& path, const LinearSvmModel& m) {
    write_text(path, svm_model_to_json(m));
}

void save_mlp_model(const std::filesystem::path& path, const MlpModel& m) { write_text(path, mlp_model_to_json(m)); }

LinearSvmModel load_svm_model(const std::filesystem::path& path) { return svm_model_from_json(read_text(path)); }

MlpModel load_mlp_model(const std::filesystem::path& path) { return mlp_model_from_json(read_text(path)); }

}  // namespace lesion
