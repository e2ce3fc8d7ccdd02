#include "lesion/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "lesion/error.hpp"

namespace fs = std::filesystem;

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

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split(const std::string& line, const std::string& sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
        if (pos == std::string::npos) {
            break;
        }
        start = pos + sep.size();
    }
    return out;
}

std::optional<int> parse_label(const std::string& v) {
    const std::string s = lower(v);
    if (s.empty()) {
        return std::nullopt;
    }
    if (s == "melanoma" || s == "1" || s == "malignant") {
        return kMelanoma;
    }
    if (s == "non-melanoma" || s == "nonmelanoma" || s == "benign" || s == "0") {
        return kNonMelanoma;
    }
    throw std::invalid_argument("unknown label '" + v + "'");
}

bool is_case_id(const std::string& s) {
    return s.size() > 3 && s.rfind("IMD", 0) == 0 &&
           std::all_of(s.begin() + 3, s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

const char* to_string(DataSource s) {
    switch (s) {
        case DataSource::Ph2:
            return "ph2";
        case DataSource::Dermis:
            return "dermis";
        case DataSource::Dermquest:
            return "dermquest";
        case DataSource::Custom:
            return "custom";
    }
    return "?";
}

DataSource parse_data_source(const std::string& s) {
    if (s == "ph2") {
        return DataSource::Ph2;
    }
    if (s == "dermis") {
        return DataSource::Dermis;
    }
    if (s == "dermquest") {
        return DataSource::Dermquest;
    }
    if (s == "custom") {
        return DataSource::Custom;
    }
    throw std::invalid_argument("source must be one of ph2, dermis, dermquest, custom; got '" + s + "'");
}

IngestResult read_manifest(const fs::path& manifest, DataSource source) {
    std::ifstream in(manifest);
    if (!in) {
        throw DataError("cannot read manifest " + manifest.string());
    }
    const fs::path base = manifest.parent_path();
    IngestResult r;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    std::map<std::string, std::size_t> col;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line, ",");
        const std::string where = manifest.string() + ":" + std::to_string(lineno);
        if (col.empty()) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                col[lower(cells[i])] = i;
            }
            if (!col.count("id") || !col.count("image")) {
                throw DataError(where + ": manifest header needs at least 'id' and 'image' columns");
            }
            continue;
        }
        const auto cell = [&](const char* name) -> std::string {
            const auto it = col.find(name);
            return it != col.end() && it->second < cells.size() ? cells[it->second] : std::string();
        };
        DatasetRecord rec;
        rec.source = source;
        rec.id = cell("id");
        if (rec.id.empty()) {
            throw DataError(where + ": empty id");
        }
        if (!seen.insert(rec.id).second) {
            throw DataError(where + ": duplicate id '" + rec.id + "'");
        }
        rec.image_path = base / cell("image");
        if (cell("image").empty() || !fs::is_regular_file(rec.image_path)) {
            throw DataError(where + ": image for '" + rec.id + "' not found: " + rec.image_path.string());
        }
        if (const std::string mask = cell("mask"); !mask.empty()) {
            rec.truth_mask_path = base / mask;
            if (!fs::is_regular_file(*rec.truth_mask_path)) {
                throw DataError(where + ": mask for '" + rec.id + "' not found: " + rec.truth_mask_path->string());
            }
        }
        try {
            rec.label = parse_label(cell("label"));
        } catch (const std::invalid_argument& e) {
            throw DataError(where + ": " + e.what());
        }
        r.records.push_back(std::move(rec));
    }
    if (r.records.empty()) {
        throw DataError("manifest " + manifest.string() + " lists no records");
    }
    return r;
}

IngestResult ingest_ph2(const fs::path& root) {
    fs::path index = root / "PH2_dataset.txt";
    if (!fs::is_regular_file(index)) {
        throw DataError("PH2 index PH2_dataset.txt not found under " + root.string());
    }
    fs::path images = root / "PH2 Dataset images";
    if (!fs::is_directory(images)) {
        images = root;
    }
    std::ifstream in(index);
    if (!in) {
        throw DataError("cannot read " + index.string());
    }
    IngestResult r;
    std::string line;
    int lineno = 0;
    std::optional<std::size_t> name_col;
    std::optional<std::size_t> diag_col;
    std::set<std::string> listed;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find("||") == std::string::npos) {
            continue;
        }
        const auto cells = split(line, "||");
        if (!name_col) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const std::string c = lower(cells[i]);
                if (c == "name") {
                    name_col = i;
                } else if (c == "clinical diagnosis") {
                    diag_col = i;
                }
            }
            if (name_col && !diag_col) {
                throw DataError(index.string() + ":" + std::to_string(lineno) + ": no 'Clinical Diagnosis' column");
            }
            continue;
        }
        if (*name_col >= cells.size() || !is_case_id(cells[*name_col])) {
            continue;
        }
        const std::string id = cells[*name_col];
        const std::string diag = *diag_col < cells.size() ? cells[*diag_col] : "";
        if (diag != "0" && diag != "1" && diag != "2") {
            throw DataError(index.string() + ":" + std::to_string(lineno) + ": bad clinical diagnosis '" + diag +
                            "' for " + id);
        }
        listed.insert(id);
        DatasetRecord rec;
        rec.id = id;
        rec.source = DataSource::Ph2;
        rec.label = diag == "2" ? kMelanoma : kNonMelanoma;
        rec.image_path = images / id / (id + "_Dermoscopic_Image") / (id + ".bmp");
        const fs::path mask = images / id / (id + "_lesion") / (id + "_lesion.bmp");
        if (!fs::is_regular_file(rec.image_path)) {
            r.warnings.push_back("skipping " + id + ": image " + rec.image_path.string() + " missing");
            continue;
        }
        if (fs::is_regular_file(mask)) {
            rec.truth_mask_path = mask;
        } else {
            r.warnings.push_back(id + ": no lesion mask at " + mask.string());
        }
        r.records.push_back(std::move(rec));
    }
    if (!name_col) {
        throw DataError(index.string() + ": no header row with a 'Name' column");
    }
    std::vector<std::string> unlisted;
    for (const auto& entry : fs::directory_iterator(images)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_directory() && is_case_id(name) && !listed.count(name)) {
            unlisted.push_back(name);
        }
    }
    std::sort(unlisted.begin(), unlisted.end());
    for (const auto& name : unlisted) {
        r.warnings.push_back("skipping case folder " + name + ": not listed in PH2_dataset.txt");
    }
    if (r.records.empty()) {
        throw DataError("no PH2 cases found under " + root.string());
    }
    return r;
}

IngestResult ingest(const fs::path& root, DataSource source, const std::optional<fs::path>& manifest) {
    if (source == DataSource::Ph2 && !manifest) {
        return ingest_ph2(root);
    }
    return read_manifest(manifest ? *manifest : root / "manifest.csv", source);
}

}  // namespace lesion
