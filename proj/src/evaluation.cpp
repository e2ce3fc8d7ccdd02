#include "lesion/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lesion/dataset.hpp"
#include "lesion/error.hpp"

namespace fs = std::filesystem;

namespace lesion {

namespace {

using nlohmann::json;

std::string g17(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::optional<double> roc_score(const RecordOutcome& r, RocSource src) {
    if (!r.ok || !r.assessment) {
        return std::nullopt;
    }
    if (src == RocSource::Ann) {
        return r.ann_output;
    }
    return r.assessment->probability_pct / 100.0;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + p.string());
    }
    return out;
}

std::string opt_fixed(const std::optional<double>& v, int precision) {
    return v ? format_fixed(*v, precision) : "";
}

std::string label_name(const std::optional<int>& l) {
    if (!l) {
        return "";
    }
    return *l == kMelanoma ? "melanoma" : "non-melanoma";
}

bool has_similarity(const RecordOutcome& r) { return r.sim_merged || r.sim_snake || r.sim_watershed; }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table similarity_table(const std::vector<RecordOutcome>& rows, int precision) {
    Table t;
    t.header = {"id"};
    for (const char* measure : {"ssim", "jaccard", "dice"}) {
        for (const char* method : {"ac", "ws", "merged"}) {
            t.header.push_back(std::string(method) + "_" + measure);
        }
    }
    for (const auto& r : rows) {
        if (!has_similarity(r)) {
            continue;
        }
        std::vector<std::string> row{r.id};
        const auto cell = [&](const std::optional<SimilarityReport>& s, double SimilarityReport::*field) {
            return s ? format_fixed((*s).*field, precision) : std::string();
        };
        for (double SimilarityReport::*field :
             {&SimilarityReport::ssim_pct, &SimilarityReport::jaccard_pct, &SimilarityReport::dice_pct}) {
            row.push_back(cell(r.sim_snake, field));
            row.push_back(cell(r.sim_watershed, field));
            row.push_back(cell(r.sim_merged, field));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table classification_table(const std::vector<RecordOutcome>& rows, int precision) {
    Table t;
    t.header = {"id", "label", "prob_truth_mask", "prob_merged_mask", "final_level", "stage"};
    for (const auto& r : rows) {
        if (!r.ok) {
            t.rows.push_back({r.id, label_name(r.label), "", "", "error", r.failed_stage});
            continue;
        }
        t.rows.push_back({r.id, label_name(r.label), opt_fixed(r.prob_truth_mask_pct, precision),
                          opt_fixed(r.prob_merged_mask_pct, precision),
                          r.assessment ? to_string(r.assessment->level) : "",
                          r.assessment ? to_string(r.assessment->stage) : ""});
    }
    return t;
}

void write_csv(const fs::path& p, const Table& t) {
    auto out = open_out(p);
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        out << (i ? "," : "") << t.header[i];
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << '\n';
    }
}

void write_markdown_table(std::ostream& out, const Table& t) {
    out << '|';
    for (const auto& h : t.header) {
        out << ' ' << h << " |";
    }
    out << "\n|";
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        out << "---|";
    }
    out << '\n';
    for (const auto& row : t.rows) {
        out << '|';
        for (const auto& c : row) {
            out << ' ' << c << " |";
        }
        out << '\n';
    }
}

json similarity_json(const SimilarityReport& s) {
    return {{"ssim", s.ssim_pct}, {"jaccard", s.jaccard_pct}, {"dice", s.dice_pct}};
}

SimilarityReport similarity_from(const json& j) {
    return {j.at("ssim").get<double>(), j.at("jaccard").get<double>(), j.at("dice").get<double>()};
}

RiskLevel parse_level(const std::string& s) {
    if (s == "low") {
        return RiskLevel::Low;
    }
    if (s == "medium") {
        return RiskLevel::Medium;
    }
    if (s == "high") {
        return RiskLevel::High;
    }
    throw DataError("unknown risk level '" + s + "'");
}

RiskStage parse_stage(const std::string& s) {
    if (s == "svm") {
        return RiskStage::Svm;
    }
    if (s == "ann") {
        return RiskStage::Ann;
    }
    if (s == "cascade") {
        return RiskStage::Cascade;
    }
    throw DataError("unknown risk stage '" + s + "'");
}

}  // namespace

double ConfusionMatrix::accuracy() const {
    const std::size_t n = total();
    return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

std::vector<RocPoint> roc_curve(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("roc_curve: score and label counts differ");
    }
    std::size_t pos = 0;
    for (int l : labels) {
        pos += l == kMelanoma ? 1 : 0;
    }
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) {
        throw std::invalid_argument("roc_curve needs both classes");
    }
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<RocPoint> roc{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t k = 0; k < order.size();) {
        const double thr = scores[order[k]];
        while (k < order.size() && scores[order[k]] == thr) {
            (labels[order[k]] == kMelanoma ? tp : fp) += 1;
            ++k;
        }
        roc.push_back({thr, static_cast<double>(fp) / static_cast<double>(neg),
                       static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return roc;
}

double roc_auc(const std::vector<RocPoint>& roc) {
    double a = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i) {
        a += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2.0;
    }
    return a;
}

EvaluationReport build_report(std::vector<RecordOutcome> rows, RocSource roc_source) {
    std::sort(rows.begin(), rows.end(), [](const RecordOutcome& a, const RecordOutcome& b) { return a.id < b.id; });
    EvaluationReport rep;
    rep.roc_source = roc_source;
    std::vector<double> scores;
    std::vector<int> labels;
    for (const auto& r : rows) {
        if (!r.ok) {
            ++rep.failed;
            continue;
        }
        if (!r.label || !r.assessment) {
            continue;
        }
        const bool predicted = r.assessment->level == RiskLevel::High;
        const bool actual = *r.label == kMelanoma;
        if (predicted && actual) {
            ++rep.confusion.tp;
        } else if (predicted) {
            ++rep.confusion.fp;
        } else if (actual) {
            ++rep.confusion.fn;
        } else {
            ++rep.confusion.tn;
        }
        if (const auto s = roc_score(r, roc_source)) {
            scores.push_back(*s);
            labels.push_back(*r.label);
        }
    }
    if (rep.confusion.total() == 0) {
        throw DataError("evaluation found no labelled record with a completed assessment");
    }
    rep.accuracy = rep.confusion.accuracy();
    const bool both = std::count(labels.begin(), labels.end(), kMelanoma) > 0 &&
                      std::count(labels.begin(), labels.end(), kNonMelanoma) > 0;
    if (both) {
        rep.roc = roc_curve(scores, labels);
        rep.auc = roc_auc(rep.roc);
    }
    rep.rows = std::move(rows);
    return rep;
}

std::string format_fixed(double v, int decimals) {
    if (!std::isfinite(v)) {
        return g17(v);
    }
    char buf[400];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    std::string s(buf, res.ptr);
    const bool neg = !s.empty() && s[0] == '-';
    if (neg) {
        s.erase(0, 1);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        s += '.';
        dot = s.size() - 1;
    }
    std::string frac = s.substr(dot + 1);
    std::string whole = s.substr(0, dot);
    const bool round_up = frac.size() > static_cast<std::size_t>(decimals) && frac[decimals] >= '5';
    frac.resize(static_cast<std::size_t>(decimals), '0');
    std::string digits = whole + frac;
    if (round_up) {
        int i = static_cast<int>(digits.size()) - 1;
        while (i >= 0 && digits[i] == '9') {
            digits[i] = '0';
            --i;
        }
        if (i < 0) {
            digits.insert(digits.begin(), '1');
        } else {
            ++digits[i];
        }
    }
    const std::size_t whole_len = digits.size() - static_cast<std::size_t>(decimals);
    std::string out = digits.substr(0, whole_len);
    if (decimals > 0) {
        out += '.' + digits.substr(whole_len);
    }
    if (neg && out.find_first_not_of("0.") != std::string::npos) {
        out.insert(out.begin(), '-');
    }
    return out;
}

ReportFormat parse_report_format(const std::string& s) {
    if (s == "csv") {
        return ReportFormat::Csv;
    }
    if (s == "markdown" || s == "md") {
        return ReportFormat::Markdown;
    }
    throw std::invalid_argument("report format must be 'csv' or 'markdown', got '" + s + "'");
}

void report_write(const EvaluationReport& rep, const fs::path& out_dir, ReportFormat format, int precision) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw DataError("cannot create " + out_dir.string() + ": " + ec.message());
    }
    const Table sim = similarity_table(rep.rows, precision);
    const Table cls = classification_table(rep.rows, precision);
    const Table confusion{{"", "predicted_melanoma", "predicted_non_melanoma"},
                          {{"actual_melanoma", std::to_string(rep.confusion.tp), std::to_string(rep.confusion.fn)},
                           {"actual_non_melanoma", std::to_string(rep.confusion.fp), std::to_string(rep.confusion.tn)}}};
    Table roc{{"threshold", "fpr", "tpr"}, {}};
    for (const auto& p : rep.roc) {
        roc.rows.push_back({g17(p.threshold), g17(p.fpr), g17(p.tpr)});
    }

    const fs::path sim_path = out_dir / "similarity.csv";
    if (!sim.rows.empty()) {
        write_csv(sim_path, sim);
    } else {
        fs::remove(sim_path, ec);
    }
    write_csv(out_dir / "classification.csv", cls);
    write_csv(out_dir / "confusion.csv", confusion);
    write_csv(out_dir / "roc.csv", roc);

    std::ostringstream summary;
    summary << "records: " << rep.rows.size() << '\n'
            << "failed: " << rep.failed << '\n'
            << "evaluated: " << rep.confusion.total() << '\n'
            << "tp: " << rep.confusion.tp << "  fn: " << rep.confusion.fn << "  fp: " << rep.confusion.fp
            << "  tn: " << rep.confusion.tn << '\n'
            << "accuracy: " << g17(rep.accuracy) << '\n'
            << "roc_source: " << to_string(rep.roc_source) << '\n'
            << "auc: " << (rep.auc ? g17(*rep.auc) : "n/a (needs both classes)") << '\n';
    if (sim.rows.empty()) {
        summary << "similarity: omitted (no truth masks)\n";
    } else {
        double sums[3] = {0, 0, 0};
        std::size_t n = 0;
        for (const auto& r : rep.rows) {
            if (r.sim_merged) {
                sums[0] += r.sim_merged->ssim_pct;
                sums[1] += r.sim_merged->jaccard_pct;
                sums[2] += r.sim_merged->dice_pct;
                ++n;
            }
        }
        if (n > 0) {
            const auto dn = static_cast<double>(n);
            summary << "merged mask mean ssim/jaccard/dice: " << format_fixed(sums[0] / dn, precision) << " / "
                    << format_fixed(sums[1] / dn, precision) << " / " << format_fixed(sums[2] / dn, precision)
                    << '\n';
        }
    }
    for (const auto& r : rep.rows) {
        if (!r.ok) {
            summary << "failure " << r.id << " [" << r.failed_stage << "]: " << r.error << '\n';
        }
    }
    open_out(out_dir / "summary.txt") << summary.str();
    open_out(out_dir / "evaluation.json") << report_to_json(rep);

    if (format == ReportFormat::Markdown) {
        auto md = open_out(out_dir / "report.md");
        md << "# Evaluation report\n\n```\n" << summary.str() << "```\n\n";
        if (!sim.rows.empty()) {
            md << "## Similarity (%)\n\n";
            write_markdown_table(md, sim);
            md << '\n';
        }
        md << "## Classification\n\n";
        write_markdown_table(md, cls);
        md << "\n## Confusion matrix\n\n";
        write_markdown_table(md, confusion);
    }
}

bool write_similarity_csv(const std::vector<RecordOutcome>& rows, const fs::path& path, int precision) {
    const Table t = similarity_table(rows, precision);
    if (t.rows.empty()) {
        return false;
    }
    write_csv(path, t);
    return true;
}

void write_classification_csv(const std::vector<RecordOutcome>& rows, const fs::path& path, int precision) {
    write_csv(path, classification_table(rows, precision));
}

std::string report_to_json(const EvaluationReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json j = {{"id", r.id}, {"ok", r.ok}};
        j["label"] = r.label ? json(*r.label) : json(nullptr);
        if (!r.ok) {
            j["failed_stage"] = r.failed_stage;
            j["error"] = r.error;
        }
        if (r.sim_snake) {
            j["sim_snake"] = similarity_json(*r.sim_snake);
        }
        if (r.sim_watershed) {
            j["sim_watershed"] = similarity_json(*r.sim_watershed);
        }
        if (r.sim_merged) {
            j["sim_merged"] = similarity_json(*r.sim_merged);
        }
        if (r.measurements) {
            j["diameter_px"] = r.measurements->diameter_px;
            if (r.measurements->diameter_mm) {
                j["diameter_mm"] = *r.measurements->diameter_mm;
            }
        }
        if (r.prob_truth_mask_pct) {
            j["prob_truth_mask"] = *r.prob_truth_mask_pct;
        }
        if (r.prob_merged_mask_pct) {
            j["prob_merged_mask"] = *r.prob_merged_mask_pct;
        }
        if (r.assessment) {
            j["assessment"] = {{"probability_pct", r.assessment->probability_pct},
                               {"level", to_string(r.assessment->level)},
                               {"stage", to_string(r.assessment->stage)}};
        }
        if (r.ann_output) {
            j["ann_output"] = *r.ann_output;
        }
        rows.push_back(std::move(j));
    }
    const json doc = {{"format_version", 1}, {"roc_source", to_string(rep.roc_source)}, {"rows", rows}};
    return doc.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        std::vector<RecordOutcome> rows;
        for (const json& j : doc.at("rows")) {
            RecordOutcome r;
            r.id = j.at("id").get<std::string>();
            r.ok = j.at("ok").get<bool>();
            if (!j.at("label").is_null()) {
                r.label = j.at("label").get<int>();
            }
            r.failed_stage = j.value("failed_stage", "");
            r.error = j.value("error", "");
            if (j.contains("sim_snake")) {
                r.sim_snake = similarity_from(j.at("sim_snake"));
            }
            if (j.contains("sim_watershed")) {
                r.sim_watershed = similarity_from(j.at("sim_watershed"));
            }
            if (j.contains("sim_merged")) {
                r.sim_merged = similarity_from(j.at("sim_merged"));
            }
            if (j.contains("diameter_px")) {
                LesionMeasurements m;
                m.diameter_px = j.at("diameter_px").get<double>();
                if (j.contains("diameter_mm")) {
                    m.diameter_mm = j.at("diameter_mm").get<double>();
                }
                r.measurements = m;
            }
            if (j.contains("prob_truth_mask")) {
                r.prob_truth_mask_pct = j.at("prob_truth_mask").get<double>();
            }
            if (j.contains("prob_merged_mask")) {
                r.prob_merged_mask_pct = j.at("prob_merged_mask").get<double>();
            }
            if (j.contains("assessment")) {
                const json& a = j.at("assessment");
                RiskAssessment ra;
                ra.probability_pct = a.at("probability_pct").get<double>();
                ra.level = parse_level(a.at("level").get<std::string>());
                ra.stage = parse_stage(a.at("stage").get<std::string>());
                r.assessment = ra;
            }
            if (j.contains("ann_output")) {
                r.ann_output = j.at("ann_output").get<double>();
                if (r.assessment && r.assessment->stage == RiskStage::Cascade) {
                    r.assessment->ann_output = r.ann_output;
                }
            }
            rows.push_back(std::move(r));
        }
        return build_report(std::move(rows), parse_roc_source(doc.at("roc_source").get<std::string>()));
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed evaluation.json: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("malformed evaluation.json: ") + e.what());
    }
}

}  // namespace lesion
