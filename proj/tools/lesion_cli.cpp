#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lesion/config.hpp"
#include "lesion/dataset.hpp"
#include "lesion/error.hpp"
#include "lesion/evaluation.hpp"
#include "lesion/features.hpp"
#include "lesion/fixtures.hpp"
#include "lesion/runner.hpp"

namespace fs = std::filesystem;
using namespace lesion;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProcessing = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::string dataset;
    std::string manifest;
    std::string source = "custom";
    std::string out = "out";
    std::string models;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string method;
    std::string roc_source;
    std::string format = "csv";
    std::string input;
    bool strict = false;
    int benign = 20;
    int malignant = 20;
};

void add_config_options(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "key = value configuration file");
    sub->add_option("--seed", o.seed, "seed for every stochastic stage");
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--method", o.method, "mask used for features: watershed, snake or merged");
}

void add_data_options(CLI::App* sub, Options& o) {
    sub->add_option("--dataset", o.dataset, "dataset root directory");
    sub->add_option("--manifest", o.manifest, "CSV manifest (id,image,mask,label)");
    sub->add_option("--source", o.source, "ph2, dermis, dermquest or custom");
    sub->add_flag("--strict", o.strict, "exit 3 when any record fails");
}

template <typename F>
auto as_usage(F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

PipelineConfig resolve_config(const Options& o) {
    PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
    as_usage([&] {
        if (o.seed) {
            cfg.set_seed(*o.seed);
        }
        if (o.workers) {
            cfg.workers = *o.workers;
        }
        if (!o.method.empty()) {
            cfg.method = parse_mask_method(o.method);
        }
        if (!o.roc_source.empty()) {
            cfg.roc_source = parse_roc_source(o.roc_source);
        }
        cfg.validate();
        return 0;
    });
    return cfg;
}

std::vector<DatasetRecord> resolve_records(const Options& o) {
    const DataSource source = as_usage([&] { return parse_data_source(o.source); });
    if (o.dataset.empty() && o.manifest.empty()) {
        throw UsageError("either --dataset or --manifest is required");
    }
    IngestResult r;
    if (!o.manifest.empty()) {
        r = read_manifest(o.manifest, source);
    } else {
        r = ingest(o.dataset, source);
    }
    for (const auto& w : r.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    return r.records;
}

fs::path models_dir(const Options& o) { return o.models.empty() ? fs::path(o.out) : fs::path(o.models); }

std::size_t report_failures(const std::vector<RecordOutcome>& rows) {
    std::size_t failed = 0;
    for (const auto& r : rows) {
        if (!r.ok) {
            ++failed;
            std::cerr << "error: " << r.id << ": " << r.failed_stage << ": " << r.error << '\n';
        }
    }
    return failed;
}

int finish(const Options& o, std::size_t total, std::size_t failed, const char* what) {
    std::cout << what << ' ' << total - failed << " of " << total << " records";
    if (failed > 0) {
        std::cout << " (" << failed << " failed)";
    }
    std::cout << '\n';
    return o.strict && failed > 0 ? kExitProcessing : kExitOk;
}

int cmd_segment(const Options& o) {
    const PipelineConfig cfg = resolve_config(o);
    const auto records = resolve_records(o);
    const auto rows = run_batch(records, cfg, nullptr, fs::path(o.out), true);
    fs::create_directories(o.out);
    write_similarity_csv(rows, fs::path(o.out) / "similarity.csv", cfg.report_precision);
    return finish(o, rows.size(), report_failures(rows), "segmented");
}

int cmd_features(const Options& o) {
    const PipelineConfig cfg = resolve_config(o);
    const auto records = resolve_records(o);
    const auto rows = run_batch(records, cfg, nullptr, fs::path(o.out));
    std::vector<FeatureRow> table;
    for (const auto& r : rows) {
        if (r.ok && r.features) {
            table.push_back({r.id, *r.features});
        }
    }
    fs::create_directories(o.out);
    std::ofstream csv(fs::path(o.out) / "features.csv", std::ios::binary);
    write_features_csv(csv, table);
    if (!csv) {
        throw DataError("cannot write " + (fs::path(o.out) / "features.csv").string());
    }
    return finish(o, rows.size(), report_failures(rows), "extracted features for");
}

int cmd_train(const Options& o) {
    const PipelineConfig cfg = resolve_config(o);
    const auto records = resolve_records(o);
    const TrainingResult tr = train_models(records, cfg, models_dir(o));
    std::cout << "svm keeps " << tr.models.svm.selected.size() << " features after eliminating "
              << tr.eliminated.size() << '\n';
    return finish(o, tr.outcomes.size(), report_failures(tr.outcomes), "trained on");
}

int cmd_classify(const Options& o) {
    const PipelineConfig cfg = resolve_config(o);
    const auto records = resolve_records(o);
    const TrainedModels models = load_models(models_dir(o));
    const auto rows = run_batch(records, cfg, &models, fs::path(o.out));
    fs::create_directories(o.out);
    write_classification_csv(rows, fs::path(o.out) / "classification.csv", cfg.report_precision);
    for (const auto& r : rows) {
        if (r.ok && r.assessment) {
            std::cout << r.id << ' ' << to_string(r.assessment->level) << ' '
                      << format_fixed(r.assessment->probability_pct, cfg.report_precision) << "% ("
                      << to_string(r.assessment->stage) << ")\n";
        }
    }
    return finish(o, rows.size(), report_failures(rows), "classified");
}

void print_summary(const EvaluationReport& rep, int precision) {
    const auto& c = rep.confusion;
    std::cout << "accuracy " << format_fixed(100.0 * rep.accuracy, precision) << "% (tp " << c.tp << ", fp " << c.fp
              << ", tn " << c.tn << ", fn " << c.fn << ")\n";
    std::cout << "auc " << (rep.auc ? format_fixed(*rep.auc, 3) : std::string("n/a")) << " (" << to_string(rep.roc_source)
              << ")\n";
}

int cmd_evaluate(const Options& o) {
    const ReportFormat format = as_usage([&] { return parse_report_format(o.format); });
    const PipelineConfig cfg = resolve_config(o);
    const auto records = resolve_records(o);
    const TrainedModels models = load_models(models_dir(o));
    const EvaluationReport rep = evaluate(records, cfg, models, fs::path(o.out));
    report_write(rep, o.out, format, cfg.report_precision);
    print_summary(rep, cfg.report_precision);
    return finish(o, rep.rows.size(), report_failures(rep.rows), "evaluated");
}

int cmd_report(const Options& o) {
    const ReportFormat format = as_usage([&] { return parse_report_format(o.format); });
    const PipelineConfig cfg = resolve_config(o);
    const fs::path input = o.input.empty() ? fs::path(o.out) / "evaluation.json" : fs::path(o.input);
    std::ifstream in(input, std::ios::binary);
    if (!in) {
        throw DataError("cannot read " + input.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    const EvaluationReport rep = report_from_json(text.str());
    report_write(rep, o.out, format, cfg.report_precision);
    print_summary(rep, cfg.report_precision);
    return kExitOk;
}

int cmd_fixtures(const Options& o) {
    const auto records =
        as_usage([&] { return write_fixture_corpus(o.out, o.benign, o.malignant, o.seed.value_or(7)); });
    std::cout << "wrote " << records.size() << " synthetic lesions to " << o.out << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dermoscopic lesion segmentation and melanoma risk assessment"};
    app.require_subcommand(1);
    Options o;

    auto* segment = app.add_subcommand("segment", "segment lesions and score masks against ground truth");
    auto* features = app.add_subcommand("features", "extract the feature table");
    auto* train = app.add_subcommand("train", "train the SVM and the network");
    auto* classify = app.add_subcommand("classify", "assess melanoma risk with trained models");
    auto* eval = app.add_subcommand("evaluate", "classify a labelled dataset and write the report");
    auto* report = app.add_subcommand("report", "re-render a saved evaluation");
    auto* fixtures = app.add_subcommand("fixtures", "write a synthetic labelled corpus");

    for (auto* sub : {segment, features, train, classify, eval}) {
        add_config_options(sub, o);
        add_data_options(sub, o);
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
    }
    for (auto* sub : {train, classify, eval}) {
        sub->add_option("--models", o.models, "model directory (default: --out)");
    }
    for (auto* sub : {eval, report}) {
        sub->add_option("--format", o.format, "csv or markdown")->capture_default_str();
        sub->add_option("--roc-source", o.roc_source, "scores for the ROC curve: ann or cascade");
    }
    report->add_option("--config", o.config, "key = value configuration file");
    report->add_option("--input", o.input, "saved evaluation.json (default: <out>/evaluation.json)");
    report->add_option("--out", o.out, "output directory")->capture_default_str();
    fixtures->add_option("--out", o.out, "output directory")->required();
    fixtures->add_option("--benign", o.benign, "benign lesions")->capture_default_str();
    fixtures->add_option("--malignant", o.malignant, "malignant lesions")->capture_default_str();
    fixtures->add_option("--seed", o.seed, "corpus seed (default 7)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*segment) return cmd_segment(o);
        if (*features) return cmd_features(o);
        if (*train) return cmd_train(o);
        if (*classify) return cmd_classify(o);
        if (*eval) return cmd_evaluate(o);
        if (*report) return cmd_report(o);
        return cmd_fixtures(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const TrainingError& e) {
        std::cerr << "training error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "processing error: " << e.what() << '\n';
        return kExitProcessing;
    }
}
