#include "lesion/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include "lesion/error.hpp"
#include "lesion/image_io.hpp"
#include "lesion/model_io.hpp"
#include "lesion/morphology.hpp"
#include "lesion/preprocess.hpp"
#include "lesion/risk.hpp"
#include "lesion/segmentation.hpp"
#include "lesion/similarity.hpp"

namespace fs = std::filesystem;

namespace lesion {

namespace {

struct StageError {
    std::string stage;
    std::string message;
};

template <typename F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        throw StageError{name, e.what()};
    }
}

void write_artifacts(const fs::path& dir, const RasterImage& rgb, const SegmentationResult& seg, MaskMethod method,
                     const RecordOutcome& out) {
    fs::create_directories(dir);
    save_mask(seg.watershed, dir / "watershed_mask.png");
    save_mask(seg.snake, dir / "snake_mask.png");
    save_mask(seg.merged, dir / "merged_mask.png");
    save_image(draw_overlay(rgb, seg.by_method(method)), dir / "overlay.png");
    if (out.features) {
        std::ofstream csv(dir / "features.csv", std::ios::binary);
        if (!csv) {
            throw DataError("cannot write " + (dir / "features.csv").string());
        }
        write_features_csv(csv, {{out.id, *out.features}});
    }
}

}  // namespace

TrainedModels load_models(const fs::path& dir) {
    return {load_svm_model(dir / kSvmModelFile), load_mlp_model(dir / kMlpModelFile)};
}

RasterImage to_rgb(const RasterImage& img) {
    if (img.channels() == 3) {
        return img;
    }
    RasterImage out(img.width(), img.height(), 3);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                out.at(x, y, c) = img.at(x, y);
            }
        }
    }
    return out;
}

RasterImage draw_overlay(const RasterImage& rgb, const BinaryMask& m) {
    RasterImage out = to_rgb(rgb);
    if (m.empty()) {
        return out;
    }
    for (const PixelPos& p : boundary_pixels(m)) {
        out.at(p.x, p.y, 0) = 0;
        out.at(p.x, p.y, 1) = 255;
        out.at(p.x, p.y, 2) = 0;
    }
    return out;
}

RecordOutcome run_one(const DatasetRecord& rec, const PipelineConfig& cfg, const TrainedModels* models,
                      const std::optional<fs::path>& out_dir, bool segmentation_only) {
    RecordOutcome out;
    out.id = rec.id;
    out.label = rec.label;
    try {
        const RasterImage rgb = stage("load", [&] { return to_rgb(load_image(rec.image_path)); });
        std::optional<BinaryMask> truth;
        if (rec.truth_mask_path) {
            truth = stage("load", [&] {
                BinaryMask m = load_mask(*rec.truth_mask_path);
                if (m.width() != rgb.width() || m.height() != rgb.height()) {
                    throw DimensionMismatch("truth mask and image dimensions differ");
                }
                return m;
            });
        }
        const RasterImage clean = stage("preprocess", [&] { return preprocess(rgb, cfg.preprocess); });
        const SegmentationResult seg = stage("segmentation", [&] { return segment_lesion(clean, cfg.segmentation); });

        if (truth) {
            stage("similarity", [&] {
                out.sim_snake = compare_masks(seg.snake, *truth);
                out.sim_watershed = compare_masks(seg.watershed, *truth);
                out.sim_merged = compare_masks(seg.merged, *truth);
                return 0;
            });
        }

        if (segmentation_only) {
            if (out_dir) {
                stage("artifacts", [&] {
                    write_artifacts(*out_dir / rec.id, rgb, seg, cfg.method, out);
                    return 0;
                });
            }
            out.ok = true;
            return out;
        }

        const FeatureResult fr =
            stage("features", [&] { return assemble_features(clean, seg.by_method(cfg.method), cfg.features); });
        out.features = fr.features;
        out.measurements = fr.measurements;

        if (models) {
            stage("classification", [&] {
                out.prob_merged_mask_pct =
                    100.0 * svm_probability(models->svm,
                                            cfg.method == MaskMethod::Merged
                                                ? fr.features
                                                : assemble_features(clean, seg.merged, cfg.features).features);
                if (truth) {
                    out.prob_truth_mask_pct =
                        100.0 * svm_probability(models->svm, assemble_features(clean, *truth, cfg.features).features);
                }
                out.assessment = cascade_assess(models->svm, models->mlp, fr.features);
                out.ann_output = mlp_assess(models->mlp, ann_inputs(fr.features)).ann_output;
                return 0;
            });
        }
        if (out_dir) {
            stage("artifacts", [&] {
                write_artifacts(*out_dir / rec.id, rgb, seg, cfg.method, out);
                return 0;
            });
        }
        out.ok = true;
    } catch (const StageError& e) {
        out.ok = false;
        out.failed_stage = e.stage;
        out.error = e.message;
    }
    return out;
}

std::vector<RecordOutcome> run_batch(const std::vector<DatasetRecord>& records, const PipelineConfig& cfg,
                                     const TrainedModels* models, const std::optional<fs::path>& out_dir,
                                     bool segmentation_only) {
    std::vector<RecordOutcome> results(records.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            results[i] = run_one(records[i], cfg, models, out_dir, segmentation_only);
        }
    };
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(cfg.workers, 1)), records.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    std::sort(results.begin(), results.end(),
              [](const RecordOutcome& a, const RecordOutcome& b) { return a.id < b.id; });
    return results;
}

TrainingResult train_models(const std::vector<DatasetRecord>& records, const PipelineConfig& cfg,
                            const std::optional<fs::path>& out_dir) {
    cfg.validate();
    TrainingResult tr;
    tr.outcomes = run_batch(records, cfg, nullptr, std::nullopt);

    std::vector<FeatureVector> x;
    std::vector<MlpInput> ann_x;
    std::vector<int> y;
    std::vector<FeatureRow> rows;
    for (const auto& o : tr.outcomes) {
        if (!o.ok || !o.label || !o.features) {
            continue;
        }
        x.push_back(*o.features);
        ann_x.push_back(ann_inputs(*o.features));
        y.push_back(*o.label);
        rows.push_back({o.id, *o.features});
    }
    const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
    if (positives < 2 || y.size() - positives < 2) {
        throw TrainingError("training needs at least two usable records of each class (have " +
                            std::to_string(positives) + " melanoma, " + std::to_string(y.size() - positives) +
                            " non-melanoma)");
    }
    SvmFit fit = fit_svm_model(x, y, cfg.svm);
    tr.models.svm = std::move(fit.model);
    tr.eliminated = std::move(fit.eliminated);
    tr.models.mlp = fit_mlp_model(ann_x, y, cfg.mlp);

    if (out_dir) {
        fs::create_directories(*out_dir);
        save_svm_model(*out_dir / kSvmModelFile, tr.models.svm);
        save_mlp_model(*out_dir / kMlpModelFile, tr.models.mlp);
        std::ofstream features(*out_dir / "training_features.csv", std::ios::binary);
        write_features_csv(features, rows);
        std::ofstream trace(*out_dir / "rfe_trace.csv", std::ios::binary);
        trace << "step,removed_feature\n";
        for (std::size_t i = 0; i < tr.eliminated.size(); ++i) {
            trace << i + 1 << ',' << tr.eliminated[i] << '\n';
        }
        if (!features || !trace) {
            throw DataError("cannot write training outputs under " + out_dir->string());
        }
    }
    return tr;
}

EvaluationReport evaluate(const std::vector<DatasetRecord>& records, const PipelineConfig& cfg,
                          const TrainedModels& models, const std::optional<fs::path>& out_dir) {
    cfg.validate();
    return build_report(run_batch(records, cfg, &models, out_dir), cfg.roc_source);
}

}  // namespace lesion
