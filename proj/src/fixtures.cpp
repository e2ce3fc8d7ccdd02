#include "lesion/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "lesion/error.hpp"
#include "lesion/image_io.hpp"

namespace fs = std::filesystem;

namespace lesion {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53); }

private:
    std::mt19937_64 gen_;
};

struct Blob {
    double x, y, sigma, strength;
    bool blue;
};

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

SyntheticLesion make_synthetic_lesion(bool malignant, std::uint64_t seed, int size) {
    if (size < 64) {
        throw std::invalid_argument("synthetic lesions need at least 64x64 pixels");
    }
    Rng rng(seed * 2 + (malignant ? 1 : 0));
    const double half = (size - 1) / 2.0;
    const double cx = half + rng.uniform(-6.0, 6.0);
    const double cy = half + rng.uniform(-6.0, 6.0);
    const double r0 = size * rng.uniform(0.19, 0.25);

    // Border: r(theta) = r0 (1 + sum a_k cos(k theta + phi_k)).
    std::vector<double> amp;
    std::vector<double> phase;
    std::vector<int> freq;
    if (malignant) {
        for (int k = 3; k <= 6; ++k) {
            freq.push_back(k);
            amp.push_back(rng.uniform(0.05, 0.09));
            phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
        }
    } else {
        freq.push_back(2);
        amp.push_back(rng.uniform(0.0, 0.03));
        phase.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    }

    const double skin[3] = {rng.uniform(215, 230), rng.uniform(170, 185), rng.uniform(150, 165)};
    const double tone[3] = {rng.uniform(125, 145), rng.uniform(80, 95), rng.uniform(55, 70)};

    std::vector<Blob> blobs;
    if (malignant) {
        const int count = 7;
        for (int i = 0; i < count; ++i) {
            const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const double d = r0 * rng.uniform(0.0, 0.7);
            blobs.push_back({cx + d * std::cos(a), cy + d * std::sin(a), rng.uniform(5.0, 8.0),
                             rng.uniform(0.35, 0.6), rng.uniform(0.0, 1.0) < 0.4});
        }
    }

    SyntheticLesion out{RasterImage(size, size, 3), BinaryMask(size, size)};
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            const double theta = std::atan2(dy, dx);
            double r = r0;
            for (std::size_t k = 0; k < freq.size(); ++k) {
                r += r0 * amp[k] * std::cos(freq[k] * theta + phase[k]);
            }
            const bool inside = std::hypot(dx, dy) <= r;
            out.truth.set(x, y, inside);
            const double grain = rng.uniform(-3.0, 3.0);
            double c[3];
            if (!inside) {
                for (int ch = 0; ch < 3; ++ch) {
                    c[ch] = skin[ch] + grain;
                }
            } else {
                for (int ch = 0; ch < 3; ++ch) {
                    c[ch] = tone[ch] + grain;
                }
                for (const Blob& b : blobs) {
                    const double d2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
                    const double w = b.strength * std::exp(-d2 / (2.0 * b.sigma * b.sigma));
                    if (b.blue) {
                        c[0] += w * (70.0 - c[0]);
                        c[1] += w * (80.0 - c[1]);
                        c[2] += w * (120.0 - c[2]);
                    } else {
                        for (double& v : c) {
                            v *= 1.0 - w;
                        }
                    }
                }
            }
            for (int ch = 0; ch < 3; ++ch) {
                out.image.at(x, y, ch) = to_byte(c[ch]);
            }
        }
    }
    return out;
}

std::vector<DatasetRecord> write_fixture_corpus(const fs::path& dir, int benign, int malignant, std::uint64_t seed) {
    if (benign < 0 || malignant < 0 || benign + malignant == 0) {
        throw std::invalid_argument("fixture corpus needs at least one lesion");
    }
    fs::create_directories(dir / "images");
    fs::create_directories(dir / "masks");
    std::vector<DatasetRecord> records;
    std::ofstream manifest(dir / "manifest.csv");
    if (!manifest) {
        throw DataError("cannot write " + (dir / "manifest.csv").string());
    }
    manifest << "id,image,mask,label\n";
    const auto emit = [&](bool is_malignant, int index) {
        char id[32];
        std::snprintf(id, sizeof id, "%s_%03d", is_malignant ? "malignant" : "benign", index);
        const SyntheticLesion s = make_synthetic_lesion(is_malignant, seed * 1000003ULL + static_cast<std::uint64_t>(index), 128);
        const std::string image_rel = std::string("images/") + id + ".png";
        const std::string mask_rel = std::string("masks/") + id + "_mask.png";
        save_image(s.image, dir / image_rel);
        save_mask(s.truth, dir / mask_rel);
        manifest << id << ',' << image_rel << ',' << mask_rel << ',' << (is_malignant ? "melanoma" : "non-melanoma")
                 << '\n';
        records.push_back({id, dir / image_rel, dir / mask_rel, is_malignant ? kMelanoma : kNonMelanoma,
                           DataSource::Custom});
    };
    for (int i = 0; i < benign; ++i) {
        emit(false, i);
    }
    for (int i = 0; i < malignant; ++i) {
        emit(true, i);
    }
    return records;
}

}  // namespace lesion
