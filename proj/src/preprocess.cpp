#include "lesion/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lesion/error.hpp"
#include "lesion/morphology.hpp"

namespace lesion {

void PreprocessConfig::validate() const {
    if (hair_line_length < 3 || hair_line_length % 2 == 0) {
        throw std::invalid_argument("hair_line_length must be odd and >= 3");
    }
    if (hair_threshold < 1 || hair_threshold > 254) {
        throw std::invalid_argument("hair_threshold must lie in [1, 254]");
    }
    if (inpaint_radius < 1) {
        throw std::invalid_argument("inpaint_radius must be >= 1");
    }
    if (hair_angles.empty()) {
        throw std::invalid_argument("hair_angles must not be empty");
    }
}

RasterImage sharpen(const RasterImage& img) {
    RasterImage out(img.width(), img.height(), img.channels());
    const int w = img.width();
    const int h = img.height();
    for (int c = 0; c < img.channels(); ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const int up = img.at(x, std::max(y - 1, 0), c);
                const int down = img.at(x, std::min(y + 1, h - 1), c);
                const int left = img.at(std::max(x - 1, 0), y, c);
                const int right = img.at(std::min(x + 1, w - 1), y, c);
                const int v = 5 * img.at(x, y, c) - up - down - left - right;
                out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
            }
        }
    }
    return out;
}

RasterImage hair_response(const RasterImage& gray, const PreprocessConfig& cfg) {
    RasterImage response(gray.width(), gray.height(), 1, 0);
    for (double angle : cfg.hair_angles) {
        const auto closed = gray_close(gray, StructuringElement::line(cfg.hair_line_length, angle));
        auto dst = response.data();
        auto cl = closed.data();
        auto src = gray.data();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            // replicate padding can make the closing dip below the input at borders
            const int raised = std::max(0, static_cast<int>(cl[i]) - static_cast<int>(src[i]));
            dst[i] = std::max(dst[i], static_cast<std::uint8_t>(raised));
        }
    }
    return response;
}

HairRemovalResult remove_hair(const RasterImage& img, const PreprocessConfig& cfg) {
    cfg.validate();
    const RasterImage gray = to_grayscale(img);
    const RasterImage response = hair_response(gray, cfg);

    BinaryMask raw(img.width(), img.height());
    auto resp = response.data();
    for (std::size_t i = 0; i < resp.size(); ++i) {
        if (resp[i] > cfg.hair_threshold) {
            raw.set_index(i, true);
        }
    }
    BinaryMask hair = dilate(raw, StructuringElement::disk(1));
    if (hair.count() == hair.pixel_count()) {
        throw DegenerateHairMask("hair detection flagged the whole image");
    }

    RasterImage out = img;
    if (hair.empty()) {
        return {std::move(out), std::move(hair)};
    }
    const int w = img.width();
    const int h = img.height();
    const int max_radius = std::max(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!hair.get(x, y)) {
                continue;
            }
            for (int r = cfg.inpaint_radius; r <= max_radius; ++r) {
                double sum[3] = {0.0, 0.0, 0.0};
                int n = 0;
                for (int dy = -r; dy <= r; ++dy) {
                    for (int dx = -r; dx <= r; ++dx) {
                        const int sx = x + dx;
                        const int sy = y + dy;
                        if (dx * dx + dy * dy > r * r || !img.contains(sx, sy) || hair.get(sx, sy)) {
                            continue;
                        }
                        for (int c = 0; c < img.channels(); ++c) {
                            sum[c] += img.at(sx, sy, c);
                        }
                        ++n;
                    }
                }
                if (n > 0) {
                    for (int c = 0; c < img.channels(); ++c) {
                        out.at(x, y, c) = static_cast<std::uint8_t>(std::lround(sum[c] / n));
                    }
                    break;
                }
            }
        }
    }
    return {std::move(out), std::move(hair)};
}

RasterImage preprocess(const RasterImage& img, const PreprocessConfig& cfg, BinaryMask* hair_mask) {
    cfg.validate();
    RasterImage cur = img;
    if (cfg.sharpen_enabled && cfg.sharpen_first) {
        cur = sharpen(cur);
    }
    if (cfg.hair_removal_enabled) {
        auto res = remove_hair(cur, cfg);
        cur = std::move(res.image);
        if (hair_mask != nullptr) {
            *hair_mask = std::move(res.hair_mask);
        }
    } else if (hair_mask != nullptr) {
        *hair_mask = BinaryMask(img.width(), img.height());
    }
    if (cfg.sharpen_enabled && !cfg.sharpen_first) {
        cur = sharpen(cur);
    }
    return cur;
}

}  // namespace lesion
