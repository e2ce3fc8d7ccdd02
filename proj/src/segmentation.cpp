#include "lesion/segmentation.hpp"

#include <stdexcept>
#include <string>

#include "lesion/error.hpp"
#include "lesion/morphology.hpp"

namespace lesion {

const char* to_string(MaskMethod m) {
    switch (m) {
        case MaskMethod::Watershed:
            return "watershed";
        case MaskMethod::Snake:
            return "snake";
        case MaskMethod::Merged:
            return "merged";
    }
    return "merged";
}

MaskMethod parse_mask_method(const std::string& s) {
    if (s == "watershed") {
        return MaskMethod::Watershed;
    }
    if (s == "snake") {
        return MaskMethod::Snake;
    }
    if (s == "merged") {
        return MaskMethod::Merged;
    }
    throw std::invalid_argument("unknown mask method '" + s + "'");
}

BinaryMask merge_core(const BinaryMask& watershed, const BinaryMask& snake) { return mask_and(snake, watershed); }

BinaryMask merge_masks(const BinaryMask& watershed, const BinaryMask& snake) {
    const BinaryMask core = merge_core(watershed, snake);
    if (core.empty()) {
        throw SegmentationDisagreement("watershed and active contour masks do not overlap");
    }
    const BinaryMask grown = dilate(core, StructuringElement::disk(1));
    return fill_holes(largest_component(remove_spurs_to_fixed_point(grown), 8));
}

const BinaryMask& SegmentationResult::by_method(MaskMethod m) const {
    switch (m) {
        case MaskMethod::Watershed:
            return watershed;
        case MaskMethod::Snake:
            return snake;
        case MaskMethod::Merged:
            return merged;
    }
    return merged;
}

SegmentationResult segment_lesion(const RasterImage& img, const SegmentationConfig& cfg) {
    const RasterImage gray = to_grayscale(img);
    BinaryMask ws = watershed_segment(gray, cfg.watershed);
    const SnakeContour init = initial_contour(gray, cfg.snake.sigma, cfg.snake.point_spacing);
    SnakeResult sn = snake_evolve(gray, init, cfg.snake);
    BinaryMask snake_mask = fill_holes(sn.mask);
    BinaryMask merged = merge_masks(ws, snake_mask);
    return {std::move(ws), std::move(snake_mask), std::move(merged)};
}

}  // namespace lesion
