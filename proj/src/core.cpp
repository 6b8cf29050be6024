#include "hsmd/core.hpp"

#include <algorithm>

namespace hsmd {

ForegroundMask::ForegroundMask(int width, int height, std::uint8_t fill)
    : raster_(width, height, fill == kBackground ? kBackground : kForeground) {}

ForegroundMask::ForegroundMask(int width, int height, std::vector<std::uint8_t> labels)
    : raster_(width, height, std::move(labels)) {
    for (auto v : raster_.pixels())
        if (v != kBackground && v != kForeground)
            throw InvalidArgument("mask: label " + std::to_string(v) + " is not 0 or 255");
}

std::size_t ForegroundMask::count_foreground() const noexcept {
    const auto l = labels();
    return static_cast<std::size_t>(std::count(l.begin(), l.end(), kForeground));
}

GrayFrame to_gray(const ColorFrame &frame) {
    GrayFrame out(frame.width(), frame.height());
    const auto src = frame.pixels();
    auto dst = out.pixels();
    // Integer weights in thousandths keep the rounding exact.
    std::transform(src.begin(), src.end(), dst.begin(), [](const Rgb &p) {
        const unsigned luma = 299u * p.r + 587u * p.g + 114u * p.b;
        return static_cast<std::uint8_t>(std::min(255u, (luma + 500u) / 1000u));
    });
    return out;
}

ForegroundMask binarize(const GrayFrame &frame, std::uint8_t threshold) {
    std::vector<std::uint8_t> labels(frame.size());
    const auto src = frame.pixels();
    std::transform(src.begin(), src.end(), labels.begin(),
                   [threshold](std::uint8_t v) { return v >= threshold ? kForeground : kBackground; });
    return ForegroundMask(frame.width(), frame.height(), std::move(labels));
}

KernelBuffer mask_to_buffer(const ForegroundMask &mask) {
    KernelBuffer buf{mask.width(), mask.height(), {}};
    const auto l = mask.labels();
    buf.values.assign(l.begin(), l.end());
    return buf;
}

ForegroundMask buffer_to_mask(const KernelBuffer &buffer, float threshold) {
    if (buffer.values.size() != static_cast<std::size_t>(buffer.width) * buffer.height)
        throw InvalidArgument("buffer_to_mask: length does not match dimensions");
    std::vector<std::uint8_t> labels(buffer.values.size());
    std::transform(buffer.values.begin(), buffer.values.end(), labels.begin(),
                   [threshold](float v) { return v >= threshold ? kForeground : kBackground; });
    return ForegroundMask(buffer.width, buffer.height, std::move(labels));
}

}  // namespace hsmd
