#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsmd {

/// Raised when a raster or buffer violates its shape or value invariants.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb &, const Rgb &) = default;
};

/// Row-major raster with the origin at the top-left corner.
template <typename Pixel>
class Raster {
public:
    Raster() = default;

    Raster(int width, int height, Pixel fill = Pixel{}) : width_(width), height_(height) {
        check_dims(width, height);
        pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Raster(int width, int height, std::vector<Pixel> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        check_dims(width, height);
        if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw InvalidArgument("raster: pixel count " + std::to_string(pixels_.size()) +
                                  " does not match " + std::to_string(width) + "x" +
                                  std::to_string(height));
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    bool empty() const noexcept { return pixels_.empty(); }

    const Pixel &at(int x, int y) const { return pixels_[index(x, y)]; }
    Pixel &at(int x, int y) { return pixels_[index(x, y)]; }
    const Pixel &operator[](std::size_t i) const { return pixels_[i]; }
    Pixel &operator[](std::size_t i) { return pixels_[i]; }

    std::span<const Pixel> pixels() const noexcept { return pixels_; }
    std::span<Pixel> pixels() noexcept { return pixels_; }

    bool same_shape(int w, int h) const noexcept { return width_ == w && height_ == h; }
    template <typename Other>
    bool same_shape(const Raster<Other> &o) const noexcept {
        return same_shape(o.width(), o.height());
    }

    friend bool operator==(const Raster &, const Raster &) = default;

private:
    static void check_dims(int w, int h) {
        if (w <= 0 || h <= 0)
            throw InvalidArgument("raster: dimensions must be positive, got " + std::to_string(w) +
                                  "x" + std::to_string(h));
    }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Pixel> pixels_;
};

using GrayFrame = Raster<std::uint8_t>;
using ColorFrame = Raster<Rgb>;

inline constexpr std::uint8_t kBackground = 0;
inline constexpr std::uint8_t kForeground = 255;

/// Binary raster; labels are only ever kBackground or kForeground.
class ForegroundMask {
public:
    ForegroundMask() = default;
    ForegroundMask(int width, int height, std::uint8_t fill = kBackground);
    /// Throws if any label is outside {0, 255}.
    ForegroundMask(int width, int height, std::vector<std::uint8_t> labels);

    int width() const noexcept { return raster_.width(); }
    int height() const noexcept { return raster_.height(); }
    std::size_t size() const noexcept { return raster_.size(); }

    std::uint8_t operator[](std::size_t i) const { return raster_[i]; }
    std::uint8_t at(int x, int y) const { return raster_.at(x, y); }
    bool is_foreground(std::size_t i) const { return raster_[i] == kForeground; }
    void set(std::size_t i, bool foreground) { raster_[i] = foreground ? kForeground : kBackground; }

    std::span<const std::uint8_t> labels() const noexcept { return raster_.pixels(); }
    std::size_t count_foreground() const noexcept;

    /// The mask viewed as an intensity image (0/255).
    const GrayFrame &as_gray() const noexcept { return raster_; }

    friend bool operator==(const ForegroundMask &, const ForegroundMask &) = default;

private:
    GrayFrame raster_;
};

/// Flat single-precision payload handed to the SNN kernel, one value per
/// layer-1 neuron in row-major pixel order.
struct KernelBuffer {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    std::size_t length() const noexcept { return values.size(); }
};

/// BT.601 luma with round-half-up.
GrayFrame to_gray(const ColorFrame &frame);

/// 255 where intensity >= threshold, else 0.
ForegroundMask binarize(const GrayFrame &frame, std::uint8_t threshold);

KernelBuffer mask_to_buffer(const ForegroundMask &mask);

/// Inverse of mask_to_buffer: value >= threshold becomes foreground.
ForegroundMask buffer_to_mask(const KernelBuffer &buffer, float threshold = 1.0f);

}  // namespace hsmd
