#include "hsmd/dbs.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace hsmd::dbs {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// 8-neighbourhood offsets, excluding the centre.
constexpr int kDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

std::size_t random_neighbor(PixelRng &rng, int x, int y, int w, int h) {
    const auto k = rng.below(8);
    const int nx = std::clamp(x + kDx[k], 0, w - 1);
    const int ny = std::clamp(y + kDy[k], 0, h - 1);
    return static_cast<std::size_t>(ny) * static_cast<std::size_t>(w) + static_cast<std::size_t>(nx);
}

}  // namespace

PixelRng::PixelRng(std::uint64_t seed, std::uint64_t frame, std::uint64_t pixel) noexcept
    : state_(mix64(mix64(seed ^ kGolden) + frame * kGolden) ^ mix64(pixel + 1)) {}

std::uint64_t PixelRng::next() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

std::uint32_t PixelRng::below(std::uint32_t bound) noexcept {
    // Lemire's multiply-shift; the residual bias is irrelevant for bounds this small.
    return static_cast<std::uint32_t>(((next() >> 32) * bound) >> 32);
}

double PixelRng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

void DbsConfig::validate() const {
    if (samples_per_pixel < 1)
        throw InvalidArgument("dbs.samples must be >= 1");
    if (min_matches < 0 || min_matches > samples_per_pixel)
        throw InvalidArgument("dbs.min_matches must lie in [0, dbs.samples]");
    if (match_radius < 0)
        throw InvalidArgument("dbs.radius must be non-negative");
    if (!(replace_rate >= 0.0 && replace_rate <= 1.0))
        throw InvalidArgument("dbs.replace_rate must lie in [0, 1]");
    if (!(neighbor_rate >= 0.0 && neighbor_rate <= 1.0))
        throw InvalidArgument("dbs.neighbor_rate must lie in [0, 1]");
}

DbsModel::DbsModel(const GrayFrame &first, const DbsConfig &cfg)
    : cfg_(cfg), width_(first.width()), height_(first.height()) {
    cfg_.validate();
    if (first.empty())
        throw InvalidArgument("dbs: initial frame is empty");
    const auto n = first.size();
    const auto k = static_cast<std::size_t>(cfg_.samples_per_pixel);
    samples_.resize(n * k);
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
            PixelRng rng(cfg_.seed, 0, i);
            auto *s = samples_.data() + offset(i);
            s[0] = first[i];
            for (std::size_t j = 1; j < k; ++j)
                s[j] = first[random_neighbor(rng, x, y, width_, height_)];
        }
    }
}

std::span<const std::uint8_t> DbsModel::samples(int x, int y) const {
    const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
    return {samples_.data() + offset(i), static_cast<std::size_t>(cfg_.samples_per_pixel)};
}

ForegroundMask DbsModel::apply(const GrayFrame &frame) {
    if (!frame.same_shape(width_, height_))
        throw InvalidArgument("dbs: frame is " + std::to_string(frame.width()) + "x" +
                              std::to_string(frame.height()) + " but the model is " +
                              std::to_string(width_) + "x" + std::to_string(height_));
    ++frame_index_;
    const auto n = frame.size();
    const auto k = static_cast<std::size_t>(cfg_.samples_per_pixel);

    // Phase 1: labels from the model as it stood before this frame.
    ForegroundMask mask(width_, height_);
    for (std::size_t i = 0; i < n; ++i) {
        const int v = frame[i];
        const auto *s = samples_.data() + offset(i);
        int matches = 0;
        for (std::size_t j = 0; j < k && matches < cfg_.min_matches; ++j)
            if (std::abs(v - static_cast<int>(s[j])) <= cfg_.match_radius)
                ++matches;
        mask.set(i, matches < cfg_.min_matches);
    }

    // Phase 2: conservative updates in row-major order.
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * width_ + x;
            if (mask.is_foreground(i))
                continue;
            PixelRng rng(cfg_.seed, frame_index_, i);
            if (rng.uniform() < cfg_.replace_rate)
                samples_[offset(i) + rng.below(static_cast<std::uint32_t>(k))] = frame[i];
            if (rng.uniform() < cfg_.neighbor_rate) {
                const auto q = random_neighbor(rng, x, y, width_, height_);
                samples_[offset(q) + rng.below(static_cast<std::uint32_t>(k))] = frame[i];
            }
        }
    }
    return mask;
}

}  // namespace hsmd::dbs
