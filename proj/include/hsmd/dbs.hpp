#pragma once

#include <cstdint>
#include <vector>

#include "hsmd/core.hpp"

namespace hsmd::dbs {

struct DbsConfig {
    int samples_per_pixel = 20;
    int match_radius = 20;
    int min_matches = 2;
    double replace_rate = 1.0 / 16.0;
    double neighbor_rate = 1.0 / 16.0;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument when an invariant does not hold.
    void validate() const;

    friend bool operator==(const DbsConfig &, const DbsConfig &) = default;
};

/// Sample-consensus background model (ViBe-like). A pixel is background when
/// at least min_matches of its stored samples lie within match_radius of it.
///
/// The model evolves as a pure function of (first frame, later frames, seed):
/// every random draw comes from a stream keyed on (seed, frame index, pixel).
class DbsModel {
public:
    DbsModel(const GrayFrame &first, const DbsConfig &cfg);

    /// Classifies `frame` and updates the model conservatively: only background
    /// pixels write samples, into their own set or a random neighbour's.
    ForegroundMask apply(const GrayFrame &frame);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    const DbsConfig &config() const noexcept { return cfg_; }
    std::uint64_t frames_seen() const noexcept { return frame_index_; }

    /// Samples of pixel (x, y), samples_per_pixel entries.
    std::span<const std::uint8_t> samples(int x, int y) const;

    friend bool operator==(const DbsModel &, const DbsModel &) = default;

private:
    std::size_t offset(std::size_t pixel) const noexcept {
        return pixel * static_cast<std::size_t>(cfg_.samples_per_pixel);
    }

    DbsConfig cfg_;
    int width_;
    int height_;
    std::vector<std::uint8_t> samples_;
    std::uint64_t frame_index_ = 0;
};

inline DbsModel dbs_init(const GrayFrame &first, const DbsConfig &cfg) { return DbsModel(first, cfg); }

/// Functional form: returns the mask and leaves `model` advanced by one frame.
inline ForegroundMask dbs_apply(DbsModel &model, const GrayFrame &frame) { return model.apply(frame); }

/// Counter-based generator: one independent stream per (seed, frame, pixel).
class PixelRng {
public:
    PixelRng(std::uint64_t seed, std::uint64_t frame, std::uint64_t pixel) noexcept;

    std::uint64_t next() noexcept;
    /// Uniform in [0, bound).
    std::uint32_t below(std::uint32_t bound) noexcept;
    /// Uniform in [0, 1).
    double uniform() noexcept;

private:
    std::uint64_t state_;
};

}  // namespace hsmd::dbs
