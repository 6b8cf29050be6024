#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hsmd/core.hpp"

namespace hsmd::snn {

inline constexpr int kNumLayers = 3;

/// Neuron and conversion constants. All kernel arithmetic is single precision.
struct SnnParams {
    float r_m = 1.0f;      ///< membrane resistance
    float tau_m = 10.0f;   ///< membrane time constant [ms]
    float dt = 1.0f;       ///< integration step [ms]
    int steps = 10;        ///< integration steps per frame
    float p2c = 0.02f;     ///< current per intensity unit
    float s2c = 2.0f;      ///< current per accumulated spike
    float v_rest = 0.0f;
    float v_thresh = 1.0f;
    float v_reset = 0.0f;
    /// Keep membrane potentials across frames (spike sums are always cleared).
    bool persist_vm = false;

    void validate() const;

    friend bool operator==(const SnnParams &, const SnnParams &) = default;
};

enum class Kernel { v1, v2 };

Kernel parse_kernel(std::string_view name);
std::string_view to_string(Kernel k) noexcept;

/// Per-pixel, per-layer membrane potentials and spike sums
/// (3 x width x height neurons in total).
class SnnState {
public:
    SnnState(int width, int height, const SnnParams &params);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t neurons_per_layer() const noexcept { return v_m_[0].size(); }
    std::size_t total_neurons() const noexcept { return kNumLayers * neurons_per_layer(); }

    std::span<float> v_m(int layer) { return v_m_.at(layer); }
    std::span<const float> v_m(int layer) const { return v_m_.at(layer); }
    std::span<std::uint32_t> spike_sum(int layer) { return spike_sum_.at(layer); }
    std::span<const std::uint32_t> spike_sum(int layer) const { return spike_sum_.at(layer); }

    /// All potentials to `v_rest`, all sums to zero.
    void reset(float v_rest);
    void clear_spike_sums();

    friend bool operator==(const SnnState &, const SnnState &) = default;

private:
    int width_;
    int height_;
    std::array<std::vector<float>, kNumLayers> v_m_;
    std::array<std::vector<std::uint32_t>, kNumLayers> spike_sum_;
};

/// Layer-3 spike counts, row-major.
struct SpikeSumGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint32_t> sums;

    friend bool operator==(const SpikeSumGrid &, const SpikeSumGrid &) = default;
};

struct LifResult {
    float v;
    bool spiked;
};

/// One Euler step of a leaky integrate-and-fire neuron:
/// v' = v + (dt/tau_m)(-(v - v_rest) + r_m * i_in), spike and reset at v' >= v_thresh.
inline LifResult lif_step(float v, float i_in, const SnnParams &p) noexcept {
    const float candidate = v + (p.dt / p.tau_m) * (-(v - p.v_rest) + p.r_m * i_in);
    if (candidate >= p.v_thresh)
        return {p.v_reset, true};
    return {candidate, false};
}

SnnState reset_state(SnnState state, const SnnParams &params);

/// Full kernel: every neuron column is simulated.
SpikeSumGrid snn_frame_v1(const KernelBuffer &buffer, const SnnParams &params, SnnState &state);

/// Skips neuron columns whose input value is <= 0.
SpikeSumGrid snn_frame_v2(const KernelBuffer &buffer, const SnnParams &params, SnnState &state);

/// Number of neuron columns the given kernel would simulate for `buffer`.
std::size_t active_columns(Kernel kernel, const KernelBuffer &buffer) noexcept;

/// Runs `kernel` with neuron indices split into `lanes` contiguous chunks, one
/// worker each. `lanes` must be a power of two; the result does not depend on it.
SpikeSumGrid run_parallel(Kernel kernel, const KernelBuffer &buffer, const SnnParams &params,
                          SnnState &state, int lanes = 16);

}  // namespace hsmd::snn
