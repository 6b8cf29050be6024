#include "hsmd/snn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <thread>

namespace hsmd::snn {

void SnnParams::validate() const {
    const auto finite = [](float v) { return std::isfinite(v); };
    if (!(finite(r_m) && finite(tau_m) && finite(dt) && finite(p2c) && finite(s2c) &&
          finite(v_rest) && finite(v_thresh) && finite(v_reset)))
        throw InvalidArgument("snn: parameters must be finite");
    if (!(tau_m > 0.0f))
        throw InvalidArgument("snn.tau_m must be > 0");
    if (!(dt > 0.0f))
        throw InvalidArgument("snn.dt must be > 0");
    if (steps < 1)
        throw InvalidArgument("snn.steps must be >= 1");
    if (!(v_thresh > v_rest))
        throw InvalidArgument("snn.v_thresh must exceed snn.v_rest");
    if (!(v_reset < v_thresh))
        throw InvalidArgument("snn.v_reset must be below snn.v_thresh");
    if (!(p2c > 0.0f))
        throw InvalidArgument("snn.p2c must be > 0");
    if (!(s2c >= 0.0f))
        throw InvalidArgument("snn.s2c must be >= 0");
}

Kernel parse_kernel(std::string_view name) {
    if (name == "v1")
        return Kernel::v1;
    if (name == "v2")
        return Kernel::v2;
    throw InvalidArgument("unknown kernel '" + std::string(name) + "' (expected v1 or v2)");
}

std::string_view to_string(Kernel k) noexcept { return k == Kernel::v1 ? "v1" : "v2"; }

SnnState::SnnState(int width, int height, const SnnParams &params) : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw InvalidArgument("snn: state dimensions must be positive");
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    for (int l = 0; l < kNumLayers; ++l) {
        v_m_[l].assign(n, params.v_rest);
        spike_sum_[l].assign(n, 0);
    }
}

void SnnState::reset(float v_rest) {
    for (auto &v : v_m_)
        std::fill(v.begin(), v.end(), v_rest);
    clear_spike_sums();
}

void SnnState::clear_spike_sums() {
    for (auto &s : spike_sum_)
        std::fill(s.begin(), s.end(), 0u);
}

SnnState reset_state(SnnState state, const SnnParams &params) {
    state.reset(params.v_rest);
    return state;
}

namespace {

struct StateView {
    std::array<float *, kNumLayers> v;
    std::array<std::uint32_t *, kNumLayers> sum;
};

// One neuron column (layers 1..3 sharing index i) over a frame's integration window.
inline void simulate_column(float pixel, const SnnParams &p, const StateView &st, std::size_t i) {
    float v1 = st.v[0][i], v2 = st.v[1][i], v3 = st.v[2][i];
    std::uint32_t s1 = 0, s2 = 0, s3 = 0;
    const float i_s = pixel * p.p2c;
    for (int t = 0; t < p.steps; ++t) {
        const auto l1 = lif_step(v1, i_s, p);
        v1 = l1.v;
        s1 += l1.spiked;

        const float i_l2 = static_cast<float>(s1) * p.s2c;
        const auto l2 = lif_step(v2, i_l2, p);
        v2 = l2.v;
        s2 += l2.spiked;

        const float i_l3 = static_cast<float>(s2) * p.s2c;
        const auto l3 = lif_step(v3, i_l2 + i_l3, p);
        v3 = l3.v;
        s3 += l3.spiked;
    }
    st.v[0][i] = v1;
    st.v[1][i] = v2;
    st.v[2][i] = v3;
    st.sum[0][i] = s1;
    st.sum[1][i] = s2;
    st.sum[2][i] = s3;
}

void run_range(Kernel kernel, std::span<const float> values, const SnnParams &p, const StateView &st,
               std::size_t begin, std::size_t end) {
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        std::fill(st.sum[l] + begin, st.sum[l] + end, 0u);
        if (!p.persist_vm)
            std::fill(st.v[l] + begin, st.v[l] + end, p.v_rest);
    }
    if (kernel == Kernel::v1) {
        for (std::size_t i = begin; i < end; ++i)
            simulate_column(values[i], p, st, i);
    } else {
        for (std::size_t i = begin; i < end; ++i)
            if (values[i] > 0.0f)
                simulate_column(values[i], p, st, i);
    }
}

void check_inputs(const KernelBuffer &buffer, const SnnParams &params, const SnnState &state) {
    params.validate();
    if (buffer.values.empty() || buffer.width <= 0 || buffer.height <= 0)
        throw InvalidArgument("snn: kernel buffer is empty");
    if (buffer.values.size() != static_cast<std::size_t>(buffer.width) * buffer.height)
        throw InvalidArgument("snn: buffer length does not match its dimensions");
    if (buffer.width != state.width() || buffer.height != state.height())
        throw InvalidArgument("snn: buffer is " + std::to_string(buffer.width) + "x" +
                              std::to_string(buffer.height) + " but the state holds " +
                              std::to_string(state.width()) + "x" + std::to_string(state.height()) +
                              " neurons per layer");
}

StateView view(SnnState &state) {
    StateView st{};
    for (int l = 0; l < kNumLayers; ++l) {
        st.v[l] = state.v_m(l).data();
        st.sum[l] = state.spike_sum(l).data();
    }
    return st;
}

SpikeSumGrid layer3_grid(const SnnState &state) {
    const auto s = state.spike_sum(kNumLayers - 1);
    return {state.width(), state.height(), {s.begin(), s.end()}};
}

}  // namespace

SpikeSumGrid snn_frame_v1(const KernelBuffer &buffer, const SnnParams &params, SnnState &state) {
    return run_parallel(Kernel::v1, buffer, params, state, 1);
}

SpikeSumGrid snn_frame_v2(const KernelBuffer &buffer, const SnnParams &params, SnnState &state) {
    return run_parallel(Kernel::v2, buffer, params, state, 1);
}

std::size_t active_columns(Kernel kernel, const KernelBuffer &buffer) noexcept {
    if (kernel == Kernel::v1)
        return buffer.values.size();
    return static_cast<std::size_t>(
        std::count_if(buffer.values.begin(), buffer.values.end(), [](float v) { return v > 0.0f; }));
}

SpikeSumGrid run_parallel(Kernel kernel, const KernelBuffer &buffer, const SnnParams &params,
                          SnnState &state, int lanes) {
    if (lanes < 1 || !std::has_single_bit(static_cast<unsigned>(lanes)))
        throw InvalidArgument("snn.lanes = " + std::to_string(lanes) +
                              " rejected: the unroll factor must be a power of two (1, 2, 4, 8, 16, ...)");
    check_inputs(buffer, params, state);

    const StateView st = view(state);
    const std::size_t n = buffer.values.size();
    const std::span<const float> values = buffer.values;
    if (lanes == 1) {
        run_range(kernel, values, params, st, 0, n);
    } else {
        const std::size_t chunk = (n + lanes - 1) / static_cast<std::size_t>(lanes);
        std::vector<std::jthread> workers;
        workers.reserve(static_cast<std::size_t>(lanes));
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            const std::size_t end = std::min(n, begin + chunk);
            workers.emplace_back([=, &params] { run_range(kernel, values, params, st, begin, end); });
        }
    }  // jthreads join here
    return layer3_grid(state);
}

}  // namespace hsmd::snn
