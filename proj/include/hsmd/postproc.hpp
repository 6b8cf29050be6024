#pragma once

#include <cstdint>

#include "hsmd/core.hpp"
#include "hsmd/snn.hpp"

namespace hsmd::postproc {

struct PostprocConfig {
    std::uint32_t spike_threshold = 1;
    int filter_size = 3;
    std::uint8_t refire_threshold = 128;

    void validate() const;

    friend bool operator==(const PostprocConfig &, const PostprocConfig &) = default;
};

/// Foreground where the layer-3 spike sum reaches spike_threshold.
ForegroundMask spikes_to_mask(const snn::SpikeSumGrid &grid, const PostprocConfig &cfg);

/// Box mean over a size x size window with replicate borders, rounded half up.
GrayFrame average_filter(const GrayFrame &frame, int size);

/// average_filter followed by binarize at refire_threshold; drops isolated speckle.
ForegroundMask finalize_mask(const ForegroundMask &mask, const PostprocConfig &cfg);

}  // namespace hsmd::postproc
