#include "hsmd/postproc.hpp"

#include <algorithm>
#include <string>

namespace hsmd::postproc {

void PostprocConfig::validate() const {
    if (spike_threshold < 1)
        throw InvalidArgument("post.spike_threshold must be >= 1");
    if (filter_size < 1 || filter_size % 2 == 0)
        throw InvalidArgument("post.filter_size must be odd and >= 1, got " + std::to_string(filter_size));
}

ForegroundMask spikes_to_mask(const snn::SpikeSumGrid &grid, const PostprocConfig &cfg) {
    cfg.validate();
    if (grid.sums.size() != static_cast<std::size_t>(grid.width) * grid.height)
        throw InvalidArgument("spikes_to_mask: grid length does not match its dimensions");
    ForegroundMask mask(grid.width, grid.height);
    for (std::size_t i = 0; i < grid.sums.size(); ++i)
        mask.set(i, grid.sums[i] >= cfg.spike_threshold);
    return mask;
}

GrayFrame average_filter(const GrayFrame &frame, int size) {
    if (size < 1 || size % 2 == 0)
        throw InvalidArgument("average_filter: size must be odd and >= 1, got " + std::to_string(size));
    if (size > std::min(frame.width(), frame.height()))
        throw InvalidArgument("average_filter: size " + std::to_string(size) +
                              " exceeds the smaller frame dimension");
    if (size == 1)
        return frame;

    const int w = frame.width(), h = frame.height(), r = size / 2;
    const unsigned area = static_cast<unsigned>(size) * static_cast<unsigned>(size);

    // Separable sums: horizontal pass into a row-sum buffer, then vertical.
    std::vector<unsigned> rows(frame.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            unsigned s = 0;
            for (int d = -r; d <= r; ++d)
                s += frame.at(std::clamp(x + d, 0, w - 1), y);
            rows[static_cast<std::size_t>(y) * w + x] = s;
        }

    GrayFrame out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            unsigned s = 0;
            for (int d = -r; d <= r; ++d)
                s += rows[static_cast<std::size_t>(std::clamp(y + d, 0, h - 1)) * w + x];
            out.at(x, y) = static_cast<std::uint8_t>((2 * s + area) / (2 * area));
        }
    return out;
}

ForegroundMask finalize_mask(const ForegroundMask &mask, const PostprocConfig &cfg) {
    cfg.validate();
    return binarize(average_filter(mask.as_gray(), cfg.filter_size), cfg.refire_threshold);
}

}  // namespace hsmd::postproc
