#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsmd/bench.hpp"
#include "hsmd/config.hpp"

namespace hsmd {

struct SequenceSpec {
    std::string category;
    std::string sequence;
    std::filesystem::path input_dir;
    std::optional<std::filesystem::path> gt_dir;
    /// Inclusive frame-number window used for evaluation.
    std::optional<std::pair<int, int>> temporal_roi;
    std::optional<std::filesystem::path> spatial_roi;

    std::string name() const { return category + "/" + sequence; }
};

/// Finds every `<category>/<sequence>/input` directory below `root`, sorted by
/// name. Malformed temporalROI.txt files produce a warning on stderr and no ROI.
std::vector<SequenceSpec> load_dataset(const std::filesystem::path &root);

struct NumberedFile {
    int number;
    std::filesystem::path path;
};

/// Files named `<prefix><digits>.<ext>` in `dir`, sorted by number.
std::vector<NumberedFile> list_numbered(const std::filesystem::path &dir, std::string_view prefix,
                                        std::initializer_list<std::string_view> extensions);

struct SequenceResult {
    std::size_t frames = 0;
    int width = 0;
    int height = 0;
    bench::TimingStats timing;
    std::optional<bench::ConfusionCounts> confusion;
};

/// Raised when a sequence cannot be processed to completion.
class SequenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs every frame through gray conversion, background subtraction, the SNN
/// kernel and post-processing, writing `bin%06d.png` masks to `mask_dir`.
SequenceResult process_sequence(const SequenceSpec &spec, const RunConfig &cfg,
                                const std::filesystem::path &mask_dir);

/// Processes every sequence under `root` and writes reports to cfg.out_dir:
/// timing.csv always, metrics.csv and ranks.csv when cfg.bench is set.
/// Returns 0 when every sequence completed, 1 otherwise.
int run(const RunConfig &cfg, const std::filesystem::path &root);

/// Ranks methods from several metrics.csv files (or directories holding one).
/// An entry of the form `name=path` renames the method read from that file.
int rank_results(const std::vector<std::string> &inputs, const std::filesystem::path &out_csv);

}  // namespace hsmd
