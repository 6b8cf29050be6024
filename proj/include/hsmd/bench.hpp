#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsmd/core.hpp"

namespace hsmd::bench {

// Ground-truth label conventions of the change-detection benchmark.
namespace gt_label {
inline constexpr std::uint8_t kStatic = 0;
inline constexpr std::uint8_t kShadow = 50;
inline constexpr std::uint8_t kOutsideRoi = 85;
inline constexpr std::uint8_t kUnknown = 170;
inline constexpr std::uint8_t kMotion = 255;
}  // namespace gt_label

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }

    ConfusionCounts &operator+=(const ConfusionCounts &o) noexcept {
        tp += o.tp;
        tn += o.tn;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts &b) noexcept { return a += b; }
    friend bool operator==(const ConfusionCounts &, const ConfusionCounts &) = default;
};

/// Adds the counts of one frame to `acc`. Pixels whose ground truth is outside
/// the ROI or unknown are skipped, as are pixels where `spatial_roi` is zero.
ConfusionCounts accumulate_confusion(const ForegroundMask &result, const GrayFrame &gt,
                                     ConfusionCounts acc = {}, const GrayFrame *spatial_roi = nullptr);

/// Metrics in report column order.
enum class Metric : int { Re, Sp, FPR, FNR, WCR, CCR, F1, Pr };
inline constexpr int kNumMetrics = 8;
inline constexpr std::array<Metric, kNumMetrics> kAllMetrics = {
    Metric::Re, Metric::Sp, Metric::FPR, Metric::FNR, Metric::WCR, Metric::CCR, Metric::F1, Metric::Pr};

std::string_view metric_name(Metric m) noexcept;
/// True when a larger value ranks better.
bool higher_is_better(Metric m) noexcept;

struct MetricSet {
    double re = 0, sp = 0, fpr = 0, fnr = 0, wcr = 0, ccr = 0, pr = 0, f1 = 0;

    double get(Metric m) const noexcept;
    double &get(Metric m) noexcept;

    friend bool operator==(const MetricSet &, const MetricSet &) = default;
};

/// A ratio whose denominator is zero evaluates to 0, except that a sample with
/// no positives and no false alarms gets re = pr = f1 = 1.
MetricSet compute_metrics(const ConfusionCounts &c) noexcept;

/// Element-wise mean; throws on an empty input.
MetricSet mean_metrics(std::span<const MetricSet> sets);

struct MetricRow {
    std::string method;
    std::string category;
    MetricSet metrics;
};

/// Per-method rank summary. Metric ranks are competition ranks (ties share the
/// lowest rank) computed within each category.
class RankTable {
public:
    const std::vector<std::string> &methods() const noexcept { return methods_; }
    const std::vector<std::string> &categories() const noexcept { return categories_; }

    int rank(std::string_view method, std::string_view category, Metric m) const;
    /// Mean of the eight metric ranks of `method` in `category`.
    double r(std::string_view method, std::string_view category) const;
    /// Mean of r over all categories.
    double rc(std::string_view method) const;
    /// Mean over categories of the rank for metric `m`.
    double mean_rank(std::string_view method, Metric m) const;

private:
    friend RankTable rank_methods(std::span<const MetricRow> rows);

    std::size_t method_index(std::string_view method) const;
    std::size_t category_index(std::string_view category) const;

    std::vector<std::string> methods_;
    std::vector<std::string> categories_;
    // ranks_[method][category][metric]
    std::vector<std::vector<std::array<int, kNumMetrics>>> ranks_;
};

/// Throws if some (method, category) pair is missing or duplicated.
RankTable rank_methods(std::span<const MetricRow> rows);

struct FrameTiming {
    double snn_seconds = 0;
    double total_seconds = 0;
};

struct TimingStats {
    std::size_t frames = 0;
    double snn_seconds_mean = 0;
    double fps = 0;
};

TimingStats compute_stats(std::span<const FrameTiming> timings);

struct TimingRow {
    std::string name;  ///< "category/sequence"
    std::size_t num_images = 0;
    int height = 0;
    int width = 0;
    TimingStats stats;
};

// Report files.
inline constexpr std::string_view kTimingHeader = "category/sequence,num_images,height,width,snn_seconds,fps";
inline constexpr std::string_view kMetricsHeader = "method,category,Re,Sp,FPR,FNR,WCR,CCR,F1,Pr";
inline constexpr std::string_view kRanksHeader =
    "method,RC,Re_rank,Sp_rank,FPR_rank,FNR_rank,WCR_rank,CCR_rank,F1_rank,Pr_rank";

void write_timing_csv(std::ostream &os, std::span<const TimingRow> rows);
void write_metrics_csv(std::ostream &os, std::span<const MetricRow> rows);
void write_ranks_csv(std::ostream &os, const RankTable &table);

/// Parses a file produced by write_metrics_csv.
std::vector<MetricRow> read_metrics_csv(std::istream &is);

}  // namespace hsmd::bench
