#include "hsmd/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace hsmd::bench {

ConfusionCounts accumulate_confusion(const ForegroundMask &result, const GrayFrame &gt, ConfusionCounts acc,
                                     const GrayFrame *spatial_roi) {
    if (result.width() != gt.width() || result.height() != gt.height())
        throw InvalidArgument("accumulate_confusion: result is " + std::to_string(result.width()) + "x" +
                              std::to_string(result.height()) + ", ground truth is " +
                              std::to_string(gt.width()) + "x" + std::to_string(gt.height()));
    if (spatial_roi && !spatial_roi->same_shape(gt))
        throw InvalidArgument("accumulate_confusion: spatial ROI does not match the frame size");

    for (std::size_t i = 0; i < gt.size(); ++i) {
        const auto label = gt[i];
        if (label == gt_label::kOutsideRoi || label == gt_label::kUnknown)
            continue;
        if (spatial_roi && (*spatial_roi)[i] == 0)
            continue;
        const bool motion = label == gt_label::kMotion;
        const bool detected = result.is_foreground(i);
        if (motion)
            ++(detected ? acc.tp : acc.fn);
        else
            ++(detected ? acc.fp : acc.tn);
    }
    return acc;
}

std::string_view metric_name(Metric m) noexcept {
    switch (m) {
    case Metric::Re: return "Re";
    case Metric::Sp: return "Sp";
    case Metric::FPR: return "FPR";
    case Metric::FNR: return "FNR";
    case Metric::WCR: return "WCR";
    case Metric::CCR: return "CCR";
    case Metric::F1: return "F1";
    case Metric::Pr: return "Pr";
    }
    return "?";
}

bool higher_is_better(Metric m) noexcept {
    switch (m) {
    case Metric::FPR:
    case Metric::FNR:
    case Metric::WCR: return false;
    default: return true;
    }
}

double MetricSet::get(Metric m) const noexcept { return const_cast<MetricSet *>(this)->get(m); }

double &MetricSet::get(Metric m) noexcept {
    switch (m) {
    case Metric::Re: return re;
    case Metric::Sp: return sp;
    case Metric::FPR: return fpr;
    case Metric::FNR: return fnr;
    case Metric::WCR: return wcr;
    case Metric::CCR: return ccr;
    case Metric::F1: return f1;
    case Metric::Pr: break;
    }
    return pr;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) noexcept {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricSet compute_metrics(const ConfusionCounts &c) noexcept {
    MetricSet m;
    m.sp = ratio(c.tn, c.tn + c.fp);
    m.fpr = ratio(c.fp, c.fp + c.tn);
    m.fnr = ratio(c.fn, c.fn + c.tp);
    m.wcr = ratio(c.fn + c.fp, c.total());
    m.ccr = ratio(c.tp + c.tn, c.total());
    if (c.tp + c.fn == 0 && c.fp == 0) {
        m.re = m.pr = m.f1 = 1.0;
        return m;
    }
    m.re = ratio(c.tp, c.tp + c.fn);
    m.pr = ratio(c.tp, c.tp + c.fp);
    m.f1 = (m.pr + m.re) > 0 ? 2.0 * m.pr * m.re / (m.pr + m.re) : 0.0;
    return m;
}

MetricSet mean_metrics(std::span<const MetricSet> sets) {
    if (sets.empty())
        throw InvalidArgument("mean_metrics: no metric sets");
    MetricSet out;
    for (const Metric m : kAllMetrics) {
        double s = 0;
        for (const auto &set : sets)
            s += set.get(m);
        out.get(m) = s / static_cast<double>(sets.size());
    }
    return out;
}

std::size_t RankTable::method_index(std::string_view method) const {
    const auto it = std::find(methods_.begin(), methods_.end(), method);
    if (it == methods_.end())
        throw InvalidArgument("rank table: unknown method '" + std::string(method) + "'");
    return static_cast<std::size_t>(it - methods_.begin());
}

std::size_t RankTable::category_index(std::string_view category) const {
    const auto it = std::find(categories_.begin(), categories_.end(), category);
    if (it == categories_.end())
        throw InvalidArgument("rank table: unknown category '" + std::string(category) + "'");
    return static_cast<std::size_t>(it - categories_.begin());
}

int RankTable::rank(std::string_view method, std::string_view category, Metric m) const {
    return ranks_[method_index(method)][category_index(category)][static_cast<int>(m)];
}

double RankTable::r(std::string_view method, std::string_view category) const {
    const auto &ranks = ranks_[method_index(method)][category_index(category)];
    return std::accumulate(ranks.begin(), ranks.end(), 0.0) / kNumMetrics;
}

double RankTable::rc(std::string_view method) const {
    double s = 0;
    for (const auto &c : categories_)
        s += r(method, c);
    return s / static_cast<double>(categories_.size());
}

double RankTable::mean_rank(std::string_view method, Metric m) const {
    const auto &per_cat = ranks_[method_index(method)];
    double s = 0;
    for (const auto &ranks : per_cat)
        s += ranks[static_cast<int>(m)];
    return s / static_cast<double>(per_cat.size());
}

RankTable rank_methods(std::span<const MetricRow> rows) {
    if (rows.empty())
        throw InvalidArgument("rank_methods: no rows");
    RankTable t;
    for (const auto &row : rows) {
        if (std::find(t.methods_.begin(), t.methods_.end(), row.method) == t.methods_.end())
            t.methods_.push_back(row.method);
        if (std::find(t.categories_.begin(), t.categories_.end(), row.category) == t.categories_.end())
            t.categories_.push_back(row.category);
    }
    const std::size_t nm = t.methods_.size(), nc = t.categories_.size();

    std::vector<std::vector<const MetricSet *>> grid(nm, std::vector<const MetricSet *>(nc, nullptr));
    for (const auto &row : rows) {
        auto &slot = grid[t.method_index(row.method)][t.category_index(row.category)];
        if (slot)
            throw InvalidArgument("rank_methods: duplicate row for " + row.method + "/" + row.category);
        slot = &row.metrics;
    }
    for (std::size_t mi = 0; mi < nm; ++mi)
        for (std::size_t ci = 0; ci < nc; ++ci)
            if (!grid[mi][ci])
                throw InvalidArgument("rank_methods: method '" + t.methods_[mi] + "' has no result for category '" +
                                      t.categories_[ci] + "'");

    t.ranks_.assign(nm, std::vector<std::array<int, kNumMetrics>>(nc));
    for (std::size_t ci = 0; ci < nc; ++ci) {
        for (const Metric m : kAllMetrics) {
            const bool higher = higher_is_better(m);
            for (std::size_t mi = 0; mi < nm; ++mi) {
                const double v = grid[mi][ci]->get(m);
                int better = 0;
                for (std::size_t other = 0; other < nm; ++other) {
                    const double o = grid[other][ci]->get(m);
                    if (higher ? o > v : o < v)
                        ++better;
                }
                t.ranks_[mi][ci][static_cast<int>(m)] = better + 1;
            }
        }
    }
    return t;
}

TimingStats compute_stats(std::span<const FrameTiming> timings) {
    if (timings.empty())
        throw InvalidArgument("compute_stats: no frame timings");
    double snn = 0, total = 0;
    for (const auto &t : timings) {
        if (t.snn_seconds < 0 || t.total_seconds < 0)
            throw InvalidArgument("compute_stats: negative time");
        snn += t.snn_seconds;
        total += t.total_seconds;
    }
    TimingStats s;
    s.frames = timings.size();
    s.snn_seconds_mean = snn / static_cast<double>(timings.size());
    s.fps = total > 0 ? static_cast<double>(timings.size()) / total : 0.0;
    return s;
}

void write_timing_csv(std::ostream &os, std::span<const TimingRow> rows) {
    os << kTimingHeader << '\n';
    for (const auto &r : rows)
        os << r.name << ',' << r.num_images << ',' << r.height << ',' << r.width << ',' << std::fixed
           << std::setprecision(6) << r.stats.snn_seconds_mean << ',' << std::setprecision(2) << r.stats.fps
           << '\n';
}

void write_metrics_csv(std::ostream &os, std::span<const MetricRow> rows) {
    os << kMetricsHeader << '\n' << std::fixed << std::setprecision(6);
    for (const auto &r : rows) {
        os << r.method << ',' << r.category;
        for (const Metric m : kAllMetrics)
            os << ',' << r.metrics.get(m);
        os << '\n';
    }
}

void write_ranks_csv(std::ostream &os, const RankTable &table) {
    os << kRanksHeader << '\n' << std::fixed << std::setprecision(6);
    for (const auto &method : table.methods()) {
        os << method << ',' << table.rc(method);
        for (const Metric m : kAllMetrics)
            os << ',' << table.mean_rank(method, m);
        os << '\n';
    }
}

std::vector<MetricRow> read_metrics_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line))
        throw InvalidArgument("metrics csv: empty input");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kMetricsHeader)
        throw InvalidArgument("metrics csv: unexpected header '" + line + "'");

    std::vector<MetricRow> rows;
    for (int lineno = 2; std::getline(is, line); ++lineno) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');)
            fields.push_back(f);
        if (fields.size() != 2 + kNumMetrics)
            throw InvalidArgument("metrics csv line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(2 + kNumMetrics) + " fields");
        MetricRow row{fields[0], fields[1], {}};
        for (int k = 0; k < kNumMetrics; ++k) {
            try {
                row.metrics.get(kAllMetrics[k]) = std::stod(fields[2 + k]);
            } catch (const std::exception &) {
                throw InvalidArgument("metrics csv line " + std::to_string(lineno) + ": bad number '" +
                                      fields[2 + k] + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace hsmd::bench
