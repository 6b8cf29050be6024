#include "hsmd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "hsmd/dbs.hpp"
#include "hsmd/image_io.hpp"
#include "hsmd/postproc.hpp"
#include "hsmd/snn.hpp"

namespace fs = std::filesystem;

namespace hsmd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::optional<std::pair<int, int>> read_temporal_roi(const fs::path &file) {
    std::ifstream in(file);
    int first = 0, last = 0;
    std::string rest;
    if (in >> first >> last && !(in >> rest) && first <= last)
        return std::make_pair(first, last);
    std::cerr << "warning: ignoring malformed " << file.string() << '\n';
    return std::nullopt;
}

std::vector<fs::path> sorted_subdirs(const fs::path &dir) {
    std::vector<fs::path> out;
    for (const auto &e : fs::directory_iterator(dir))
        if (e.is_directory())
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string frame_name(std::string_view prefix, int number, std::string_view ext) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06d", number);
    return std::string(prefix) + buf + std::string(ext);
}

}  // namespace

std::vector<SequenceSpec> load_dataset(const fs::path &root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec))
        throw InvalidArgument("dataset root " + root.string() + " is not a readable directory");

    std::vector<SequenceSpec> specs;
    for (const auto &category : sorted_subdirs(root)) {
        for (const auto &seq : sorted_subdirs(category)) {
            if (!fs::is_directory(seq / "input"))
                continue;
            SequenceSpec spec;
            spec.category = category.filename().string();
            spec.sequence = seq.filename().string();
            spec.input_dir = seq / "input";
            if (fs::is_directory(seq / "groundtruth"))
                spec.gt_dir = seq / "groundtruth";
            if (fs::is_regular_file(seq / "temporalROI.txt"))
                spec.temporal_roi = read_temporal_roi(seq / "temporalROI.txt");
            for (const char *roi : {"ROI.bmp", "ROI.png", "ROI.jpg"})
                if (fs::is_regular_file(seq / roi)) {
                    spec.spatial_roi = seq / roi;
                    break;
                }
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

std::vector<NumberedFile> list_numbered(const fs::path &dir, std::string_view prefix,
                                        std::initializer_list<std::string_view> extensions) {
    std::vector<NumberedFile> out;
    for (const auto &e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file())
            continue;
        const std::string stem = e.path().stem().string();
        const std::string ext = e.path().extension().string();
        if (std::find(extensions.begin(), extensions.end(), ext) == extensions.end())
            continue;
        if (stem.size() <= prefix.size() || stem.compare(0, prefix.size(), prefix) != 0)
            continue;
        const std::string digits = stem.substr(prefix.size());
        if (!std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }) ||
            digits.size() > 9)
            continue;
        out.push_back({std::stoi(digits), e.path()});
    }
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.number < b.number; });
    return out;
}

SequenceResult process_sequence(const SequenceSpec &spec, const RunConfig &cfg, const fs::path &mask_dir) {
    cfg.validate();
    const auto frames = list_numbered(spec.input_dir, "in", {".jpg", ".jpeg", ".png", ".pgm", ".bmp"});
    if (frames.empty())
        throw SequenceError(spec.name() + ": no input frames in " + spec.input_dir.string());
    fs::create_directories(mask_dir);

    std::optional<GrayFrame> spatial_roi;
    if (spec.spatial_roi)
        spatial_roi = io::read_gray(*spec.spatial_roi);

    dbs::DbsConfig dbs_cfg = cfg.dbs;
    dbs_cfg.seed = cfg.seed;

    std::optional<dbs::DbsModel> model;
    std::optional<snn::SnnState> state;
    std::vector<bench::FrameTiming> timings;
    timings.reserve(frames.size());
    std::optional<bench::ConfusionCounts> confusion;
    if (spec.gt_dir)
        confusion.emplace();
    bool warned_missing_gt = false;

    SequenceResult result;
    for (const auto &frame_file : frames) {
        const auto t0 = Clock::now();
        GrayFrame gray;
        try {
            gray = io::read_gray(frame_file.path);
        } catch (const std::exception &e) {
            throw SequenceError(spec.name() + ": " + e.what());
        }
        if (!model) {
            result.width = gray.width();
            result.height = gray.height();
            if (spatial_roi && !spatial_roi->same_shape(gray))
                throw SequenceError(spec.name() + ": spatial ROI size differs from the frames");
            model.emplace(gray, dbs_cfg);
            state.emplace(gray.width(), gray.height(), cfg.snn);  // fresh buffers per sequence
        } else if (!gray.same_shape(result.width, result.height)) {
            throw SequenceError(spec.name() + ": frame " + frame_file.path.filename().string() + " is " +
                                std::to_string(gray.width()) + "x" + std::to_string(gray.height()) +
                                ", expected " + std::to_string(result.width) + "x" +
                                std::to_string(result.height));
        }

        const ForegroundMask dbs_mask = model->apply(gray);
        const KernelBuffer buffer = mask_to_buffer(dbs_mask);

        const auto t_snn = Clock::now();
        const snn::SpikeSumGrid grid = snn::run_parallel(cfg.kernel, buffer, cfg.snn, *state, cfg.lanes);
        const double snn_seconds = seconds_since(t_snn);

        const ForegroundMask out = postproc::finalize_mask(postproc::spikes_to_mask(grid, cfg.post), cfg.post);
        io::write_mask(mask_dir / frame_name("bin", frame_file.number, ".png"), out);
        timings.push_back({snn_seconds, seconds_since(t0)});

        if (!confusion)
            continue;
        if (spec.temporal_roi &&
            (frame_file.number < spec.temporal_roi->first || frame_file.number > spec.temporal_roi->second))
            continue;
        const fs::path gt_path = *spec.gt_dir / frame_name("gt", frame_file.number, ".png");
        if (!fs::exists(gt_path)) {
            if (!warned_missing_gt)
                std::cerr << "warning: " << spec.name() << ": missing ground truth " << gt_path.string()
                          << " (frames without ground truth are not evaluated)\n";
            warned_missing_gt = true;
            continue;
        }
        const GrayFrame gt = io::read_gray(gt_path);
        try {
            *confusion = bench::accumulate_confusion(out, gt, *confusion, spatial_roi ? &*spatial_roi : nullptr);
        } catch (const InvalidArgument &e) {
            throw SequenceError(spec.name() + ": " + e.what());
        }
    }

    result.frames = frames.size();
    result.timing = bench::compute_stats(timings);
    result.confusion = confusion;
    return result;
}

int run(const RunConfig &cfg, const fs::path &root) {
    cfg.validate();
    const auto specs = load_dataset(root);
    if (specs.empty())
        std::cerr << "warning: no sequences found under " << root.string() << '\n';
    fs::create_directories(cfg.out_dir);

    std::vector<bench::TimingRow> timing_rows;
    // category -> per-sequence metric sets, in discovery order
    std::vector<std::pair<std::string, std::vector<bench::MetricSet>>> per_category;
    bool failed = false;

    for (const auto &spec : specs) {
        std::cerr << "processing " << spec.name() << " (kernel " << snn::to_string(cfg.kernel) << ", "
                  << cfg.lanes << " lanes)\n";
        try {
            const auto res = process_sequence(spec, cfg, cfg.out_dir / spec.category / spec.sequence);
            timing_rows.push_back({spec.name(), res.frames, res.height, res.width, res.timing});
            if (cfg.bench && res.confusion) {
                auto it = std::find_if(per_category.begin(), per_category.end(),
                                       [&](const auto &p) { return p.first == spec.category; });
                if (it == per_category.end())
                    it = per_category.insert(per_category.end(), {spec.category, {}});
                it->second.push_back(bench::compute_metrics(*res.confusion));
            }
        } catch (const std::exception &e) {
            std::cerr << "error: " << e.what() << '\n';
            failed = true;
        }
    }

    {
        std::ofstream os(cfg.out_dir / "timing.csv");
        bench::write_timing_csv(os, timing_rows);
    }

    if (cfg.bench) {
        if (per_category.empty()) {
            std::cerr << "warning: --bench set but no sequence has ground truth; only timing.csv written\n";
        } else {
            std::vector<bench::MetricRow> rows;
            for (const auto &[category, sets] : per_category)
                rows.push_back({cfg.method, category, bench::mean_metrics(sets)});
            std::ofstream metrics(cfg.out_dir / "metrics.csv");
            bench::write_metrics_csv(metrics, rows);
            std::ofstream ranks(cfg.out_dir / "ranks.csv");
            bench::write_ranks_csv(ranks, bench::rank_methods(rows));
        }
    }
    return failed ? 1 : 0;
}

int rank_results(const std::vector<std::string> &inputs, const fs::path &out_csv) {
    std::vector<bench::MetricRow> rows;
    std::vector<std::string> seen_methods;
    for (const auto &input : inputs) {
        std::optional<std::string> rename;
        fs::path path = input;
        if (const auto eq = input.find('='); eq != std::string::npos) {
            rename = input.substr(0, eq);
            path = input.substr(eq + 1);
        }
        if (fs::is_directory(path))
            path /= "metrics.csv";
        std::ifstream in(path);
        if (!in)
            throw InvalidArgument("cannot open metrics file " + path.string());
        auto file_rows = bench::read_metrics_csv(in);
        std::vector<std::string> file_methods;
        for (auto &row : file_rows) {
            if (rename)
                row.method = *rename;
            if (std::find(file_methods.begin(), file_methods.end(), row.method) == file_methods.end())
                file_methods.push_back(row.method);
        }
        for (const auto &m : file_methods) {
            if (std::find(seen_methods.begin(), seen_methods.end(), m) != seen_methods.end())
                throw InvalidArgument("method '" + m + "' appears in more than one input; use name=path to rename");
            seen_methods.push_back(m);
        }
        rows.insert(rows.end(), file_rows.begin(), file_rows.end());
    }
    const auto table = bench::rank_methods(rows);
    if (out_csv.has_parent_path())
        fs::create_directories(out_csv.parent_path());
    std::ofstream os(out_csv);
    if (!os)
        throw InvalidArgument("cannot write " + out_csv.string());
    bench::write_ranks_csv(os, table);
    return 0;
}

}  // namespace hsmd
