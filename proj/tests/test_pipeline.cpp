#include <doctest.h>

#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "hsmd/image_io.hpp"
#include "hsmd/pipeline.hpp"
#include "support/synthetic.hpp"

namespace fs = std::filesystem;
using namespace hsmd;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// relative path -> bytes, for every regular file under `root` matching `ext`
std::map<std::string, std::string> tree(const fs::path &root, const std::string &ext) {
    std::map<std::string, std::string> out;
    for (const auto &e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() == ext)
            out[fs::relative(e.path(), root).string()] = slurp(e.path());
    return out;
}

RunConfig quick_config(const fs::path &out) {
    RunConfig cfg;
    cfg.out_dir = out;
    cfg.seed = 11;
    return cfg;
}

testing::SquareSpec short_square() {
    testing::SquareSpec s;
    s.frames = 60;
    s.warmup = 10;
    return s;
}

}  // namespace

TEST_CASE("load_dataset") {
    const auto root = testing::scratch_dir("dataset");
    CHECK(load_dataset(root).empty());
    CHECK_THROWS_AS(load_dataset(root / "nope"), InvalidArgument);

    fs::create_directories(root / "baseline/highway/input");
    fs::create_directories(root / "baseline/highway/groundtruth");
    std::ofstream(root / "baseline/highway/temporalROI.txt") << "470 1700\n";
    fs::create_directories(root / "thermal/park/input");
    fs::create_directories(root / "thermal/lakeSide/input");
    fs::create_directories(root / "thermal/lakeSide/groundtruth");
    std::ofstream(root / "thermal/lakeSide/temporalROI.txt") << "900 lots\n";
    fs::create_directories(root / "thermal/notes");  // no input/ -> ignored

    const auto specs = load_dataset(root);
    REQUIRE(specs.size() == 3);
    CHECK(specs[0].name() == "baseline/highway");
    REQUIRE(specs[0].gt_dir.has_value());
    REQUIRE(specs[0].temporal_roi.has_value());
    CHECK(*specs[0].temporal_roi == std::pair{470, 1700});

    CHECK(specs[1].name() == "thermal/lakeSide");
    CHECK(specs[1].gt_dir.has_value());
    CHECK_FALSE(specs[1].temporal_roi.has_value());  // malformed, dropped

    CHECK(specs[2].name() == "thermal/park");
    CHECK_FALSE(specs[2].gt_dir.has_value());
}

TEST_CASE("list_numbered sorts numerically and filters names") {
    const auto dir = testing::scratch_dir("numbered");
    for (const char *name : {"in000010.png", "in000002.jpg", "in000100.png", "gt000001.png", "in0000x1.png",
                             "in000003.txt", "notes.png"})
        std::ofstream(dir / name) << "x";
    const auto files = list_numbered(dir, "in", {".png", ".jpg"});
    REQUIRE(files.size() == 3);
    CHECK(files[0].number == 2);
    CHECK(files[1].number == 10);
    CHECK(files[2].number == 100);
}

TEST_CASE("process_sequence on a static scene is all background") {
    const auto root = testing::scratch_dir("static");
    testing::SquareSpec spec = short_square();
    spec.frames = 15;
    spec.warmup = 15;  // square never appears
    spec.noise = 0;
    testing::write_sequence(root / "baseline/still", testing::make_moving_square(spec));

    const auto seq = load_dataset(root).at(0);
    const auto res = process_sequence(seq, quick_config(root / "out"), root / "out/masks");
    CHECK(res.frames == 15);
    CHECK(res.width == 64);
    CHECK(res.height == 64);
    CHECK(res.timing.frames == 15);
    // the generated ROI window is empty (16..15), so it is dropped and every frame is scored
    REQUIRE(res.confusion.has_value());
    CHECK(res.confusion->tp == 0);
    CHECK(res.confusion->fp == 0);

    for (int i = 1; i <= 15; ++i) {
        const auto mask = io::read_gray(root / "out/masks" / testing::numbered("bin", i, ".png"));
        CHECK(std::all_of(mask.pixels().begin(), mask.pixels().end(), [](auto v) { return v == 0; }));
    }
}

TEST_CASE("process_sequence detects a moving square, identically for v1 and v2") {
    const auto root = testing::scratch_dir("square");
    const auto synthetic = testing::make_moving_square(short_square());
    testing::write_sequence(root / "baseline/square", synthetic);
    const auto seq = load_dataset(root).at(0);

    RunConfig cfg = quick_config(root / "out");
    cfg.kernel = snn::Kernel::v1;
    const auto r1 = process_sequence(seq, cfg, root / "v1");
    cfg.kernel = snn::Kernel::v2;
    cfg.lanes = 4;
    const auto r2 = process_sequence(seq, cfg, root / "v2");

    REQUIRE(r1.confusion.has_value());
    CHECK(*r1.confusion == *r2.confusion);
    const auto m = bench::compute_metrics(*r1.confusion);
    CHECK(m.f1 >= 0.9);
    CHECK(tree(root / "v1", ".png") == tree(root / "v2", ".png"));
    CHECK(tree(root / "v1", ".png").size() == 60);
}

TEST_CASE("process_sequence aborts on bad input") {
    const auto root = testing::scratch_dir("bad_seq");
    testing::SquareSpec spec = short_square();
    spec.frames = 4;
    testing::write_sequence(root / "cat/seq", testing::make_moving_square(spec), false);
    io::write_gray(root / "cat/seq/input/in000005.png", GrayFrame(32, 32, 0));
    const auto seq = load_dataset(root).at(0);
    CHECK_THROWS_WITH_AS(process_sequence(seq, quick_config(root / "out"), root / "out/m"),
                         doctest::Contains("expected 64x64"), SequenceError);

    fs::create_directories(root / "cat/empty/input");
    const auto empty = load_dataset(root).at(0);
    REQUIRE(empty.sequence == "empty");
    CHECK_THROWS_AS(process_sequence(empty, quick_config(root / "out"), root / "out/e"), SequenceError);

    std::ofstream(root / "cat/seq/input/in000006.png") << "not an image";
    fs::remove(root / "cat/seq/input/in000005.png");
    CHECK_THROWS_AS(process_sequence(load_dataset(root).at(1), quick_config(root / "out"), root / "out/m2"),
                    SequenceError);
}

TEST_CASE("run writes masks and reports") {
    const auto root = testing::scratch_dir("run");
    testing::write_sequence(root / "data/baseline/square", testing::make_moving_square(short_square()));

    SUBCASE("timing only without --bench") {
        RunConfig cfg = quick_config(root / "out");
        CHECK(run(cfg, root / "data") == 0);
        CHECK(fs::exists(root / "out/baseline/square/bin000001.png"));
        CHECK(fs::exists(root / "out/baseline/square/bin000060.png"));
        const auto timing = slurp(root / "out/timing.csv");
        CHECK(timing.rfind("category/sequence,num_images,height,width,snn_seconds,fps\nbaseline/square,60,64,64,", 0) == 0);
        CHECK_FALSE(fs::exists(root / "out/metrics.csv"));
    }
    SUBCASE("bench writes metrics and ranks") {
        RunConfig cfg = quick_config(root / "bench");
        cfg.bench = true;
        CHECK(run(cfg, root / "data") == 0);
        const auto metrics = slurp(root / "bench/metrics.csv");
        CHECK(metrics.rfind("method,category,Re,Sp,FPR,FNR,WCR,CCR,F1,Pr\nHSMD,baseline,", 0) == 0);
        CHECK(slurp(root / "bench/ranks.csv") ==
              "method,RC,Re_rank,Sp_rank,FPR_rank,FNR_rank,WCR_rank,CCR_rank,F1_rank,Pr_rank\n"
              "HSMD,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000\n");
    }
    SUBCASE("bench without ground truth writes timing only") {
        const auto bare = testing::scratch_dir("run_bare");
        testing::SquareSpec s = short_square();
        s.frames = 5;
        testing::write_sequence(bare / "cat/seq", testing::make_moving_square(s), false);
        RunConfig cfg = quick_config(bare / "out");
        cfg.bench = true;
        CHECK(run(cfg, bare) == 0);
        CHECK(fs::exists(bare / "out/timing.csv"));
        CHECK_FALSE(fs::exists(bare / "out/metrics.csv"));
    }
    SUBCASE("an aborted sequence gives exit status 1") {
        fs::create_directories(root / "data/baseline/broken/input");
        RunConfig cfg = quick_config(root / "broken_out");
        CHECK(run(cfg, root / "data") == 1);
        CHECK(fs::exists(root / "broken_out/baseline/square/bin000060.png"));
        fs::remove_all(root / "data/baseline/broken");
    }
}

TEST_CASE("end-to-end output is identical across kernels and lane counts") {
    const auto root = testing::scratch_dir("determinism");
    testing::write_sequence(root / "data/baseline/square", testing::make_moving_square(short_square()));
    std::vector<std::map<std::string, std::string>> masks, metrics;
    int idx = 0;
    for (auto [kernel, lanes] : {std::pair{snn::Kernel::v1, 1}, {snn::Kernel::v1, 16}, {snn::Kernel::v2, 2},
                                 {snn::Kernel::v2, 16}}) {
        RunConfig cfg = quick_config(root / ("out" + std::to_string(idx++)));
        cfg.kernel = kernel;
        cfg.lanes = lanes;
        cfg.bench = true;
        REQUIRE(run(cfg, root / "data") == 0);
        masks.push_back(tree(cfg.out_dir, ".png"));
        metrics.push_back(tree(cfg.out_dir, ".csv"));
        metrics.back().erase("timing.csv");
    }
    for (std::size_t i = 1; i < masks.size(); ++i) {
        CHECK(masks[i] == masks[0]);
        CHECK(metrics[i] == metrics[0]);
    }
}

TEST_CASE("rank_results combines two runs") {
    const auto root = testing::scratch_dir("rank");
    fs::create_directories(root / "a");
    fs::create_directories(root / "b");
    std::ofstream(root / "a/metrics.csv") << "method,category,Re,Sp,FPR,FNR,WCR,CCR,F1,Pr\n"
                                             "HSMD,baseline,0.9,0.99,0.01,0.1,0.02,0.98,0.9,0.9\n";
    std::ofstream(root / "b/metrics.csv") << "method,category,Re,Sp,FPR,FNR,WCR,CCR,F1,Pr\n"
                                             "HSMD,baseline,0.8,0.98,0.02,0.2,0.03,0.97,0.8,0.8\n";
    CHECK_THROWS_AS(rank_results({(root / "a").string(), (root / "b").string()}, root / "r.csv"),
                    InvalidArgument);
    CHECK(rank_results({"good=" + (root / "a").string(), "weak=" + (root / "b/metrics.csv").string()},
                       root / "r.csv") == 0);
    CHECK(slurp(root / "r.csv") ==
          "method,RC,Re_rank,Sp_rank,FPR_rank,FNR_rank,WCR_rank,CCR_rank,F1_rank,Pr_rank\n"
          "good,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000,1.000000\n"
          "weak,2.000000,2.000000,2.000000,2.000000,2.000000,2.000000,2.000000,2.000000,2.000000\n");
}

TEST_CASE("command-line interface") {
    const auto root = testing::scratch_dir("cli");
    testing::SquareSpec s = short_square();
    s.frames = 30;
    testing::write_sequence(root / "data/baseline/square", testing::make_moving_square(s));
    std::ofstream(root / "run.cfg") << "snn.steps=10\npost.filter_size=3\n";

    const std::string cli = HSMD_CLI_PATH;
    const std::string base = cli + " run --dataset " + (root / "data").string() + " --config " +
                             (root / "run.cfg").string() + " --bench --seed 3 ";
    CHECK(std::system((base + "--out " + (root / "o1").string() + " --kernel v1 --lanes 16 2>/dev/null").c_str()) == 0);
    CHECK(std::system((base + "--out " + (root / "o2").string() + " --kernel v2 --set snn.lanes=4 2>/dev/null").c_str()) == 0);
    CHECK(tree(root / "o1", ".png") == tree(root / "o2", ".png"));
    CHECK(slurp(root / "o1/metrics.csv") == slurp(root / "o2/metrics.csv"));

    CHECK(std::system((base + "--out " + (root / "o3").string() + " --lanes 48 2>/dev/null").c_str()) != 0);
    CHECK(std::system((cli + " run --dataset " + (root / "missing").string() + " 2>/dev/null").c_str()) != 0);

    const std::string rank = cli + " rank one=" + (root / "o1").string() + " two=" + (root / "o2").string() +
                             " --out " + (root / "ranks.csv").string();
    CHECK(std::system(rank.c_str()) == 0);
    const auto ranks = slurp(root / "ranks.csv");
    CHECK(ranks.find("one,1.000000") != std::string::npos);
    CHECK(ranks.find("two,1.000000") != std::string::npos);
}
