#include <doctest.h>

#include <cmath>
#include <random>

#include "hsmd/core.hpp"
#include "hsmd/image_io.hpp"
#include "support/synthetic.hpp"

using namespace hsmd;

TEST_CASE("to_gray: BT.601 luma") {
    CHECK(to_gray(ColorFrame(3, 2, Rgb{255, 255, 255})) == GrayFrame(3, 2, 255));
    CHECK(to_gray(ColorFrame(3, 2, Rgb{0, 0, 0})) == GrayFrame(3, 2, 0));
    CHECK(to_gray(ColorFrame(1, 1, Rgb{255, 0, 0}))[0] == 76);
    CHECK(to_gray(ColorFrame(1, 1, Rgb{0, 255, 0}))[0] == 150);  // 149.685
    CHECK(to_gray(ColorFrame(1, 1, Rgb{0, 0, 255}))[0] == 29);   // 29.07
}

TEST_CASE("to_gray preserves dimensions and matches a floating-point oracle") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(0, 255);
    ColorFrame f(7, 5);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = {static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)),
                static_cast<std::uint8_t>(d(rng))};
    const GrayFrame g = to_gray(f);
    REQUIRE(g.width() == 7);
    REQUIRE(g.height() == 5);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const long double luma = 0.299L * f[i].r + 0.587L * f[i].g + 0.114L * f[i].b;
        CHECK(g[i] == static_cast<int>(std::floor(luma + 0.5L)));
    }
}

TEST_CASE("binarize") {
    CHECK(binarize(GrayFrame(4, 4, 0), 128).count_foreground() == 0);
    CHECK(binarize(GrayFrame(4, 4, 255), 128).count_foreground() == 16);
    const auto m = binarize(GrayFrame(3, 1, std::vector<std::uint8_t>{100, 128, 200}), 128);
    CHECK(std::vector<std::uint8_t>(m.labels().begin(), m.labels().end()) == std::vector<std::uint8_t>{0, 255, 255});
}

TEST_CASE("binarize is idempotent on its own output for thresholds in (0,255]") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(0, 255);
    for (int trial = 0; trial < 50; ++trial) {
        GrayFrame f(9, 6);
        for (auto &p : f.pixels())
            p = static_cast<std::uint8_t>(d(rng));
        const auto t = static_cast<std::uint8_t>(d(rng));
        const auto mask = binarize(f, t);
        const auto t2 = static_cast<std::uint8_t>(1 + d(rng) % 255);
        CHECK(binarize(mask.as_gray(), t2) == mask);
    }
}

TEST_CASE("mask_to_buffer") {
    const auto b = mask_to_buffer(ForegroundMask(2, 1, std::vector<std::uint8_t>{0, 255}));
    CHECK(b.values == std::vector<float>{0.0f, 255.0f});
    CHECK(b.width == 2);
    CHECK(b.height == 1);

    const auto z = mask_to_buffer(ForegroundMask(3, 3));
    CHECK(z.values == std::vector<float>(9, 0.0f));

    const auto d = mask_to_buffer(ForegroundMask(2, 2, std::vector<std::uint8_t>{255, 0, 0, 255}));
    CHECK(d.values == std::vector<float>{255.0f, 0.0f, 0.0f, 255.0f});
}

TEST_CASE("buffer_to_mask inverts mask_to_buffer") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::uint8_t> labels(12 * 7);
        for (auto &l : labels)
            l = (rng() & 1) ? kForeground : kBackground;
        const ForegroundMask m(12, 7, labels);
        CHECK(buffer_to_mask(mask_to_buffer(m), 1.0f) == m);
    }
}

TEST_CASE("raster invariants are enforced") {
    CHECK_THROWS_AS(GrayFrame(0, 4), InvalidArgument);
    CHECK_THROWS_AS(GrayFrame(4, -1), InvalidArgument);
    CHECK_THROWS_AS(GrayFrame(2, 2, std::vector<std::uint8_t>(3)), InvalidArgument);
    CHECK_THROWS_AS(ForegroundMask(2, 1, std::vector<std::uint8_t>{0, 17}), InvalidArgument);
}

TEST_CASE("image io round trip and color decoding") {
    const auto dir = testing::scratch_dir("core_io");
    GrayFrame g(5, 3);
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = static_cast<std::uint8_t>(i * 17);
    io::write_gray(dir / "g.png", g);
    CHECK(io::read_gray(dir / "g.png") == g);
    io::write_gray(dir / "g.pgm", g);
    CHECK(io::read_gray(dir / "g.pgm") == g);

    ColorFrame c(2, 2, Rgb{255, 0, 0});
    c[3] = {0, 0, 255};
    io::write_color(dir / "c.png", c);
    const ColorFrame back = io::read_color(dir / "c.png");
    CHECK(back[0].r == 255);
    CHECK(back[3].b == 255);
    // Color files are reduced with the same luma rule as to_gray.
    CHECK(io::read_gray(dir / "c.png") == to_gray(c));

    const ForegroundMask m(3, 2, std::vector<std::uint8_t>{0, 255, 0, 255, 255, 0});
    io::write_mask(dir / "m.png", m);
    CHECK(io::read_gray(dir / "m.png") == m.as_gray());

    CHECK_THROWS_AS(io::read_gray(dir / "missing.png"), io::IoError);
}
