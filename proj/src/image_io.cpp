#include "hsmd/image_io.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace hsmd::io {

namespace {

cv::Mat load(const std::filesystem::path &path) {
    cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (img.empty())
        throw IoError("cannot read image " + path.string());
    if (img.depth() != CV_8U)
        throw IoError("unsupported bit depth in " + path.string() + " (8-bit only)");
    return img;
}

ColorFrame to_color_frame(const cv::Mat &img) {
    ColorFrame out(img.cols, img.rows);
    const int ch = img.channels();
    for (int y = 0; y < img.rows; ++y) {
        const std::uint8_t *row = img.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.cols; ++x) {
            const std::uint8_t *p = row + static_cast<std::ptrdiff_t>(x) * ch;
            if (ch == 1)
                out.at(x, y) = {p[0], p[0], p[0]};
            else  // OpenCV stores BGR(A)
                out.at(x, y) = {p[2], p[1], p[0]};
        }
    }
    return out;
}

void store(const std::filesystem::path &path, const cv::Mat &img) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    if (!cv::imwrite(path.string(), img))
        throw IoError("cannot write image " + path.string());
}

}  // namespace

ColorFrame read_color(const std::filesystem::path &path) {
    const cv::Mat img = load(path);
    if (img.channels() != 1 && img.channels() != 3 && img.channels() != 4)
        throw IoError("unsupported channel count in " + path.string());
    return to_color_frame(img);
}

GrayFrame read_gray(const std::filesystem::path &path) {
    const cv::Mat img = load(path);
    if (img.channels() == 1) {
        GrayFrame out(img.cols, img.rows);
        for (int y = 0; y < img.rows; ++y) {
            const std::uint8_t *row = img.ptr<std::uint8_t>(y);
            std::copy(row, row + img.cols, &out.at(0, y));
        }
        return out;
    }
    if (img.channels() != 3 && img.channels() != 4)
        throw IoError("unsupported channel count in " + path.string());
    return to_gray(to_color_frame(img));
}

void write_gray(const std::filesystem::path &path, const GrayFrame &frame) {
    cv::Mat img(frame.height(), frame.width(), CV_8UC1);
    std::copy(frame.pixels().begin(), frame.pixels().end(), img.ptr<std::uint8_t>(0));
    store(path, img);
}

void write_color(const std::filesystem::path &path, const ColorFrame &frame) {
    cv::Mat img(frame.height(), frame.width(), CV_8UC3);
    for (int y = 0; y < frame.height(); ++y) {
        auto *row = img.ptr<std::uint8_t>(y);
        for (int x = 0; x < frame.width(); ++x) {
            const Rgb &p = frame.at(x, y);
            row[3 * x + 0] = p.b;
            row[3 * x + 1] = p.g;
            row[3 * x + 2] = p.r;
        }
    }
    store(path, img);
}

void write_mask(const std::filesystem::path &path, const ForegroundMask &mask) {
    write_gray(path, mask.as_gray());
}

}  // namespace hsmd::io
