#pragma once

#include <filesystem>

#include "hsmd/core.hpp"

namespace hsmd::io {

/// Raised when an image cannot be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ColorFrame read_color(const std::filesystem::path &path);
GrayFrame read_gray(const std::filesystem::path &path);

void write_gray(const std::filesystem::path &path, const GrayFrame &frame);
void write_color(const std::filesystem::path &path, const ColorFrame &frame);
/// 8-bit single-channel PNG with values {0,255}.
void write_mask(const std::filesystem::path &path, const ForegroundMask &mask);

}  // namespace hsmd::io
