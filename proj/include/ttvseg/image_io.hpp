#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "ttvseg/image.hpp"

namespace ttvseg {

class ImageIoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reads a grayscale image as raw intensities (0..maxval). The format is
/// chosen by magic bytes: PGM P2, PGM P5 or PNG. Color PNGs are converted to
/// gray by libpng.
ImageGrid read_image(const std::filesystem::path& path);

ImageGrid read_pgm(const std::filesystem::path& path);
ImageGrid read_png(const std::filesystem::path& path);

/// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const std::uint8_t> pixels);

/// Writes a field as round(255 * clamp(v, 0, 1)).
void write_unit_pgm(const std::filesystem::path& path, const ImageGrid& grid);

/// Phase k is rendered as round(255 * k / (N - 1)).
void write_label_pgm(const std::filesystem::path& path, const LabelMask& mask,
                     std::size_t phases);

/// Maps the distinct intensity levels of a ground-truth image, sorted
/// ascending, to phases 0..N-1. Throws unless there are exactly N levels.
LabelMask labels_from_levels(const ImageGrid& truth, std::size_t phases);

}  // namespace ttvseg
