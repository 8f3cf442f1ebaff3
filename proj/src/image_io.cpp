#include "ttvseg/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <vector>

namespace ttvseg {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      if (!tok.empty()) break;
    } else {
      tok.push_back(static_cast<char>(c));
    }
    c = in.get();
  }
  return tok;
}

std::size_t pgm_number(std::istream& in, const std::string& what) {
  const std::string tok = pgm_token(in);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) {
    throw ImageIoError("PGM: bad " + what + " field '" + tok + "'");
  }
  return std::stoul(tok);
}

}  // namespace

ImageGrid read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path.string());

  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw ImageIoError(path.string() + ": not a PGM file");
  const std::size_t cols = pgm_number(in, "width");
  const std::size_t rows = pgm_number(in, "height");
  const std::size_t maxval = pgm_number(in, "maxval");
  if (rows == 0 || cols == 0) throw ImageIoError(path.string() + ": empty image");
  if (maxval == 0 || maxval > 65535) throw ImageIoError(path.string() + ": bad maxval");

  std::vector<double> data(rows * cols);
  if (magic == "P2") {
    for (auto& v : data) {
      const std::size_t px = pgm_number(in, "pixel");
      if (px > maxval) throw ImageIoError(path.string() + ": pixel exceeds maxval");
      v = static_cast<double>(px);
    }
  } else {
    // pgm_token consumed the single whitespace byte after maxval.
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(rows * cols * bytes_per);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw ImageIoError(path.string() + ": truncated pixel data");
    }
    for (std::size_t k = 0; k < data.size(); ++k) {
      data[k] = bytes_per == 1 ? raw[k] : (raw[2 * k] << 8 | raw[2 * k + 1]);
    }
  }
  return ImageGrid(rows, cols, std::move(data));
}

ImageGrid read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw ImageIoError(path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw ImageIoError(path.string() + ": " + msg);
  }
  std::vector<double> data(buffer.begin(), buffer.end());
  return ImageGrid(image.height, image.width, std::move(data));
}

ImageGrid read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path.string());
  std::array<unsigned char, 8> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  in.close();

  static constexpr std::array<unsigned char, 8> png_sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (got == head.size() && head == png_sig) return read_png(path);
  if (got >= 2 && head[0] == 'P' && (head[1] == '2' || head[1] == '5')) return read_pgm(path);
  throw ImageIoError(path.string() + ": unsupported image format (need PGM P2/P5 or PNG)");
}

void write_pgm(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
               std::span<const std::uint8_t> pixels) {
  if (pixels.size() != rows * cols) throw ImageIoError("write_pgm: pixel count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot write " + path.string());
  out << "P5\n" << cols << ' ' << rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw ImageIoError("write failed: " + path.string());
}

void write_unit_pgm(const std::filesystem::path& path, const ImageGrid& grid) {
  std::vector<std::uint8_t> px(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    px[k] = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(grid[k], 0.0, 1.0)));
  }
  write_pgm(path, grid.rows(), grid.cols(), px);
}

void write_label_pgm(const std::filesystem::path& path, const LabelMask& mask,
                     std::size_t phases) {
  const double step = phases > 1 ? 255.0 / static_cast<double>(phases - 1) : 0.0;
  std::vector<std::uint8_t> px(mask.size());
  for (std::size_t k = 0; k < mask.size(); ++k) {
    px[k] = static_cast<std::uint8_t>(std::lround(step * mask[k]));
  }
  write_pgm(path, mask.rows(), mask.cols(), px);
}

LabelMask labels_from_levels(const ImageGrid& truth, std::size_t phases) {
  std::map<double, std::uint32_t> levels;
  for (double v : truth.values()) levels.emplace(v, 0);
  if (levels.size() != phases) {
    throw std::invalid_argument("ground truth has " + std::to_string(levels.size()) +
                                " intensity levels, expected " + std::to_string(phases));
  }
  std::uint32_t next = 0;
  for (auto& [level, label] : levels) label = next++;
  std::vector<std::uint32_t> labels(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) labels[k] = levels.at(truth[k]);
  return LabelMask(truth.rows(), truth.cols(), std::move(labels));
}

}  // namespace ttvseg
