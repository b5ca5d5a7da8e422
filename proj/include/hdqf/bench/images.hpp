#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdqf/hdc.hpp"

namespace hdqf::bench {

/// H x W binary image, row-major, 1 = ink.
struct BinaryImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> pixels;

  BinaryImage() = default;
  BinaryImage(std::size_t h, std::size_t w) : height(h), width(w), pixels(h * w, 0) {}

  [[nodiscard]] std::uint8_t at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }
  std::uint8_t& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
  [[nodiscard]] std::size_t size() const noexcept { return pixels.size(); }

  void validate() const {
    if (height == 0 || width == 0) throw std::invalid_argument("image has an empty dimension");
    if (pixels.size() != height * width) throw std::invalid_argument("image pixel count does not match its shape");
    for (auto p : pixels) {
      if (p > 1) throw std::invalid_argument("image is not binary");
    }
  }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;
};

inline constexpr std::size_t kGlyphCount = 8;

/// Deterministic size x size test patterns: disk, plus, ring, triangle, X, frame,
/// checkerboard, stripes.
inline std::vector<BinaryImage> builtin_glyphs(std::size_t count = 4, std::size_t size = 48) {
  if (count == 0 || count > kGlyphCount) throw std::invalid_argument("glyph count must be in [1, 8]");
  if (size < 8) throw std::invalid_argument("glyph size must be at least 8");
  const double s = static_cast<double>(size);
  const double c = (s - 1.0) / 2.0;
  std::vector<BinaryImage> out;
  for (std::size_t g = 0; g < count; ++g) {
    BinaryImage img(size, size);
    for (std::size_t r = 0; r < size; ++r) {
      for (std::size_t q = 0; q < size; ++q) {
        const double y = static_cast<double>(r), x = static_cast<double>(q);
        const double rad = std::hypot(x - c, y - c);
        bool ink = false;
        switch (g) {
          case 0: ink = rad <= 0.34 * s; break;
          case 1: ink = std::abs(x - c) <= 0.09 * s || std::abs(y - c) <= 0.09 * s; break;
          case 2: ink = rad <= 0.42 * s && rad >= 0.25 * s; break;
          case 3: ink = y >= 0.15 * s && y <= 0.85 * s && std::abs(x - c) <= 0.5 * (y - 0.15 * s); break;
          case 4: ink = std::abs(x - y) <= 0.07 * s || std::abs(x + y - (s - 1.0)) <= 0.07 * s; break;
          case 5: {
            const double m = std::max(std::abs(x - c), std::abs(y - c));
            ink = m <= 0.42 * s && m >= 0.3 * s;
            break;
          }
          case 6: ink = ((r * 6 / size) + (q * 6 / size)) % 2 == 0; break;
          case 7: ink = (r * 8 / size) % 2 == 0; break;
        }
        img.at(r, q) = ink ? 1 : 0;
      }
    }
    out.push_back(std::move(img));
  }
  return out;
}

/// Plain (P1) PBM.
inline void write_pbm(std::ostream& os, const BinaryImage& img) {
  img.validate();
  os << "P1\n" << img.width << ' ' << img.height << '\n';
  for (std::size_t r = 0; r < img.height; ++r) {
    for (std::size_t c = 0; c < img.width; ++c) {
      if (c) os << ' ';
      os << static_cast<int>(img.at(r, c));
    }
    os << '\n';
  }
}

namespace detail {

inline void skip_space_and_comments(std::istream& is) {
  for (;;) {
    const int c = is.peek();
    if (c == '#') {
      std::string line;
      std::getline(is, line);
    } else if (c != EOF && std::isspace(c)) {
      is.get();
    } else {
      return;
    }
  }
}

inline std::size_t read_pbm_size(std::istream& is, const char* what) {
  skip_space_and_comments(is);
  std::string tok;
  while (std::isdigit(is.peek())) tok += static_cast<char>(is.get());
  if (tok.empty()) throw std::runtime_error(std::string("pbm: missing ") + what);
  const auto v = std::stoull(tok);
  if (v == 0 || v > (1u << 16)) throw std::runtime_error(std::string("pbm: bad ") + what);
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline BinaryImage read_pbm(std::istream& is) {
  char m[2] = {};
  if (!is.read(m, 2) || m[0] != 'P' || m[1] != '1') throw std::runtime_error("pbm: expected P1 magic");
  const auto w = detail::read_pbm_size(is, "width");
  const auto h = detail::read_pbm_size(is, "height");
  BinaryImage img(h, w);
  std::size_t n = 0;
  for (;;) {
    detail::skip_space_and_comments(is);
    const int c = is.get();
    if (c == EOF) break;
    if (c != '0' && c != '1') throw std::runtime_error("pbm: non-binary pixel value");
    if (n == img.size()) throw std::runtime_error("pbm: more pixels than the header declares");
    img.pixels[n++] = static_cast<std::uint8_t>(c - '0');
  }
  if (n != img.size()) throw std::runtime_error("pbm: fewer pixels than the header declares");
  return img;
}

inline void save_pbm(const std::filesystem::path& path, const BinaryImage& img) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  write_pbm(os, img);
}

inline BinaryImage load_pbm(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  try {
    return read_pbm(is);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

/// "builtin" (or "builtin:K") gives the glyph fixtures; a directory loads every
/// *.pbm in name order; anything else is a single PBM file.
inline std::vector<BinaryImage> load_images(const std::string& source, std::size_t glyph_size = 48) {
  if (source == "builtin") return builtin_glyphs(4, glyph_size);
  if (source.rfind("builtin:", 0) == 0) return builtin_glyphs(std::stoul(source.substr(8)), glyph_size);
  const std::filesystem::path p(source);
  if (std::filesystem::is_directory(p)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(p)) {
      if (e.path().extension() == ".pbm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no .pbm files in " + source);
    std::vector<BinaryImage> out;
    for (const auto& f : files) out.push_back(load_pbm(f));
    return out;
  }
  return {load_pbm(p)};
}

/// 0 -> -1, 1 -> +1.
inline Hypervector polarize(const BinaryImage& img) {
  std::vector<std::int8_t> e(img.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = img.pixels[i] ? 1 : -1;
  return Hypervector(std::move(e));
}

inline BinaryImage depolarize(std::span<const std::int8_t> v, std::size_t height, std::size_t width) {
  if (v.size() != height * width) throw std::invalid_argument("vector length does not match image shape");
  BinaryImage img(height, width);
  for (std::size_t i = 0; i < v.size(); ++i) img.pixels[i] = v[i] > 0 ? 1 : 0;
  return img;
}

inline double pixel_accuracy(const BinaryImage& a, const BinaryImage& b) {
  if (a.height != b.height || a.width != b.width) throw std::invalid_argument("image shapes differ");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a.pixels[i] == b.pixels[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace hdqf::bench
