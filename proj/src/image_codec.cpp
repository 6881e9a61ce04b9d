#include "topo/image_codec.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace topo {
namespace {

[[noreturn]] void fail(IoErrorKind kind, const std::string& path,
                       const std::string& msg) {
  throw IoError(kind, path, msg);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// ---------------------------------------------------------------------------
// PNG (libpng)
// ---------------------------------------------------------------------------

struct PngReadState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadState() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

RgbImage load_png(const std::string& path, std::FILE* fp) {
  PngReadState s;
  s.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                 nullptr);
  if (!s.png) fail(IoErrorKind::corrupt_data, path, "libpng init failed");
  s.info = png_create_info_struct(s.png);
  if (!s.info) fail(IoErrorKind::corrupt_data, path, "libpng init failed");

  if (setjmp(png_jmpbuf(s.png))) {
    fail(IoErrorKind::corrupt_data, path, "corrupt PNG data");
  }
  png_init_io(s.png, fp);
  png_read_info(s.png, s.info);

  const png_uint_32 w = png_get_image_width(s.png, s.info);
  const png_uint_32 h = png_get_image_height(s.png, s.info);
  const int depth = png_get_bit_depth(s.png, s.info);
  const int color = png_get_color_type(s.png, s.info);

  if (depth == 16) {
    fail(IoErrorKind::unsupported_format, path, "16-bit PNG not supported");
  }
  // Normalize to 8-bit RGB: expand palette/low-depth gray, drop alpha.
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(s.png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
    png_set_expand_gray_1_2_4_to_8(s.png);
  if (png_get_valid(s.png, s.info, PNG_INFO_tRNS))
    png_set_tRNS_to_alpha(s.png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(s.png);
  png_set_strip_alpha(s.png);
  png_read_update_info(s.png, s.info);

  if (png_get_rowbytes(s.png, s.info) != std::size_t(w) * 3) {
    fail(IoErrorKind::unsupported_format, path, "unexpected PNG layout");
  }

  std::vector<std::uint8_t> row(std::size_t(w) * 3);
  RgbImage img;
  img.width = int(w);
  img.height = int(h);
  img.r.resize(img.pixel_count());
  img.g.resize(img.pixel_count());
  img.b.resize(img.pixel_count());
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(s.png, row.data(), nullptr);
    const std::size_t base = std::size_t(y) * w;
    for (png_uint_32 x = 0; x < w; ++x) {
      img.r[base + x] = row[3 * x + 0];
      img.g[base + x] = row[3 * x + 1];
      img.b[base + x] = row[3 * x + 2];
    }
  }
  png_read_end(s.png, nullptr);
  return img;
}

// ---------------------------------------------------------------------------
// PNM (binary PGM P5 / PPM P6)
// ---------------------------------------------------------------------------

// Reads one PNM header token, skipping whitespace and '#' comments.
bool next_pnm_token(std::FILE* fp, std::string& tok) {
  tok.clear();
  int c;
  while ((c = std::fgetc(fp)) != EOF) {
    if (c == '#') {
      while ((c = std::fgetc(fp)) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) return false;
  do {
    tok.push_back(char(c));
    c = std::fgetc(fp);
  } while (c != EOF && !std::isspace(c) && c != '#');
  if (c == '#') std::ungetc(c, fp);
  return true;
}

long parse_pnm_int(std::FILE* fp, const std::string& path) {
  std::string tok;
  if (!next_pnm_token(fp, tok)) {
    fail(IoErrorKind::corrupt_data, path, "truncated PNM header");
  }
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || v < 0) {
    fail(IoErrorKind::corrupt_data, path, "bad PNM header value '" + tok + "'");
  }
  return v;
}

RgbImage load_pnm(const std::string& path, std::FILE* fp, bool color) {
  const long w = parse_pnm_int(fp, path);
  const long h = parse_pnm_int(fp, path);
  const long maxval = parse_pnm_int(fp, path);
  if (w < 1 || h < 1) {
    fail(IoErrorKind::corrupt_data, path, "non-positive PNM dimensions");
  }
  if (maxval > 255) {
    fail(IoErrorKind::unsupported_format, path, "16-bit PNM not supported");
  }
  if (maxval < 1) {
    fail(IoErrorKind::corrupt_data, path, "bad PNM maxval");
  }

  const std::size_t n = std::size_t(w) * std::size_t(h);
  const std::size_t bytes = n * (color ? 3 : 1);
  std::vector<std::uint8_t> raw(bytes);
  if (std::fread(raw.data(), 1, bytes, fp) != bytes) {
    fail(IoErrorKind::corrupt_data, path, "truncated PNM pixel data");
  }

  RgbImage img;
  img.width = int(w);
  img.height = int(h);
  img.r.resize(n);
  img.g.resize(n);
  img.b.resize(n);
  if (color) {
    for (std::size_t i = 0; i < n; ++i) {
      img.r[i] = raw[3 * i + 0];
      img.g[i] = raw[3 * i + 1];
      img.b[i] = raw[3 * i + 2];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      img.r[i] = img.g[i] = img.b[i] = raw[i];
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// CSV grid
// ---------------------------------------------------------------------------

GrayImage parse_csv_grid(const std::string& path, std::istream& in) {
  std::vector<std::vector<int>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() ||
        line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::vector<int> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const long v = std::strtol(cell.c_str(), &end, 10);
      while (end && std::isspace(*end)) ++end;
      if (end == cell.c_str() || (end && *end != '\0') || v < 0 || v > 255) {
        fail(IoErrorKind::corrupt_data, path, "bad CSV cell '" + cell + "'");
      }
      row.push_back(int(v));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(IoErrorKind::corrupt_data, path, "ragged CSV grid");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.front().empty()) {
    fail(IoErrorKind::corrupt_data, path, "empty CSV grid");
  }
  GrayImage img;
  img.width = int(rows.front().size());
  img.height = int(rows.size());
  img.values.reserve(img.pixel_count());
  for (const auto& row : rows) {
    for (int v : row) img.values.push_back(float(v));
  }
  return img;
}

bool has_extension(const std::string& path, const char* ext) {
  const auto pos = path.rfind('.');
  if (pos == std::string::npos) return false;
  std::string e = path.substr(pos);
  for (char& c : e) c = char(std::tolower(c));
  return e == ext;
}

}  // namespace

RgbImage load_image(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    fail(IoErrorKind::missing_file, path, "no such file");
  }
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail(IoErrorKind::missing_file, path, "cannot open file");

  unsigned char magic[8] = {0};
  const std::size_t got = std::fread(magic, 1, sizeof magic, fp.get());
  std::rewind(fp.get());

  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G',
                                           0x0d, 0x0a, 0x1a, 0x0a};
  if (got >= 8 && std::memcmp(magic, png_sig, 8) == 0) {
    return load_png(path, fp.get());
  }
  if (got >= 2 && magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) {
    std::fseek(fp.get(), 2, SEEK_SET);
    return load_pnm(path, fp.get(), magic[1] == '6');
  }
  if (has_extension(path, ".csv")) {
    fp.reset();
    GrayImage gray = load_csv_grid(path);
    RgbImage img;
    img.width = gray.width;
    img.height = gray.height;
    img.r.resize(gray.pixel_count());
    for (std::size_t i = 0; i < gray.values.size(); ++i) {
      img.r[i] = std::uint8_t(gray.values[i]);
    }
    img.g = img.r;
    img.b = img.r;
    return img;
  }
  fail(IoErrorKind::unsupported_format, path, "unrecognized image format");
}

GrayImage load_csv_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(IoErrorKind::missing_file, path, "cannot open file");
  return parse_csv_grid(path, in);
}

void save_mask_pgm(const std::string& path, const Mask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(IoErrorKind::write_failure, path, "cannot open for writing");
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  std::vector<std::uint8_t> raw(mask.pixel_count());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = mask.bits[i] ? 255 : 0;
  }
  out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  if (!out) fail(IoErrorKind::write_failure, path, "write failed");
}

Mask load_mask_pgm(const std::string& path) {
  RgbImage img = load_image(path);
  Mask mask;
  mask.width = img.width;
  mask.height = img.height;
  mask.bits.resize(img.pixel_count());
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    mask.bits[i] = img.r[i] != 0 ? 1 : 0;
  }
  return mask;
}

void save_ppm(const std::string& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(IoErrorKind::write_failure, path, "cannot open for writing");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> raw(img.pixel_count() * 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    raw[3 * i + 0] = img.r[i];
    raw[3 * i + 1] = img.g[i];
    raw[3 * i + 2] = img.b[i];
  }
  out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  if (!out) fail(IoErrorKind::write_failure, path, "write failed");
}

void save_gray_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(IoErrorKind::write_failure, path, "cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> raw(img.pixel_count());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i] = std::uint8_t(std::lround(img.values[i]));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
  if (!out) fail(IoErrorKind::write_failure, path, "write failed");
}

}  // namespace topo
