#include "edgescore/raster_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cctype>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "edgescore/error.hpp"

namespace edgescore {

namespace {

// Decoded samples before normalization. PBM data is stored with 1 = foreground.
struct RawRaster {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::uint32_t max_level = 1;
  bool pbm = false;
  std::vector<std::uint32_t> samples;
};

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read failure on " + path.string());
  }
  return bytes;
}

class PnmReader {
 public:
  PnmReader(const std::vector<unsigned char>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  RawRaster read() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') {
      fail("not a PNM file");
    }
    const char kind = static_cast<char>(bytes_[1]);
    pos_ = 2;
    RawRaster raster;
    raster.width = static_cast<int>(read_header_int());
    raster.height = static_cast<int>(read_header_int());
    if (raster.width < 1 || raster.height < 1) {
      fail("nonpositive dimensions");
    }
    const std::size_t pixels = static_cast<std::size_t>(raster.width) * static_cast<std::size_t>(raster.height);
    switch (kind) {
      case '1':
        raster.pbm = true;
        raster.samples.reserve(pixels);
        for (std::size_t i = 0; i < pixels; ++i) {
          skip_space_and_comments();
          if (pos_ >= bytes_.size() || (bytes_[pos_] != '0' && bytes_[pos_] != '1')) {
            fail("truncated or malformed P1 data");
          }
          raster.samples.push_back(bytes_[pos_++] == '1' ? 1u : 0u);
        }
        break;
      case '4': {
        raster.pbm = true;
        ++pos_;  // single whitespace after the header
        const std::size_t row_bytes = (static_cast<std::size_t>(raster.width) + 7) / 8;
        if (bytes_.size() < pos_ + row_bytes * static_cast<std::size_t>(raster.height)) {
          fail("truncated P4 data");
        }
        raster.samples.reserve(pixels);
        for (int r = 0; r < raster.height; ++r) {
          const unsigned char* row = bytes_.data() + pos_ + static_cast<std::size_t>(r) * row_bytes;
          for (int c = 0; c < raster.width; ++c) {
            raster.samples.push_back((row[c / 8] >> (7 - c % 8)) & 1u);
          }
        }
        break;
      }
      case '2':
      case '3':
      case '5':
      case '6': {
        raster.channels = (kind == '3' || kind == '6') ? 3 : 1;
        raster.max_level = read_header_int();
        if (raster.max_level < 1 || raster.max_level > 65535) {
          fail("maxval out of range");
        }
        const std::size_t count = pixels * static_cast<std::size_t>(raster.channels);
        raster.samples.reserve(count);
        if (kind == '2' || kind == '3') {
          for (std::size_t i = 0; i < count; ++i) {
            raster.samples.push_back(read_header_int());
          }
        } else {
          ++pos_;
          const std::size_t width_bytes = raster.max_level < 256 ? 1 : 2;
          if (bytes_.size() < pos_ + count * width_bytes) {
            fail("truncated binary data");
          }
          for (std::size_t i = 0; i < count; ++i) {
            const unsigned char* p = bytes_.data() + pos_ + i * width_bytes;
            raster.samples.push_back(width_bytes == 1 ? p[0] : (static_cast<std::uint32_t>(p[0]) << 8) | p[1]);
          }
        }
        for (auto s : raster.samples) {
          if (s > raster.max_level) {
            fail("sample exceeds maxval");
          }
        }
        break;
      }
      default:
        fail("unsupported PNM variant");
    }
    return raster;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw FormatError(name_ + ": " + what); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
          ++pos_;
        }
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint32_t read_header_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      fail("malformed header or data");
    }
    std::uint64_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + static_cast<std::uint64_t>(bytes_[pos_++] - '0');
      if (value > 0xffffffffu) {
        fail("integer overflow");
      }
    }
    return static_cast<std::uint32_t>(value);
  }

  const std::vector<unsigned char>& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

struct PngSource {
  const std::vector<unsigned char>* bytes;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->pos + length > src->bytes->size()) {
    png_error(png, "truncated PNG");
  }
  std::copy_n(src->bytes->data() + src->pos, length, out);
  src->pos += length;
}

void png_silent_warning(png_structp, png_const_charp) {}

RawRaster read_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_silent_warning);
  if (png == nullptr) {
    throw Error("libpng initialization failed");
  }
  png_infop info = png_create_info_struct(png);
  RawRaster raster;
  std::vector<png_bytep> rows;
  PngSource source{&bytes, 0};
  if (info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(name + ": malformed PNG");
  }
  png_set_read_fn(png, &source, png_read_from_memory);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  }
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  raster.width = static_cast<int>(png_get_image_width(png, info));
  raster.height = static_cast<int>(png_get_image_height(png, info));
  raster.channels = png_get_channels(png, info);
  const int depth = png_get_bit_depth(png, info);
  raster.max_level = depth == 16 ? 65535u : 255u;
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  std::vector<unsigned char> pixels(row_bytes * static_cast<std::size_t>(raster.height));
  rows.resize(static_cast<std::size_t>(raster.height));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    rows[r] = pixels.data() + r * row_bytes;
  }
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  const std::size_t count = static_cast<std::size_t>(raster.width) * static_cast<std::size_t>(raster.height) *
                            static_cast<std::size_t>(raster.channels);
  raster.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    raster.samples[i] = depth == 16 ? (static_cast<std::uint32_t>(pixels[2 * i]) << 8) | pixels[2 * i + 1]
                                    : pixels[i];
  }
  return raster;
}

RawRaster read_raster(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  static constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
    return read_png(bytes, path.string());
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    return PnmReader(bytes, path.string()).read();
  }
  throw FormatError(path.string() + ": unsupported image format");
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

}  // namespace

GrayImage load_gray(const std::filesystem::path& path, GrayLoadOptions options) {
  const RawRaster raster = read_raster(path);
  const std::size_t pixels = static_cast<std::size_t>(raster.width) * static_cast<std::size_t>(raster.height);
  std::vector<double> values(pixels);
  if (raster.pbm) {
    // PBM 1 is black.
    for (std::size_t i = 0; i < pixels; ++i) {
      values[i] = raster.samples[i] != 0 ? 0.0 : 1.0;
    }
  } else if (raster.channels == 1) {
    const double scale = static_cast<double>(raster.max_level);
    for (std::size_t i = 0; i < pixels; ++i) {
      values[i] = static_cast<double>(raster.samples[i]) / scale;
    }
  } else {
    if (!options.luma) {
      throw FormatError(path.string() + ": colour image; request luma conversion explicitly");
    }
    const double scale = static_cast<double>(raster.max_level);
    for (std::size_t i = 0; i < pixels; ++i) {
      const double r = raster.samples[3 * i] / scale;
      const double g = raster.samples[3 * i + 1] / scale;
      const double b = raster.samples[3 * i + 2] / scale;
      values[i] = std::clamp(0.299 * r + 0.587 * g + 0.114 * b, 0.0, 1.0);
    }
  }
  return GrayImage(raster.width, raster.height, std::move(values));
}

EdgeMap load_edge_map(const std::filesystem::path& path, std::optional<double> threshold) {
  const RawRaster raster = read_raster(path);
  if (raster.channels != 1) {
    throw FormatError(path.string() + ": edge maps must be single-channel");
  }
  const std::size_t pixels = raster.samples.size();
  std::vector<std::uint8_t> bits(pixels);
  if (raster.pbm) {
    for (std::size_t i = 0; i < pixels; ++i) {
      bits[i] = raster.samples[i] != 0 ? 1 : 0;
    }
  } else if (threshold) {
    const double scale = static_cast<double>(raster.max_level);
    for (std::size_t i = 0; i < pixels; ++i) {
      bits[i] = static_cast<double>(raster.samples[i]) / scale > *threshold ? 1 : 0;
    }
  } else {
    for (std::size_t i = 0; i < pixels; ++i) {
      const auto s = raster.samples[i];
      if (s != 0 && s != raster.max_level) {
        throw FormatError(path.string() + ": not bilevel; supply a binarization threshold");
      }
      bits[i] = s == raster.max_level ? 1 : 0;
    }
  }
  return EdgeMap(raster.width, raster.height, std::move(bits));
}

void save_edge_map(const EdgeMap& map, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "P4\n" << map.width() << ' ' << map.height() << '\n';
  const std::size_t row_bytes = (static_cast<std::size_t>(map.width()) + 7) / 8;
  std::vector<char> row(row_bytes);
  for (int r = 0; r < map.height(); ++r) {
    std::fill(row.begin(), row.end(), 0);
    const auto bits = map.bits().row(r);
    for (int c = 0; c < map.width(); ++c) {
      if (bits[static_cast<std::size_t>(c)]) {
        row[static_cast<std::size_t>(c / 8)] |= static_cast<char>(0x80u >> (c % 8));
      }
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) {
    throw IoError("write failure on " + path.string());
  }
}

void save_gray(const GrayImage& image, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  std::vector<char> bytes;
  bytes.reserve(image.field().size());
  for (double v : image.field().values()) {
    bytes.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("write failure on " + path.string());
  }
}

}  // namespace edgescore
