#include "solarmap/raster_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include "solarmap/error.hpp"

namespace solarmap {

namespace {

// libpng reports failures through longjmp. Every setjmp below lives in a
// frame that holds only trivially destructible locals; the error is turned
// into an exception after control returns to that frame.
struct PngErrorSink {
  char message[256] = {};
  std::jmp_buf jump;
};

[[noreturn]] void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof sink->message, "%s", msg);
  std::longjmp(sink->jump, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

enum class Container { Png, Ppm };

Container sniff(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::FileNotFound, "raster '" + path + "' does not exist");
  }
  std::ifstream in(path, std::ios::binary);
  unsigned char magic[8] = {};
  if (!in || !in.read(reinterpret_cast<char*>(magic), 8)) {
    throw Error(ErrorCode::Unreadable, "cannot read raster '" + path + "'");
  }
  if (png_sig_cmp(magic, 0, 8) == 0) return Container::Png;
  if (magic[0] == 'P' && magic[1] == '6') return Container::Ppm;
  throw Error(ErrorCode::UnsupportedFormat,
              "'" + path + "' is neither PNG nor binary PPM (P6)");
}

class PngReader {
 public:
  PngReader() = default;
  PngReader(const PngReader&) = delete;
  PngReader& operator=(const PngReader&) = delete;
  ~PngReader() {
    if (png_ != nullptr) png_destroy_read_struct(&png_, info_ != nullptr ? &info_ : nullptr, nullptr);
    if (fp_ != nullptr) std::fclose(fp_);
  }

  void open(const std::string& path) {
    path_ = path;
    fp_ = std::fopen(path.c_str(), "rb");
    if (fp_ == nullptr) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
    png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink_, on_png_error, on_png_warning);
    if (png_ != nullptr) info_ = png_create_info_struct(png_);
    if (png_ == nullptr || info_ == nullptr) {
      throw Error(ErrorCode::Unreadable, "libpng initialisation failed");
    }
    if (!read_header()) fail();
    if (bit_depth_ > 8) {
      throw Error(ErrorCode::UnsupportedDepth,
                  "'" + path + "' has " + std::to_string(bit_depth_) +
                      "-bit samples; only 8-bit RGB is supported");
    }
    if (row_bytes_ != static_cast<std::size_t>(width_) * 3) {
      throw Error(ErrorCode::UnsupportedFormat, "'" + path + "' does not decode to 8-bit RGB");
    }
  }

  std::int64_t width() const { return width_; }
  std::int64_t height() const { return height_; }
  bool interlaced() const { return passes_ > 1; }

  void read_rows(std::uint8_t* dst, std::size_t count) {
    if (!read_rows_impl(dst, count)) fail();
  }

  void read_image(std::uint8_t* dst) {
    std::vector<png_bytep> rows(static_cast<std::size_t>(height_));
    for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = dst + y * row_bytes_;
    if (!read_image_impl(rows.data())) fail();
  }

 private:
  [[noreturn]] void fail() const {
    throw Error(ErrorCode::Unreadable, "cannot decode '" + path_ + "': " + sink_.message);
  }

  bool read_header() {
    if (setjmp(sink_.jump)) return false;
    png_init_io(png_, fp_);
    png_read_info(png_, info_);
    width_ = png_get_image_width(png_, info_);
    height_ = png_get_image_height(png_, info_);
    bit_depth_ = png_get_bit_depth(png_, info_);
    const int color = png_get_color_type(png_, info_);
    if (bit_depth_ > 8) return true;
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png_);
    if (color == PNG_COLOR_TYPE_GRAY && bit_depth_ < 8) png_set_expand_gray_1_2_4_to_8(png_);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
      png_set_gray_to_rgb(png_);
    }
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png_);
    passes_ = png_set_interlace_handling(png_);
    png_read_update_info(png_, info_);
    row_bytes_ = png_get_rowbytes(png_, info_);
    return true;
  }

  bool read_rows_impl(std::uint8_t* dst, std::size_t count) {
    if (setjmp(sink_.jump)) return false;
    for (std::size_t i = 0; i < count; ++i) png_read_row(png_, dst, nullptr);
    return true;
  }

  bool read_image_impl(png_bytepp rows) {
    if (setjmp(sink_.jump)) return false;
    png_read_image(png_, rows);
    return true;
  }

  std::string path_;
  std::FILE* fp_ = nullptr;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
  PngErrorSink sink_;
  std::int64_t width_ = 0;
  std::int64_t height_ = 0;
  int bit_depth_ = 0;
  int passes_ = 1;
  std::size_t row_bytes_ = 0;
};

class PngWriter {
 public:
  PngWriter() = default;
  PngWriter(const PngWriter&) = delete;
  PngWriter& operator=(const PngWriter&) = delete;
  ~PngWriter() {
    if (png_ != nullptr) png_destroy_write_struct(&png_, info_ != nullptr ? &info_ : nullptr);
    if (fp_ != nullptr) std::fclose(fp_);
  }

  void write(const Raster& raster, const std::string& path) {
    fp_ = std::fopen(path.c_str(), "wb");
    if (fp_ == nullptr) throw Error(ErrorCode::WriteFailed, "cannot open '" + path + "' for writing");
    png_ = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink_, on_png_error, on_png_warning);
    if (png_ != nullptr) info_ = png_create_info_struct(png_);
    if (png_ == nullptr || info_ == nullptr) {
      throw Error(ErrorCode::WriteFailed, "libpng initialisation failed");
    }
    if (!write_impl(raster)) {
      throw Error(ErrorCode::WriteFailed, "cannot encode '" + path + "': " + sink_.message);
    }
    if (std::fclose(fp_) != 0) {
      fp_ = nullptr;
      throw Error(ErrorCode::WriteFailed, "cannot flush '" + path + "'");
    }
    fp_ = nullptr;
  }

 private:
  bool write_impl(const Raster& raster) {
    if (setjmp(sink_.jump)) return false;
    png_init_io(png_, fp_);
    png_set_IHDR(png_, info_, static_cast<png_uint_32>(raster.width),
                 static_cast<png_uint_32>(raster.height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png_, 6);
    png_write_info(png_, info_);
    for (std::int64_t y = 0; y < raster.height; ++y) {
      png_write_row(png_, const_cast<png_bytep>(raster.pixel(0, y)));
    }
    png_write_end(png_, nullptr);
    return true;
  }

  std::FILE* fp_ = nullptr;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
  PngErrorSink sink_;
};

struct PpmHeader {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::streamoff data_offset = 0;
};

PpmHeader read_ppm_header(std::ifstream& in, const std::string& path) {
  const auto bad = [&](const std::string& why) {
    return Error(ErrorCode::Unreadable, "malformed PPM '" + path + "': " + why);
  };
  char p = 0, six = 0;
  in.get(p).get(six);
  if (p != 'P' || six != '6') throw bad("missing P6 magic");

  const auto next_int = [&]() -> std::int64_t {
    int ch = in.peek();
    while (ch != EOF) {
      if (ch == '#') {
        in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');
      } else if (std::isspace(ch)) {
        in.get();
      } else {
        break;
      }
      ch = in.peek();
    }
    std::int64_t v = -1;
    if (!(in >> v) || v <= 0) throw bad("bad header field");
    return v;
  };

  PpmHeader h;
  h.width = next_int();
  h.height = next_int();
  const std::int64_t maxval = next_int();
  if (maxval > 255) {
    throw Error(ErrorCode::UnsupportedDepth,
                "'" + path + "' has 16-bit samples (maxval " + std::to_string(maxval) +
                    "); only 8-bit RGB is supported");
  }
  if (!std::isspace(in.get())) throw bad("missing separator after maxval");
  h.data_offset = in.tellg();
  return h;
}

Raster read_ppm(const std::string& path, const TileSpec* window) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
  const PpmHeader h = read_ppm_header(in, path);
  const std::int64_t ox = window ? window->origin_x : 0;
  const std::int64_t oy = window ? window->origin_y : 0;
  const std::int64_t w = window ? window->width : h.width;
  const std::int64_t ht = window ? window->height : h.height;
  if (ox < 0 || oy < 0 || ox + w > h.width || oy + ht > h.height) {
    throw Error(ErrorCode::InvalidConfig, "tile window lies outside '" + path + "'");
  }
  Raster out(w, ht);
  const std::streamsize row_bytes = static_cast<std::streamsize>(w * Raster::kChannels);
  for (std::int64_t y = 0; y < ht; ++y) {
    const std::streamoff offset =
        h.data_offset + static_cast<std::streamoff>(((oy + y) * h.width + ox) * Raster::kChannels);
    in.seekg(offset);
    if (!in.read(reinterpret_cast<char*>(out.pixel(0, y)), row_bytes)) {
      throw Error(ErrorCode::Unreadable, "truncated PPM data in '" + path + "'");
    }
  }
  return out;
}

void write_ppm(const Raster& raster, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::WriteFailed, "cannot open '" + path + "' for writing");
  out << "P6\n" << raster.width << ' ' << raster.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(raster.data.data()),
            static_cast<std::streamsize>(raster.data.size()));
  if (!out) throw Error(ErrorCode::WriteFailed, "cannot write '" + path + "'");
}

std::string lower_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

double segment_distance(Point p, Point a, Point b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0.0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

}  // namespace

Raster::Raster(std::int64_t w, std::int64_t h, std::array<std::uint8_t, 3> fill)
    : width(w), height(h), data(static_cast<std::size_t>(w * h * kChannels)) {
  for (std::size_t i = 0; i < data.size(); i += kChannels) {
    std::copy(fill.begin(), fill.end(), data.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

Raster read_raster(const std::string& path) {
  if (sniff(path) == Container::Ppm) return read_ppm(path, nullptr);
  PngReader reader;
  reader.open(path);
  Raster out(reader.width(), reader.height());
  reader.read_image(out.data.data());
  return out;
}

Raster read_raster_window(const std::string& path, const TileSpec& tile) {
  if (sniff(path) == Container::Ppm) return read_ppm(path, &tile);
  PngReader reader;
  reader.open(path);
  if (tile.origin_x < 0 || tile.origin_y < 0 || tile.origin_x + tile.width > reader.width() ||
      tile.origin_y + tile.height > reader.height()) {
    throw Error(ErrorCode::InvalidConfig, "tile window lies outside '" + path + "'");
  }
  if (reader.interlaced()) {
    Raster full(reader.width(), reader.height());
    reader.read_image(full.data.data());
    return crop_tile(full, tile);
  }
  std::vector<std::uint8_t> row(static_cast<std::size_t>(reader.width() * Raster::kChannels));
  reader.read_rows(row.data(), static_cast<std::size_t>(tile.origin_y));
  Raster out(tile.width, tile.height);
  for (std::int64_t y = 0; y < tile.height; ++y) {
    reader.read_rows(row.data(), 1);
    std::memcpy(out.pixel(0, y), row.data() + tile.origin_x * Raster::kChannels,
                static_cast<std::size_t>(tile.width * Raster::kChannels));
  }
  return out;
}

RasterSize probe_raster(const std::string& path) {
  if (sniff(path) == Container::Ppm) {
    std::ifstream in(path, std::ios::binary);
    const PpmHeader h = read_ppm_header(in, path);
    return {h.width, h.height};
  }
  PngReader reader;
  reader.open(path);
  return {reader.width(), reader.height()};
}

void write_raster(const Raster& raster, const std::string& path) {
  if (raster.width <= 0 || raster.height <= 0 ||
      raster.data.size() != static_cast<std::size_t>(raster.width * raster.height * Raster::kChannels)) {
    throw Error(ErrorCode::WriteFailed, "raster dimensions do not match its sample buffer");
  }
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    PngWriter writer;
    writer.write(raster, path);
  } else if (ext == ".ppm" || ext == ".pnm") {
    write_ppm(raster, path);
  } else {
    throw Error(ErrorCode::UnsupportedFormat,
                "unsupported raster extension '" + ext + "' (use .png or .ppm)");
  }
}

Raster crop_tile(const Raster& raster, const TileSpec& tile) {
  if (tile.origin_x < 0 || tile.origin_y < 0 || tile.origin_x + tile.width > raster.width ||
      tile.origin_y + tile.height > raster.height) {
    throw Error(ErrorCode::InvalidConfig, "tile '" + tile.tile_id + "' lies outside the raster");
  }
  Raster out(tile.width, tile.height);
  const auto row_bytes = static_cast<std::size_t>(tile.width * Raster::kChannels);
  for (std::int64_t y = 0; y < tile.height; ++y) {
    std::memcpy(out.pixel(0, y), raster.pixel(tile.origin_x, tile.origin_y + y), row_bytes);
  }
  return out;
}

void paste_tile(Raster& canvas, const Raster& tile, const TileSpec& spec) {
  const auto row_bytes = static_cast<std::size_t>(tile.width * Raster::kChannels);
  for (std::int64_t y = 0; y < tile.height; ++y) {
    std::memcpy(canvas.pixel(spec.origin_x, spec.origin_y + y), tile.pixel(0, y), row_bytes);
  }
}

std::array<std::uint8_t, 3> score_color(double score, const OverlayStyle& style) {
  const double t = std::clamp(score, 0.0, 1.0);
  std::array<std::uint8_t, 3> c{};
  for (std::size_t k = 0; k < 3; ++k) {
    c[k] = static_cast<std::uint8_t>(
        std::lround(style.low_color[k] + t * (style.high_color[k] - style.low_color[k])));
  }
  return c;
}

Raster render_overlay(const Raster& raster, const std::vector<Detection>& dets,
                      const OverlayStyle& style) {
  Raster out = raster;
  const double half = style.stroke_px / 2.0;
  for (const auto& det : dets) {
    const auto color = score_color(det.score, style);
    const Quad q = to_vertices(det.box);
    for (std::size_t e = 0; e < 4; ++e) {
      const Point a = q.v[e];
      const Point b = q.v[(e + 1) % 4];
      const auto x0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(std::min(a.x, b.x) - half)));
      const auto x1 = std::min<std::int64_t>(out.width - 1, static_cast<std::int64_t>(std::ceil(std::max(a.x, b.x) + half)));
      const auto y0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(std::min(a.y, b.y) - half)));
      const auto y1 = std::min<std::int64_t>(out.height - 1, static_cast<std::int64_t>(std::ceil(std::max(a.y, b.y) + half)));
      for (std::int64_t y = y0; y <= y1; ++y) {
        for (std::int64_t x = x0; x <= x1; ++x) {
          const Point p{static_cast<double>(x), static_cast<double>(y)};
          if (segment_distance(p, a, b) <= half) std::copy(color.begin(), color.end(), out.pixel(x, y));
        }
      }
    }
  }
  return out;
}

void fill_box(Raster& raster, const RotatedBox& box, std::array<std::uint8_t, 3> color) {
  const auto b = bounds(box);
  const auto x0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(b.min_x)));
  const auto x1 = std::min<std::int64_t>(raster.width - 1, static_cast<std::int64_t>(std::floor(b.max_x)));
  const auto y0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(b.min_y)));
  const auto y1 = std::min<std::int64_t>(raster.height - 1, static_cast<std::int64_t>(std::floor(b.max_y)));
  for (std::int64_t y = y0; y <= y1; ++y) {
    for (std::int64_t x = x0; x <= x1; ++x) {
      if (contains(box, {static_cast<double>(x), static_cast<double>(y)})) {
        std::copy(color.begin(), color.end(), raster.pixel(x, y));
      }
    }
  }
}

}  // namespace solarmap
