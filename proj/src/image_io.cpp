#include "sufm/image_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <png.h>

namespace sufm {

namespace {

float byteswap_f32(float v) {
  std::uint32_t u;
  std::memcpy(&u, &v, 4);
  u = ((u & 0xff000000u) >> 24) | ((u & 0x00ff0000u) >> 8) |
      ((u & 0x0000ff00u) << 8) | ((u & 0x000000ffu) << 24);
  std::memcpy(&v, &u, 4);
  return v;
}

constexpr bool kLittleEndian = std::endian::native == std::endian::little;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

ErpImage ErpImage::make(int w, int h, int c, ImageKind kind) {
  if (w <= 0 || h <= 0 || c <= 0)
    throw std::invalid_argument("image dimensions must be positive");
  ErpImage img;
  img.width = w;
  img.height = h;
  img.channels = c;
  img.kind = kind;
  img.values.assign(std::size_t(w) * h * c, 0.0f);
  return img;
}

void ErpImage::validate() const {
  if (width <= 0 || height <= 0 || channels <= 0)
    throw std::invalid_argument("zero-sized image");
  if (values.size() != std::size_t(width) * height * channels)
    throw std::invalid_argument("image buffer size mismatch");
  for (float v : values) {
    switch (kind) {
      case ImageKind::Rgb:
        if (!(v >= 0.0f && v <= 1.0f)) throw std::invalid_argument("rgb value outside [0,1]");
        break;
      case ImageKind::Depth:
        if (!(v >= 0.0f)) throw std::invalid_argument("negative depth value");
        break;
      case ImageKind::Label:
        if (!(v >= 0.0f) || v != std::floor(v))
          throw std::invalid_argument("label value is not a non-negative integer");
        break;
    }
  }
}

ErpImage load_png(const std::string& path, ImageKind kind) {
  if (kind == ImageKind::Depth)
    throw std::invalid_argument("depth images use PFM, not PNG: " + path);
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("not a valid PNG file: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_packing(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  png_read_update_info(png, info);

  const int w = int(png_get_image_width(png, info));
  const int h = int(png_get_image_height(png, info));
  const int ch = int(png_get_channels(png, info));

  const int want = kind == ImageKind::Rgb ? 3 : 1;
  if (ch != want) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(path + ": expected " + std::to_string(want) +
                             " channels for " + to_string(kind) + ", got " +
                             std::to_string(ch));
  }

  std::vector<png_byte> row(std::size_t(w) * ch);
  ErpImage img = ErpImage::make(w, h, ch, kind);
  for (int i = 0; i < h; ++i) {
    png_read_row(png, row.data(), nullptr);
    for (int j = 0; j < w; ++j)
      for (int c = 0; c < ch; ++c) {
        png_byte b = row[std::size_t(j) * ch + c];
        img.at(i, j, c) = kind == ImageKind::Rgb ? float(b) / 255.0f : float(b);
      }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void save_png(const ErpImage& img, const std::string& path) {
  if (img.kind == ImageKind::Depth)
    throw std::invalid_argument("depth images use PFM, not PNG");
  img.validate();
  const int ch = img.channels;
  if ((img.kind == ImageKind::Rgb && ch != 3) || (img.kind == ImageKind::Label && ch != 1))
    throw std::invalid_argument("unsupported channel count for PNG");

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("PNG write failed: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8,
               ch == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<png_byte> row(std::size_t(img.width) * ch);
  for (int i = 0; i < img.height; ++i) {
    for (int j = 0; j < img.width; ++j)
      for (int c = 0; c < ch; ++c) {
        float v = img.at(i, j, c);
        float q = img.kind == ImageKind::Rgb ? std::round(v * 255.0f) : v;
        if (q < 0.0f || q > 255.0f)
          throw std::invalid_argument("value does not fit 8-bit PNG");
        row[std::size_t(j) * ch + c] = png_byte(q);
      }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

ErpImage load_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "Pf" && magic != "PF")
    throw std::runtime_error(path + ": not a PFM file");
  const int ch = magic == "PF" ? 3 : 1;
  int w = 0, h = 0;
  double scale = 0;
  in >> w >> h >> scale;
  in.get();  // single whitespace after the header
  if (w <= 0 || h <= 0 || scale == 0) throw std::runtime_error(path + ": bad PFM header");

  ErpImage img = ErpImage::make(w, h, ch, ch == 1 ? ImageKind::Depth : ImageKind::Rgb);
  std::vector<float> row(std::size_t(w) * ch);
  const bool swap = (scale < 0) != kLittleEndian;
  // PFM scanlines run bottom to top.
  for (int i = h - 1; i >= 0; --i) {
    in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * 4));
    if (!in) throw std::runtime_error(path + ": truncated PFM data");
    for (int j = 0; j < w; ++j)
      for (int c = 0; c < ch; ++c) {
        float v = row[std::size_t(j) * ch + c];
        img.at(i, j, c) = swap ? byteswap_f32(v) : v;
      }
  }
  return img;
}

void save_pfm(const ErpImage& img, const std::string& path) {
  if (img.channels != 1 && img.channels != 3)
    throw std::invalid_argument("PFM supports 1 or 3 channels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << (img.channels == 3 ? "PF" : "Pf") << "\n"
      << img.width << " " << img.height << "\n"
      << "-1.0\n";  // negative scale: little-endian payload
  std::vector<float> row(std::size_t(img.width) * img.channels);
  for (int i = img.height - 1; i >= 0; --i) {
    for (int j = 0; j < img.width; ++j)
      for (int c = 0; c < img.channels; ++c) {
        float v = img.at(i, j, c);
        row[std::size_t(j) * img.channels + c] = kLittleEndian ? v : byteswap_f32(v);
      }
    out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size() * 4));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {
bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

ErpImage load_image(const std::string& path, ImageKind kind) {
  if (ends_with(path, ".png")) return load_png(path, kind);
  if (ends_with(path, ".pfm")) {
    if (kind != ImageKind::Depth)
      throw std::invalid_argument("PFM input is only supported for depth");
    return load_pfm(path);
  }
  throw std::invalid_argument("unsupported image format: " + path);
}

void save_image(const ErpImage& img, const std::string& path) {
  if (ends_with(path, ".png")) return save_png(img, path);
  if (ends_with(path, ".pfm")) return save_pfm(img, path);
  throw std::invalid_argument("unsupported image format: " + path);
}

}  // namespace sufm
