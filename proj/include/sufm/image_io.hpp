#pragma once

#include <string>
#include <vector>

#include "sufm/types.hpp"

namespace sufm {

enum class ImageKind { Rgb, Depth, Label };

inline const char* to_string(ImageKind k) {
  switch (k) {
    case ImageKind::Rgb: return "rgb";
    case ImageKind::Depth: return "depth";
    default: return "label";
  }
}

/// Equirectangular raster. Pixel (row i, col j) is centered at
/// theta = 2*pi*(j+0.5)/W, phi = pi*(i+0.5)/H. Values are row-major HWC.
struct ErpImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  ImageKind kind = ImageKind::Rgb;
  std::vector<float> values;

  static ErpImage make(int w, int h, int c, ImageKind kind);

  float at(int i, int j, int c) const {
    return values[(std::size_t(i) * width + j) * channels + c];
  }
  float& at(int i, int j, int c) {
    return values[(std::size_t(i) * width + j) * channels + c];
  }

  /// Enforces the per-kind value invariants; throws on violation.
  void validate() const;
};

/// PNG: 8-bit, RGB for Rgb kind (values quantized to k/255), gray for Label.
ErpImage load_png(const std::string& path, ImageKind kind);
void save_png(const ErpImage& img, const std::string& path);

/// PFM ("Pf" header, 32-bit floats, negative scale = little-endian,
/// bottom-to-top scanlines). Lossless for Depth.
ErpImage load_pfm(const std::string& path);
void save_pfm(const ErpImage& img, const std::string& path);

/// Dispatch on extension (.png / .pfm).
ErpImage load_image(const std::string& path, ImageKind kind);
void save_image(const ErpImage& img, const std::string& path);

}  // namespace sufm
