// Placeholder media: flat page rasters as PNG and silent WAV clips.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eyesfree/docmodel.h"

namespace eyesfree {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, one byte per pixel

  GrayImage(int w, int h, std::uint8_t fill)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}
  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

std::string encode_png(const GrayImage& image);

// White page, region outlines, figures and tables filled gray.
GrayImage render_page(const Page& page, double scale);

// Box-filter downscale so the longest side is at most max_side.
GrayImage downscale(const GrayImage& image, int max_side);

// 8 kHz, 8-bit mono silence lasting duration_ms: 44 header bytes plus 8
// bytes per millisecond.
std::string placeholder_clip(std::int64_t duration_ms);

}  // namespace eyesfree
