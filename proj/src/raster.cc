#include "eyesfree/raster.h"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eyesfree {

namespace {

void put_u32_be(std::string& out, std::uint32_t v) {
  out += static_cast<char>(v >> 24);
  out += static_cast<char>(v >> 16);
  out += static_cast<char>(v >> 8);
  out += static_cast<char>(v);
}

void put_u32_le(std::string& out, std::uint32_t v) {
  out += static_cast<char>(v);
  out += static_cast<char>(v >> 8);
  out += static_cast<char>(v >> 16);
  out += static_cast<char>(v >> 24);
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
  put_u32_be(out, static_cast<std::uint32_t>(data.size()));
  std::string body = std::string(type, 4) + data;
  out += body;
  auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()),
                   static_cast<uInt>(body.size()));
  put_u32_be(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

std::string encode_png(const GrayImage& image) {
  std::string raw;
  raw.reserve(static_cast<std::size_t>(image.height) * (image.width + 1));
  for (int y = 0; y < image.height; ++y) {
    raw += '\0';  // filter: none
    raw.append(reinterpret_cast<const char*>(&image.pixels[static_cast<std::size_t>(y) * image.width]),
               image.width);
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::string packed(packed_size, '\0');
  if (compress2(reinterpret_cast<Bytef*>(packed.data()), &packed_size,
                reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                9) != Z_OK) {
    throw std::runtime_error("png: deflate failed");
  }
  packed.resize(packed_size);

  std::string out = "\x89PNG\r\n\x1a\n";
  std::string header;
  put_u32_be(header, static_cast<std::uint32_t>(image.width));
  put_u32_be(header, static_cast<std::uint32_t>(image.height));
  header += '\x08';  // bit depth
  header += '\x00';  // grayscale
  header += std::string(3, '\0');
  put_chunk(out, "IHDR", header);
  put_chunk(out, "IDAT", packed);
  put_chunk(out, "IEND", "");
  return out;
}

GrayImage render_page(const Page& page, double scale) {
  int w = std::max(1, static_cast<int>(std::lround(page.width * scale)));
  int h = std::max(1, static_cast<int>(std::lround(page.height * scale)));
  GrayImage image(w, h, 255);
  for (const Region& region : page.regions) {
    int x0 = std::clamp(static_cast<int>(std::floor(region.bbox.x * scale)), 0, w - 1);
    int y0 = std::clamp(static_cast<int>(std::floor(region.bbox.y * scale)), 0, h - 1);
    int x1 = std::clamp(static_cast<int>(std::ceil(region.bbox.right() * scale)) - 1, x0, w - 1);
    int y1 = std::clamp(static_cast<int>(std::ceil(region.bbox.bottom() * scale)) - 1, y0, h - 1);
    bool filled = region.kind == RegionKind::kFigure || region.kind == RegionKind::kTable;
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        bool edge = x == x0 || x == x1 || y == y0 || y == y1;
        if (edge) {
          image.at(x, y) = 96;
        } else if (filled) {
          image.at(x, y) = 208;
        }
      }
    }
  }
  return image;
}

GrayImage downscale(const GrayImage& image, int max_side) {
  int longest = std::max(image.width, image.height);
  if (longest <= max_side) return image;
  double f = static_cast<double>(max_side) / longest;
  int w = std::max(1, static_cast<int>(std::lround(image.width * f)));
  int h = std::max(1, static_cast<int>(std::lround(image.height * f)));
  GrayImage out(w, h, 255);
  for (int y = 0; y < h; ++y) {
    int sy0 = y * image.height / h;
    int sy1 = std::max(sy0 + 1, (y + 1) * image.height / h);
    for (int x = 0; x < w; ++x) {
      int sx0 = x * image.width / w;
      int sx1 = std::max(sx0 + 1, (x + 1) * image.width / w);
      unsigned sum = 0;
      for (int sy = sy0; sy < sy1; ++sy) {
        for (int sx = sx0; sx < sx1; ++sx) {
          sum += image.pixels[static_cast<std::size_t>(sy) * image.width + sx];
        }
      }
      out.at(x, y) = static_cast<std::uint8_t>(sum / ((sy1 - sy0) * (sx1 - sx0)));
    }
  }
  return out;
}

std::string placeholder_clip(std::int64_t duration_ms) {
  constexpr std::uint32_t kRate = 8000;
  auto samples = static_cast<std::uint32_t>(std::max<std::int64_t>(0, duration_ms) * kRate / 1000);
  std::string out = "RIFF";
  put_u32_le(out, 36 + samples);
  out += "WAVEfmt ";
  put_u32_le(out, 16);
  out += '\x01';
  out += '\0';  // PCM
  out += '\x01';
  out += '\0';  // mono
  put_u32_le(out, kRate);
  put_u32_le(out, kRate);  // byte rate
  out += '\x01';
  out += '\0';  // block align
  out += '\x08';
  out += '\0';  // bits per sample
  out += "data";
  put_u32_le(out, samples);
  out.append(samples, '\x80');
  return out;
}

}  // namespace eyesfree
