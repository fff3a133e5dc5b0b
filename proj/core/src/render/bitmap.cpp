#include "mocr/render/bitmap.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <png.h>

#include "mocr/common/error.hpp"

namespace mocr::render {

Bitmap Bitmap::make(std::size_t width, std::size_t height, std::uint8_t r, std::uint8_t g,
                    std::uint8_t b, std::uint8_t a) {
  if (width < 1 || height < 1) throw std::invalid_argument("Bitmap: dimensions must be >= 1");
  Bitmap bitmap;
  bitmap.width = width;
  bitmap.height = height;
  bitmap.samples.resize(width * height * 4);
  for (std::size_t i = 0; i < bitmap.samples.size(); i += 4) {
    bitmap.samples[i] = r;
    bitmap.samples[i + 1] = g;
    bitmap.samples[i + 2] = b;
    bitmap.samples[i + 3] = a;
  }
  return bitmap;
}

double luminance_over_white(const std::uint8_t* rgba) {
  const double alpha = rgba[3] / 255.0;
  const double r = rgba[0] * alpha + 255.0 * (1.0 - alpha);
  const double g = rgba[1] * alpha + 255.0 * (1.0 - alpha);
  const double b = rgba[2] * alpha + 255.0 * (1.0 - alpha);
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

namespace {

struct PngWriteSink {
  std::vector<std::uint8_t> bytes;
};

void write_callback(png_structp png, png_bytep data, png_size_t length) {
  auto* sink = static_cast<PngWriteSink*>(png_get_io_ptr(png));
  sink->bytes.insert(sink->bytes.end(), data, data + length);
}

void flush_callback(png_structp) {}

struct PngReadSource {
  std::span<const std::uint8_t> data;
  std::size_t offset = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t length) {
  auto* source = static_cast<PngReadSource*>(png_get_io_ptr(png));
  if (source->offset + length > source->data.size())
    png_error(png, "unexpected end of PNG data");
  std::memcpy(out, source->data.data() + source->offset, length);
  source->offset += length;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Bitmap& bitmap) {
  if (!bitmap.valid()) throw std::invalid_argument("encode_png: invalid bitmap");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  PngWriteSink sink;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failed");
  }
  png_set_write_fn(png, &sink, write_callback, flush_callback);
  png_set_IHDR(png, info, static_cast<png_uint_32>(bitmap.width),
               static_cast<png_uint_32>(bitmap.height), 8, PNG_COLOR_TYPE_RGBA,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < bitmap.height; ++y)
    png_write_row(png, const_cast<png_bytep>(bitmap.pixel(0, y)));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return std::move(sink.bytes);
}

Bitmap decode_png(std::span<const std::uint8_t> data) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  PngReadSource source{data};
  Bitmap bitmap;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw TextParseError("malformed PNG data");
  }
  png_set_read_fn(png, &source, read_callback);
  png_read_info(png, info);

  // Normalize every color type to 8-bit RGBA.
  png_set_expand(png);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  const png_byte color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_filler(png, 0xff, PNG_FILLER_AFTER);
  png_read_update_info(png, info);

  bitmap.width = png_get_image_width(png, info);
  bitmap.height = png_get_image_height(png, info);
  if (bitmap.width < 1 || bitmap.height < 1) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw TextParseError("PNG has degenerate dimensions");
  }
  bitmap.samples.resize(bitmap.width * bitmap.height * 4);
  for (std::size_t y = 0; y < bitmap.height; ++y) png_read_row(png, bitmap.pixel(0, y), nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return bitmap;
}

void write_png(const Bitmap& bitmap, const std::string& path) {
  const std::vector<std::uint8_t> bytes = encode_png(bitmap);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("failed writing: " + path);
}

Bitmap read_png(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace mocr::render
