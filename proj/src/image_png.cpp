#include <png.h>

#include <cstring>
#include <vector>

#include "dynpaint/image.hpp"

namespace dynpaint {

Image decode_png(std::string_view bytes) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
    throw ImageError(std::string("unreadable PNG: ") + png.message);

  const bool gray = (png.format & PNG_FORMAT_FLAG_COLOR) == 0;
  png.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (png.width == 0 || png.height == 0) {
    png_image_free(&png);
    throw ImageError("zero-dimension image");
  }
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = png.message;
    png_image_free(&png);
    throw ImageError("unreadable PNG: " + message);
  }
  Image img(int(png.width), int(png.height), gray ? 1 : 3);
  auto& data = img.samples();
  for (Eigen::Index i = 0; i < data.size(); ++i) data[i] = float(buffer[std::size_t(i)]) / 255.f;
  return img;
}

std::string encode_png(const Image& img) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = png_uint_32(img.width());
  png.height = png_uint_32(img.height());
  png.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  const auto& data = img.samples();
  std::vector<png_byte> pixels(std::size_t(data.size()));
  for (Eigen::Index i = 0; i < data.size(); ++i) pixels[std::size_t(i)] = quantize(data[i]);

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, pixels.data(), 0, nullptr))
    throw ImageError(std::string("PNG encode failed: ") + png.message);
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, pixels.data(), 0, nullptr))
    throw ImageError(std::string("PNG encode failed: ") + png.message);
  out.resize(size);
  return out;
}

}  // namespace dynpaint
