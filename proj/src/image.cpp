#include "dynpaint/image.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dynpaint {
namespace {

bool has_png_magic(std::string_view bytes) {
  static constexpr unsigned char magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::equal(bytes.begin(), bytes.begin() + 8,
                                         reinterpret_cast<const char*>(magic));
}

// Reads one ASCII header integer, skipping whitespace and '#' comments.
int read_header_int(std::string_view bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
    throw ImageError("unreadable PNM header");
  long value = 0;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > (1 << 24)) throw ImageError("unreadable PNM header: value too large");
    ++pos;
  }
  return int(value);
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return ext;
}

}  // namespace

Image decode_pnm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    throw ImageError("unsupported format: expected binary PGM (P5) or PPM (P6)");
  const int channels = bytes[1] == '6' ? 3 : 1;
  std::size_t pos = 2;
  const int width = read_header_int(bytes, pos);
  const int height = read_header_int(bytes, pos);
  const int maxval = read_header_int(bytes, pos);
  if (width < 1 || height < 1) throw ImageError("zero-dimension image");
  if (maxval < 1 || maxval > 255) throw ImageError("unsupported format: maxval must be 1..255");
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw ImageError("unreadable PNM header");
  ++pos;
  const std::size_t count = std::size_t(width) * height * channels;
  if (bytes.size() - pos < count) throw ImageError("unreadable: truncated pixel data");
  Image img(width, height, channels);
  auto& data = img.samples();
  // Divide rather than multiply by 1/maxval so results are correctly rounded.
  const float denom = float(maxval);
  for (std::size_t i = 0; i < count; ++i)
    data[Eigen::Index(i)] = float(static_cast<unsigned char>(bytes[pos + i])) / denom;
  return img;
}

std::string encode_pnm(const Image& img) {
  std::ostringstream header;
  header << (img.channels() == 3 ? "P6" : "P5") << '\n'
         << img.width() << ' ' << img.height() << "\n255\n";
  std::string out = header.str();
  const auto& data = img.samples();
  out.reserve(out.size() + std::size_t(data.size()));
  for (Eigen::Index i = 0; i < data.size(); ++i) out.push_back(char(quantize(data[i])));
  return out;
}

Image decode_image(std::string_view bytes) {
  if (has_png_magic(bytes)) return decode_png(bytes);
  return decode_pnm(bytes);
}

Image load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError("unreadable file: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw ImageError("unreadable file: " + path.string());
  try {
    return decode_image(bytes);
  } catch (const ImageError& e) {
    throw ImageError(path.string() + ": " + e.what());
  }
}

void save_image(const Image& img, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext != ".png" && ext != ".ppm" && ext != ".pgm" && ext != ".pnm")
    throw ImageError("unsupported output format \"" + ext + "\" (png, ppm, pgm or pnm)");
  const std::string bytes = ext == ".png" ? encode_png(img) : encode_pnm(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ImageError("unwritable path: " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw ImageError("unwritable path: " + path.string());
}

Image gaussian_blur(const Image& img, double sigma) {
  if (sigma < 0) throw ImageError("blur sigma must be non-negative");
  if (sigma == 0) return img;

  const int radius = int(std::ceil(3.0 * sigma));
  std::vector<double> kernel(std::size_t(2 * radius + 1));
  double sum = 0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-double(k) * k / (2.0 * sigma * sigma));
    kernel[std::size_t(k + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;

  const int width = img.width();
  const int height = img.height();
  const int channels = img.channels();
  auto wrap = [](int i, int n) { return ((i % n) + n) % n; };

  Image tmp(width, height, channels);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c) {
        double acc = 0;
        for (int k = -radius; k <= radius; ++k)
          acc += kernel[std::size_t(k + radius)] * img(wrap(x + k, width), y, c);
        tmp(x, y, c) = float(acc);
      }

  Image out(width, height, channels);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c) {
        double acc = 0;
        for (int k = -radius; k <= radius; ++k)
          acc += kernel[std::size_t(k + radius)] * tmp(x, wrap(y + k, height), c);
        out(x, y, c) = float(acc);
      }
  return out;
}

Image to_rgb(const Image& img) {
  if (img.channels() == 3) return img;
  Image out(img.width(), img.height(), 3);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < 3; ++c) out(x, y, c) = img(x, y);
  return out;
}

Image to_gray(const Image& img) {
  if (img.channels() == 1) return img;
  Image out(img.width(), img.height(), 1);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out(x, y) = (img(x, y, 0) + img(x, y, 1) + img(x, y, 2)) / 3.f;
  return out;
}

Image clamp01(Image img) {
  img.samples() = img.samples().max(0.f).min(1.f);
  return img;
}

}  // namespace dynpaint
