#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dynpaint/error.hpp"

namespace dynpaint {

template <typename Scalar>
using Color3 = Eigen::Array<Scalar, 3, 1>;

/// Rectangular grid of 1- or 3-channel samples, stored row-major and
/// interleaved. Loaded and saved images hold values in [0,1]; intermediate
/// buffers may leave that range until a final clamp.
template <typename Scalar>
class ImageT {
 public:
  using Samples = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  ImageT() = default;

  ImageT(int width, int height, int channels, Scalar fill = Scalar(0))
      : width_(width), height_(height), channels_(channels) {
    check_shape();
    data_ = Samples::Constant(Eigen::Index(width) * height * channels, fill);
  }

  ImageT(int width, int height, int channels, Samples data)
      : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    check_shape();
    if (data_.size() != Eigen::Index(width) * height * channels)
      throw ImageError("image data length does not match width x height x channels");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  Eigen::Index pixel_count() const { return Eigen::Index(width_) * height_; }
  bool empty() const { return data_.size() == 0; }

  const Samples& samples() const { return data_; }
  Samples& samples() { return data_; }

  Eigen::Index index(int x, int y, int c = 0) const {
    return (Eigen::Index(y) * width_ + x) * channels_ + c;
  }

  Scalar& operator()(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  Scalar operator()(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  // Gray images replicate their single channel.
  Color3<Scalar> color(int x, int y) const {
    const Eigen::Index i = index(x, y);
    if (channels_ == 1) return Color3<Scalar>::Constant(data_[i]);
    return Color3<Scalar>(data_[i], data_[i + 1], data_[i + 2]);
  }

  void set_color(int x, int y, const Color3<Scalar>& c) {
    const Eigen::Index i = index(x, y);
    if (channels_ == 1) {
      data_[i] = (c[0] == c[1] && c[1] == c[2]) ? c[0] : c.mean();
    } else {
      data_[i] = c[0];
      data_[i + 1] = c[1];
      data_[i + 2] = c[2];
    }
  }

  bool same_size(const ImageT& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const ImageT& a, const ImageT& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.channels_ == b.channels_ &&
           (a.data_ == b.data_).all();
  }

 private:
  void check_shape() const {
    if (width_ < 1 || height_ < 1) throw ImageError("image dimensions must be at least 1x1");
    if (channels_ != 1 && channels_ != 3) throw ImageError("image must have 1 or 3 channels");
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  Samples data_;
};

using Image = ImageT<float>;
using Color = Color3<float>;

/// Round-half-up quantization to a byte; input is clamped to [0,1] first.
inline std::uint8_t quantize(float v) {
  const float c = v < 0.f ? 0.f : (v > 1.f ? 1.f : v);
  return static_cast<std::uint8_t>(std::floor(c * 255.f + 0.5f));
}

Image load_image(const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path);

// In-memory codecs. decode_image sniffs the magic bytes (P5/P6/PNG).
Image decode_image(std::string_view bytes);
std::string encode_pnm(const Image& img);
std::string encode_png(const Image& img);
Image decode_pnm(std::string_view bytes);
Image decode_png(std::string_view bytes);

/// Bilinear sample in pixel-index coordinates: (i, j) lands exactly on
/// pixel (i, j). Coordinates and neighbours wrap modulo the image size.
template <typename Scalar>
Color3<Scalar> sample_wrapped(const ImageT<Scalar>& img, double x, double y) {
  const int w = img.width();
  const int h = img.height();
  double fx = std::fmod(x, double(w));
  double fy = std::fmod(y, double(h));
  if (fx < 0) fx += w;
  if (fy < 0) fy += h;
  // fmod of a value just below zero can round back up to w.
  if (fx >= w) fx -= w;
  if (fy >= h) fy -= h;
  const int x0 = int(std::floor(fx));
  const int y0 = int(std::floor(fy));
  const Scalar tx = Scalar(fx - x0);
  const Scalar ty = Scalar(fy - y0);
  const int x1 = x0 + 1 == w ? 0 : x0 + 1;
  const int y1 = y0 + 1 == h ? 0 : y0 + 1;
  const Color3<Scalar> top = img.color(x0, y0) * (Scalar(1) - tx) + img.color(x1, y0) * tx;
  const Color3<Scalar> bottom = img.color(x0, y1) * (Scalar(1) - tx) + img.color(x1, y1) * tx;
  return top * (Scalar(1) - ty) + bottom * ty;
}

/// Separable Gaussian blur, radius ceil(3 sigma), wrapped boundary.
/// sigma == 0 returns the input unchanged.
Image gaussian_blur(const Image& img, double sigma);

// Channel conversions used when binding scene images.
Image to_rgb(const Image& img);
Image to_gray(const Image& img);

Image clamp01(Image img);

}  // namespace dynpaint
