#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "dynpaint/compositor.hpp"

namespace dynpaint::test {

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dynpaint_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Image random_image(int w, int h, int channels, unsigned seed) {
  Image img(w, h, channels);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> u(0.f, 1.f);
  for (auto& v : img.samples()) v = u(rng);
  return img;
}

inline ShapeField flat_shape(int w, int h) {
  return ShapeField(w, h, ShapeKind::normal_map, ShapeField::Normals::Zero(3, Eigen::Index(w) * h).colwise() +
                                                     Vec3::UnitZ());
}

/// Uniformly random unit vector with z > 0.
inline Vec3 random_upper_unit(std::mt19937& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    Vec3 v(g(rng), g(rng), g(rng));
    if (v.norm() < 1e-9) continue;
    v.normalize();
    if (v.z() > 1e-3) return v;
    if (v.z() < -1e-3) return Vec3(v.x(), v.y(), -v.z());
  }
}

}  // namespace dynpaint::test
