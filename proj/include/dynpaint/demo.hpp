#pragma once

#include <filesystem>

#include "dynpaint/image.hpp"

namespace dynpaint::demo {

enum class DemoKind {
  glass_ball,  // hemisphere normal map, transparent disc, grid background
  relief,      // depth-map relief with cos-theta shadows
};

/// Writes the demo's images and a `scene.json` into dir; returns the scene
/// file path.
std::filesystem::path write_demo_scene(const std::filesystem::path& dir, DemoKind kind,
                                       int size = 256);

// Procedural fixtures shared by the demos and the tests.
Image checker(int width, int height, int cell, const Color& a, const Color& b);
Image grid_lines(int width, int height, int spacing, const Color& paper, const Color& ink);
Image vertical_gradient(int width, int height, const Color& top, const Color& bottom);
Image disc_mask(int size, double radius);
/// Sum of smooth bumps, normalized to [0, 1]; shaped like a standing figure.
Image relief_depth(int size);

}  // namespace dynpaint::demo
