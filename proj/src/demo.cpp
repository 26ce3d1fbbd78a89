#include "dynpaint/demo.hpp"

#include <cmath>
#include <fstream>

#include "dynpaint/scene_io.hpp"
#include "dynpaint/shape.hpp"

namespace dynpaint::demo {

Image checker(int width, int height, int cell, const Color& a, const Color& b) {
  Image img(width, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) img.set_color(x, y, ((x / cell + y / cell) % 2) ? b : a);
  return img;
}

Image grid_lines(int width, int height, int spacing, const Color& paper, const Color& ink) {
  Image img(width, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const bool line = x % spacing == 0 || y % spacing == 0;
      img.set_color(x, y, line ? ink : paper);
    }
  return img;
}

Image vertical_gradient(int width, int height, const Color& top, const Color& bottom) {
  Image img(width, height, 3);
  for (int y = 0; y < height; ++y) {
    const float t = height > 1 ? float(y) / float(height - 1) : 0.f;
    const Color c = top * (1.f - t) + bottom * t;
    for (int x = 0; x < width; ++x) img.set_color(x, y, c);
  }
  return img;
}

Image disc_mask(int size, double radius) {
  Image img(size, size, 1);
  const double c = size / 2.0;
  const double r = radius * size / 2.0;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double dx = x + 0.5 - c;
      const double dy = y + 0.5 - c;
      img(x, y) = dx * dx + dy * dy < r * r ? 1.f : 0.f;
    }
  return img;
}

Image relief_depth(int size) {
  struct Bump {
    double cx, cy, sx, sy, amp;
  };
  // Head, torso, hips and two legs of a figure standing in the frame.
  const Bump bumps[] = {
      {0.50, 0.18, 0.07, 0.07, 0.9}, {0.50, 0.40, 0.13, 0.16, 1.0},
      {0.50, 0.60, 0.12, 0.08, 0.8}, {0.43, 0.80, 0.05, 0.14, 0.7},
      {0.57, 0.80, 0.05, 0.14, 0.7},
  };
  Image img(size, size, 1);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double u = (x + 0.5) / size;
      const double v = (y + 0.5) / size;
      double h = 0.0;
      for (const Bump& b : bumps) {
        const double ex = (u - b.cx) / b.sx;
        const double ey = (v - b.cy) / b.sy;
        h += b.amp * std::exp(-0.5 * (ex * ex + ey * ey));
      }
      img(x, y) = float(h);
    }
  const float peak = img.samples().maxCoeff();
  img.samples() /= peak;
  return img;
}

namespace {

SceneDoc glass_ball_doc(const std::filesystem::path& dir, int size) {
  const Image mask = disc_mask(size, 0.8);
  const int cell = std::max(1, size / 16);
  Image i0 = checker(size, size, cell, Color(0.12f, 0.14f, 0.22f), Color(0.16f, 0.18f, 0.28f));
  Image i1 = checker(size, size, cell, Color(0.78f, 0.80f, 0.88f), Color(0.86f, 0.88f, 0.94f));
  // Global compositing adds the glass color on top of the diffuse base, so
  // the ball's own diffuse paint stays dark.
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const float keep = 1.f - 0.9f * mask(x, y);
      i0.set_color(x, y, i0.color(x, y) * keep);
      i1.set_color(x, y, i1.color(x, y) * keep);
    }
  save_image(procedural_hemisphere(size, 0.8), dir / "shape.ppm");
  save_image(i0, dir / "i0.ppm");
  save_image(i1, dir / "i1.ppm");
  save_image(vertical_gradient(size, size, Color(1.f, 1.f, 1.f), Color(0.35f, 0.55f, 0.85f)),
             dir / "env.ppm");
  save_image(grid_lines(size, size, std::max(2, size / 12), Color(0.95f, 0.92f, 0.80f),
                        Color(0.15f, 0.10f, 0.05f)),
             dir / "bg.ppm");
  save_image(mask, dir / "ks.pgm");

  SceneDoc doc;
  doc.shape = "shape.ppm";
  doc.i0 = "i0.ppm";
  doc.i1 = "i1.ppm";
  doc.env = "env.ppm";
  doc.bg = "bg.ppm";
  doc.ks = "ks.pgm";
  doc.lights = {LightSpec::directional(Vec3(0.5, -0.5, 0.7071067811865476).normalized())};
  doc.params.diffuse_ramp = {-0.2, 1.0, StepType::smooth};
  doc.params.env_blur = 1.0;
  return doc;
}

SceneDoc relief_doc(const std::filesystem::path& dir, int size) {
  save_image(relief_depth(size), dir / "depth.pgm");
  save_image(Image(size, size, 3, 0.f), dir / "i0.ppm");
  Image i1(size, size, 3);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) i1.set_color(x, y, Color(0.95f, 0.88f, 0.74f));
  save_image(i1, dir / "i1.ppm");
  save_image(Image(8, 8, 3, 0.5f), dir / "env.ppm");
  save_image(Image(8, 8, 3, 0.5f), dir / "bg.ppm");

  SceneDoc doc;
  doc.shape = "depth.pgm";
  doc.shape_kind = ShapeKind::depth_map;
  doc.height_scale = 0.1;
  doc.i0 = "i0.ppm";
  doc.i1 = "i1.ppm";
  doc.env = "env.ppm";
  doc.bg = "bg.ppm";
  doc.lights = {LightSpec::directional(Vec3(0.0, 0.0, 1.0))};
  doc.params.shadow_enabled = true;
  doc.params.shadow = {0.02, 0.0025, 256, {}};
  return doc;
}

}  // namespace

std::filesystem::path write_demo_scene(const std::filesystem::path& dir, DemoKind kind, int size) {
  if (size < 8) throw Error("demo size must be at least 8");
  std::filesystem::create_directories(dir);
  const SceneDoc doc =
      kind == DemoKind::glass_ball ? glass_ball_doc(dir, size) : relief_doc(dir, size);
  const std::filesystem::path scene = dir / "scene.json";
  std::ofstream out(scene, std::ios::binary);
  out << serialize_scene(doc) << '\n';
  if (!out) throw Error("cannot write " + scene.string());
  return scene;
}

}  // namespace dynpaint::demo
