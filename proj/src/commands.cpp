#include "dynpaint/commands.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <optional>
#include <sstream>

namespace dynpaint {
namespace {

SceneDoc read_document(const std::filesystem::path& scene_file, const CommandOptions& options) {
  return apply_overrides(parse_scene(read_text_file(scene_file)), options.overrides);
}

// Loads images once and reloads only when a document rebinds them.
class FrameRenderer {
 public:
  FrameRenderer(std::filesystem::path base_dir, int threads)
      : base_dir_(std::move(base_dir)), threads_(threads) {}

  Image render(const SceneDoc& doc) {
    if (!loaded_ || !same_image_bindings(doc, bound_)) {
      loaded_ = load_scene(doc, base_dir_);
      bound_ = doc;
    }
    return dynpaint::render(loaded_->scene, doc.lights, doc.params, {threads_});
  }

 private:
  std::filesystem::path base_dir_;
  int threads_;
  std::optional<LoadedScene> loaded_;
  SceneDoc bound_;
};

std::filesystem::path frame_path(const std::filesystem::path& dir, int index, const std::string& ext) {
  return dir / frame_name(index, ext);
}

void check_ext(const std::string& ext) {
  if (ext != "png" && ext != "ppm" && ext != "pgm")
    throw Error("unsupported frame extension \"" + ext + "\" (png, ppm or pgm)");
}

Vec3 parse_triple(const std::string& text) {
  std::istringstream in(text);
  Vec3 v;
  char comma = 0;
  if (!(in >> v.x() >> comma) || comma != ',' || !(in >> v.y() >> comma) || comma != ',' ||
      !(in >> v.z()))
    throw Error("expected x,y,z but got \"" + text + "\"");
  in >> std::ws;
  if (!in.eof()) throw Error("expected x,y,z but got \"" + text + "\"");
  return v;
}

}  // namespace

std::string frame_name(int index, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05d.", index);
  return buf + ext;
}

Image render_document(const SceneDoc& doc, const std::filesystem::path& base_dir, int threads) {
  const LoadedScene loaded = load_scene(doc, base_dir);
  return render(loaded.scene, loaded.lights, loaded.params, {threads});
}

void cmd_render(const std::filesystem::path& scene_file, const std::filesystem::path& out_path,
                const CommandOptions& options) {
  std::string ext = out_path.extension().string();
  if (!ext.empty()) ext.erase(0, 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  check_ext(ext);
  const SceneDoc doc = read_document(scene_file, options);
  save_image(render_document(doc, scene_file.parent_path(), options.threads), out_path);
}

LightSpec interpolate_light_path(std::span<const LightSpec> keyframes, double u) {
  if (keyframes.empty()) throw Error("a light path needs at least one keyframe");
  for (const LightSpec& k : keyframes)
    if (k.kind != keyframes.front().kind) throw Error("light path keyframes must share one kind");
  if (keyframes.size() == 1) return keyframes.front();

  const double scaled = std::clamp(u, 0.0, 1.0) * double(keyframes.size() - 1);
  const std::size_t seg = std::min(std::size_t(scaled), keyframes.size() - 2);
  const double t = scaled - double(seg);
  const LightSpec& a = keyframes[seg];
  const LightSpec& b = keyframes[seg + 1];

  LightSpec out = a;
  out.color = a.color * (1.0 - t) + b.color * t;
  if (a.kind == LightKind::point) {
    out.position = a.position * (1.0 - t) + b.position * t;
  } else if (t == 1.0) {
    out.direction = b.direction;
  } else if (t > 0.0) {
    const Eigen::Quaterniond full = Eigen::Quaterniond::FromTwoVectors(a.direction, b.direction);
    out.direction = (Eigen::Quaterniond::Identity().slerp(t, full) * a.direction).normalized();
  }
  return out;
}

std::vector<std::filesystem::path> cmd_animate(const std::filesystem::path& scene_file,
                                               const std::filesystem::path& out_dir,
                                               std::span<const LightSpec> keyframes, int frames,
                                               const CommandOptions& options) {
  if (frames < 2) throw Error("animate needs at least 2 frames");
  check_ext(options.ext);
  const SceneDoc base = read_document(scene_file, options);
  std::filesystem::create_directories(out_dir);
  FrameRenderer renderer(scene_file.parent_path(), options.threads);

  std::vector<std::filesystem::path> written;
  for (int f = 0; f < frames; ++f) {
    SceneDoc doc = base;
    LightSpec light = interpolate_light_path(keyframes, double(f) / double(frames - 1));
    light.color = base.lights.front().color;
    doc.lights.front() = light;
    const std::filesystem::path path = frame_path(out_dir, f, options.ext);
    save_image(renderer.render(doc), path);
    written.push_back(path);
  }
  return written;
}

std::vector<std::filesystem::path> cmd_sweep(const std::filesystem::path& scene_file,
                                             const std::filesystem::path& out_dir,
                                             const std::string& key,
                                             std::span<const std::string> values,
                                             const CommandOptions& options) {
  if (values.empty()) throw Error("sweep needs at least one value");
  check_ext(options.ext);
  const nlohmann::json base = to_json(read_document(scene_file, options));
  // Validate every value before writing anything.
  std::vector<SceneDoc> docs;
  for (const std::string& value : values) {
    nlohmann::json edited = base;
    apply_override(edited, key, value);
    docs.push_back(scene_from_json(edited));
  }
  std::filesystem::create_directories(out_dir);
  FrameRenderer renderer(scene_file.parent_path(), options.threads);
  std::vector<std::filesystem::path> written;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::filesystem::path path = frame_path(out_dir, int(i), options.ext);
    save_image(renderer.render(docs[i]), path);
    written.push_back(path);
  }
  return written;
}

LightSpec parse_light_arg(const std::string& text) {
  constexpr std::string_view kPoint = "point:";
  if (text.rfind(kPoint, 0) == 0) return LightSpec::point(parse_triple(text.substr(kPoint.size())));
  std::string body = text;
  if (body.rfind("dir:", 0) == 0) body = body.substr(4);
  const Vec3 dir = parse_triple(body);
  if (dir.norm() < 1e-12) throw Error("light direction must be non-zero");
  return LightSpec::directional(dir);
}

}  // namespace dynpaint
