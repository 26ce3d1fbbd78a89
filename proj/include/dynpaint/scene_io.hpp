#pragma once

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynpaint/compositor.hpp"

namespace dynpaint {

/// A parsed scene document: image references, lights, and the fully
/// defaulted shading parameters.
struct SceneDoc {
  std::string shape;
  ShapeKind shape_kind = ShapeKind::normal_map;
  double height_scale = 0.1;
  GradientSign gradient_sign = GradientSign::uphill;
  std::string i0;
  std::string i1;
  std::string env;
  std::string bg;
  std::optional<std::string> ks;
  std::optional<std::string> spec_color;
  std::vector<LightSpec> lights;
  ShadeParams params;

  friend bool operator==(const SceneDoc&, const SceneDoc&) = default;
};

/// Image keys in document order; the first five are required.
inline constexpr std::string_view kImageKeys[] = {"shape", "i0", "i1", "env", "bg", "ks",
                                                  "spec_color"};

SceneDoc parse_scene(std::string_view text);
SceneDoc scene_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SceneDoc& doc);
std::string serialize_scene(const SceneDoc& doc);

/// Sets the value at a dotted key path ("params.optics.mu", "lights.0.color")
/// in a fully defaulted document. The value text is read as JSON when it
/// parses, otherwise as a string. Unknown paths throw UnknownKeyError.
void apply_override(nlohmann::json& doc, std::string_view path, std::string_view value);

/// "key=value" assignments applied in order, as if the file had been edited.
SceneDoc apply_overrides(const SceneDoc& doc, std::span<const std::string> assignments);

/// Splits "key=value"; throws SceneError when there is no '='.
std::pair<std::string, std::string> split_assignment(std::string_view assignment);

struct LoadedScene {
  Scene scene;
  std::vector<LightSpec> lights;
  ShadeParams params;
};

/// Supplies the image for a document key ("shape", "i0", ...) and its path.
using ImageResolver = std::function<Image(const std::string& key, const std::string& path)>;

LoadedScene load_scene(const SceneDoc& doc, const ImageResolver& resolve);

/// Resolves relative image paths against base_dir.
LoadedScene load_scene(const SceneDoc& doc, const std::filesystem::path& base_dir);

/// Reads and loads a scene file; image paths are relative to the file.
LoadedScene load_scene_file(const std::filesystem::path& path,
                            std::span<const std::string> overrides = {});

/// True when two documents bind the same images the same way, so a loaded
/// Scene for one serves the other.
bool same_image_bindings(const SceneDoc& a, const SceneDoc& b);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace dynpaint
