#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dynpaint/scene_io.hpp"

namespace dynpaint {

struct CommandOptions {
  std::vector<std::string> overrides;  // "key=value", applied before anything else
  int threads = 1;
  std::string ext = "png";  // frame extension for animate and sweep
};

/// Zero-padded frame file name, e.g. frame_00003.png.
std::string frame_name(int index, const std::string& ext);

/// Renders a document whose relative image paths resolve against base_dir.
Image render_document(const SceneDoc& doc, const std::filesystem::path& base_dir, int threads = 1);

/// One frame of the scene file, written to out_path (format from extension).
void cmd_render(const std::filesystem::path& scene_file, const std::filesystem::path& out_path,
                const CommandOptions& options = {});

/// Light i of the keyframed path at parameter u in [0, 1]. Directions are
/// slerped and positions lerped, piecewise between consecutive keyframes.
/// Every keyframe must have the same kind.
LightSpec interpolate_light_path(std::span<const LightSpec> keyframes, double u);

/// Replaces the first light with the interpolated path light for each of
/// `frames` frames (frames >= 2, keyframes >= 1). Colors come from the
/// scene's first light. Returns the written paths.
std::vector<std::filesystem::path> cmd_animate(const std::filesystem::path& scene_file,
                                               const std::filesystem::path& out_dir,
                                               std::span<const LightSpec> keyframes, int frames,
                                               const CommandOptions& options = {});

/// One frame per value of the override key.
std::vector<std::filesystem::path> cmd_sweep(const std::filesystem::path& scene_file,
                                             const std::filesystem::path& out_dir,
                                             const std::string& key,
                                             std::span<const std::string> values,
                                             const CommandOptions& options = {});

/// Parses "x,y,z" as a directional light or "point:x,y,z" as a point light.
LightSpec parse_light_arg(const std::string& text);

}  // namespace dynpaint
