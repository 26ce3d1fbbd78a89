// dynpaint command-line front end.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "dynpaint/commands.hpp"
#include "dynpaint/demo.hpp"
#include "dynpaint/parallel.hpp"
#include "dynpaint/service.hpp"

int main(int argc, char** argv) {
  using namespace dynpaint;
  CLI::App app{"dynpaint: 2.5D image-based non-photorealistic renderer"};
  app.require_subcommand(1);

  CommandOptions options;
  options.threads = default_threads();
  auto common = [&](CLI::App* sub) {
    sub->add_option("--set", options.overrides, "Override a scene key, key=value (repeatable)");
    sub->add_option("--threads", options.threads, "Worker threads per frame")
        ->check(CLI::PositiveNumber);
  };

  std::string scene_file;
  std::string out;

  CLI::App* render = app.add_subcommand("render", "Render one frame");
  render->add_option("scene", scene_file, "Scene document")->required()->check(CLI::ExistingFile);
  render->add_option("--out,-o", out, "Output image (.png, .ppm, .pgm)")->required();
  common(render);

  std::vector<std::string> light_args;
  int frames = 2;
  CLI::App* animate = app.add_subcommand("animate", "Render frames along a light path");
  animate->add_option("scene", scene_file, "Scene document")->required()->check(CLI::ExistingFile);
  animate->add_option("--out,-o", out, "Output directory")->required();
  animate->add_option("--light", light_args, "Keyframe: x,y,z (direction) or point:x,y,z")
      ->required();
  animate->add_option("--frames", frames, "Frame count (at least 2)")->check(CLI::Range(2, 1000000));
  animate->add_option("--ext", options.ext, "Frame format: png, ppm or pgm");
  common(animate);

  std::string key;
  std::vector<std::string> values;
  CLI::App* sweep = app.add_subcommand("sweep", "Render one frame per value of a key");
  sweep->add_option("scene", scene_file, "Scene document")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out,-o", out, "Output directory")->required();
  sweep->add_option("--key", key, "Override key path, e.g. params.optics.eta")->required();
  sweep->add_option("--values", values, "Values to sweep")->required();
  sweep->add_option("--ext", options.ext, "Frame format: png, ppm or pgm");
  common(sweep);

  std::string host = "127.0.0.1";
  int port = 8080;
  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP render service");
  serve_cmd->add_option("--host", host, "Listen address");
  serve_cmd->add_option("--port", port, "Listen port (0 picks a free port)");
  serve_cmd->add_option("--threads", options.threads, "Worker threads per render")
      ->check(CLI::PositiveNumber);

  std::string demo_kind = "glass-ball";
  int demo_size = 256;
  CLI::App* demo_cmd = app.add_subcommand("demo", "Write a demo scene bundle");
  demo_cmd->add_option("--out,-o", out, "Output directory")->required();
  demo_cmd->add_option("--kind", demo_kind, "glass-ball or relief")
      ->check(CLI::IsMember({"glass-ball", "relief"}));
  demo_cmd->add_option("--size", demo_size, "Image size in pixels")->check(CLI::Range(8, 8192));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors share code 2 with scene errors.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*render) {
      cmd_render(scene_file, out, options);
    } else if (*animate) {
      std::vector<LightSpec> keyframes;
      for (const std::string& arg : light_args) keyframes.push_back(parse_light_arg(arg));
      const auto written = cmd_animate(scene_file, out, keyframes, frames, options);
      std::printf("wrote %zu frames to %s\n", written.size(), out.c_str());
    } else if (*sweep) {
      const auto written = cmd_sweep(scene_file, out, key, values, options);
      std::printf("wrote %zu frames to %s\n", written.size(), out.c_str());
    } else if (*serve_cmd) {
      serve(host, port, options.threads);
    } else if (*demo_cmd) {
      const auto kind = demo_kind == "relief" ? demo::DemoKind::relief : demo::DemoKind::glass_ball;
      std::printf("%s\n", demo::write_demo_scene(out, kind, demo_size).string().c_str());
    }
  } catch (const SceneError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
