#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "liftbot/liftbot.hpp"

int main(int argc, char** argv) {
  using namespace liftbot;

  CLI::App app{"Reactive robot controllers on a deterministic simulated robot"};
  app.require_subcommand(1);

  RunConfig cfg;
  double duration = 0.0;
  auto* run_cmd = app.add_subcommand("run", "run a demo and write its trace");
  run_cmd->add_option("demo", cfg.demo, "demo name (see 'list')")->required();
  run_cmd->add_option("--world", cfg.world_path, "world file (default: built-in open room)");
  auto* dur_opt = run_cmd->add_option("--duration", duration, "simulated seconds (time limit for task demos)");
  run_cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  run_cmd->add_option("--dt", cfg.dt, "physics step in seconds")->capture_default_str();
  run_cmd->add_option("--rate", cfg.sensor_rate, "periodic sensor rate in Hz")->capture_default_str();
  run_cmd->add_option("--mux-window", cfg.mux_window, "multiplexer ignore window in seconds")->capture_default_str();
  run_cmd->add_option("--side", cfg.square_side, "draw-square side length in cm")->capture_default_str();
  run_cmd->add_option("--trace", cfg.trace_path, "trace output file (default: stdout)");
  run_cmd->add_option("--render", cfg.render_dir, "directory for PPM frames");
  run_cmd->add_option("--render-every", cfg.render_every, "steps between frames")->capture_default_str();

  auto* list_cmd = app.add_subcommand("list", "print the demo catalog");

  std::string world_path;
  auto* validate_cmd = app.add_subcommand("validate", "parse a world file and report on it");
  validate_cmd->add_option("world", world_path, "world file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*list_cmd) {
    for (const Demo& d : demo_catalog())
      std::cout << std::left << std::setw(18) << d.name << d.summary << '\n';
    return kExitOk;
  }

  if (*validate_cmd) {
    try {
      World w = read_world_file(world_path);
      std::size_t walls = 0, holes = 0;
      for (Tile t : w.cells) {
        if (t == Tile::Wall) ++walls;
        if (t == Tile::Hole) ++holes;
      }
      Simulator sim(w);
      std::cout << world_path << ": " << w.width << "x" << w.height << " tiles of " << w.tile << " m, " << walls
                << " wall, " << holes << " hole, start (" << w.start.x << ", " << w.start.y << "), "
                << w.script.size() << " scripted wheel event(s)\n";
      return kExitOk;
    } catch (const WorldError& e) {
      std::cerr << world_path << ": " << e.what() << '\n';
      return kExitBadWorld;
    }
  }

  if (*dur_opt) cfg.duration = duration;
  return run(cfg);
}
