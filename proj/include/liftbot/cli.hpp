#pragma once

// Batch driver behind the command-line tool.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "liftbot/demos.hpp"
#include "liftbot/render.hpp"
#include "liftbot/runtime.hpp"
#include "liftbot/simulator.hpp"
#include "liftbot/task.hpp"
#include "liftbot/trace.hpp"

namespace liftbot {

// sysexits-style status codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitTimeout = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitBadWorld = 65;
inline constexpr int kExitCantCreate = 73;

struct RunConfig {
  std::string demo;
  std::string world_path;           // empty: built-in open room
  std::optional<double> duration;   // s; demo default when unset
  std::uint64_t seed = 1;
  double dt = 0.02;
  double sensor_rate = 10.0;
  double mux_window = 1.0;
  double square_side = 2.0;         // cm
  std::string trace_path;           // empty or "-": standard output
  std::string render_dir;           // empty: no frames
  int render_every = 10;
};

/// Reads and parses a world file. Throws WorldError.
inline World read_world_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw WorldError("cannot read world file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return load_world(ss.str());
}

inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  const Demo* demo = find_demo(cfg.demo);
  if (!demo) {
    err << "unknown demo '" << cfg.demo << "' (try 'list')\n";
    return kExitUsage;
  }
  double duration = cfg.duration.value_or(demo->default_duration);
  if (!(duration > 0.0) || !(cfg.dt > 0.0) || !(cfg.sensor_rate > 0.0) || cfg.sensor_rate < 1.0 / duration ||
      cfg.render_every < 1 || !(cfg.mux_window >= 0.0) || !(cfg.square_side >= 0.0)) {
    err << "invalid run configuration: need duration > 0, dt > 0, rate >= 1/duration, render-every >= 1\n";
    return kExitUsage;
  }

  std::optional<Simulator> sim;
  try {
    World world = cfg.world_path.empty() ? open_world() : read_world_file(cfg.world_path);
    sim.emplace(std::move(world));
  } catch (const WorldError& e) {
    err << "bad world: " << e.what() << '\n';
    return kExitBadWorld;
  }

  std::ofstream trace_file;
  std::ostream* trace = &out;
  if (!cfg.trace_path.empty() && cfg.trace_path != "-") {
    trace_file.open(cfg.trace_path, std::ios::binary | std::ios::trunc);
    if (!trace_file) {
      err << "cannot write trace file '" << cfg.trace_path << "'\n";
      return kExitCantCreate;
    }
    trace = &trace_file;
  }
  if (!cfg.render_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.render_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.render_dir)) {
      err << "cannot create render directory '" << cfg.render_dir << "'\n";
      return kExitCantCreate;
    }
  }

  Runtime rt(RuntimeConfig{cfg.dt, cfg.sensor_rate, cfg.seed}, &*sim);
  register_demo_types(rt.registry());
  rt.add_observer(TraceWriter(*trace, rt.registry()));

  bool frame_failed = false;
  if (!cfg.render_dir.empty()) {
    rt.add_post_hook([&](Runtime& r) {
      if (frame_failed || r.steps() % static_cast<std::uint64_t>(cfg.render_every) != 0) return;
      char name[32];
      std::snprintf(name, sizeof name, "frame_%06llu.ppm", static_cast<unsigned long long>(r.steps()));
      auto path = (std::filesystem::path(cfg.render_dir) / name).string();
      if (!write_ppm(path, render_frame(sim->world(), sim->state(), sim->config().robot_radius))) frame_failed = true;
    });
  }

  DemoOptions opts;
  opts.mux_window = cfg.mux_window;
  opts.square_side = cfg.square_side;

  int status = kExitOk;
  try {
    if (demo->program) {
      rt.install(demo->program(opts));
      rt.run_for(duration);
    } else {
      PlanOutcome o = run_plan(rt, demo->plan(opts), duration);
      if (o.timed_out) {
        err << "task plan '" << demo->name << "' did not finish within " << duration << " s\n";
        status = kExitTimeout;
      }
    }
  } catch (const Error& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitUsage;
  }

  trace->flush();
  if (!*trace) {
    err << "failed writing trace\n";
    return kExitCantCreate;
  }
  if (frame_failed) {
    err << "failed writing frames to '" << cfg.render_dir << "'\n";
    return kExitCantCreate;
  }
  return status;
}

}  // namespace liftbot
