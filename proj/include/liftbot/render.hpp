#pragma once

// Top-down raster frames (binary PPM).
//
// Layout: 32 pixels per tile, row 0 of the grid at the top. Walls are dark,
// floor light, holes hatched with diagonal stripes. The robot is a filled
// disc with a white heading tick from its centre to its rim. Two 5x5 LED
// dots sit at pixel offsets (-R/2, 0) for Led1 and (+R/2, 0) for Led2 from
// the disc centre, where R is the disc radius in pixels; they are not
// rotated with the robot.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "liftbot/robot_api.hpp"
#include "liftbot/simulator.hpp"

namespace liftbot {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr int kPixelsPerTile = 32;
inline constexpr Rgb kWallColor{40, 40, 48};
inline constexpr Rgb kFloorColor{232, 232, 224};
inline constexpr Rgb kHoleColor{96, 64, 32};
inline constexpr Rgb kRobotColor{52, 92, 196};
inline constexpr Rgb kTickColor{255, 255, 255};

inline Rgb led_rgb(LedColor c) {
  switch (c) {
    case LedColor::Black: return {0, 0, 0};
    case LedColor::Red: return {220, 30, 30};
    case LedColor::Orange: return {255, 150, 0};
    case LedColor::Green: return {40, 200, 60};
  }
  return {0, 0, 0};
}

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  Rgb at(int x, int y) const {
    auto i = static_cast<std::size_t>((y * width + x) * 3);
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= width || y >= height) return;
    auto i = static_cast<std::size_t>((y * width + x) * 3);
    rgb[i] = c[0];
    rgb[i + 1] = c[1];
    rgb[i + 2] = c[2];
  }
};

/// Pixel coordinates of a world point.
inline std::array<double, 2> to_pixels(const World& w, double x, double y) {
  double s = kPixelsPerTile / w.tile;
  return {x * s, (w.height * w.tile - y) * s};
}

inline Image render_frame(const World& world, const RobotState& state, double robot_radius) {
  Image img;
  img.width = world.width * kPixelsPerTile;
  img.height = world.height * kPixelsPerTile;
  img.rgb.assign(static_cast<std::size_t>(img.width * img.height * 3), 0);

  for (int py = 0; py < img.height; ++py) {
    for (int px = 0; px < img.width; ++px) {
      int col = px / kPixelsPerTile;
      int row_up = world.height - 1 - py / kPixelsPerTile;
      Rgb c = kFloorColor;
      switch (world.at(col, row_up)) {
        case Tile::Wall: c = kWallColor; break;
        case Tile::Hole: c = ((px + py) % 8 < 3) ? kHoleColor : kFloorColor; break;
        case Tile::Floor: break;
      }
      img.set(px, py, c);
    }
  }

  auto [cx, cy] = to_pixels(world, state.pose.x, state.pose.y);
  double rad = robot_radius * kPixelsPerTile / world.tile;
  int x0 = static_cast<int>(std::floor(cx - rad)), x1 = static_cast<int>(std::ceil(cx + rad));
  int y0 = static_cast<int>(std::floor(cy - rad)), y1 = static_cast<int>(std::ceil(cy + rad));
  for (int py = y0; py <= y1; ++py)
    for (int px = x0; px <= x1; ++px)
      if (std::hypot(px + 0.5 - cx, py + 0.5 - cy) <= rad) img.set(px, py, kRobotColor);

  // Image y points down, so the heading's y component flips.
  int steps = static_cast<int>(std::ceil(rad)) * 2;
  for (int i = 0; i <= steps; ++i) {
    double f = rad * i / steps;
    img.set(static_cast<int>(std::floor(cx + f * std::cos(state.pose.theta))),
            static_cast<int>(std::floor(cy - f * std::sin(state.pose.theta))), kTickColor);
  }

  auto dot = [&](double dx, Rgb c) {
    int ux = static_cast<int>(std::floor(cx + dx)), uy = static_cast<int>(std::floor(cy));
    for (int j = -2; j <= 2; ++j)
      for (int i = -2; i <= 2; ++i) img.set(ux + i, uy + j, c);
  };
  dot(-rad / 2.0, led_rgb(state.led1));
  dot(rad / 2.0, led_rgb(state.led2));
  return img;
}

inline std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.rgb.data()), img.rgb.size());
  return out;
}

/// Returns false if the file cannot be written.
inline bool write_ppm(const std::string& path, const Image& img) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  std::string data = encode_ppm(img);
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  return static_cast<bool>(f);
}

}  // namespace liftbot
