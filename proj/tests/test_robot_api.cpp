#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "liftbot/robot_api.hpp"
#include "oracles.hpp"

using namespace liftbot;

TEST(DegreesToOrientation, Values) {
  EXPECT_DOUBLE_EQ(degrees_to_orientation(Degrees{90}).radians, kPi / 2);
  EXPECT_EQ(degrees_to_orientation(Degrees{0}).radians, 0.0);
  EXPECT_DOUBLE_EQ(degrees_to_orientation(Degrees{-180}).radians, -kPi);
}

TEST(NormOrientation, Examples) {
  EXPECT_NEAR(norm_orientation(3 * kPi / 2).radians, -kPi / 2, 1e-12);
  EXPECT_EQ(norm_orientation(kPi).radians, kPi);
  EXPECT_EQ(norm_orientation(-kPi).radians, kPi);
  EXPECT_NEAR(norm_orientation(-3 * kPi).radians, oracle::wrap_brute(-3 * kPi), 1e-12);
  EXPECT_NEAR(norm_orientation(-3 * kPi).radians, kPi, 1e-12);
}

TEST(NormOrientation, Properties) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-50.0, 50.0);
  for (int i = 0; i < 5000; ++i) {
    double a = d(rng);
    double n = norm_orientation(a).radians;
    ASSERT_GT(n, -kPi);
    ASSERT_LE(n, kPi);
    ASSERT_EQ(norm_orientation(n).radians, n);
    double k = (n - a) / (2 * kPi);
    ASSERT_NEAR(k, std::round(k), 1e-12);
    ASSERT_NEAR(n, oracle::wrap_brute(a), 1e-9);
  }
}

TEST(NormOrientation, DegreeRoundTrip) {
  for (int d = -179; d <= 180; ++d) {
    double want = d * kPi / 180.0;
    EXPECT_NEAR(norm_orientation(degrees_to_orientation(Degrees{static_cast<double>(d)}).radians).radians, want,
                1e-12);
  }
}

TEST(DoubleToSeconds, Values) {
  EXPECT_EQ(double_to_seconds(0).value, 0.0);
  EXPECT_NEAR(double_to_seconds(kPi / 0.1).value, 31.41592653589793, 1e-12);
  EXPECT_EQ(double_to_seconds(2.5).value, 2.5);
  EXPECT_THROW(double_to_seconds(-0.1), std::domain_error);
}

TEST(OrientationToAngularVelocity, Law) {
  EXPECT_EQ(orientation_to_angular_velocity(0), 0.0);
  EXPECT_DOUBLE_EQ(orientation_to_angular_velocity(0.3), 0.3);
  EXPECT_EQ(orientation_to_angular_velocity(2.0), 0.5);
  for (double d = -kPi; d <= kPi; d += 0.01) {
    EXPECT_EQ(orientation_to_angular_velocity(-d), -orientation_to_angular_velocity(d));
    if (d != 0) {
      EXPECT_EQ(std::signbit(orientation_to_angular_velocity(d)), std::signbit(d));
    }
  }
}

TEST(RobotApi, RegistersTraceTopicNames) {
  EventRegistry reg;
  register_robot_api(reg);
  for (const char* name :
       {"velocity", "bumper", "cliff", "wheel", "led1", "led2", "sound", "position", "orientation", "seconds"})
    EXPECT_NE(reg.find(std::string_view(name)), nullptr) << name;
  const EventTypeInfo& v = reg.info(reg.id_of<Velocity>());
  EXPECT_TRUE(v.caps.sensor);
  EXPECT_TRUE(v.caps.command);
  EXPECT_FALSE(reg.info(reg.id_of<BumperEvent>()).caps.command);
  EXPECT_FALSE(reg.info(reg.id_of<Led1>()).caps.sensor);
}

TEST(RobotApi, TraceFields) {
  Fields f = trace_fields(BumperEvent{Side::Left, BumperState::Pressed});
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(std::get<std::string>(f[0].second), "left");
  EXPECT_EQ(std::get<std::string>(f[1].second), "pressed");
  EXPECT_EQ(std::get<std::string>(trace_fields(SoundCmd{Sound::ErrorSound})[0].second), "error");
}
