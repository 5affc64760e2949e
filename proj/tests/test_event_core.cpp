#include <gtest/gtest.h>

#include <string>
#include <variant>

#include "liftbot/event_core.hpp"
#include "liftbot/robot_api.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace liftbot;
using oracle::Seq;

namespace {

template <class T>
std::vector<Timed<T>> run(EventStream<T> s) {
  return drain(s);
}

}  // namespace

TEST(StreamMap, IdentityPreservesValuesAndTimes) {
  EXPECT_EQ(run(stream_map([](int x) { return x; }, from_list<int>({{0, 1}, {1, 2}}))),
            (std::vector<Timed<int>>{{0, 1}, {1, 2}}));
}

TEST(StreamMap, AccelerateIncrement) {
  auto out = run(stream_map([](Velocity v) { return Velocity{v.linear + 0.5, v.angular}; },
                            from_list<Velocity>({{0, Velocity{1.0, 0.0}}})));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].value, (Velocity{1.5, 0.0}));
  EXPECT_EQ(out[0].t, 0.0);
}

TEST(StreamMap, Constant) {
  auto out = run(stream_map([](char) { return 7; }, from_list<char>({{0, 'a'}, {1, 'b'}, {2, 'c'}})));
  EXPECT_EQ(out, (std::vector<Timed<int>>{{0, 7}, {1, 7}, {2, 7}}));
}

TEST(StreamMap, Fusion) {
  std::mt19937_64 rng(5);
  for (int c = 0; c < 200; ++c) {
    auto s = oracle::random_stream<int>(rng, 20, props::int_value);
    auto f = [](int x) { return x * 3 + 1; };
    auto g = [](int x) { return x % 7; };
    EXPECT_EQ(run(stream_map(g, stream_map(f, from_list(s)))),
              run(stream_map([&](int x) { return g(f(x)); }, from_list(s))));
  }
}

TEST(EventStream, RejectsTimeGoingBackwards) {
  auto s = from_list<int>({{1.0, 1}, {0.5, 2}});
  EXPECT_TRUE(s.next());
  EXPECT_THROW(s.next(), std::logic_error);
}

TEST(EventStream, EmptyMeansNothingYet) {
  Channel<int> ch;
  auto s = ch.reader();
  EXPECT_FALSE(s.next());
  ch.push(0.0, 4);
  auto v = s.next();
  ASSERT_TRUE(v);
  EXPECT_EQ(v->value, 4);
  EXPECT_FALSE(s.next());
}

TEST(BothNew, SubsamplesTheFasterStream) {
  Seq<int> a{{0, 1}, {0.5, 2}, {1.0, 3}, {1.5, 4}};
  Seq<int> b{{0, 10}, {1.0, 20}};
  auto out = run(both_new(from_list(a), from_list(b)));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].value, std::make_pair(1, 10));
  EXPECT_EQ(out[0].t, 0.0);
  EXPECT_EQ(out[1].value, std::make_pair(3, 20));
  EXPECT_EQ(out[1].t, 1.0);

  // Same answer from the batch oracle.
  auto want = oracle::both_new_indices(a, b);
  ASSERT_EQ(want.size(), 2u);
  EXPECT_EQ(std::get<0>(want[1]), 2u);
  EXPECT_EQ(std::get<1>(want[1]), 1u);
}

TEST(BothNew, SinglePair) {
  auto out = run(both_new(from_list<char>({{0, 'x'}}), from_list<char>({{0, 'y'}})));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].value, std::make_pair('x', 'y'));
}

TEST(BothNew, BlocksOnEmptySideThenResumes) {
  Channel<int> b;
  auto s = both_new(from_list<int>({{0, 1}, {1, 2}, {2, 3}}), b.reader());
  EXPECT_FALSE(s.next());
  b.push(2.5, 9);
  auto v = s.next();
  ASSERT_TRUE(v);
  EXPECT_EQ(v->value, std::make_pair(3, 9));
  EXPECT_EQ(v->t, 2.5);
  EXPECT_FALSE(s.next());
}

TEST(BothNew, RandomisedAgainstOracle) { EXPECT_EQ(props::both_new_no_reuse(11, 300), 0); }

TEST(Tee, DuplicatesStream) {
  auto [l, r] = tee(from_list<int>({{0, 1}, {1, 2}}));
  EXPECT_EQ(drain(l), (std::vector<Timed<int>>{{0, 1}, {1, 2}}));
  EXPECT_EQ(drain(r), (std::vector<Timed<int>>{{0, 1}, {1, 2}}));
}

TEST(Tee, RightReplaysWhatLeftConsumed) {
  Seq<int> recorded{{0, 1}, {1, 2}};
  auto [l, r] = tee(from_list(recorded));
  auto left = drain(l);
  EXPECT_EQ(left, recorded);
  EXPECT_EQ(drain(r), recorded);
}

TEST(Tee, EmptyBlocksBothSides) {
  Channel<int> ch;
  auto [l, r] = tee(ch.reader());
  EXPECT_FALSE(l.next());
  EXPECT_FALSE(r.next());
  ch.push(0, 1);
  EXPECT_TRUE(r.next());
  EXPECT_TRUE(l.next());
}

TEST(Tee, HighWaterWarningFiresOnce) {
  Seq<int> s;
  for (int i = 0; i < 20; ++i) s.push_back({static_cast<double>(i), i});
  std::vector<std::size_t> warnings;
  TeeOptions opts;
  opts.high_water = 5;
  opts.on_high_water = [&](std::size_t n) { warnings.push_back(n); };
  auto [l, r] = tee(from_list(s), opts);
  drain(l);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0], 5u);
  EXPECT_EQ(drain(r).size(), 20u);
}

TEST(Tee, RandomisedCompleteness) { EXPECT_EQ(props::tee_completeness(12, 300), 0); }

TEST(SplitVariant, Partitions) {
  using V = std::variant<int, char>;
  auto [l, r] = split_variant(from_list<V>({{0, V(1)}, {1, V('x')}, {2, V(2)}}));
  EXPECT_EQ(drain(l), (std::vector<Timed<int>>{{0, 1}, {2, 2}}));
  EXPECT_EQ(drain(r), (std::vector<Timed<char>>{{1, 'x'}}));
}

TEST(SplitVariant, AllLeft) {
  using V = std::variant<int, char>;
  auto [l, r] = split_variant(from_list<V>({{0, V(1)}, {1, V(2)}}));
  EXPECT_FALSE(r.next());
  EXPECT_EQ(drain(l).size(), 2u);
}

TEST(SplitVariant, AllRight) {
  using V = std::variant<int, char>;
  auto [l, r] = split_variant(from_list<V>({{0, V('a')}, {1, V('b')}}));
  EXPECT_TRUE(drain(l).empty());
  EXPECT_EQ(drain(r), (std::vector<Timed<char>>{{0, 'a'}, {1, 'b'}}));
}

TEST(MergeVariant, OrdersByTime) {
  auto out = run(merge_variant(from_list<int>({{0, 1}}), from_list<char>({{1, 'x'}})));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].value.index(), 0u);
  EXPECT_EQ(out[1].value.index(), 1u);
}

TEST(MergeVariant, TieGoesLeft) {
  auto out = run(merge_variant(from_list<int>({{0, 1}}), from_list<char>({{0, 'x'}})));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(std::get<0>(out[0].value), 1);
  EXPECT_EQ(std::get<1>(out[1].value), 'x');
}

TEST(MergeVariant, EmptyLeft) {
  auto out = run(merge_variant(from_list<int>({}), from_list<char>({{0, 'x'}, {1, 'y'}})));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(std::get<1>(out[0].value), 'x');
  EXPECT_EQ(std::get<1>(out[1].value), 'y');
}

TEST(MergeVariant, WaitsForSlowerSideOnlyWhenItHasData) {
  Channel<int> a;
  Channel<char> b;
  auto m = merge_variant(a.reader(), b.reader());
  b.push(1.0, 'y');
  auto v = m.next();
  ASSERT_TRUE(v);
  EXPECT_EQ(std::get<1>(v->value), 'y');
}

TEST(SplitMerge, RandomisedRoundTrip) { EXPECT_EQ(props::split_merge_round_trip(13, 300), 0); }

TEST(FilterOptional, KeepsPresentValues) {
  auto out = run(filter_optional(from_list<std::optional<char>>({{0, 's'}, {1, std::nullopt}, {2, 't'}})));
  EXPECT_EQ(out, (std::vector<Timed<char>>{{0, 's'}, {2, 't'}}));
}

TEST(FilterOptional, AllNone) {
  EXPECT_TRUE(run(filter_optional(from_list<std::optional<int>>({{0, std::nullopt}, {1, std::nullopt}}))).empty());
}

TEST(FilterOptional, ErrorSound) {
  auto out = run(filter_optional(from_list<std::optional<SoundCmd>>({{0, SoundCmd{Sound::ErrorSound}}})));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].value.sound, Sound::ErrorSound);
}

TEST(FilterOptional, RandomisedSubsequence) { EXPECT_EQ(props::filter_subsequence(14, 300), 0); }
