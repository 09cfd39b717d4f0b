// Copyright 2026 The sylvpose Authors.
// SPDX-License-Identifier: Apache-2.0

#include "correspondence_io.hpp"

#include <gtest/gtest.h>

namespace sylvpose {
namespace {

std::string minimal(const std::string& kind, const std::string& records) {
  return "{\"format\": \"sylvpose-correspondences\", \"version\": 1, \"kind\": \"" + kind +
         "\",\n \"records\": [" + records + "]}\n";
}

TEST(CorrespondenceIo, RoundTripIsExact) {
  for (const Scene& s : {add_noise(gen_scene_mixed(40, 1), 0.1), add_noise(gen_scene_pnp(8, 2), 1.0)}) {
    const io::CorrespondenceFile f = io::from_scene(s);
    const std::string text = io::serialize(f);
    const io::CorrespondenceFile g = io::parse(text);
    EXPECT_EQ(g.kind, s.kind);
    ASSERT_TRUE(g.ground_truth.has_value());
    EXPECT_EQ(g.ground_truth->R, s.R);
    EXPECT_EQ(g.ground_truth->t, s.t);
    ASSERT_EQ(g.records.size(), s.correspondences.size());
    EXPECT_EQ(io::serialize(g), text);
    for (size_t i = 0; i < g.records.size(); ++i) {
      EXPECT_EQ(g.records[i].index(), s.correspondences[i].index());
      std::visit(
          [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            const T& b = std::get<T>(s.correspondences[i]);
            EXPECT_EQ(a.m_r, b.m_r);
            EXPECT_EQ(a.weight, b.weight);
            if constexpr (std::is_same_v<T, Point2D>) EXPECT_EQ(a.q_c, b.q_c);
            if constexpr (std::is_same_v<T, PointPoint>) EXPECT_EQ(a.m_c, b.m_c);
            if constexpr (std::is_same_v<T, PointLine>) EXPECT_EQ(a.d, b.d);
            if constexpr (std::is_same_v<T, PointPlane>) EXPECT_EQ(a.n, b.n);
          },
          g.records[i]);
    }
  }
}

TEST(CorrespondenceIo, OneRecordPerLine) {
  const std::string text = io::serialize(io::from_scene(gen_scene_3d3d(2, 1, 1, 3)));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7 + 4 + 2);
}

TEST(CorrespondenceIo, TruncatedFileReportsLine) {
  const std::string text = io::serialize(io::from_scene(gen_scene_3d3d(3, 0, 0, 4)));
  const std::string cut = text.substr(0, text.size() / 2 + 40);
  const int lines = static_cast<int>(std::count(cut.begin(), cut.end(), '\n')) + 1;
  try {
    io::parse(cut);
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), lines);
    EXPECT_NE(std::string(e.what()).find("line " + std::to_string(lines)), std::string::npos);
  }
}

TEST(CorrespondenceIo, SchemaViolations) {
  const std::string pp = R"({"type": "point_point", "m_r": [1, 2, 3], "m_c": [4, 5, 6]})";
  const std::string p2 = R"({"type": "point_2d", "m_r": [1, 2, 3], "q": [0.1, 0.2]})";
  EXPECT_NO_THROW(io::parse(minimal("3d3d", pp)));
  EXPECT_NO_THROW(io::parse(minimal("pnp", p2)));
  EXPECT_THROW(io::parse(minimal("3d3d", pp + "," + p2)), io::ParseError);
  EXPECT_THROW(io::parse(minimal("pnp", p2 + "," + pp)), io::ParseError);
  EXPECT_THROW(io::parse(minimal("2d2d", pp)), io::ParseError);
  EXPECT_THROW(io::parse(minimal("3d3d", R"({"type": "point_point", "m_r": [1, 2], "m_c": [4, 5, 6]})")),
               io::ParseError);
  EXPECT_THROW(io::parse(minimal("3d3d", R"({"type": "point_circle", "m_r": [1, 2, 3]})")), io::ParseError);
  EXPECT_THROW(io::parse(minimal("3d3d", R"({"type": "point_point", "m_r": [1, 2, "x"], "m_c": [4, 5, 6]})")),
               io::ParseError);
  EXPECT_THROW(io::parse(R"({"format": "other", "version": 1, "kind": "3d3d", "records": []})"), io::ParseError);
  EXPECT_THROW(io::parse(R"({"format": "sylvpose-correspondences", "version": 2, "kind": "3d3d", "records": []})"),
               io::ParseError);
  EXPECT_THROW(io::parse("[1, 2]"), io::ParseError);
}

TEST(CorrespondenceIo, DefaultsAndWeights) {
  const auto f = io::parse(minimal(
      "3d3d", R"({"type": "point_plane", "m_r": [1, 2, 3], "m": [0, 0, 0], "n": [0, 0, 1], "weight": 2.5},
                 {"type": "point_line", "m_r": [1, 2, 3], "m": [0, 0, 0], "d": [1, 0, 0]})"));
  EXPECT_EQ(f.units, "m");
  EXPECT_FALSE(f.ground_truth.has_value());
  EXPECT_EQ(std::get<PointPlane>(f.records[0]).weight, 2.5);
  EXPECT_EQ(std::get<PointLine>(f.records[1]).weight, 1.0);
}

TEST(CorrespondenceIo, MissingFileIsAnIoError) {
  EXPECT_THROW(io::load("/nonexistent/sylvpose/file.json"), io::IoError);
}

}  // namespace
}  // namespace sylvpose
