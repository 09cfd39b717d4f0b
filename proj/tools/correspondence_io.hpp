// Copyright 2026 The sylvpose Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Correspondence files: a JSON document
//
//   {
//     "format": "sylvpose-correspondences",
//     "version": 1,
//     "kind": "3d3d" | "pnp",
//     "units": "m",
//     "ground_truth": {"R": [9 numbers, row-major], "t": [3 numbers]},   optional
//     "records": [
//       {"type": "point_point", "m_r": [..], "m_c": [..], "weight": 1},
//       {"type": "point_line",  "m_r": [..], "m": [..], "d": [..]},
//       {"type": "point_plane", "m_r": [..], "m": [..], "n": [..]},
//       {"type": "point_2d",    "m_r": [..], "q": [u, v]}
//     ]
//   }
//
// The writer puts one record per line; numbers use shortest round-trip
// formatting.

#pragma once

#include "sylvpose/reduction.hpp"
#include "sylvpose/sim.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sylvpose::io {

inline constexpr std::string_view kFormatName = "sylvpose-correspondences";
inline constexpr int kFormatVersion = 1;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroundTruth {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();
};

struct CorrespondenceFile {
  ProblemKind kind = ProblemKind::kThreeDThreeD;
  std::string units = "m";
  CorrespondenceSet records;
  std::optional<GroundTruth> ground_truth;
};

namespace detail {

using nlohmann::json;

inline int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  for (std::size_t i = 0; i < offset; ++i) line += text[i] == '\n' ? 1 : 0;
  return line;
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

template <int N>
Eigen::Matrix<double, N, 1> read_vector(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_array() || v.size() != N)
    throw ParseError(where + ": field \"" + key + "\" must be an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    if (!v[i].is_number()) throw ParseError(where + ": field \"" + key + "\" must contain numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

inline double read_weight(const json& obj, const std::string& where) {
  const auto it = obj.find("weight");
  if (it == obj.end()) return 1.0;
  if (!it->is_number()) throw ParseError(where + ": weight must be a number");
  return it->get<double>();
}

inline json vec_json(const auto& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json record_json(const Correspondence& corr) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        json j;
        if constexpr (std::is_same_v<T, PointPoint>) {
          j = {{"type", "point_point"}, {"m_r", vec_json(c.m_r)}, {"m_c", vec_json(c.m_c)}};
        } else if constexpr (std::is_same_v<T, PointLine>) {
          j = {{"type", "point_line"}, {"m_r", vec_json(c.m_r)}, {"m", vec_json(c.m)}, {"d", vec_json(c.d)}};
        } else if constexpr (std::is_same_v<T, PointPlane>) {
          j = {{"type", "point_plane"}, {"m_r", vec_json(c.m_r)}, {"m", vec_json(c.m)}, {"n", vec_json(c.n)}};
        } else {
          j = {{"type", "point_2d"}, {"m_r", vec_json(c.m_r)}, {"q", vec_json(c.q_c.template head<2>())}};
        }
        j["weight"] = c.weight;
        return j;
      },
      corr);
}

}  // namespace detail

inline std::string_view kind_name(ProblemKind k) { return k == ProblemKind::kPnP ? "pnp" : "3d3d"; }

inline CorrespondenceFile parse(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed document (") + e.what() + ")",
                     detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) throw ParseError("document must be a JSON object", 1);
  const json& fmt = detail::require(doc, "format", "header");
  if (!fmt.is_string() || fmt.get<std::string>() != kFormatName)
    throw ParseError("header: format must be \"" + std::string(kFormatName) + "\"");
  const json& ver = detail::require(doc, "version", "header");
  if (!ver.is_number_integer() || ver.get<int>() != kFormatVersion)
    throw ParseError("header: unsupported version (expected " + std::to_string(kFormatVersion) + ")");
  const json& kind = detail::require(doc, "kind", "header");
  CorrespondenceFile out;
  if (kind == "3d3d") {
    out.kind = ProblemKind::kThreeDThreeD;
  } else if (kind == "pnp") {
    out.kind = ProblemKind::kPnP;
  } else {
    throw ParseError("header: kind must be \"3d3d\" or \"pnp\"");
  }
  if (const auto it = doc.find("units"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("header: units must be a string");
    out.units = it->get<std::string>();
  }
  if (const auto it = doc.find("ground_truth"); it != doc.end()) {
    GroundTruth gt;
    const Eigen::Matrix<double, 9, 1> r = detail::read_vector<9>(*it, "R", "ground_truth");
    gt.R = unvec_rows(r);
    gt.t = detail::read_vector<3>(*it, "t", "ground_truth");
    out.ground_truth = gt;
  }
  const json& records = detail::require(doc, "records", "header");
  if (!records.is_array()) throw ParseError("header: records must be an array");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const json& r = records[i];
    const std::string where = "record " + std::to_string(i);
    if (!r.is_object()) throw ParseError(where + ": must be an object");
    const json& type = detail::require(r, "type", where);
    if (!type.is_string()) throw ParseError(where + ": type must be a string");
    const std::string t = type.get<std::string>();
    const bool pnp_record = t == "point_2d";
    if (pnp_record != (out.kind == ProblemKind::kPnP))
      throw ParseError(where + ": record type \"" + t + "\" does not match kind \"" +
                       std::string(kind_name(out.kind)) + "\"");
    const Vec3 m_r = detail::read_vector<3>(r, "m_r", where);
    const double w = detail::read_weight(r, where);
    if (t == "point_point") {
      out.records.push_back(PointPoint{m_r, detail::read_vector<3>(r, "m_c", where), w});
    } else if (t == "point_line") {
      out.records.push_back(
          PointLine{m_r, detail::read_vector<3>(r, "m", where), detail::read_vector<3>(r, "d", where), w});
    } else if (t == "point_plane") {
      out.records.push_back(
          PointPlane{m_r, detail::read_vector<3>(r, "m", where), detail::read_vector<3>(r, "n", where), w});
    } else if (t == "point_2d") {
      const Eigen::Vector2d q = detail::read_vector<2>(r, "q", where);
      out.records.push_back(Point2D{m_r, Vec3(q.x(), q.y(), 1.0), w});
    } else {
      throw ParseError(where + ": unknown record type \"" + t + "\"");
    }
  }
  return out;
}

inline std::string serialize(const CorrespondenceFile& f) {
  using detail::json;
  std::ostringstream os;
  os << "{\n";
  os << "  \"format\": " << json(kFormatName).dump() << ",\n";
  os << "  \"version\": " << kFormatVersion << ",\n";
  os << "  \"kind\": " << json(kind_name(f.kind)).dump() << ",\n";
  os << "  \"units\": " << json(f.units).dump() << ",\n";
  if (f.ground_truth) {
    json gt = {{"R", detail::vec_json(vec_rows(f.ground_truth->R))}, {"t", detail::vec_json(f.ground_truth->t)}};
    os << "  \"ground_truth\": " << gt.dump() << ",\n";
  }
  os << "  \"records\": [";
  for (std::size_t i = 0; i < f.records.size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << detail::record_json(f.records[i]).dump();
  }
  os << (f.records.empty() ? "]\n" : "\n  ]\n");
  os << "}\n";
  return os.str();
}

inline CorrespondenceFile load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return parse(ss.str());
}

inline void save(const std::filesystem::path& path, const CorrespondenceFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << serialize(f);
  if (!out) throw IoError("cannot write " + path.string());
}

inline CorrespondenceFile from_scene(const Scene& s) {
  CorrespondenceFile f;
  f.kind = s.kind;
  f.units = "m";
  f.records = s.correspondences;
  f.ground_truth = GroundTruth{s.R, s.t};
  return f;
}

}  // namespace sylvpose::io
