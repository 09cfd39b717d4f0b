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

#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <string_view>

namespace sylvpose {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat39 = Eigen::Matrix<double, 3, 9>;
using Mat94 = Eigen::Matrix<double, 9, 4>;

// Stable error codes. The numeric values are part of the public interface.
enum class ErrorCode : int {
  kInvalidInput = 1,
  kDegenerateConstraints = 2,
  kDegreeCollapseFailure = 3,
  kDimensionMismatch = 4,
  kRankDeficientD = 5,
  kRankDeficientQ1 = 6,
  kEigensolveFailure = 7,
  kNoRealSolutions = 8,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kDegenerateConstraints: return "DegenerateConstraints";
    case ErrorCode::kDegreeCollapseFailure: return "DegreeCollapseFailure";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRankDeficientD: return "RankDeficientD";
    case ErrorCode::kRankDeficientQ1: return "RankDeficientQ1";
    case ErrorCode::kEigensolveFailure: return "EigensolveFailure";
    case ErrorCode::kNoRealSolutions: return "NoRealSolutions";
  }
  return "Unknown";
}

// Pipeline stage in which an error was raised.
enum class Stage { kInput, kReduction, kPolySystem, kSylvester, kElimination, kEigensolve, kExtraction, kSelection };

inline std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kInput: return "input";
    case Stage::kReduction: return "reduction";
    case Stage::kPolySystem: return "polysys";
    case Stage::kSylvester: return "sylvester";
    case Stage::kElimination: return "elimination";
    case Stage::kEigensolve: return "eigensolve";
    case Stage::kExtraction: return "extraction";
    case Stage::kSelection: return "selection";
  }
  return "unknown";
}

class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, Stage stage, const std::string& what)
      : std::runtime_error(std::string(to_string(stage)) + ": " + std::string(to_string(code)) + ": " + what),
        code_(code),
        stage_(stage) {}

  ErrorCode code() const noexcept { return code_; }
  Stage stage() const noexcept { return stage_; }

 private:
  ErrorCode code_;
  Stage stage_;
};

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

}  // namespace sylvpose
