// Copyright 2026 The sylvpose Authors.
// SPDX-License-Identifier: Apache-2.0

// Small hand-written instances shared by the unit tests. Reference values in
// the tests come from tests/oracles/derive_values.py (exact rationals).

#pragma once

#include "sylvpose/reduction.hpp"

namespace sylvpose::testing {

inline CorrespondenceSet small_3d3d() {
  return {
      PointPoint{{1, 2, 3}, {2, -1, 0.5}, 1.0},
      PointPoint{{-1, 0, 2}, {0, 1, 1}, 2.0},
      PointLine{{0, 1, -1}, {1, 1, 1}, {1, 0, 0}, 1.0},
      PointPlane{{2, -1, 0}, {0, 0, 1}, {0, 0, 1}, 1.0},
      PointPlane{{-2, 1, 1}, {1, 0, 0}, {0, 1, 0}, 0.5},
      PointLine{{1, 1, 1}, {0, 2, 0}, {0, 0, 1}, 1.0},
  };
}

inline CorrespondenceSet small_pnp() {
  return {
      Point2D{{1, 0, 0}, {0.1, 0.2, 1.0}, 1.0},
      Point2D{{0, 1, 0}, {-0.2, 0.1, 1.0}, 1.0},
      Point2D{{0, 0, 1}, {0.3, -0.1, 1.0}, 2.0},
      Point2D{{1, 1, 1}, {0.0, 0.25, 1.0}, 1.0},
      Point2D{{-1, 2, 0}, {-0.25, 0.0, 1.0}, 1.0},
  };
}

// Rational unit quaternion (1, 2, 2, 4) / 5.
inline Vec4 q0() { return Vec4(0.2, 0.4, 0.4, 0.8); }

}  // namespace sylvpose::testing
