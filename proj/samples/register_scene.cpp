// Copyright 2026 The sylvpose Authors.
// SPDX-License-Identifier: Apache-2.0

// Registers a synthetic scene of mixed point, line and plane correspondences
// with each solver degree and prints the pose errors.

#include "sylvpose/sylvpose.hpp"

#include <cstdio>

int main() {
  using namespace sylvpose;
  const Scene scene = add_noise(gen_scene_mixed(200, 42), 0.05);
  std::printf("%d points, %d lines, %d planes, sigma %.2f m\n", scene.meta.n_m, scene.meta.n_l, scene.meta.n_p,
              scene.meta.sigma);
  for (const Method m : {Method::kDeg7, Method::kDeg8, Method::kDeg9}) {
    SolverConfig cfg;
    cfg.method = m;
    try {
      const PoseSolution sol = solve(scene.correspondences, cfg);
      std::printf("%s  dR %.4f deg  dt %.5f m  cost %.6g  %zu candidates  %.0f us\n",
                  std::string(to_string(m)).c_str(), rotation_error(sol.R, scene.R),
                  translation_error(sol.t, scene.t), sol.cost, sol.candidates.size(), sol.timings.step2_us());
    } catch (const SolverError& e) {
      std::printf("%s  failed: %s\n", std::string(to_string(m)).c_str(), e.what());
      return 1;
    }
  }
  return 0;
}
