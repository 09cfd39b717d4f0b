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

#include "sylvpose/bench.hpp"
#include "sylvpose/common.hpp"
#include "sylvpose/eigensolver.hpp"
#include "sylvpose/elimination.hpp"
#include "sylvpose/poly.hpp"
#include "sylvpose/polysys.hpp"
#include "sylvpose/reduction.hpp"
#include "sylvpose/sim.hpp"
#include "sylvpose/solver.hpp"
#include "sylvpose/sylvester.hpp"
#include "sylvpose/verify.hpp"
