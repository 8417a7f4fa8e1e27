// Copyright 2026 The amdriver Authors
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

/**
 * @file
 * Side-by-side comparison of deterministic, i.i.d. coin and entangled
 * strategies, sweeps over the three-intersection payoff parameter n, and
 * detection of the n values where the optimal vertex changes.
 */

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "amdriver/model.hpp"
#include "amdriver/polytope.hpp"
#include "amdriver/quantum.hpp"

namespace amdriver {

struct QuantumOptimum {
    double payoff;
    PolytopeVertex vertex;
    /// Zero-phase state realizing the vertex. Check it with
    /// verify_indistinguishability when N >= 5.
    StateVector state;
};

struct StrategyComparison {
    PayoffSchedule schedule;
    DeterministicOptimum deterministic;
    ProbabilisticOptimum probabilistic;
    QuantumOptimum quantum;
};

StrategyComparison compare(const PayoffSchedule &s);
/// Reuses a precomputed vertex list for s.intersections().
StrategyComparison compare(const PayoffSchedule &s,
                           const std::vector<PolytopeVertex> &vertices);

/**
 * r = (0, n, 4), motel 1.
 *
 * Reconstructed from the three published optimal payoffs 2, (4+n)/3 and
 * n/2; the motel payoff is carried over from the two-intersection problem.
 */
PayoffSchedule three_intersection_schedule(double n);

inline constexpr const char *kScheduleProvenance =
    "reconstructed from stated optima";

struct SweepRow {
    double n;
    double deterministic;
    double p_star;
    double probabilistic;
    double quantum;
    VertexId optimal_vertex;
};

struct SweepCurve {
    std::vector<SweepRow> rows;
    /// Vertex list of the three-intersection polytope shared by every row.
    std::shared_ptr<const std::vector<PolytopeVertex>> vertices;
};

/// Grid n_min + k * step for every k keeping the point <= n_max.
SweepCurve sweep(double n_min, double n_max, double step);
/// Arbitrary strictly increasing grid of non-negative n.
SweepCurve sweep(std::span<const double> grid);

struct Crossover {
    double n;
    VertexId before;
    VertexId after;
};

inline constexpr double kCrossoverTolerance = 1e-6;

/**
 * n values where the optimal vertex changes between adjacent grid points,
 * located by bisection on the payoff difference of the two vertices. When a
 * third vertex beats both at the located point the interval is split and
 * each half refined separately.
 */
std::vector<Crossover> crossovers(const SweepCurve &curve);

} // namespace amdriver
