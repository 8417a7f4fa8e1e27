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

#include "amdriver/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace amdriver {

StrategyComparison compare(const PayoffSchedule &s) {
    return compare(s, enumerate_vertices(s.intersections()));
}

StrategyComparison compare(const PayoffSchedule &s,
                           const std::vector<PolytopeVertex> &vertices) {
    auto best = optimal_vertex(s, vertices);
    auto state = state_from_vertex(best.vertex);
    return {s, deterministic_optimum(s), probabilistic_optimum(s),
            {best.payoff, std::move(best.vertex), std::move(state)}};
}

PayoffSchedule three_intersection_schedule(double n) {
    if (!(n >= 0.0) || !std::isfinite(n)) {
        throw DomainError("payoff parameter n must be finite and >= 0");
    }
    return {{0.0, n, 4.0}, 1.0};
}

namespace {

SweepRow make_row(double n, const std::vector<PolytopeVertex> &vertices) {
    const auto cmp = compare(three_intersection_schedule(n), vertices);
    return {n,
            cmp.deterministic.payoff,
            cmp.probabilistic.p_star,
            cmp.probabilistic.payoff,
            cmp.quantum.payoff,
            cmp.quantum.vertex.id()};
}

const PolytopeVertex &find_vertex(const std::vector<PolytopeVertex> &vertices,
                                  const VertexId &id) {
    auto it = std::find_if(vertices.begin(), vertices.end(),
                           [&](const PolytopeVertex &v) { return v.id() == id; });
    if (it == vertices.end()) {
        throw DomainError("vertex not in curve");
    }
    return *it;
}

double payoff_at(const PolytopeVertex &v, double n) {
    return expected_payoff(v.distribution(), three_intersection_schedule(n));
}

void refine(const std::vector<PolytopeVertex> &vertices, double lo,
            const VertexId &before, double hi, const VertexId &after,
            std::vector<Crossover> &out) {
    const auto &a = find_vertex(vertices, before);
    const auto &b = find_vertex(vertices, after);
    // g(lo) >= 0 >= g(hi) since each vertex wins at its own end.
    auto g = [&](double n) { return payoff_at(a, n) - payoff_at(b, n); };
    double left = lo;
    double right = hi;
    while (right - left > 0.25 * kCrossoverTolerance) {
        const double mid = 0.5 * (left + right);
        if (g(mid) > 0.0) {
            left = mid;
        } else {
            right = mid;
        }
    }
    const double root = 0.5 * (left + right);

    const auto at_root = optimal_vertex(three_intersection_schedule(root), vertices);
    const bool third = at_root.vertex.id() != before && at_root.vertex.id() != after &&
                       at_root.payoff > payoff_at(a, root) + kVertexTolerance &&
                       at_root.payoff > payoff_at(b, root) + kVertexTolerance;
    if (third && hi - lo > kCrossoverTolerance) {
        refine(vertices, lo, before, root, at_root.vertex.id(), out);
        refine(vertices, root, at_root.vertex.id(), hi, after, out);
        return;
    }
    out.push_back({root, before, after});
}

} // namespace

SweepCurve sweep(double n_min, double n_max, double step) {
    if (!(n_min >= 0.0) || !(n_max > n_min) || !(step > 0.0) ||
        !std::isfinite(n_max) || !std::isfinite(step)) {
        throw DomainError("sweep needs 0 <= n_min < n_max and step > 0");
    }
    std::vector<double> grid;
    // Slack keeps an endpoint that is a whole number of steps away.
    const double slack = 1e-9 * step;
    for (long k = 0;; ++k) {
        const double n = n_min + static_cast<double>(k) * step;
        if (n > n_max + slack) {
            break;
        }
        grid.push_back(std::min(n, n_max));
    }
    return sweep(grid);
}

SweepCurve sweep(std::span<const double> grid) {
    if (grid.empty()) {
        throw DomainError("sweep grid is empty");
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] >= 0.0) || (k > 0 && !(grid[k] > grid[k - 1]))) {
            throw DomainError("sweep grid must be non-negative and strictly increasing");
        }
    }
    auto vertices = std::make_shared<const std::vector<PolytopeVertex>>(
        enumerate_vertices(3));
    SweepCurve curve;
    curve.vertices = vertices;
    curve.rows.reserve(grid.size());
    for (double n : grid) {
        curve.rows.push_back(make_row(n, *vertices));
    }
    return curve;
}

std::vector<Crossover> crossovers(const SweepCurve &curve) {
    std::vector<Crossover> out;
    if (curve.rows.size() < 2 || !curve.vertices) {
        return out;
    }
    for (std::size_t k = 1; k < curve.rows.size(); ++k) {
        const auto &prev = curve.rows[k - 1];
        const auto &next = curve.rows[k];
        if (prev.optimal_vertex != next.optimal_vertex) {
            refine(*curve.vertices, prev.n, prev.optimal_vertex, next.n,
                   next.optimal_vertex, out);
        }
    }
    return out;
}

} // namespace amdriver
