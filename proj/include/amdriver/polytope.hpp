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
 * The indistinguishability polytope: distributions over the 2^N instruction
 * arrays whose exit marginals u(i) agree at every intersection. Its vertices
 * are the candidate optimal strategies for any payoff schedule.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "amdriver/model.hpp"

namespace amdriver {

inline constexpr int kDefaultMaxIntersections = 6;

/// Residual and weight-positivity threshold for vertex certification.
inline constexpr double kVertexTolerance = 1e-9;

/**
 * @brief Equality system A p = b over the simplex of instruction arrays.
 *
 * Row 0 is normalization (all ones). Row i (1 <= i < N) holds v(i) - v(0)
 * for each column, so A p = (1, 0, ..., 0) iff all exit marginals agree.
 * Column j belongs to the array with code j.
 */
struct ConstraintSystem {
    int intersections = 0;
    Eigen::MatrixXi rows;
    Eigen::VectorXi rhs;

    [[nodiscard]] Eigen::Index columns() const noexcept { return rows.cols(); }
};

/// Throws DomainError unless 1 <= n <= max_intersections.
ConstraintSystem build_constraints(int n,
                                   int max_intersections = kDefaultMaxIntersections);

struct Rational {
    std::int64_t numerator = 0;
    std::int64_t denominator = 1;

    [[nodiscard]] double value() const noexcept {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const Rational &, const Rational &) = default;
};

/**
 * Closest fraction with denominator <= max_denominator whose value is within
 * `tolerance` of x, preferring the smallest denominator.
 */
std::optional<Rational> snap_to_rational(double x, std::int64_t max_denominator,
                                         double tolerance = kVertexTolerance);

/// Sorted support codes; a support determines at most one vertex.
using VertexId = std::vector<std::uint32_t>;

/// "001+110" style rendering of a support.
std::string format_vertex_id(const VertexId &id, int n);
/// Inverse of format_vertex_id; throws DomainError on malformed input.
VertexId parse_vertex_id(const std::string &text, int n);

/**
 * @brief A distribution certified extreme in the indistinguishability
 * polytope.
 *
 * When every weight snaps to a small-denominator fraction, `exact_weights`
 * holds the fractions (in support order) and the stored weights equal them.
 */
class PolytopeVertex {
  public:
    PolytopeVertex(StrategyDistribution dist,
                   std::optional<std::vector<Rational>> exact_weights);

    [[nodiscard]] const StrategyDistribution &distribution() const noexcept {
        return dist_;
    }
    [[nodiscard]] const VertexId &id() const noexcept { return id_; }
    [[nodiscard]] int intersections() const noexcept {
        return dist_.intersections();
    }
    [[nodiscard]] const std::optional<std::vector<Rational>> &
    exact_weights() const noexcept {
        return exact_;
    }
    [[nodiscard]] std::string label() const {
        return format_vertex_id(id_, intersections());
    }

    friend bool operator==(const PolytopeVertex &a, const PolytopeVertex &b) {
        return a.dist_ == b.dist_;
    }

  private:
    StrategyDistribution dist_;
    std::optional<std::vector<Rational>> exact_;
    VertexId id_;
};

struct EnumerationOptions {
    int max_intersections = kDefaultMaxIntersections;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/**
 * Every vertex of the indistinguishability polytope for n intersections,
 * sorted by id.
 *
 * A support S is accepted when its constraint columns are linearly
 * independent and the restricted system has a strictly positive solution.
 * Subsets are grown depth-first and pruned as soon as a column is dependent
 * on the ones already chosen, since no superset can then be independent.
 */
std::vector<PolytopeVertex> enumerate_vertices(int n,
                                               const EnumerationOptions &options = {});

struct VertexOptimum {
    PolytopeVertex vertex;
    double payoff;
};

/// Vertex of highest expected payoff. Ties within kVertexTolerance go to the
/// lexicographically largest id.
VertexOptimum optimal_vertex(const PayoffSchedule &s,
                             const std::vector<PolytopeVertex> &vertices);

/// True iff `dist` has n intersections and equal exit marginals to 1e-9.
bool verify_membership(const StrategyDistribution &dist, int n);

/// Flips every bit of every support array, keeping the weights.
PolytopeVertex complement(const PolytopeVertex &v);

} // namespace amdriver
