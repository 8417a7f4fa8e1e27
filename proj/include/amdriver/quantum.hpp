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
 * N-qubit pure states over the instruction basis. Site 1 is the most
 * significant bit of the basis index, so amplitude k belongs to the
 * instruction array with code k.
 */

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "amdriver/model.hpp"
#include "amdriver/polytope.hpp"

namespace amdriver {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kBornPruneThreshold = 1e-15;

class StateVector {
  public:
    /// Throws DimensionError unless there are 2^n amplitudes and DomainError
    /// unless the squared norm is 1 within kNormTolerance.
    StateVector(int n, std::vector<Complex> amplitudes);

    /// Rescales to unit norm first; throws DomainError on the zero vector.
    static StateVector normalized(int n, std::vector<Complex> amplitudes);

    [[nodiscard]] int qubits() const noexcept { return n_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] Complex amplitude(const InstructionArray &v) const;

  private:
    int n_;
    std::vector<Complex> amps_;
};

/// |<a|b>|, equal to 1 for states that agree up to a global phase.
double overlap_magnitude(const StateVector &a, const StateVector &b);

/// Single-site state, entries (a, b) = <a| rho |b> in the {|0>, |1>} basis.
struct ReducedDensityMatrix {
    int site = 1;
    std::array<std::array<Complex, 2>, 2> entries{};

    [[nodiscard]] Complex operator()(int a, int b) const {
        return entries.at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b));
    }
};

/**
 * sum_m sqrt(p_m) e^{i psi_m} |v_m> over the vertex support (in id order).
 * Phases default to zero; throws DimensionError if the count is wrong.
 * Reduced states are diagonal only when no two support arrays differ in a
 * single bit; that always holds for N <= 4 but not beyond.
 */
StateVector state_from_vertex(const PolytopeVertex &vertex,
                              std::optional<std::span<const double>> phases = std::nullopt);

/// Same construction for any distribution.
StateVector state_from_distribution(const StrategyDistribution &dist,
                                    std::optional<std::span<const double>> phases = std::nullopt);

/// N-fold tensor power of sqrt(p)|0> + sqrt(1-p)|1>.
StateVector product_state(double p, int n);

StateVector singlet_state();   ///< (|01> - |10>)/sqrt2
StateVector ghz_state();       ///< (|001> + |110>)/sqrt2
StateVector w_state();         ///< (|001> + |010> + |100>)/sqrt3
StateVector ghz_prime_state(); ///< (|011> + |100>)/sqrt2

/// Partial trace over every site except `site` (1-based).
ReducedDensityMatrix reduced_density(const StateVector &psi, int site);

struct IndistinguishabilityReport {
    bool ok;
    /// Largest entrywise |rho_i - rho_j| over all site pairs.
    double max_deviation;
};

IndistinguishabilityReport verify_indistinguishability(const StateVector &psi,
                                                       double tol = kVertexTolerance);

/// Born-rule distribution |alpha_v|^2, dropping weights below
/// kBornPruneThreshold.
StrategyDistribution born_distribution(const StateVector &psi);

/**
 * `shots` i.i.d. computational-basis measurement records drawn from the
 * Born distribution with a std::mt19937_64 seeded by `seed`.
 *
 * Every site is measured in the same basis, so drawing whole arrays at once
 * has the same statistics as measuring site by site.
 */
std::vector<InstructionArray> sample_outcomes(const StateVector &psi,
                                              std::int64_t shots,
                                              std::uint64_t seed);

} // namespace amdriver
