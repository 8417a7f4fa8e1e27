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
 * Core domain types of the absent-minded driver problem: instruction
 * arrays, payoff schedules, distributions over instruction arrays, and the
 * classical (deterministic and i.i.d. coin) strategy solvers.
 */

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace amdriver {

/// Raised when operands disagree on the number of intersections.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a scalar argument lies outside its admissible range.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Largest number of intersections an InstructionArray can encode.
inline constexpr int kMaxEncodableIntersections = 24;

/**
 * @brief Per-intersection instructions, bit i = 1 meaning EXIT at
 * intersection i + 1.
 *
 * The canonical integer code puts intersection 1 in the most significant
 * position, so the code reads like the ket |v1 v2 ... vN>.
 */
class InstructionArray {
  public:
    InstructionArray() = default;

    /// Builds from a code in [0, 2^n).
    static InstructionArray from_code(std::uint32_t code, int n);
    /// Builds from explicit 0/1 entries, intersection 1 first.
    static InstructionArray from_bits(std::span<const int> bits);
    /// Parses a bit-string such as "011".
    static InstructionArray parse(std::string_view text);

    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] std::uint32_t code() const noexcept { return code_; }

    /// Instruction at 0-based intersection `i`; true means EXIT.
    [[nodiscard]] bool exits_at(int i) const;

    /// 0-based index of the first EXIT, or nullopt for the all-CONTINUE array.
    [[nodiscard]] std::optional<int> first_exit() const noexcept;

    [[nodiscard]] int count_exits() const noexcept;
    [[nodiscard]] InstructionArray complement() const noexcept;
    [[nodiscard]] InstructionArray with_flipped(int i) const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const InstructionArray &,
                           const InstructionArray &) = default;
    friend auto operator<=>(const InstructionArray &a,
                            const InstructionArray &b) noexcept {
        if (auto c = a.n_ <=> b.n_; c != 0) {
            return c;
        }
        return a.code_ <=> b.code_;
    }

  private:
    InstructionArray(std::uint32_t code, int n) : code_{code}, n_{n} {}

    std::uint32_t code_ = 0;
    int n_ = 0;
};

/// Hamming distance between two arrays of equal length.
int hamming_distance(const InstructionArray &a, const InstructionArray &b);

/**
 * @brief Exit payoffs r_1..r_N plus the motel payoff r_m.
 *
 * All payoffs are finite and non-negative.
 */
class PayoffSchedule {
  public:
    PayoffSchedule(std::vector<double> exit_payoffs, double motel_payoff);

    [[nodiscard]] int intersections() const noexcept {
        return static_cast<int>(exit_payoffs_.size());
    }
    [[nodiscard]] std::span<const double> exit_payoffs() const noexcept {
        return exit_payoffs_;
    }
    /// Payoff for exiting at 0-based intersection `i`.
    [[nodiscard]] double exit_payoff(int i) const { return exit_payoffs_.at(i); }
    [[nodiscard]] double motel_payoff() const noexcept { return motel_; }

    friend bool operator==(const PayoffSchedule &,
                           const PayoffSchedule &) = default;

  private:
    std::vector<double> exit_payoffs_;
    double motel_;
};

/**
 * @brief Probability distribution over instruction arrays of one length.
 *
 * Stored sparsely and sorted by code. Zero weights are dropped, weights are
 * strictly positive and sum to 1 within kNormalizationTolerance.
 */
class StrategyDistribution {
  public:
    using Entry = std::pair<InstructionArray, double>;

    static constexpr double kNormalizationTolerance = 1e-12;

    /// Throws DimensionError / DomainError when the entries are not a valid
    /// distribution over arrays of length `n`.
    StrategyDistribution(int n, std::vector<Entry> entries);

    /// Point mass on one array.
    static StrategyDistribution point(const InstructionArray &v);

    [[nodiscard]] int intersections() const noexcept { return n_; }
    [[nodiscard]] std::span<const Entry> entries() const noexcept {
        return entries_;
    }
    [[nodiscard]] std::size_t support_size() const noexcept {
        return entries_.size();
    }
    /// Weight of `v`, zero off the support.
    [[nodiscard]] double weight(const InstructionArray &v) const;

    /// u(i) = sum_m p_m v_m(i): probability of EXIT at each intersection.
    [[nodiscard]] std::vector<double> exit_marginals() const;

    friend bool operator==(const StrategyDistribution &,
                           const StrategyDistribution &) = default;

  private:
    int n_;
    std::vector<Entry> entries_;
};

/// lambda * a + (1 - lambda) * b on the merged support.
StrategyDistribution mix(const StrategyDistribution &a,
                         const StrategyDistribution &b, double lambda);

/// Payoff collected by following `v`: the first EXIT decides, motel if none.
double payoff_of_array(const InstructionArray &v, const PayoffSchedule &s);

double expected_payoff(const StrategyDistribution &dist,
                       const PayoffSchedule &s);

enum class DeterministicAction { AlwaysContinue, AlwaysExit };

std::string_view to_string(DeterministicAction action) noexcept;

struct DeterministicOptimum {
    double payoff;
    DeterministicAction action;
};

/// Best of always-CONTINUE (motel) and always-EXIT (r_1); ties go to
/// AlwaysContinue.
DeterministicOptimum deterministic_optimum(const PayoffSchedule &s);

/**
 * Expected payoff when every intersection flips an independent coin that
 * says CONTINUE with probability `p`:
 * sum_i r_i p^(i-1) (1-p) + r_m p^N.
 */
double probabilistic_payoff(double p, const PayoffSchedule &s);

struct ProbabilisticOptimum {
    double p_star;
    double payoff;
};

/**
 * Global maximizer of probabilistic_payoff over [0, 1].
 *
 * Brackets critical points of the payoff polynomial on a uniform grid of
 * kCriticalPointGrid cells, polishes each with safeguarded Newton steps on
 * the derivative and compares them against both endpoints. Among equal
 * payoffs the smallest p wins.
 */
ProbabilisticOptimum probabilistic_optimum(const PayoffSchedule &s);

inline constexpr int kCriticalPointGrid = 10'000;

/// Distribution induced by i.i.d. coins: weight p^#zeros (1-p)^#ones.
StrategyDistribution iid_distribution(double p, int n);

} // namespace amdriver
