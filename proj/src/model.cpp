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

#include "amdriver/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace amdriver {

namespace {

void check_length(int n) {
    if (n < 1 || n > kMaxEncodableIntersections) {
        throw DimensionError("instruction array length " + std::to_string(n) +
                             " outside [1, " +
                             std::to_string(kMaxEncodableIntersections) + "]");
    }
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("probability " + std::to_string(p) +
                          " outside [0, 1]");
    }
}

std::uint32_t full_mask(int n) { return (std::uint32_t{1} << n) - 1U; }

} // namespace

// ---------------------------------------------------------------------------
// InstructionArray

InstructionArray InstructionArray::from_code(std::uint32_t code, int n) {
    check_length(n);
    if (code > full_mask(n)) {
        throw DomainError("code " + std::to_string(code) +
                          " does not fit in " + std::to_string(n) + " bits");
    }
    return {code, n};
}

InstructionArray InstructionArray::from_bits(std::span<const int> bits) {
    const int n = static_cast<int>(bits.size());
    check_length(n);
    std::uint32_t code = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) {
            throw DomainError("instruction bits must be 0 or 1");
        }
        code = (code << 1U) | static_cast<std::uint32_t>(b);
    }
    return {code, n};
}

InstructionArray InstructionArray::parse(std::string_view text) {
    std::vector<int> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw DomainError("invalid instruction array '" +
                              std::string(text) + "'");
        }
        bits.push_back(c - '0');
    }
    return from_bits(bits);
}

bool InstructionArray::exits_at(int i) const {
    if (i < 0 || i >= n_) {
        throw DimensionError("intersection index out of range");
    }
    return ((code_ >> (n_ - 1 - i)) & 1U) != 0;
}

std::optional<int> InstructionArray::first_exit() const noexcept {
    if (code_ == 0) {
        return std::nullopt;
    }
    // Highest set bit of the code is the earliest intersection.
    return n_ - std::bit_width(code_);
}

int InstructionArray::count_exits() const noexcept {
    return std::popcount(code_);
}

InstructionArray InstructionArray::complement() const noexcept {
    return {~code_ & full_mask(n_), n_};
}

InstructionArray InstructionArray::with_flipped(int i) const {
    if (i < 0 || i >= n_) {
        throw DimensionError("intersection index out of range");
    }
    return {code_ ^ (std::uint32_t{1} << (n_ - 1 - i)), n_};
}

std::string InstructionArray::to_string() const {
    std::string s(static_cast<std::size_t>(n_), '0');
    for (int i = 0; i < n_; ++i) {
        if (exits_at(i)) {
            s[static_cast<std::size_t>(i)] = '1';
        }
    }
    return s;
}

int hamming_distance(const InstructionArray &a, const InstructionArray &b) {
    if (a.size() != b.size()) {
        throw DimensionError("hamming distance of arrays of different length");
    }
    return std::popcount(a.code() ^ b.code());
}

// ---------------------------------------------------------------------------
// PayoffSchedule

PayoffSchedule::PayoffSchedule(std::vector<double> exit_payoffs,
                               double motel_payoff)
    : exit_payoffs_{std::move(exit_payoffs)}, motel_{motel_payoff} {
    check_length(static_cast<int>(exit_payoffs_.size()));
    auto valid = [](double r) { return std::isfinite(r) && r >= 0.0; };
    if (!std::all_of(exit_payoffs_.begin(), exit_payoffs_.end(), valid) ||
        !valid(motel_)) {
        throw DomainError("payoffs must be finite and non-negative");
    }
}

// ---------------------------------------------------------------------------
// StrategyDistribution

StrategyDistribution::StrategyDistribution(int n, std::vector<Entry> entries)
    : n_{n} {
    check_length(n);
    entries_.reserve(entries.size());
    double total = 0.0;
    for (auto &[v, w] : entries) {
        if (v.size() != n) {
            throw DimensionError("support array of length " +
                                 std::to_string(v.size()) + ", expected " +
                                 std::to_string(n));
        }
        if (!std::isfinite(w) || w < 0.0) {
            throw DomainError("weights must be finite and non-negative");
        }
        total += w;
        if (w > 0.0) {
            entries_.emplace_back(v, w);
        }
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry &a, const Entry &b) { return a.first < b.first; });
    auto dup = std::adjacent_find(
        entries_.begin(), entries_.end(),
        [](const Entry &a, const Entry &b) { return a.first == b.first; });
    if (dup != entries_.end()) {
        throw DomainError("duplicate support array " + dup->first.to_string());
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
        throw DomainError("weights sum to " + std::to_string(total) +
                          ", expected 1");
    }
}

StrategyDistribution StrategyDistribution::point(const InstructionArray &v) {
    return StrategyDistribution(v.size(), {{v, 1.0}});
}

double StrategyDistribution::weight(const InstructionArray &v) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), v,
        [](const Entry &e, const InstructionArray &key) { return e.first < key; });
    return (it != entries_.end() && it->first == v) ? it->second : 0.0;
}

std::vector<double> StrategyDistribution::exit_marginals() const {
    std::vector<double> u(static_cast<std::size_t>(n_), 0.0);
    for (const auto &[v, w] : entries_) {
        for (int i = 0; i < n_; ++i) {
            if (v.exits_at(i)) {
                u[static_cast<std::size_t>(i)] += w;
            }
        }
    }
    return u;
}

StrategyDistribution mix(const StrategyDistribution &a,
                         const StrategyDistribution &b, double lambda) {
    if (a.intersections() != b.intersections()) {
        throw DimensionError("cannot mix distributions of different length");
    }
    check_probability(lambda);
    std::map<InstructionArray, double> merged;
    for (const auto &[v, w] : a.entries()) {
        merged[v] += lambda * w;
    }
    for (const auto &[v, w] : b.entries()) {
        merged[v] += (1.0 - lambda) * w;
    }
    return {a.intersections(), {merged.begin(), merged.end()}};
}

// ---------------------------------------------------------------------------
// Payoffs

double payoff_of_array(const InstructionArray &v, const PayoffSchedule &s) {
    if (v.size() != s.intersections()) {
        throw DimensionError("array has " + std::to_string(v.size()) +
                             " intersections, schedule has " +
                             std::to_string(s.intersections()));
    }
    const auto i = v.first_exit();
    return i ? s.exit_payoff(*i) : s.motel_payoff();
}

double expected_payoff(const StrategyDistribution &dist,
                       const PayoffSchedule &s) {
    if (dist.intersections() != s.intersections()) {
        throw DimensionError("distribution and schedule disagree on N");
    }
    double total = 0.0;
    for (const auto &[v, w] : dist.entries()) {
        total += w * payoff_of_array(v, s);
    }
    return total;
}

std::string_view to_string(DeterministicAction action) noexcept {
    switch (action) {
    case DeterministicAction::AlwaysContinue:
        return "ALWAYS_CONTINUE";
    case DeterministicAction::AlwaysExit:
        return "ALWAYS_EXIT";
    }
    return "?";
}

DeterministicOptimum deterministic_optimum(const PayoffSchedule &s) {
    const double exit_now = s.exit_payoff(0);
    if (exit_now > s.motel_payoff()) {
        return {exit_now, DeterministicAction::AlwaysExit};
    }
    return {s.motel_payoff(), DeterministicAction::AlwaysContinue};
}

double probabilistic_payoff(double p, const PayoffSchedule &s) {
    check_probability(p);
    // Probability of reaching intersection i is p^(i-1).
    double reach = 1.0;
    double total = 0.0;
    for (double r : s.exit_payoffs()) {
        total += r * reach * (1.0 - p);
        reach *= p;
    }
    return total + s.motel_payoff() * reach;
}

namespace {

/// Power-basis coefficients c_k of the i.i.d. payoff polynomial.
std::vector<double> payoff_polynomial(const PayoffSchedule &s) {
    const int n = s.intersections();
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        const double r = s.exit_payoff(i);
        c[static_cast<std::size_t>(i)] += r;
        c[static_cast<std::size_t>(i) + 1] -= r;
    }
    c[static_cast<std::size_t>(n)] += s.motel_payoff();
    return c;
}

std::vector<double> derivative(std::span<const double> c) {
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) {
        d.push_back(static_cast<double>(k) * c[k]);
    }
    if (d.empty()) {
        d.push_back(0.0);
    }
    return d;
}

double horner(std::span<const double> c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

/// Root of `d` in [lo, hi] given d(lo) > 0 >= d(hi); Newton steps that
/// leave the bracket fall back to bisection.
double polish_root(std::span<const double> d, std::span<const double> dd,
                   double lo, double hi) {
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double fx = horner(d, x);
        if (fx == 0.0) {
            return x;
        }
        if (fx > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo < 1e-15) {
            break;
        }
        const double slope = horner(dd, x);
        double next = slope != 0.0 ? x - fx / slope : lo - 1.0;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) < 1e-16) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

} // namespace

ProbabilisticOptimum probabilistic_optimum(const PayoffSchedule &s) {
    const auto poly = payoff_polynomial(s);
    const auto d1 = derivative(poly);
    const auto d2 = derivative(d1);

    // Candidates in ascending p so that ties resolve to the smallest p.
    std::vector<double> candidates{0.0};
    double prev_x = 0.0;
    double prev_d = horner(d1, prev_x);
    for (int k = 1; k <= kCriticalPointGrid; ++k) {
        const double x = static_cast<double>(k) / kCriticalPointGrid;
        const double dx = horner(d1, x);
        // Local maxima only: derivative goes from positive to non-positive.
        if (prev_d > 0.0 && dx <= 0.0) {
            candidates.push_back(dx == 0.0 ? x
                                           : polish_root(d1, d2, prev_x, x));
        }
        prev_x = x;
        prev_d = dx;
    }
    candidates.push_back(1.0);

    ProbabilisticOptimum best{0.0, horner(poly, 0.0)};
    for (double p : candidates) {
        const double value = probabilistic_payoff(p, s);
        if (value > best.payoff + 1e-15 * (1.0 + std::abs(best.payoff))) {
            best = {p, value};
        }
    }
    best.payoff = probabilistic_payoff(best.p_star, s);
    return best;
}

StrategyDistribution iid_distribution(double p, int n) {
    check_probability(p);
    check_length(n);
    std::vector<StrategyDistribution::Entry> entries;
    const std::uint32_t count = std::uint32_t{1} << n;
    entries.reserve(count);
    for (std::uint32_t code = 0; code < count; ++code) {
        const auto v = InstructionArray::from_code(code, n);
        const int ones = v.count_exits();
        const double w = std::pow(p, n - ones) * std::pow(1.0 - p, ones);
        entries.emplace_back(v, w);
    }
    return {n, std::move(entries)};
}

} // namespace amdriver
