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

#include "amdriver/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace amdriver {

namespace {

std::size_t dimension(int n) {
    if (n < 1 || n > kMaxEncodableIntersections) {
        throw DimensionError("qubit count " + std::to_string(n) + " out of range");
    }
    return std::size_t{1} << n;
}

double squared_norm(std::span<const Complex> amps) {
    double total = 0.0;
    for (const auto &a : amps) {
        total += std::norm(a);
    }
    return total;
}

StateVector from_pairs(int n, std::initializer_list<std::pair<const char *, Complex>> terms) {
    std::vector<Complex> amps(dimension(n));
    for (const auto &[bits, a] : terms) {
        amps[InstructionArray::parse(bits).code()] = a;
    }
    return StateVector::normalized(n, std::move(amps));
}

} // namespace

StateVector::StateVector(int n, std::vector<Complex> amplitudes)
    : n_{n}, amps_{std::move(amplitudes)} {
    if (amps_.size() != dimension(n)) {
        throw DimensionError("expected " + std::to_string(dimension(n)) +
                             " amplitudes, got " + std::to_string(amps_.size()));
    }
    for (const auto &a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw DomainError("non-finite amplitude");
        }
    }
    const double norm = squared_norm(amps_);
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw DomainError("state has squared norm " + std::to_string(norm));
    }
}

StateVector StateVector::normalized(int n, std::vector<Complex> amplitudes) {
    const double norm = std::sqrt(squared_norm(amplitudes));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("cannot normalize a zero or non-finite vector");
    }
    for (auto &a : amplitudes) {
        a /= norm;
    }
    return {n, std::move(amplitudes)};
}

Complex StateVector::amplitude(const InstructionArray &v) const {
    if (v.size() != n_) {
        throw DimensionError("array length does not match qubit count");
    }
    return amps_[v.code()];
}

double overlap_magnitude(const StateVector &a, const StateVector &b) {
    if (a.qubits() != b.qubits()) {
        throw DimensionError("overlap of states with different qubit counts");
    }
    Complex acc{};
    for (std::size_t k = 0; k < a.amplitudes().size(); ++k) {
        acc += std::conj(a.amplitudes()[k]) * b.amplitudes()[k];
    }
    return std::abs(acc);
}

StateVector state_from_distribution(const StrategyDistribution &dist,
                                    std::optional<std::span<const double>> phases) {
    const auto entries = dist.entries();
    if (phases && phases->size() != entries.size()) {
        throw DimensionError("expected " + std::to_string(entries.size()) +
                             " phases, got " + std::to_string(phases->size()));
    }
    std::vector<Complex> amps(dimension(dist.intersections()));
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const double psi = phases ? (*phases)[k] : 0.0;
        amps[entries[k].first.code()] = std::polar(std::sqrt(entries[k].second), psi);
    }
    return StateVector::normalized(dist.intersections(), std::move(amps));
}

StateVector state_from_vertex(const PolytopeVertex &vertex,
                              std::optional<std::span<const double>> phases) {
    return state_from_distribution(vertex.distribution(), phases);
}

StateVector product_state(double p, int n) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("probability " + std::to_string(p) + " outside [0, 1]");
    }
    const double a0 = std::sqrt(p);
    const double a1 = std::sqrt(1.0 - p);
    std::vector<Complex> amps(dimension(n));
    for (std::uint32_t code = 0; code < amps.size(); ++code) {
        const auto v = InstructionArray::from_code(code, n);
        const int ones = v.count_exits();
        amps[code] = std::pow(a0, n - ones) * std::pow(a1, ones);
    }
    return StateVector::normalized(n, std::move(amps));
}

StateVector singlet_state() { return from_pairs(2, {{"01", 1.0}, {"10", -1.0}}); }
StateVector ghz_state() { return from_pairs(3, {{"001", 1.0}, {"110", 1.0}}); }
StateVector w_state() {
    return from_pairs(3, {{"001", 1.0}, {"010", 1.0}, {"100", 1.0}});
}
StateVector ghz_prime_state() { return from_pairs(3, {{"011", 1.0}, {"100", 1.0}}); }

ReducedDensityMatrix reduced_density(const StateVector &psi, int site) {
    const int n = psi.qubits();
    if (site < 1 || site > n) {
        throw DimensionError("site " + std::to_string(site) + " outside [1, " +
                             std::to_string(n) + "]");
    }
    const auto amps = psi.amplitudes();
    const std::size_t bit = std::size_t{1} << (n - site);
    ReducedDensityMatrix rho;
    rho.site = site;
    // Walk every basis index with the site bit cleared and pair it with its
    // partner that has the bit set.
    for (std::size_t k = 0; k < amps.size(); ++k) {
        if ((k & bit) != 0) {
            continue;
        }
        const Complex a0 = amps[k];
        const Complex a1 = amps[k | bit];
        rho.entries[0][0] += a0 * std::conj(a0);
        rho.entries[0][1] += a0 * std::conj(a1);
        rho.entries[1][0] += a1 * std::conj(a0);
        rho.entries[1][1] += a1 * std::conj(a1);
    }
    return rho;
}

IndistinguishabilityReport verify_indistinguishability(const StateVector &psi,
                                                       double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("tolerance must be positive");
    }
    std::vector<ReducedDensityMatrix> rhos;
    for (int site = 1; site <= psi.qubits(); ++site) {
        rhos.push_back(reduced_density(psi, site));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        for (std::size_t j = i + 1; j < rhos.size(); ++j) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    worst = std::max(worst, std::abs(rhos[i](a, b) - rhos[j](a, b)));
                }
            }
        }
    }
    return {worst <= tol, worst};
}

StrategyDistribution born_distribution(const StateVector &psi) {
    const int n = psi.qubits();
    std::vector<StrategyDistribution::Entry> entries;
    const auto amps = psi.amplitudes();
    for (std::uint32_t code = 0; code < amps.size(); ++code) {
        const double w = std::norm(amps[code]);
        if (w >= kBornPruneThreshold) {
            entries.emplace_back(InstructionArray::from_code(code, n), w);
        }
    }
    return {n, std::move(entries)};
}

std::vector<InstructionArray> sample_outcomes(const StateVector &psi,
                                              std::int64_t shots,
                                              std::uint64_t seed) {
    if (shots < 1) {
        throw DomainError("shots must be at least 1");
    }
    const auto dist = born_distribution(psi);
    const auto entries = dist.entries();
    std::vector<double> cdf;
    cdf.reserve(entries.size());
    double acc = 0.0;
    for (const auto &[v, w] : entries) {
        acc += w;
        cdf.push_back(acc);
    }

    std::mt19937_64 rng(seed);
    std::vector<InstructionArray> out;
    out.reserve(static_cast<std::size_t>(shots));
    for (std::int64_t s = 0; s < shots; ++s) {
        // 53 random bits scaled to [0, acc); independent of the standard
        // library's distribution implementations.
        const double u = static_cast<double>(rng() >> 11U) * 0x1.0p-53 * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf.begin()), entries.size() - 1);
        out.push_back(entries[idx].first);
    }
    return out;
}

} // namespace amdriver
