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

#include "amdriver/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

namespace amdriver {

ConstraintSystem build_constraints(int n, int max_intersections) {
    const int cap = std::min(max_intersections, kMaxEncodableIntersections);
    if (n < 1 || n > cap) {
        throw DomainError("number of intersections " + std::to_string(n) +
                          " outside [1, " + std::to_string(cap) + "]");
    }
    const Eigen::Index cols = Eigen::Index{1} << n;
    ConstraintSystem sys;
    sys.intersections = n;
    sys.rows = Eigen::MatrixXi::Zero(n, cols);
    sys.rhs = Eigen::VectorXi::Zero(n);
    sys.rhs(0) = 1;
    for (Eigen::Index j = 0; j < cols; ++j) {
        const auto v = InstructionArray::from_code(static_cast<std::uint32_t>(j), n);
        sys.rows(0, j) = 1;
        const int first = v.exits_at(0) ? 1 : 0;
        for (int i = 1; i < n; ++i) {
            sys.rows(i, j) = (v.exits_at(i) ? 1 : 0) - first;
        }
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Rationals and ids

std::string Rational::to_string() const {
    if (denominator == 1) {
        return std::to_string(numerator);
    }
    return std::to_string(numerator) + "/" + std::to_string(denominator);
}

std::optional<Rational> snap_to_rational(double x, std::int64_t max_denominator,
                                         double tolerance) {
    if (!std::isfinite(x)) {
        return std::nullopt;
    }
    for (std::int64_t q = 1; q <= max_denominator; ++q) {
        const double num = std::round(x * static_cast<double>(q));
        if (std::abs(x - num / static_cast<double>(q)) < tolerance) {
            // Smallest admissible denominator, hence already in lowest terms.
            return Rational{static_cast<std::int64_t>(num), q};
        }
    }
    return std::nullopt;
}

std::string format_vertex_id(const VertexId &id, int n) {
    std::string out;
    for (std::size_t k = 0; k < id.size(); ++k) {
        if (k != 0) {
            out += '+';
        }
        out += InstructionArray::from_code(id[k], n).to_string();
    }
    return out;
}

VertexId parse_vertex_id(const std::string &text, int n) {
    VertexId id;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, '+')) {
        const auto v = InstructionArray::parse(token);
        if (v.size() != n) {
            throw DomainError("support array '" + token + "' does not have " +
                              std::to_string(n) + " entries");
        }
        id.push_back(v.code());
    }
    if (id.empty()) {
        throw DomainError("empty vertex id");
    }
    std::sort(id.begin(), id.end());
    if (std::adjacent_find(id.begin(), id.end()) != id.end()) {
        throw DomainError("vertex id '" + text + "' repeats an array");
    }
    return id;
}

// ---------------------------------------------------------------------------
// PolytopeVertex

PolytopeVertex::PolytopeVertex(StrategyDistribution dist,
                               std::optional<std::vector<Rational>> exact_weights)
    : dist_{std::move(dist)}, exact_{std::move(exact_weights)} {
    if (exact_ && exact_->size() != dist_.support_size()) {
        throw DimensionError("one exact weight per support array required");
    }
    id_.reserve(dist_.support_size());
    for (const auto &[v, w] : dist_.entries()) {
        id_.push_back(v.code());
    }
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct Candidate {
    VertexId support;
    std::vector<double> weights;
};

/**
 * Depth-first search over supports with an incrementally maintained thin QR
 * factorization (Gram-Schmidt, one reorthogonalization pass) of the chosen
 * constraint columns.
 */
class SupportSearch {
  public:
    SupportSearch(const ConstraintSystem &sys)
        : n_{sys.intersections}, count_{static_cast<std::uint32_t>(sys.columns())},
          columns_(static_cast<std::size_t>(sys.columns() * n_)),
          q_(static_cast<std::size_t>(n_ * n_)), r_(static_cast<std::size_t>(n_ * n_)),
          scratch_(static_cast<std::size_t>(n_)), x_(static_cast<std::size_t>(n_)) {
        for (Eigen::Index j = 0; j < sys.columns(); ++j) {
            for (int i = 0; i < n_; ++i) {
                columns_[static_cast<std::size_t>(j * n_ + i)] = sys.rows(i, j);
            }
        }
        chosen_.reserve(static_cast<std::size_t>(n_));
    }

    void run_from(std::uint32_t first, std::vector<Candidate> &out) {
        if (push(first)) {
            visit(out);
            descend(first + 1, out);
            pop();
        }
    }

  private:
    [[nodiscard]] int depth() const { return static_cast<int>(chosen_.size()); }
    double &q(int k, int i) { return q_[static_cast<std::size_t>(k * n_ + i)]; }
    double &r(int k, int j) { return r_[static_cast<std::size_t>(k * n_ + j)]; }
    [[nodiscard]] const double *column(std::uint32_t code) const {
        return &columns_[static_cast<std::size_t>(code) * static_cast<std::size_t>(n_)];
    }

    void descend(std::uint32_t start, std::vector<Candidate> &out) {
        if (depth() >= n_) {
            return;
        }
        for (std::uint32_t code = start; code < count_; ++code) {
            if (push(code)) {
                visit(out);
                descend(code + 1, out);
                pop();
            }
        }
    }

    bool push(std::uint32_t code) {
        const int k = depth();
        const double *a = column(code);
        std::copy(a, a + n_, scratch_.begin());
        for (int j = 0; j < k; ++j) {
            r(k, j) = 0.0;
        }
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < k; ++j) {
                double dot = 0.0;
                for (int i = 0; i < n_; ++i) {
                    dot += q(j, i) * scratch_[static_cast<std::size_t>(i)];
                }
                r(k, j) += dot;
                for (int i = 0; i < n_; ++i) {
                    scratch_[static_cast<std::size_t>(i)] -= dot * q(j, i);
                }
            }
        }
        double norm = 0.0;
        for (double s : scratch_) {
            norm += s * s;
        }
        norm = std::sqrt(norm);
        if (norm <= kVertexTolerance) {
            return false;
        }
        r(k, k) = norm;
        for (int i = 0; i < n_; ++i) {
            q(k, i) = scratch_[static_cast<std::size_t>(i)] / norm;
        }
        chosen_.push_back(code);
        return true;
    }

    void pop() { chosen_.pop_back(); }

    /// Records the current support if A_S x = e_0 has a positive solution.
    void visit(std::vector<Candidate> &out) {
        const int k = depth();
        // Q^T e_0 is the first entry of each basis vector.
        double captured = 0.0;
        for (int j = 0; j < k; ++j) {
            captured += q(j, 0) * q(j, 0);
        }
        if (1.0 - captured > 1e-8) {
            return;
        }
        for (int j = k - 1; j >= 0; --j) {
            double acc = q(j, 0);
            for (int l = j + 1; l < k; ++l) {
                acc -= r(l, j) * x_[static_cast<std::size_t>(l)];
            }
            x_[static_cast<std::size_t>(j)] = acc / r(j, j);
            if (x_[static_cast<std::size_t>(j)] <= kVertexTolerance) {
                return;
            }
        }
        for (int i = 0; i < n_; ++i) {
            double lhs = 0.0;
            for (int j = 0; j < k; ++j) {
                lhs += column(chosen_[static_cast<std::size_t>(j)])[i] *
                       x_[static_cast<std::size_t>(j)];
            }
            if (std::abs(lhs - (i == 0 ? 1.0 : 0.0)) > kVertexTolerance) {
                return;
            }
        }
        out.push_back({chosen_, {x_.begin(), x_.begin() + k}});
    }

    int n_;
    std::uint32_t count_;
    std::vector<double> columns_;
    std::vector<double> q_;
    std::vector<double> r_;
    std::vector<double> scratch_;
    std::vector<double> x_;
    VertexId chosen_;
};

PolytopeVertex certify(const Candidate &c, int n) {
    const std::int64_t max_den = std::int64_t{2} * n * (std::int64_t{1} << n);
    std::vector<Rational> exact;
    exact.reserve(c.weights.size());
    for (double w : c.weights) {
        auto snapped = snap_to_rational(w, max_den);
        if (!snapped) {
            break;
        }
        exact.push_back(*snapped);
    }
    const bool snapped = exact.size() == c.weights.size();

    double total = 0.0;
    std::vector<StrategyDistribution::Entry> entries;
    for (std::size_t k = 0; k < c.support.size(); ++k) {
        const double w = snapped ? exact[k].value() : c.weights[k];
        entries.emplace_back(InstructionArray::from_code(c.support[k], n), w);
        total += w;
    }
    if (!snapped) {
        // Absorb rounding so the distribution normalizes exactly.
        for (auto &e : entries) {
            e.second /= total;
        }
    }
    return {StrategyDistribution(n, std::move(entries)),
            snapped ? std::optional(std::move(exact)) : std::nullopt};
}

} // namespace

std::vector<PolytopeVertex> enumerate_vertices(int n,
                                               const EnumerationOptions &options) {
    const auto sys = build_constraints(n, options.max_intersections);
    const auto columns = static_cast<std::uint32_t>(sys.columns());

    unsigned workers = options.threads != 0 ? options.threads
                                            : std::thread::hardware_concurrency();
    workers = std::clamp(workers, 1U, columns);

    // Root subtrees are dealt round-robin; each worker owns its output.
    std::vector<std::vector<Candidate>> found(workers);
    auto work = [&](unsigned w) {
        SupportSearch search(sys);
        for (std::uint32_t first = w; first < columns; first += workers) {
            search.run_from(first, found[w]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }

    std::vector<Candidate> merged;
    for (auto &part : found) {
        std::move(part.begin(), part.end(), std::back_inserter(merged));
    }
    std::sort(merged.begin(), merged.end(),
              [](const Candidate &a, const Candidate &b) { return a.support < b.support; });
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](const Candidate &a, const Candidate &b) {
                                 return a.support == b.support;
                             }),
                 merged.end());

    std::vector<PolytopeVertex> vertices;
    vertices.reserve(merged.size());
    for (const auto &c : merged) {
        vertices.push_back(certify(c, n));
    }
    return vertices;
}

VertexOptimum optimal_vertex(const PayoffSchedule &s,
                             const std::vector<PolytopeVertex> &vertices) {
    if (vertices.empty()) {
        throw DomainError("optimal_vertex needs at least one vertex");
    }
    std::vector<double> payoffs;
    payoffs.reserve(vertices.size());
    for (const auto &v : vertices) {
        if (v.intersections() != s.intersections()) {
            throw DimensionError("vertex and schedule disagree on N");
        }
        payoffs.push_back(expected_payoff(v.distribution(), s));
    }
    const double best = *std::max_element(payoffs.begin(), payoffs.end());
    std::size_t pick = vertices.size();
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        if (payoffs[k] >= best - kVertexTolerance &&
            (pick == vertices.size() || vertices[pick].id() < vertices[k].id())) {
            pick = k;
        }
    }
    return {vertices[pick], payoffs[pick]};
}

bool verify_membership(const StrategyDistribution &dist, int n) {
    if (dist.intersections() != n) {
        return false;
    }
    const auto u = dist.exit_marginals();
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    return *hi - *lo <= kVertexTolerance;
}

PolytopeVertex complement(const PolytopeVertex &v) {
    struct Item {
        InstructionArray array;
        double weight;
        std::optional<Rational> exact;
    };
    std::vector<Item> items;
    const auto entries = v.distribution().entries();
    for (std::size_t k = 0; k < entries.size(); ++k) {
        items.push_back({entries[k].first.complement(), entries[k].second,
                         v.exact_weights() ? std::optional((*v.exact_weights())[k])
                                           : std::nullopt});
    }
    std::sort(items.begin(), items.end(),
              [](const Item &a, const Item &b) { return a.array < b.array; });

    std::vector<StrategyDistribution::Entry> flipped;
    std::vector<Rational> exact;
    for (const auto &item : items) {
        flipped.emplace_back(item.array, item.weight);
        if (item.exact) {
            exact.push_back(*item.exact);
        }
    }
    return {StrategyDistribution(v.intersections(), std::move(flipped)),
            v.exact_weights() ? std::optional(std::move(exact)) : std::nullopt};
}

} // namespace amdriver
