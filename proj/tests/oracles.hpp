/*
  Copyright (c) The w2w Authors.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

// Reference computations for the tests. Each one takes a different route
// from the library: raw cell sums, products of probabilities without
// lgamma, brute-force loops.

#ifndef W2W_TESTS_ORACLES_HPP
#define W2W_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "w2w/bitext.hpp"
#include "w2w/linking.hpp"
#include "w2w/scoring.hpp"

namespace oracle {

// 2x2 G^2 as 2 * sum O * ln(O / E) over the four cells.
inline double g2(double a, double row, double col, double total) {
  const double cells[4] = {a, row - a, col - a, total - row - col + a};
  const double rows[4] = {row, row, total - row, total - row};
  const double cols[4] = {col, total - col, col, total - col};
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (cells[i] == 0.0) continue;
    const double expected = rows[i] * cols[i] / total;
    sum += cells[i] * std::log(cells[i] / expected);
  }
  const double stat = 2.0 * sum;
  return a * total < row * col ? -stat : stat;
}

// C(n,k) p^k (1-p)^(n-k) by repeated multiplication.
inline double binomial_pmf(unsigned k, unsigned n, double p) {
  double coef = 1.0;
  for (unsigned i = 1; i <= k; ++i) coef = coef * (n - k + i) / i;
  double prob = coef;
  for (unsigned i = 0; i < k; ++i) prob *= p;
  for (unsigned i = 0; i < n - k; ++i) prob *= 1.0 - p;
  return prob;
}

// p^k (1-p)^(n-k) ratio for the two rates, in the linear domain.
inline double likelihood_ratio(unsigned k, unsigned n, double lp, double lm) {
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i) r *= lp / lm;
  for (unsigned i = 0; i < n - k; ++i) r *= (1.0 - lp) / (1.0 - lm);
  return r;
}

// Log of the product of mixture probabilities, with tau from its definition.
inline double mixture(const std::vector<std::tuple<unsigned, unsigned, unsigned>>& knc,
                      double lp, double lm, double lambda) {
  const double tau = (lambda - lm) / (lp - lm);
  double ll = 0.0;
  for (auto [k, n, c] : knc) {
    const double prob = tau * binomial_pmf(k, n, lp) + (1.0 - tau) * binomial_pmf(k, n, lm);
    ll += c * std::log(prob);
  }
  return ll;
}

// Wilson bounds as the roots of (p - x)^2 = z^2 x (1 - x) / n.
inline std::pair<double, double> wilson(double successes, double trials) {
  const double z = 1.959963984540054;
  const double p = successes / trials;
  const double a = 1.0 + z * z / trials;
  const double b = -(2.0 * p + z * z / trials);
  const double c = p * p;
  const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
  return {(-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)};
}

// Co-occurrence by nested loops over every token pair of every segment.
inline std::map<std::tuple<int, w2w::WordId, w2w::WordId>, std::uint64_t> cooc(
    const w2w::Bitext& bitext, std::size_t cap) {
  std::map<std::tuple<int, w2w::WordId, w2w::WordId>, std::uint64_t> out;
  for (const auto& seg : bitext.segments()) {
    if (seg.source.size() > cap || seg.target.size() > cap) continue;
    for (auto u : seg.source)
      for (auto v : seg.target) {
        const auto cu = bitext.source_vocab().link_class(u);
        if (cu != bitext.target_vocab().link_class(v)) continue;
        ++out[{static_cast<int>(cu), u, v}];
      }
  }
  return out;
}

// Verifies a segment's links against the greedy rule: replaying the links in
// emission order, each one must be the best candidate still available.
inline bool greedy_replay(const w2w::Bitext& bitext, const w2w::SegmentPair& seg,
                          const w2w::ScoreTable& scores,
                          const std::vector<w2w::TokenLink>& links) {
  struct Cand {
    double s;
    std::uint32_t i, j;
  };
  std::vector<Cand> cands;
  for (std::uint32_t i = 0; i < seg.source.size(); ++i)
    for (std::uint32_t j = 0; j < seg.target.size(); ++j) {
      const auto u = seg.source[i], v = seg.target[j];
      const auto cls = bitext.source_vocab().link_class(u);
      if (cls != bitext.target_vocab().link_class(v)) continue;
      if (auto s = scores.find(cls, u, v)) cands.push_back({*s, i, j});
    }
  std::vector<bool> used_s(seg.source.size()), used_t(seg.target.size());
  auto better = [](const Cand& a, const Cand& b) {
    return std::tie(b.s, a.i, a.j) < std::tie(a.s, b.i, b.j);
  };
  for (const auto& l : links) {
    const Cand* best = nullptr;
    for (const auto& c : cands)
      if (!used_s[c.i] && !used_t[c.j] && (!best || better(c, *best))) best = &c;
    if (!best || best->i != l.source_pos || best->j != l.target_pos) return false;
    used_s[l.source_pos] = used_t[l.target_pos] = true;
  }
  for (const auto& c : cands)
    if (!used_s[c.i] && !used_t[c.j]) return false;  // a linkable pair was left
  return true;
}

}  // namespace oracle

#endif  // W2W_TESTS_ORACLES_HPP
