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

#include "w2w/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "w2w/error.hpp"
#include "w2w/linking.hpp"

namespace w2w {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// o * log(o / e) with e = row * col / total, and 0 log 0 = 0.
double cell_term(double observed, double row, double col, double total) {
  if (observed == 0.0) return 0.0;
  return observed * std::log(observed * total / (row * col));
}

double xlogy(std::uint64_t x, double y) {
  return x == 0 ? 0.0 : static_cast<double>(x) * std::log(y);
}

double xlog1my(std::uint64_t x, double y) {
  return x == 0 ? 0.0 : static_cast<double>(x) * std::log1p(-y);
}

}  // namespace

double g2_score(std::uint64_t n_uv, std::uint64_t n_u, std::uint64_t n_v,
                std::uint64_t total) {
  auto bad = [&](const char* cell) {
    fail(ErrorCode::precondition,
         std::string("g2_score: invalid contingency cell (") + cell +
             "): n_uv=" + std::to_string(n_uv) + " n_u=" + std::to_string(n_u) +
             " n_v=" + std::to_string(n_v) + " N=" + std::to_string(total));
  };
  if (total == 0) bad("N must be positive");
  if (n_uv > n_u) bad("n_u - n_uv < 0");
  if (n_uv > n_v) bad("n_v - n_uv < 0");
  if (n_u > total) bad("n_u > N");
  if (n_v > total) bad("n_v > N");
  if (n_u + n_v - n_uv > total) bad("N - n_u - n_v + n_uv < 0");

  const double a = static_cast<double>(n_uv);
  const double b = static_cast<double>(n_u - n_uv);
  const double c = static_cast<double>(n_v - n_uv);
  const double d = static_cast<double>(total - n_u - n_v + n_uv);
  const double r1 = static_cast<double>(n_u);
  const double r2 = static_cast<double>(total - n_u);
  const double c1 = static_cast<double>(n_v);
  const double c2 = static_cast<double>(total - n_v);
  const double t = static_cast<double>(total);

  // Off-diagonal cells are added together first so that swapping u and v
  // gives a bitwise-identical result.
  const double off = cell_term(b, r1, c2, t) + cell_term(c, r2, c1, t);
  double g2 = 2.0 * (cell_term(a, r1, c1, t) + off + cell_term(d, r2, c2, t));
  g2 = std::max(g2, 0.0);

  const auto observed = static_cast<unsigned __int128>(n_uv) * total;
  const auto expected = static_cast<unsigned __int128>(n_u) * n_v;
  return observed < expected ? -g2 : g2;
}

double log_binomial_pmf(std::uint64_t k, std::uint64_t n, double p) {
  if (k > n)
    fail(ErrorCode::precondition, "log_binomial_pmf: k=" + std::to_string(k) +
                                      " exceeds n=" + std::to_string(n));
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::precondition,
         "log_binomial_pmf: p=" + std::to_string(p) + " outside [0, 1]");
  if (p == 0.0) return k == 0 ? 0.0 : -kInf;
  if (p == 1.0) return k == n ? 0.0 : -kInf;
  const double log_choose = std::lgamma(static_cast<double>(n) + 1.0) -
                            std::lgamma(static_cast<double>(k) + 1.0) -
                            std::lgamma(static_cast<double>(n - k) + 1.0);
  return log_choose + xlogy(k, p) + xlog1my(n - k, p);
}

double log_likelihood_ratio(std::uint64_t k, std::uint64_t n,
                            double lambda_plus, double lambda_minus) {
  if (k > n)
    fail(ErrorCode::precondition, "likelihood_ratio: k=" + std::to_string(k) +
                                      " exceeds n=" + std::to_string(n));
  if (!(lambda_plus > lambda_minus) || lambda_minus < 0.0 || lambda_plus > 1.0)
    fail(ErrorCode::precondition,
         "likelihood_ratio: requires 0 <= lambda- < lambda+ <= 1");
  // The false-positive hypothesis cannot produce any link.
  if (lambda_minus == 0.0 && k > 0) return kInf;
  return (xlogy(k, lambda_plus) - xlogy(k, lambda_minus)) +
         (xlog1my(n - k, lambda_plus) - xlog1my(n - k, lambda_minus));
}

double log_likelihood_ratio(std::uint64_t k, std::uint64_t n,
                            const ClassParams& params) {
  return log_likelihood_ratio(k, n, params.lambda_plus, params.lambda_minus);
}

std::optional<double> ScoreTable::find(LinkClass c, WordId u, WordId v) const {
  const auto& m = scores_[class_index(c)];
  auto it = m.find(pair_key(u, v));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

void ScoreTable::insert(LinkClass c, WordId u, WordId v, double score) {
  scores_[class_index(c)][pair_key(u, v)] = score;
}

std::size_t ScoreTable::size() const {
  std::size_t n = 0;
  for (const auto& m : scores_) n += m.size();
  return n;
}

std::vector<ScoredPair> ScoreTable::sorted(LinkClass c) const {
  std::vector<ScoredPair> out;
  out.reserve(scores_[class_index(c)].size());
  for (const auto& [key, s] : scores_[class_index(c)])
    out.push_back({key_source(key), key_target(key), s});
  std::sort(out.begin(), out.end(),
            [](const ScoredPair& a, const ScoredPair& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  return out;
}

ScoreTable initial_scores(const CoocTable& cooc) {
  ScoreTable table(ScoreKind::association, 1.0);
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const auto cls = class_at(c);
    const auto total = cooc.total(cls);
    for (const auto& [key, n] : cooc.pairs(cls)) {
      const double g2 = g2_score(n, cooc.source_marginal(key_source(key)),
                                 cooc.target_marginal(key_target(key)), total);
      if (g2 > 0.0) table.insert(cls, key_source(key), key_target(key), g2);
    }
  }
  return table;
}

ScoreTable rebuild_scores(const CoocTable& cooc, const LinkStats& links,
                          const ClassParamSet& params, double cutoff) {
  if (!(cutoff > 0.0))
    fail(ErrorCode::argument, "cutoff must be positive");
  ScoreTable table(ScoreKind::likelihood_ratio, cutoff);
  const double log_cutoff = std::log(cutoff);
  for (std::size_t c = 0; c < kClassCount; ++c) {
    if (!params[c]) continue;
    const auto cls = class_at(c);
    for (const auto& [key, n] : cooc.pairs(cls)) {
      const auto k = links.count(cls, key_source(key), key_target(key));
      const double s = log_likelihood_ratio(k, n, *params[c]);
      if (s >= log_cutoff) table.insert(cls, key_source(key), key_target(key), s);
    }
  }
  return table;
}

void write_scores_tsv(const ScoreTable& scores, const CoocTable& cooc,
                      const LinkStats& links, const Bitext& bitext,
                      std::ostream& out) {
  const auto precision = out.precision(17);
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const auto cls = class_at(c);
    for (const auto& e : scores.sorted(cls))
      out << class_name(cls) << '\t' << bitext.source_vocab().surface(e.u)
          << '\t' << bitext.target_vocab().surface(e.v) << '\t'
          << cooc.count(cls, e.u, e.v) << '\t' << links.count(cls, e.u, e.v)
          << '\t' << e.score << '\n';
  }
  out.precision(precision);
}

}  // namespace w2w
