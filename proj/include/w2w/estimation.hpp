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

#ifndef W2W_ESTIMATION_HPP
#define W2W_ESTIMATION_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "w2w/cooc.hpp"
#include "w2w/linking.hpp"
#include "w2w/params.hpp"

namespace w2w {

// `count` pair types were linked k times out of n co-occurrences.
struct PairStat {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  std::uint64_t count = 1;

  bool operator==(const PairStat&) const = default;
};

// Groups every co-occurring pair of a class by (k, n), sorted.
std::vector<PairStat> collect_pair_stats(const CoocTable& cooc,
                                         const LinkStats& links, LinkClass c);

// K_c / N_c, or nullopt when the class has no co-occurrences.
std::optional<double> empirical_lambda(const LinkStats& links,
                                       const CoocTable& cooc, LinkClass c);

// (lambda - lambda_minus) / (lambda_plus - lambda_minus) clamped to [0, 1].
// Throws Error(degenerate) when lambda_plus == lambda_minus.
double derive_tau(double lambda_plus, double lambda_minus, double lambda);

// Sum over pair types of log[tau B(k|n,l+) + (1-tau) B(k|n,l-)].
double mixture_log_likelihood(std::span<const PairStat> stats,
                              double lambda_plus, double lambda_minus,
                              double lambda);

struct SearchConfig {
  std::size_t grid_plus = 25;
  std::size_t grid_minus = 25;
  double minus_floor = 1e-8;
  double plus_cap = 1.0 - 1e-6;
  double tolerance = 1e-9;
  std::size_t max_refine_steps = 200;
  unsigned threads = 1;

  bool operator==(const SearchConfig&) const = default;
};

// Receives every evaluated point; used for the parameter trace log.
struct TraceContext {
  std::ostream* out = nullptr;
  std::size_t iteration = 0;
};

// Maximizes the mixture likelihood over (lambda_plus, lambda_minus) with
// lambda fixed. A log-spaced grid over lambda_minus in [floor, lambda) and a
// linear grid over lambda_plus in (lambda, cap] pick the start; coordinate
// search with halving steps refines it.
ClassParams fit_mixture(std::span<const PairStat> stats, double lambda,
                        LinkClass cls, const SearchConfig& config,
                        const TraceContext& trace = {});

// nullopt (with a warning) when the class has no co-occurrences or no links.
std::optional<ClassParams> estimate_params(const LinkStats& links,
                                           const CoocTable& cooc, LinkClass c,
                                           const SearchConfig& config,
                                           const TraceContext& trace = {});

// Grid points visited before refinement, exposed for objective checks.
std::vector<double> plus_grid(double lambda, const SearchConfig& config);
std::vector<double> minus_grid(double lambda, const SearchConfig& config);

}  // namespace w2w

#endif  // W2W_ESTIMATION_HPP
