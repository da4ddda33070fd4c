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

#include "w2w/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include "parallel.hpp"
#include "w2w/error.hpp"
#include "w2w/log.hpp"
#include "w2w/scoring.hpp"

namespace w2w {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// The mixture objective with per-group constants hoisted out of the search.
class MixtureObjective {
 public:
  MixtureObjective(std::span<const PairStat> stats, double lambda)
      : lambda_(lambda) {
    for (const auto& s : stats) {
      k_.push_back(static_cast<double>(s.k));
      rest_.push_back(static_cast<double>(s.n - s.k));
      weight_.push_back(static_cast<double>(s.count));
      log_choose_.push_back(std::lgamma(static_cast<double>(s.n) + 1.0) -
                            std::lgamma(static_cast<double>(s.k) + 1.0) -
                            std::lgamma(static_cast<double>(s.n - s.k) + 1.0));
    }
  }

  // Requires lambda_minus < lambda < lambda_plus, all inside (0, 1).
  double operator()(double lambda_plus, double lambda_minus) const {
    const double tau = (lambda_ - lambda_minus) / (lambda_plus - lambda_minus);
    const double log_tau = std::log(tau);
    const double log_rest = std::log1p(-tau);
    const double lp = std::log(lambda_plus), lq = std::log1p(-lambda_plus);
    const double mp = std::log(lambda_minus), mq = std::log1p(-lambda_minus);
    double total = 0.0;
    for (std::size_t i = 0; i < k_.size(); ++i) {
      const double a = log_tau + k_[i] * lp + rest_[i] * lq;
      const double b = log_rest + k_[i] * mp + rest_[i] * mq;
      total += weight_[i] * (log_choose_[i] + log_add_exp(a, b));
    }
    return total;
  }

 private:
  double lambda_;
  std::vector<double> k_, rest_, weight_, log_choose_;
};

double effective_floor(double lambda, const SearchConfig& config) {
  return std::min(config.minus_floor, lambda * 1e-3);
}

void trace_point(const TraceContext& trace, LinkClass cls, double lp,
                 double lm, double ll) {
  if (!trace.out) return;
  const auto precision = trace.out->precision(17);
  *trace.out << class_name(cls) << ' ' << trace.iteration << ' ' << lp << ' '
             << lm << ' ' << ll << '\n';
  trace.out->precision(precision);
}

}  // namespace

std::vector<PairStat> collect_pair_stats(const CoocTable& cooc,
                                         const LinkStats& links, LinkClass c) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> groups;
  for (const auto& [key, n] : cooc.pairs(c))
    ++groups[{links.count(c, key_source(key), key_target(key)), n}];
  std::vector<PairStat> out;
  out.reserve(groups.size());
  for (const auto& [kn, count] : groups) out.push_back({kn.first, kn.second, count});
  return out;
}

std::optional<double> empirical_lambda(const LinkStats& links,
                                       const CoocTable& cooc, LinkClass c) {
  const auto total = cooc.total(c);
  if (total == 0) return std::nullopt;
  return static_cast<double>(links.total(c)) / static_cast<double>(total);
}

double derive_tau(double lambda_plus, double lambda_minus, double lambda) {
  if (lambda_plus == lambda_minus)
    fail(ErrorCode::degenerate,
         "degenerate parameters: lambda+ equals lambda- (" +
             std::to_string(lambda_plus) + ")");
  if (!(lambda_plus > lambda_minus))
    fail(ErrorCode::precondition, "derive_tau requires lambda+ > lambda-");
  const double tau = (lambda - lambda_minus) / (lambda_plus - lambda_minus);
  // Rounding can overshoot the ends by an ulp or so.
  if (tau < -1e-12 || tau > 1.0 + 1e-12)
    log_warning("tau " + std::to_string(tau) +
                " outside [0, 1]; lambda lies outside (lambda-, lambda+)");
  return std::clamp(tau, 0.0, 1.0);
}

double mixture_log_likelihood(std::span<const PairStat> stats,
                              double lambda_plus, double lambda_minus,
                              double lambda) {
  const double tau = derive_tau(lambda_plus, lambda_minus, lambda);
  const double log_tau = tau > 0.0 ? std::log(tau) : kNegInf;
  const double log_rest = tau < 1.0 ? std::log1p(-tau) : kNegInf;
  double total = 0.0;
  for (const auto& s : stats) {
    if (s.k > s.n)
      fail(ErrorCode::precondition, "mixture_log_likelihood: k exceeds n");
    const double a = log_tau + log_binomial_pmf(s.k, s.n, lambda_plus);
    const double b = log_rest + log_binomial_pmf(s.k, s.n, lambda_minus);
    total += static_cast<double>(s.count) * log_add_exp(a, b);
  }
  return total;
}

std::vector<double> minus_grid(double lambda, const SearchConfig& config) {
  const double floor = effective_floor(lambda, config);
  const std::size_t points = std::max<std::size_t>(config.grid_minus, 1);
  const double span = std::log(lambda / floor);
  std::vector<double> grid;
  for (std::size_t i = 0; i < points; ++i)
    grid.push_back(floor * std::exp(span * static_cast<double>(i) /
                                    static_cast<double>(points)));
  return grid;
}

std::vector<double> plus_grid(double lambda, const SearchConfig& config) {
  const std::size_t points = std::max<std::size_t>(config.grid_plus, 1);
  std::vector<double> grid;
  for (std::size_t i = 0; i < points; ++i)
    grid.push_back(lambda + (config.plus_cap - lambda) *
                                static_cast<double>(i + 1) /
                                static_cast<double>(points));
  return grid;
}

ClassParams fit_mixture(std::span<const PairStat> stats, double lambda,
                        LinkClass cls, const SearchConfig& config,
                        const TraceContext& trace) {
  if (stats.empty())
    fail(ErrorCode::precondition, "fit_mixture: no pair statistics");
  if (!(lambda > 0.0 && lambda <= 1.0))
    fail(ErrorCode::precondition,
         "fit_mixture: lambda must lie in (0, 1], got " + std::to_string(lambda));
  if (!(config.plus_cap < 1.0 && config.plus_cap > 0.0))
    fail(ErrorCode::argument, "plus_cap must lie in (0, 1)");

  ClassParams out;
  out.cls = cls;
  out.lambda = lambda;
  const double floor = effective_floor(lambda, config);

  if (lambda >= config.plus_cap) {
    // Every co-occurrence is a link: the likelihood grows with lambda+ all
    // the way to 1, and lambda- no longer matters.
    out.lambda_plus = config.plus_cap;
    out.lambda_minus = floor;
    out.tau = 1.0;
    double ll = 0.0;
    for (const auto& s : stats)
      ll += static_cast<double>(s.count) *
            log_binomial_pmf(s.k, s.n, out.lambda_plus);
    out.log_likelihood = ll;
    out.capped = true;
    trace_point(trace, cls, out.lambda_plus, out.lambda_minus, ll);
    log_warning(std::string(class_name(cls)) + ": lambda=" +
                std::to_string(lambda) + " leaves no room below the cap; " +
                "lambda+ capped at " + std::to_string(config.plus_cap));
    return out;
  }

  const MixtureObjective objective(stats, lambda);
  const auto pgrid = plus_grid(lambda, config);
  const auto mgrid = minus_grid(lambda, config);

  std::vector<double> values(pgrid.size() * mgrid.size());
  const auto chunks = detail::split_range(values.size(), config.threads);
  detail::for_each_chunk(chunks, [&](std::size_t, detail::Chunk chunk) {
    for (std::size_t idx = chunk.begin; idx < chunk.end; ++idx)
      values[idx] = objective(pgrid[idx / mgrid.size()], mgrid[idx % mgrid.size()]);
  });

  std::size_t best_idx = 0;
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    trace_point(trace, cls, pgrid[idx / mgrid.size()], mgrid[idx % mgrid.size()],
                values[idx]);
    if (values[idx] > values[best_idx]) best_idx = idx;
  }

  // Coordinate search in (lambda+, log lambda-).
  double plus = pgrid[best_idx / mgrid.size()];
  double log_minus = std::log(mgrid[best_idx % mgrid.size()]);
  double best = values[best_idx];
  const double log_lambda = std::log(lambda);
  const double log_floor = std::log(floor);
  double plus_step = (config.plus_cap - lambda) / static_cast<double>(pgrid.size());
  double minus_step = (log_lambda - log_floor) / static_cast<double>(mgrid.size());

  auto clamp_plus = [&](double x) {
    if (x > config.plus_cap) return config.plus_cap;
    if (x <= lambda) return 0.5 * (plus + lambda);
    return x;
  };
  auto clamp_log_minus = [&](double x) {
    if (x < log_floor) return log_floor;
    if (x >= log_lambda) return 0.5 * (log_minus + log_lambda);
    return x;
  };

  for (std::size_t step = 0; step < config.max_refine_steps; ++step) {
    const double before = best;
    for (int dir : {+1, -1}) {
      const double p = clamp_plus(plus + dir * plus_step);
      if (p == plus) continue;
      const double f = objective(p, std::exp(log_minus));
      trace_point(trace, cls, p, std::exp(log_minus), f);
      if (f > best) {
        best = f;
        plus = p;
        break;
      }
    }
    for (int dir : {+1, -1}) {
      const double x = clamp_log_minus(log_minus + dir * minus_step);
      if (x == log_minus) continue;
      const double f = objective(plus, std::exp(x));
      trace_point(trace, cls, plus, std::exp(x), f);
      if (f > best) {
        best = f;
        log_minus = x;
        break;
      }
    }
    const double gain = best - before;
    if (gain > 0.0) {
      if (gain < config.tolerance) break;
    } else {
      plus_step *= 0.5;
      minus_step *= 0.5;
      if (plus_step < 1e-14 && minus_step < 1e-14) break;
    }
  }

  out.lambda_plus = plus;
  out.lambda_minus = std::exp(log_minus);
  out.tau = derive_tau(out.lambda_plus, out.lambda_minus, lambda);
  out.log_likelihood = best;
  if (plus >= config.plus_cap) {
    out.capped = true;
    log_warning(std::string(class_name(cls)) + ": lambda+ reached the cap " +
                std::to_string(config.plus_cap));
  }
  return out;
}

std::optional<ClassParams> estimate_params(const LinkStats& links,
                                           const CoocTable& cooc, LinkClass c,
                                           const SearchConfig& config,
                                           const TraceContext& trace) {
  const auto lambda = empirical_lambda(links, cooc, c);
  if (!lambda) {
    log_warning(std::string(class_name(c)) +
                ": no co-occurrences; class skipped");
    return std::nullopt;
  }
  if (links.total(c) == 0) {
    log_warning(std::string(class_name(c)) +
                ": no links; class excluded this iteration");
    return std::nullopt;
  }
  const auto stats = collect_pair_stats(cooc, links, c);
  return fit_mixture(stats, *lambda, c, config, trace);
}

}  // namespace w2w
