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

#include "w2w/evalkit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "w2w/error.hpp"
#include "w2w/log.hpp"

namespace w2w {

using nlohmann::json;

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::argument, "uniform_below: empty range");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = kMax - kMax % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r < limit) return r % bound;
  }
}

double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::vector<std::size_t>> sample_link_types(const Lexicon& lexicon,
                                                        std::size_t sets,
                                                        std::size_t size,
                                                        std::uint64_t seed) {
  const std::size_t available = lexicon.entries.size();
  if (available < size)
    fail(ErrorCode::argument,
         "lexicon too small: " + std::to_string(available) +
             " entries, sample size " + std::to_string(size));
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(sets);
  std::vector<std::size_t> pool(available);
  for (std::size_t s = 0; s < sets; ++s) {
    for (std::size_t i = 0; i < available; ++i) pool[i] = i;
    for (std::size_t i = 0; i < size; ++i)
      std::swap(pool[i], pool[i + uniform_below(rng, available - i)]);
    out.emplace_back(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
  }
  return out;
}

std::vector<Concordance> concordances(const Bitext& bitext, std::string_view u,
                                      std::string_view v,
                                      std::size_t max_contexts) {
  std::vector<Concordance> out;
  const auto uid = bitext.source_vocab().find(u);
  const auto vid = bitext.target_vocab().find(v);
  if (!uid || !vid || max_contexts == 0) return out;
  for (const auto& seg : bitext.segments()) {
    Concordance c;
    for (std::uint32_t i = 0; i < seg.source.size(); ++i)
      if (seg.source[i] == *uid) c.source_positions.push_back(i);
    if (c.source_positions.empty()) continue;
    for (std::uint32_t j = 0; j < seg.target.size(); ++j)
      if (seg.target[j] == *vid) c.target_positions.push_back(j);
    if (c.target_positions.empty()) continue;
    c.segment = seg.index;
    c.source = segment_text(bitext, seg, Side::source);
    c.target = segment_text(bitext, seg, Side::target);
    out.push_back(std::move(c));
    if (out.size() == max_contexts) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Adjudication bundle

namespace {

std::string shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string hex64(std::uint64_t x) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, x >>= 4) out[static_cast<std::size_t>(i)] = digits[x & 15];
  return out;
}

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ull;
  void add(std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    h ^= 0xff;
    h *= 0x100000001b3ull;
  }
};

json json_number(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

// Reads a required field, reporting the full path on failure.
const json& need(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object())
    fail(ErrorCode::schema, "schema: " + (path.empty() ? std::string("<root>") : path) +
                                " must be an object");
  auto it = obj.find(key);
  if (it == obj.end())
    fail(ErrorCode::schema, "schema: missing field " +
                                (path.empty() ? key : path + "." + key));
  return *it;
}

template <class T>
T need_as(const json& obj, const std::string& key, const std::string& path) {
  const json& j = need(obj, key, path);
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::schema, "schema: field " +
                                (path.empty() ? key : path + "." + key) +
                                " has the wrong type");
  }
}

double need_number(const json& obj, const std::string& key, const std::string& path) {
  const json& j = need(obj, key, path);
  if (j.is_number()) return j.get<double>();
  if (j == "inf") return std::numeric_limits<double>::infinity();
  if (j == "-inf") return -std::numeric_limits<double>::infinity();
  fail(ErrorCode::schema, "schema: field " + path + "." + key + " must be a number");
}

const json& need_array(const json& obj, const std::string& key, const std::string& path) {
  const json& j = need(obj, key, path);
  if (!j.is_array())
    fail(ErrorCode::schema, "schema: field " +
                                (path.empty() ? key : path + "." + key) +
                                " must be an array");
  return j;
}

json parse_document(const std::string& text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::schema, "schema: " + std::string(what) +
                                " is not valid JSON: " + e.what());
  }
}

void check_header(const json& doc, std::string_view format, int version) {
  const auto f = need_as<std::string>(doc, "format", "");
  if (f != format)
    fail(ErrorCode::schema, "schema: format is '" + f + "', expected '" +
                                std::string(format) + "'");
  const auto v = need_as<int>(doc, "version", "");
  if (v != version)
    fail(ErrorCode::version, "unsupported " + std::string(format) +
                                 " version " + std::to_string(v));
}

}  // namespace

AdjudicationBundle make_bundle(const Lexicon& lexicon, const Bitext& bitext,
                               std::size_t sets, std::size_t size,
                               std::uint64_t seed, std::size_t max_contexts) {
  AdjudicationBundle bundle;
  bundle.lexicon_size = lexicon.entries.size();
  bundle.threshold = lexicon.threshold;
  bundle.recall = recall(lexicon, bitext);
  bundle.seed = seed;
  bundle.set_size = size;

  const auto samples = sample_link_types(lexicon, sets, size, seed);
  Fnv1a hash;
  hash.add(std::to_string(seed));
  hash.add(std::to_string(lexicon.entries.size()));
  for (std::size_t s = 0; s < samples.size(); ++s) {
    std::vector<BundleItem> items;
    for (std::size_t i = 0; i < samples[s].size(); ++i) {
      const auto& e = lexicon.entries[samples[s][i]];
      hash.add(e.u);
      hash.add(e.v);
      items.push_back({"s" + std::to_string(s) + "-" + std::to_string(i), e,
                       concordances(bitext, e.u, e.v, max_contexts)});
    }
    bundle.sets.push_back(std::move(items));
  }
  bundle.bundle_id = hex64(hash.h);
  return bundle;
}

std::string bundle_to_json(const AdjudicationBundle& bundle) {
  json sets = json::array();
  for (std::size_t s = 0; s < bundle.sets.size(); ++s) {
    json items = json::array();
    for (const auto& item : bundle.sets[s]) {
      json contexts = json::array();
      for (const auto& c : item.contexts)
        contexts.push_back({{"segment", c.segment},
                            {"source", c.source},
                            {"target", c.target},
                            {"source_positions", c.source_positions},
                            {"target_positions", c.target_positions}});
      items.push_back({{"item_id", item.item_id},
                       {"u", item.entry.u},
                       {"v", item.entry.v},
                       {"class", class_name(item.entry.cls)},
                       {"n", item.entry.n},
                       {"k", item.entry.k},
                       {"logL", json_number(item.entry.log_l)},
                       {"concordances", contexts}});
    }
    sets.push_back({{"index", s}, {"items", items}});
  }
  json doc = {{"format", "w2w-adjudication-bundle"},
              {"version", kBundleFormatVersion},
              {"bundle_id", bundle.bundle_id},
              {"lexicon",
               {{"size", bundle.lexicon_size},
                {"threshold", bundle.threshold ? json_number(*bundle.threshold)
                                               : json(nullptr)}}},
              {"recall", bundle.recall},
              {"seed", bundle.seed},
              {"set_size", bundle.set_size},
              {"sets", sets}};
  return doc.dump(1) + "\n";
}

AdjudicationBundle bundle_from_json(const std::string& text) {
  const json doc = parse_document(text, "bundle");
  check_header(doc, "w2w-adjudication-bundle", kBundleFormatVersion);
  AdjudicationBundle b;
  b.bundle_id = need_as<std::string>(doc, "bundle_id", "");
  const json& lex = need(doc, "lexicon", "");
  b.lexicon_size = need_as<std::size_t>(lex, "size", "lexicon");
  if (!need(lex, "threshold", "lexicon").is_null())
    b.threshold = need_number(lex, "threshold", "lexicon");
  b.recall = need_number(doc, "recall", "");
  b.seed = need_as<std::uint64_t>(doc, "seed", "");
  b.set_size = need_as<std::size_t>(doc, "set_size", "");
  const json& sets = need_array(doc, "sets", "");
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const std::string spath = "sets[" + std::to_string(s) + "]";
    const json& items = need_array(sets[s], "items", spath);
    std::vector<BundleItem> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const std::string ipath = spath + ".items[" + std::to_string(i) + "]";
      const json& it = items[i];
      BundleItem item;
      item.item_id = need_as<std::string>(it, "item_id", ipath);
      item.entry.u = need_as<std::string>(it, "u", ipath);
      item.entry.v = need_as<std::string>(it, "v", ipath);
      try {
        item.entry.cls = parse_class(need_as<std::string>(it, "class", ipath));
      } catch (const Error&) {
        fail(ErrorCode::schema, "schema: field " + ipath + ".class is not a link class");
      }
      item.entry.n = need_as<std::uint64_t>(it, "n", ipath);
      item.entry.k = need_as<std::uint64_t>(it, "k", ipath);
      item.entry.log_l = need_number(it, "logL", ipath);
      const json& ctx = need_array(it, "concordances", ipath);
      for (std::size_t c = 0; c < ctx.size(); ++c) {
        const std::string cpath = ipath + ".concordances[" + std::to_string(c) + "]";
        Concordance con;
        con.segment = need_as<std::size_t>(ctx[c], "segment", cpath);
        con.source = need_as<std::string>(ctx[c], "source", cpath);
        con.target = need_as<std::string>(ctx[c], "target", cpath);
        con.source_positions =
            need_as<std::vector<std::uint32_t>>(ctx[c], "source_positions", cpath);
        con.target_positions =
            need_as<std::vector<std::uint32_t>>(ctx[c], "target_positions", cpath);
        item.contexts.push_back(std::move(con));
      }
      out.push_back(std::move(item));
    }
    if (out.size() != b.set_size)
      fail(ErrorCode::schema, "schema: " + spath + " holds " +
                                  std::to_string(out.size()) +
                                  " items, set_size is " + std::to_string(b.set_size));
    b.sets.push_back(std::move(out));
  }
  return b;
}

// ---------------------------------------------------------------------------
// Judgments and precision

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::correct: return "correct";
    case Verdict::incomplete: return "incomplete";
    case Verdict::incorrect: return "incorrect";
  }
  return "unknown";
}

std::string judgments_to_json(const JudgmentSet& judgments) {
  json list = json::array();
  for (const auto& j : judgments.judgments) {
    json entry = {{"item_id", j.item_id},
                  {"verdict", j.verdict ? json(verdict_name(*j.verdict)) : json(nullptr)}};
    if (!j.note.empty()) entry["note"] = j.note;
    list.push_back(std::move(entry));
  }
  json doc = {{"format", "w2w-judgments"},
              {"version", kJudgmentFormatVersion},
              {"bundle_id", judgments.bundle_id},
              {"judge", judgments.judge},
              {"judgments", list}};
  return doc.dump(1) + "\n";
}

JudgmentSet judgments_from_json(const std::string& text) {
  const json doc = parse_document(text, "judgment set");
  check_header(doc, "w2w-judgments", kJudgmentFormatVersion);
  JudgmentSet out;
  out.bundle_id = need_as<std::string>(doc, "bundle_id", "");
  out.judge = need_as<std::string>(doc, "judge", "");
  const json& list = need_array(doc, "judgments", "");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "judgments[" + std::to_string(i) + "]";
    Judgment j;
    j.item_id = need_as<std::string>(list[i], "item_id", path);
    const json& v = need(list[i], "verdict", path);
    if (!v.is_null()) {
      const auto name = v.is_string() ? v.get<std::string>() : std::string();
      if (name == "correct") j.verdict = Verdict::correct;
      else if (name == "incomplete") j.verdict = Verdict::incomplete;
      else if (name == "incorrect") j.verdict = Verdict::incorrect;
      else
        fail(ErrorCode::schema, "schema: field " + path +
                                    ".verdict must be correct, incomplete, "
                                    "incorrect or null");
    }
    if (auto note = list[i].find("note"); note != list[i].end()) {
      if (!note->is_string())
        fail(ErrorCode::schema, "schema: field " + path + ".note must be a string");
      j.note = note->get<std::string>();
    }
    out.judgments.push_back(std::move(j));
  }
  return out;
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) fail(ErrorCode::argument, "wilson_interval: no trials");
  if (successes > trials)
    fail(ErrorCode::argument, "wilson_interval: successes exceed trials");
  constexpr double z = 1.959963984540054;  // two-sided 95% normal quantile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) ci.lower = 0.0;
  if (successes == trials) ci.upper = 1.0;
  return ci;
}

PrecisionEstimate precision_ci(const JudgmentSet& judgments,
                               IncompletePolicy policy) {
  PrecisionEstimate est;
  for (const auto& j : judgments.judgments) {
    if (!j.verdict) continue;
    ++est.judged;
    if (*j.verdict == Verdict::correct ||
        (*j.verdict == Verdict::incomplete && policy == IncompletePolicy::correct))
      ++est.accepted;
  }
  if (est.judged == 0)
    fail(ErrorCode::argument, "precision_ci: no judged items");
  est.precision = static_cast<double>(est.accepted) / static_cast<double>(est.judged);
  const auto ci = wilson_interval(est.accepted, est.judged);
  est.lower = ci.lower;
  est.upper = ci.upper;
  return est;
}

ScoreReport score_judgments(const AdjudicationBundle& bundle,
                            const JudgmentSet& judgments) {
  if (judgments.bundle_id != bundle.bundle_id)
    fail(ErrorCode::schema, "schema: judgments reference bundle '" +
                                judgments.bundle_id + "', expected '" +
                                bundle.bundle_id + "'");
  std::map<std::string, std::optional<Verdict>> verdicts;
  for (const auto& j : judgments.judgments) verdicts[j.item_id] = j.verdict;

  ScoreReport report;
  report.bundle_id = bundle.bundle_id;
  std::set<std::string> known;
  JudgmentSet pooled;
  for (const auto& set : bundle.sets) {
    JudgmentSet subset;
    for (const auto& item : set) {
      ++report.items;
      known.insert(item.item_id);
      auto it = verdicts.find(item.item_id);
      if (it == verdicts.end() || !it->second) {
        ++report.unjudged;
        continue;
      }
      subset.judgments.push_back({item.item_id, it->second, {}});
    }
    if (subset.judgments.empty()) {
      report.per_set.push_back({});
    } else {
      report.per_set.emplace_back(precision_ci(subset, IncompletePolicy::correct),
                                  precision_ci(subset, IncompletePolicy::incorrect));
    }
    pooled.judgments.insert(pooled.judgments.end(), subset.judgments.begin(),
                            subset.judgments.end());
  }
  for (const auto& [id, v] : verdicts)
    if (!known.contains(id)) ++report.unknown;
  if (pooled.judgments.empty())
    fail(ErrorCode::argument, "no judged items in the judgment set");
  report.lenient = precision_ci(pooled, IncompletePolicy::correct);
  report.strict = precision_ci(pooled, IncompletePolicy::incorrect);
  return report;
}

std::string format_report(const ScoreReport& report) {
  std::ostringstream out;
  auto line = [&](const std::string& scope, const char* policy,
                  const PrecisionEstimate& e) {
    out << scope << " policy=" << policy << " precision=" << shortest(e.precision)
        << " lower=" << shortest(e.lower) << " upper=" << shortest(e.upper)
        << " accepted=" << e.accepted << " judged=" << e.judged << '\n';
  };
  out << "bundle_id=" << report.bundle_id << '\n';
  out << "items=" << report.items << " unjudged=" << report.unjudged
      << " unknown=" << report.unknown << '\n';
  line("all", "correct", report.lenient);
  line("all", "incorrect", report.strict);
  for (std::size_t s = 0; s < report.per_set.size(); ++s) {
    const auto& [lenient, strict] = report.per_set[s];
    const std::string scope = "set=" + std::to_string(s);
    if (lenient.judged == 0) {
      out << scope << " judged=0\n";
      continue;
    }
    line(scope, "correct", lenient);
    line(scope, "incorrect", strict);
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Synthetic bitexts

std::string_view noise_source_name(NoiseSource s) {
  return s == NoiseSource::uniform ? "uniform" : "unigram";
}

NoiseSource parse_noise_source(std::string_view name) {
  if (name == "unigram") return NoiseSource::unigram;
  if (name == "uniform") return NoiseSource::uniform;
  fail(ErrorCode::argument, "unknown noise source '" + std::string(name) +
                                "' (expected unigram or uniform)");
}

Bitext SyntheticCorpus::bitext() const {
  BitextBuilder builder(function_word_classifier(function_words));
  const TokenizerOptions options;
  for (std::size_t i = 0; i < source_lines.size(); ++i)
    builder.add(tokenize(source_lines[i], options),
                tokenize(target_lines[i], options), i + 1);
  return std::move(builder).build();
}

SyntheticCorpus generate_synthetic(const GenerationSpec& spec,
                                   std::uint64_t seed) {
  if (spec.entries < 10) fail(ErrorCode::argument, "synth: entries must be >= 10");
  if (spec.segments < 1) fail(ErrorCode::argument, "synth: segments must be >= 1");
  if (!(spec.noise >= 0.0 && spec.noise < 1.0))
    fail(ErrorCode::argument, "synth: noise must lie in [0, 1)");
  if (spec.min_length < 1 || spec.max_length < spec.min_length)
    fail(ErrorCode::argument, "synth: need 1 <= min_length <= max_length");
  if (!(spec.function_fraction >= 0.0 && spec.function_fraction < 1.0))
    fail(ErrorCode::argument, "synth: function_fraction must lie in [0, 1)");
  if (!(spec.zipf_exponent >= 0.0))
    fail(ErrorCode::argument, "synth: zipf_exponent must be non-negative");

  const std::size_t vocab = spec.entries;
  const auto function_count = static_cast<std::size_t>(
      std::llround(spec.function_fraction * static_cast<double>(vocab)));
  if (2 * spec.collocations > vocab - function_count)
    fail(ErrorCode::argument, "synth: too many collocations for the content vocabulary");

  std::mt19937_64 rng(seed);
  SyntheticCorpus corpus;
  corpus.truth.spec = spec;
  corpus.truth.seed = seed;

  // Source word r (by frequency rank) translates to target word perm[r].
  std::vector<std::size_t> perm(vocab);
  for (std::size_t i = 0; i < vocab; ++i) perm[i] = i;
  for (std::size_t i = vocab; i > 1; --i)
    std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
  std::vector<std::string> source_words(vocab), target_words(vocab);
  for (std::size_t r = 0; r < vocab; ++r) {
    source_words[r] = "s" + std::to_string(r);
    target_words[perm[r]] = "t" + std::to_string(perm[r]);
  }
  for (std::size_t r = 0; r < vocab; ++r) {
    corpus.truth.pairs.emplace_back(source_words[r], target_words[perm[r]]);
    if (r < function_count) {
      corpus.function_words.source.insert(source_words[r]);
      corpus.function_words.target.insert(target_words[perm[r]]);
    }
  }

  std::vector<std::size_t> follower(vocab, vocab);
  if (spec.collocations > 0) {
    std::vector<std::size_t> content;
    for (std::size_t r = function_count; r < vocab; ++r) content.push_back(r);
    for (std::size_t i = 0; i < 2 * spec.collocations; ++i)
      std::swap(content[i], content[i + uniform_below(rng, content.size() - i)]);
    for (std::size_t c = 0; c < spec.collocations; ++c) {
      const auto head = content[2 * c], next = content[2 * c + 1];
      follower[head] = next;
      corpus.truth.collocations.emplace_back(source_words[head], source_words[next]);
    }
  }

  std::vector<double> cdf(vocab);
  double acc = 0.0;
  for (std::size_t r = 0; r < vocab; ++r) {
    acc += 1.0 / std::pow(static_cast<double>(r + 1), spec.zipf_exponent);
    cdf[r] = acc;
  }
  auto draw_rank = [&] {
    const double x = uniform_unit(rng) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), vocab - 1);
  };

  std::vector<std::size_t> ranks;
  std::vector<std::size_t> target;
  for (std::size_t s = 0; s < spec.segments; ++s) {
    const std::size_t length =
        spec.min_length + uniform_below(rng, spec.max_length - spec.min_length + 1);
    ranks.clear();
    while (ranks.size() < length) {
      const auto r = draw_rank();
      ranks.push_back(r);
      if (follower[r] < vocab) ranks.push_back(follower[r]);
    }
    target.clear();
    for (auto r : ranks) target.push_back(perm[r]);
    for (std::size_t i = target.size(); i > 1; --i)
      std::swap(target[i - 1], target[uniform_below(rng, i)]);
    for (auto& t : target) {
      if (spec.noise > 0.0 && uniform_unit(rng) < spec.noise) {
        if (spec.noise_source == NoiseSource::uniform) {
          const auto other = uniform_below(rng, vocab - 1);
          t = other >= t ? other + 1 : other;
        } else {
          std::size_t other = t;
          while (other == t) other = perm[draw_rank()];
          t = other;
        }
        ++corpus.replaced_tokens;
      }
    }
    corpus.target_tokens += target.size();

    std::string src_line, tgt_line;
    for (std::size_t i = 0; i < ranks.size(); ++i)
      src_line += (i ? " " : "") + source_words[ranks[i]];
    for (std::size_t i = 0; i < target.size(); ++i)
      tgt_line += (i ? " " : "") + target_words[target[i]];
    corpus.source_lines.push_back(std::move(src_line));
    corpus.target_lines.push_back(std::move(tgt_line));
  }
  return corpus;
}

void write_truth_tsv(const GroundTruth& truth, std::ostream& out) {
  const auto& s = truth.spec;
  out << "#format=w2w-truth\n#version=1\n"
      << "#seed=" << truth.seed << '\n'
      << "#entries=" << s.entries << '\n'
      << "#segments=" << s.segments << '\n'
      << "#min_length=" << s.min_length << '\n'
      << "#max_length=" << s.max_length << '\n'
      << "#zipf_exponent=" << shortest(s.zipf_exponent) << '\n'
      << "#noise=" << shortest(s.noise) << '\n'
      << "#noise_source=" << noise_source_name(s.noise_source) << '\n'
      << "#function_fraction=" << shortest(s.function_fraction) << '\n'
      << "#collocations=" << s.collocations << '\n';
  for (const auto& [u, v] : truth.pairs) out << "pair\t" << u << '\t' << v << '\n';
  for (const auto& [a, b] : truth.collocations)
    out << "collocation\t" << a << '\t' << b << '\n';
}

GroundTruth read_truth_tsv(std::istream& in) {
  GroundTruth truth;
  std::string line;
  std::size_t number = 0;
  bool saw_format = false;
  auto bad = [&](const std::string& what) {
    fail(ErrorCode::format, "truth line " + std::to_string(number) + ": " + what);
  };
  auto num = [&](const std::string& text, auto& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || ptr != text.data() + text.size()) bad("bad number '" + text + "'");
  };
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(1, eq - 1), value = line.substr(eq + 1);
      auto& s = truth.spec;
      if (key == "format") {
        if (value != "w2w-truth") bad("not a truth file");
        saw_format = true;
      } else if (key == "version") {
        if (value != "1") fail(ErrorCode::version, "unsupported truth version " + value);
      } else if (key == "seed") num(value, truth.seed);
      else if (key == "entries") num(value, s.entries);
      else if (key == "segments") num(value, s.segments);
      else if (key == "min_length") num(value, s.min_length);
      else if (key == "max_length") num(value, s.max_length);
      else if (key == "zipf_exponent") num(value, s.zipf_exponent);
      else if (key == "noise") num(value, s.noise);
      else if (key == "noise_source") {
        try {
          s.noise_source = parse_noise_source(value);
        } catch (const Error&) {
          bad("unknown noise source '" + value + "'");
        }
      }
      else if (key == "function_fraction") num(value, s.function_fraction);
      else if (key == "collocations") num(value, s.collocations);
      continue;
    }
    std::istringstream fields(line);
    std::string kind, a, b, extra;
    if (!std::getline(fields, kind, '\t') || !std::getline(fields, a, '\t') ||
        !std::getline(fields, b, '\t') || std::getline(fields, extra, '\t'))
      bad("expected kind<TAB>u<TAB>v");
    if (kind == "pair") truth.pairs.emplace_back(a, b);
    else if (kind == "collocation") truth.collocations.emplace_back(a, b);
    else bad("unknown row kind '" + kind + "'");
  }
  if (!saw_format) fail(ErrorCode::format, "truth file lacks #format=w2w-truth");
  return truth;
}

GroundTruth load_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  return read_truth_tsv(in);
}

void write_synthetic(const SyntheticCorpus& corpus, const std::string& prefix) {
  auto open = [](const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write " + path);
    return out;
  };
  {
    auto out = open(prefix + ".src");
    for (const auto& l : corpus.source_lines) out << l << '\n';
  }
  {
    auto out = open(prefix + ".tgt");
    for (const auto& l : corpus.target_lines) out << l << '\n';
  }
  for (Side side : {Side::source, Side::target}) {
    auto out = open(prefix + (side == Side::source ? ".fw.src" : ".fw.tgt"));
    std::vector<std::string> words(corpus.function_words.side(side).begin(),
                                   corpus.function_words.side(side).end());
    std::sort(words.begin(), words.end());
    for (const auto& w : words) out << w << '\n';
  }
  auto out = open(prefix + ".truth.tsv");
  write_truth_tsv(corpus.truth, out);
}

// ---------------------------------------------------------------------------
// Ground-truth scoring

namespace {

// Truth pairs that co-occur in at least one segment of the bitext.
std::set<std::pair<std::string, std::string>> reachable_pairs(
    const GroundTruth& truth, const Bitext& bitext) {
  std::vector<std::vector<std::size_t>> source_segments(bitext.source_vocab().size());
  std::vector<std::vector<std::size_t>> target_segments(bitext.target_vocab().size());
  for (const auto& seg : bitext.segments()) {
    for (auto u : seg.source)
      if (source_segments[u].empty() || source_segments[u].back() != seg.index)
        source_segments[u].push_back(seg.index);
    for (auto v : seg.target)
      if (target_segments[v].empty() || target_segments[v].back() != seg.index)
        target_segments[v].push_back(seg.index);
  }
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : truth.pairs) {
    const auto u = bitext.source_vocab().find(p.first);
    const auto v = bitext.target_vocab().find(p.second);
    if (!u || !v) continue;
    const auto& a = source_segments[*u];
    const auto& b = target_segments[*v];
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) {
        out.insert(p);
        break;
      }
      a[i] < b[j] ? ++i : ++j;
    }
  }
  return out;
}

TruthScore score_with(const Lexicon& lexicon,
                      const std::set<std::pair<std::string, std::string>>& truth,
                      const std::set<std::pair<std::string, std::string>>& reachable) {
  TruthScore score;
  for (const auto& e : lexicon.entries)
    if (truth.contains({e.u, e.v})) ++score.correct;
  score.reachable = reachable.size();
  if (lexicon.entries.empty()) {
    score.empty_lexicon = true;
    score.precision = 1.0;
  } else {
    score.precision =
        static_cast<double>(score.correct) / static_cast<double>(lexicon.entries.size());
  }
  std::size_t found = 0;
  for (const auto& e : lexicon.entries)
    if (reachable.contains({e.u, e.v})) ++found;
  score.recall = reachable.empty()
                     ? 0.0
                     : static_cast<double>(found) / static_cast<double>(reachable.size());
  return score;
}

}  // namespace

TruthScore score_against_truth(const Lexicon& lexicon, const GroundTruth& truth,
                               const Bitext* bitext) {
  const std::set<std::pair<std::string, std::string>> all(truth.pairs.begin(),
                                                          truth.pairs.end());
  return score_with(lexicon, all, bitext ? reachable_pairs(truth, *bitext) : all);
}

std::vector<CurvePoint> precision_recall_curve(const Model& model,
                                               const GroundTruth& truth,
                                               const std::vector<double>& thresholds,
                                               const Bitext* bitext) {
  const std::set<std::pair<std::string, std::string>> all(truth.pairs.begin(),
                                                          truth.pairs.end());
  const auto reachable = bitext ? reachable_pairs(truth, *bitext) : all;
  std::vector<CurvePoint> curve;
  for (double t : thresholds) {
    const auto lex = export_lexicon(model, t);
    const auto s = score_with(lex, all, reachable);
    curve.push_back({*lex.threshold, s.recall, s.precision});
  }
  return curve;
}

std::vector<double> default_thresholds(const Model& model, std::size_t count) {
  double max_log = std::log(model.cutoff);
  for (const auto& e : model.entries)
    if (std::isfinite(e.log_l)) max_log = std::max(max_log, e.log_l);
  max_log = std::min(max_log, 700.0);
  const double lo = std::log(model.cutoff);
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {model.cutoff};
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(std::exp(lo + (max_log - lo) * static_cast<double>(i) /
                                    static_cast<double>(count - 1)));
  out.front() = model.cutoff;
  return out;
}

void write_curve_csv(const std::vector<CurvePoint>& curve, std::ostream& out) {
  out << "threshold,recall,precision\n";
  for (const auto& p : curve)
    out << shortest(p.threshold) << ',' << shortest(p.recall) << ','
        << shortest(p.precision) << '\n';
}

double bimodality_fraction(const CoocTable& cooc, const LinkStats& links,
                           std::uint64_t min_n, double low, double high) {
  std::uint64_t eligible = 0, middle = 0;
  for (std::size_t c = 0; c < kClassCount; ++c) {
    const auto cls = class_at(c);
    for (const auto& [key, n] : cooc.pairs(cls)) {
      if (n < min_n) continue;
      ++eligible;
      const double ratio = static_cast<double>(
                               links.count(cls, key_source(key), key_target(key))) /
                           static_cast<double>(n);
      if (ratio >= low && ratio <= high) ++middle;
    }
  }
  return eligible == 0 ? 0.0 : static_cast<double>(middle) / static_cast<double>(eligible);
}

}  // namespace w2w
