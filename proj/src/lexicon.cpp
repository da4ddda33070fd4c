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

#include "w2w/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <unordered_set>

#include "w2w/error.hpp"
#include "w2w/log.hpp"

namespace w2w {

namespace {

constexpr std::string_view kHeader = "u\tv\tclass\tn\tk\tlogL";
constexpr std::string_view kThresholdTag = "#threshold=";

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t tab = line.find('\t'); tab != std::string_view::npos;
       tab = line.find('\t', start)) {
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  out.push_back(line.substr(start));
  return out;
}

template <class T>
T field(std::string_view text, std::size_t line, const char* name) {
  T out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    fail(ErrorCode::format, "lexicon line " + std::to_string(line) + ": bad " +
                                name + " '" + std::string(text) + "'");
  return out;
}

}  // namespace

Lexicon export_lexicon(const Model& model, double threshold) {
  if (std::isnan(threshold))
    fail(ErrorCode::argument, "threshold must be a number");
  if (threshold < model.cutoff) {
    log_warning("threshold " + std::to_string(threshold) +
                " is below the induction cutoff " +
                std::to_string(model.cutoff) +
                "; discarded link types cannot be recovered, using the cutoff");
    threshold = model.cutoff;
  }
  Lexicon lex;
  lex.threshold = threshold;
  const double log_threshold = std::log(threshold);
  for (const auto& e : model.entries)
    if (e.log_l >= log_threshold) lex.entries.push_back(e);
  std::sort(lex.entries.begin(), lex.entries.end(), lex_order);
  return lex;
}

Lexicon export_top(const Model& model, std::size_t count) {
  Lexicon lex;
  lex.entries = model.entries;
  std::sort(lex.entries.begin(), lex.entries.end(), lex_order);
  if (lex.entries.size() > count) lex.entries.resize(count);
  return lex;
}

double recall(const Lexicon& lexicon, const Bitext& bitext) {
  const auto vocabulary = bitext.source_vocab().size() + bitext.target_vocab().size();
  if (vocabulary == 0) return 0.0;
  std::unordered_set<WordId> sources, targets;
  for (const auto& e : lexicon.entries) {
    if (auto u = bitext.source_vocab().find(e.u)) sources.insert(*u);
    if (auto v = bitext.target_vocab().find(e.v)) targets.insert(*v);
  }
  return static_cast<double>(sources.size() + targets.size()) /
         static_cast<double>(vocabulary);
}

void write_lexicon_tsv(const Lexicon& lexicon, std::ostream& out) {
  char buf[64];
  if (lexicon.threshold) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *lexicon.threshold);
    out << kThresholdTag << std::string_view(buf, ptr - buf) << '\n';
  }
  out << kHeader << '\n';
  for (const auto& e : lexicon.entries) {
    // Shortest representation that reads back to the same double.
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.log_l);
    out << e.u << '\t' << e.v << '\t' << class_name(e.cls) << '\t' << e.n
        << '\t' << e.k << '\t' << std::string_view(buf, ptr - buf) << '\n';
  }
}

Lexicon read_lexicon_tsv(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t number = 1;
  bool got = static_cast<bool>(std::getline(in, line));
  if (got && line.starts_with(kThresholdTag)) {
    lex.threshold = field<double>(
        std::string_view(line).substr(std::string_view(kThresholdTag).size()), number,
        "threshold");
    got = static_cast<bool>(std::getline(in, line));
    ++number;
  }
  if (!got || line != kHeader)
    fail(ErrorCode::format, "lexicon: missing header line");
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 6)
      fail(ErrorCode::format, "lexicon line " + std::to_string(number) +
                                  ": expected 6 fields, got " +
                                  std::to_string(cols.size()));
    LexEntry e;
    e.u = std::string(cols[0]);
    e.v = std::string(cols[1]);
    e.cls = parse_class(cols[2]);
    e.n = field<std::uint64_t>(cols[3], number, "n");
    e.k = field<std::uint64_t>(cols[4], number, "k");
    if (cols[5] == "inf")
      e.log_l = std::numeric_limits<double>::infinity();
    else
      e.log_l = field<double>(cols[5], number, "logL");
    lex.entries.push_back(std::move(e));
  }
  std::sort(lex.entries.begin(), lex.entries.end(), lex_order);
  return lex;
}

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write " + path.string());
  write_lexicon_tsv(lexicon, out);
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  return read_lexicon_tsv(in);
}

}  // namespace w2w
