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

#include "w2w/bitext.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "w2w/error.hpp"
#include "w2w/log.hpp"

namespace w2w {

std::string_view class_name(LinkClass c) {
  switch (c) {
    case LinkClass::content: return "content";
    case LinkClass::function: return "function";
  }
  return "unknown";
}

LinkClass parse_class(std::string_view label) {
  for (std::size_t i = 0; i < kClassCount; ++i)
    if (class_name(class_at(i)) == label) return class_at(i);
  fail(ErrorCode::format, "unknown link class '" + std::string(label) + "'");
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

std::string_view strip_punct(std::string_view s) {
  while (!s.empty() && is_ascii_punct(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ascii_punct(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string fold_case(std::string_view text, const TokenizerOptions& options) {
  std::string out(text);
  if (options.lowercase)
    for (char& c : out)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string> tokenize(std::string_view line,
                                  const TokenizerOptions& options) {
  std::vector<std::string> tokens;
  auto emit = [&](std::string_view piece) {
    piece = strip_punct(piece);
    if (!piece.empty()) tokens.push_back(fold_case(piece, options));
  };
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) {
      std::string_view word = line.substr(i, j - i);
      if (options.split_hyphens) {
        std::size_t start = 0;
        for (std::size_t h = word.find('-'); h != std::string_view::npos;
             h = word.find('-', start)) {
          emit(word.substr(start, h - start));
          start = h + 1;
        }
        emit(word.substr(start));
      } else {
        emit(word);
      }
    }
    i = j;
  }
  return tokens;
}

std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    std::uint32_t min = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      min = 0x80;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      min = 0x800;
    } else if ((c & 0xf8) == 0xf0) {
      len = 4;
      min = 0x10000;
    } else {
      return i;
    }
    if (i + len > text.size()) return i;
    std::uint32_t cp = c & (0x7f >> len);
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xc0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3f);
    }
    if (cp < min || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return i;
    i += len;
  }
  return std::nullopt;
}

SurfaceSet load_function_word_list(const std::filesystem::path& path,
                                   const TokenizerOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open function-word list " + path.string());
  SurfaceSet words;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (find_invalid_utf8(line))
      fail(ErrorCode::encoding, path.string() + ":" + std::to_string(number) +
                                    ": invalid UTF-8");
    std::string_view s = line;
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    if (!s.empty()) words.insert(fold_case(s, options));
  }
  return words;
}

LinkClass assign_class(std::string_view surface, Side side,
                       const FunctionWords& lists) {
  return lists.side(side).contains(surface) ? LinkClass::function
                                            : LinkClass::content;
}

Classifier function_word_classifier(FunctionWords lists) {
  return [lists = std::move(lists)](std::string_view surface, Side side) {
    return assign_class(surface, side, lists);
  };
}

WordId Vocabulary::intern(std::string_view surface, LinkClass cls) {
  if (auto it = index_.find(surface); it != index_.end()) return it->second;
  const auto id = static_cast<WordId>(surfaces_.size());
  surfaces_.emplace_back(surface);
  classes_.push_back(cls);
  index_.emplace(surfaces_.back(), id);
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view surface) const {
  if (auto it = index_.find(surface); it != index_.end()) return it->second;
  return std::nullopt;
}

BitextBuilder::BitextBuilder(Classifier classifier)
    : classifier_(std::move(classifier)) {}

bool BitextBuilder::add(std::span<const std::string> source,
                        std::span<const std::string> target, std::size_t line) {
  if (source.empty() || target.empty()) {
    bitext_.dropped_lines_.push_back(line);
    return false;
  }
  SegmentPair seg;
  seg.index = bitext_.segments_.size();
  seg.line = line;
  seg.source.reserve(source.size());
  seg.target.reserve(target.size());
  for (const auto& s : source)
    seg.source.push_back(
        bitext_.source_vocab_.intern(s, classifier_(s, Side::source)));
  for (const auto& t : target)
    seg.target.push_back(
        bitext_.target_vocab_.intern(t, classifier_(t, Side::target)));
  bitext_.segments_.push_back(std::move(seg));
  return true;
}

Bitext BitextBuilder::build() && {
  if (!bitext_.dropped_lines_.empty())
    log_warning("dropped " + std::to_string(bitext_.dropped_lines_.size()) +
                " segment pair(s) that were empty after tokenization");
  return std::move(bitext_);
}

Bitext read_bitext(std::istream& source, std::istream& target,
                   const TokenizerOptions& options,
                   const FunctionWords& function_words) {
  std::vector<std::string> src_lines, tgt_lines;
  for (std::string line; std::getline(source, line);)
    src_lines.push_back(std::move(line));
  for (std::string line; std::getline(target, line);)
    tgt_lines.push_back(std::move(line));
  if (src_lines.size() != tgt_lines.size())
    fail(ErrorCode::mismatch,
         "line count mismatch: source has " + std::to_string(src_lines.size()) +
             " lines, target has " + std::to_string(tgt_lines.size()));

  BitextBuilder builder(function_word_classifier(function_words));
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    for (const auto* lines : {&src_lines, &tgt_lines}) {
      if (auto bad = find_invalid_utf8((*lines)[i]))
        fail(ErrorCode::encoding,
             std::string(lines == &src_lines ? "source" : "target") +
                 " line " + std::to_string(i + 1) +
                 ": invalid UTF-8 at byte " + std::to_string(*bad));
    }
    builder.add(tokenize(src_lines[i], options), tokenize(tgt_lines[i], options),
                i + 1);
  }
  return std::move(builder).build();
}

Bitext load_bitext(const std::filesystem::path& source_path,
                   const std::filesystem::path& target_path,
                   const TokenizerOptions& options,
                   const FunctionWords& function_words) {
  std::ifstream src(source_path, std::ios::binary);
  if (!src) fail(ErrorCode::io, "cannot open " + source_path.string());
  std::ifstream tgt(target_path, std::ios::binary);
  if (!tgt) fail(ErrorCode::io, "cannot open " + target_path.string());
  return read_bitext(src, tgt, options, function_words);
}

std::string serialize(const Bitext& bitext) {
  std::ostringstream out;
  for (Side side : {Side::source, Side::target}) {
    const auto& vocab = bitext.vocab(side);
    out << (side == Side::source ? "source" : "target") << ' ' << vocab.size()
        << '\n';
    for (WordId id = 0; id < vocab.size(); ++id)
      out << id << '\t' << vocab.surface(id) << '\t'
          << class_name(vocab.link_class(id)) << '\n';
  }
  out << "segments " << bitext.size() << '\n';
  for (const auto& seg : bitext.segments()) {
    out << seg.index << '\t' << seg.line << '\t';
    for (std::size_t i = 0; i < seg.source.size(); ++i)
      out << (i ? " " : "") << seg.source[i];
    out << '\t';
    for (std::size_t i = 0; i < seg.target.size(); ++i)
      out << (i ? " " : "") << seg.target[i];
    out << '\n';
  }
  out << "dropped";
  for (auto line : bitext.dropped_lines()) out << ' ' << line;
  out << '\n';
  return out.str();
}

std::string segment_text(const Bitext& bitext, const SegmentPair& segment,
                         Side side) {
  const auto& ids = side == Side::source ? segment.source : segment.target;
  const auto& vocab = bitext.vocab(side);
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += vocab.surface(ids[i]);
  }
  return out;
}

}  // namespace w2w
