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

#ifndef W2W_BITEXT_HPP
#define W2W_BITEXT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace w2w {

enum class Side : std::uint8_t { source, target };

// Partition of word types whose hidden parameters are estimated
// independently. New classes are appended before kClassCount.
enum class LinkClass : std::uint8_t { content = 0, function = 1 };

inline constexpr std::size_t kClassCount = 2;

inline constexpr std::size_t class_index(LinkClass c) {
  return static_cast<std::size_t>(c);
}

inline constexpr LinkClass class_at(std::size_t i) {
  return static_cast<LinkClass>(i);
}

std::string_view class_name(LinkClass c);

// Throws Error(format) on an unknown label.
LinkClass parse_class(std::string_view label);

using WordId = std::uint32_t;

struct TokenizerOptions {
  bool lowercase = true;
  bool split_hyphens = true;

  bool operator==(const TokenizerOptions&) const = default;
};

// Whitespace split, optional hyphen split, then leading/trailing ASCII
// punctuation is stripped from each piece. Empty pieces are dropped.
// Lowercasing folds ASCII letters only.
std::vector<std::string> tokenize(std::string_view line,
                                  const TokenizerOptions& options);

std::string fold_case(std::string_view text, const TokenizerOptions& options);

// Returns the zero-based byte offset of the first invalid UTF-8 sequence.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

struct TransparentStringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

using SurfaceSet =
    std::unordered_set<std::string, TransparentStringHash, std::equal_to<>>;

struct FunctionWords {
  SurfaceSet source;
  SurfaceSet target;

  const SurfaceSet& side(Side s) const {
    return s == Side::source ? source : target;
  }
};

// One surface per line. Surfaces are case-folded per options so that the
// lookup matches tokenizer output.
SurfaceSet load_function_word_list(const std::filesystem::path& path,
                                   const TokenizerOptions& options);

LinkClass assign_class(std::string_view surface, Side side,
                       const FunctionWords& lists);

using Classifier = std::function<LinkClass(std::string_view, Side)>;

Classifier function_word_classifier(FunctionWords lists);

class Vocabulary {
 public:
  WordId intern(std::string_view surface, LinkClass cls);

  std::optional<WordId> find(std::string_view surface) const;
  const std::string& surface(WordId id) const { return surfaces_.at(id); }
  LinkClass link_class(WordId id) const { return classes_.at(id); }
  std::size_t size() const { return surfaces_.size(); }

  bool operator==(const Vocabulary& other) const {
    return surfaces_ == other.surfaces_ && classes_ == other.classes_;
  }

 private:
  std::vector<std::string> surfaces_;
  std::vector<LinkClass> classes_;
  std::unordered_map<std::string, WordId, TransparentStringHash,
                     std::equal_to<>>
      index_;
};

struct SegmentPair {
  std::size_t index = 0;  // ordinal among retained segments
  std::size_t line = 0;   // 1-based line number in the input files
  std::vector<WordId> source;
  std::vector<WordId> target;

  bool operator==(const SegmentPair&) const = default;
};

// Immutable once built.
class Bitext {
 public:
  const std::vector<SegmentPair>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }

  const Vocabulary& vocab(Side side) const {
    return side == Side::source ? source_vocab_ : target_vocab_;
  }
  const Vocabulary& source_vocab() const { return source_vocab_; }
  const Vocabulary& target_vocab() const { return target_vocab_; }

  // Input lines whose pair was dropped because one side tokenized to nothing.
  std::span<const std::size_t> dropped_lines() const { return dropped_lines_; }

  bool operator==(const Bitext& other) const {
    return segments_ == other.segments_ &&
           source_vocab_ == other.source_vocab_ &&
           target_vocab_ == other.target_vocab_ &&
           dropped_lines_ == other.dropped_lines_;
  }

 private:
  friend class BitextBuilder;

  std::vector<SegmentPair> segments_;
  Vocabulary source_vocab_;
  Vocabulary target_vocab_;
  std::vector<std::size_t> dropped_lines_;
};

class BitextBuilder {
 public:
  explicit BitextBuilder(Classifier classifier);

  // Adds an already tokenized pair. Returns false, and records the line as
  // dropped, when either side is empty.
  bool add(std::span<const std::string> source,
           std::span<const std::string> target, std::size_t line);

  Bitext build() &&;

 private:
  Classifier classifier_;
  Bitext bitext_;
};

// Reads two line-aligned streams. Throws Error(mismatch) when line counts
// differ and Error(encoding) on invalid UTF-8.
Bitext read_bitext(std::istream& source, std::istream& target,
                   const TokenizerOptions& options,
                   const FunctionWords& function_words);

Bitext load_bitext(const std::filesystem::path& source_path,
                   const std::filesystem::path& target_path,
                   const TokenizerOptions& options,
                   const FunctionWords& function_words);

// Canonical text rendering: vocabularies with classes, then segments by id.
std::string serialize(const Bitext& bitext);

// Space-joined surfaces of one side of a segment.
std::string segment_text(const Bitext& bitext, const SegmentPair& segment,
                         Side side);

}  // namespace w2w

#endif  // W2W_BITEXT_HPP
