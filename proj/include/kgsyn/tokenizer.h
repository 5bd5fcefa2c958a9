// Copyright 2026 The kgsyn Authors.
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

#ifndef KGSYN_TOKENIZER_H_
#define KGSYN_TOKENIZER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgsyn {

enum class TokenizerMode : std::uint8_t {
  kUnicodeChar,    // one token per non-space code point
  kLetterTrigram,  // lowercased words padded with '#', all 3-grams
  kAuto,           // CJK code points as chars, other runs as trigrams
};

std::string_view mode_name(TokenizerMode mode);
std::optional<TokenizerMode> parse_mode(std::string_view name);

// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view text);
std::string utf8_encode(char32_t cp);

bool is_cjk(char32_t cp);

// Splits a surface into subwords. Throws kEmptySurface when nothing but
// whitespace remains.
std::vector<std::string> tokenize(std::string_view surface, TokenizerMode mode);

// Subword-to-index map. Index 0 is the shared out-of-vocabulary bucket.
class SubwordVocab {
 public:
  static constexpr std::uint32_t kOov = 0;
  static constexpr std::string_view kOovToken = "<oov>";

  SubwordVocab() = default;
  explicit SubwordVocab(TokenizerMode mode);

  // Rebuilds a vocabulary from tokens in index order; tokens[0] must be the
  // OOV token.
  static SubwordVocab from_tokens(TokenizerMode mode, std::vector<std::string> tokens);

  TokenizerMode mode() const { return mode_; }
  std::size_t size() const { return tokens_.size(); }
  const std::string &token(std::uint32_t index) const { return tokens_.at(index); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  // Index of a subword, or kOov.
  std::uint32_t lookup(std::string_view subword) const;

  // Tokenizes and maps a surface to subword indices.
  std::vector<std::uint32_t> encode(std::string_view surface) const;

  bool operator==(const SubwordVocab &other) const {
    return mode_ == other.mode_ && tokens_ == other.tokens_;
  }

 private:
  friend SubwordVocab build_vocab(std::span<const std::string>, TokenizerMode);

  std::uint32_t add(const std::string &subword);

  TokenizerMode mode_ = TokenizerMode::kUnicodeChar;
  std::vector<std::string> tokens_{std::string(kOovToken)};
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Collects every subword of the surfaces in first-seen order. Throws
// kEmptyCorpus when no surface yields a subword.
SubwordVocab build_vocab(std::span<const std::string> surfaces, TokenizerMode mode);

}  // namespace kgsyn

#endif  // KGSYN_TOKENIZER_H_
