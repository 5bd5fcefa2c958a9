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

#include "kgsyn/tokenizer.h"

#include "kgsyn/error.h"

namespace kgsyn {

std::string_view mode_name(TokenizerMode mode) {
  switch (mode) {
    case TokenizerMode::kUnicodeChar: return "char";
    case TokenizerMode::kLetterTrigram: return "trigram";
    case TokenizerMode::kAuto: return "auto";
  }
  return "char";
}

std::optional<TokenizerMode> parse_mode(std::string_view name) {
  if (name == "char") return TokenizerMode::kUnicodeChar;
  if (name == "trigram") return TokenizerMode::kLetterTrigram;
  if (name == "auto") return TokenizerMode::kAuto;
  return std::nullopt;
}

std::vector<char32_t> utf8_decode(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (int k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(char32_t cp) {
  std::string s;
  if (cp < 0x80) {
    s += static_cast<char>(cp);
  } else if (cp < 0x800) {
    s += static_cast<char>(0xC0 | (cp >> 6));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    s += static_cast<char>(0xE0 | (cp >> 12));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    s += static_cast<char>(0xF0 | (cp >> 18));
    s += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    s += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return s;
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x2EBEF) ||
         (cp >= 0x3040 && cp <= 0x30FF) || (cp >= 0xAC00 && cp <= 0xD7AF);
}

namespace {

bool is_space(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
         cp == 0x3000 || cp == 0xA0;
}

char32_t lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + ('a' - 'A');
  return cp;
}

// Appends the '#'-padded trigrams of one word. A word of length L >= 1
// yields L trigrams.
void emit_trigrams(const std::vector<char32_t> &word, std::vector<std::string> &out) {
  if (word.empty()) return;
  std::vector<char32_t> padded;
  padded.reserve(word.size() + 2);
  padded.push_back('#');
  for (char32_t c : word) padded.push_back(lower(c));
  padded.push_back('#');
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    out.push_back(utf8_encode(padded[i]) + utf8_encode(padded[i + 1]) +
                  utf8_encode(padded[i + 2]));
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view surface, TokenizerMode mode) {
  const auto cps = utf8_decode(surface);
  std::vector<std::string> out;
  std::vector<char32_t> word;
  for (char32_t cp : cps) {
    if (is_space(cp)) {
      emit_trigrams(word, out);
      word.clear();
      continue;
    }
    switch (mode) {
      case TokenizerMode::kUnicodeChar:
        out.push_back(utf8_encode(cp));
        break;
      case TokenizerMode::kLetterTrigram:
        word.push_back(cp);
        break;
      case TokenizerMode::kAuto:
        if (is_cjk(cp)) {
          emit_trigrams(word, out);
          word.clear();
          out.push_back(utf8_encode(cp));
        } else {
          word.push_back(cp);
        }
        break;
    }
  }
  emit_trigrams(word, out);
  if (out.empty()) {
    throw Error(ErrorCode::kEmptySurface, "'" + std::string(surface) + "'");
  }
  return out;
}

SubwordVocab::SubwordVocab(TokenizerMode mode) : mode_(mode) {}

SubwordVocab SubwordVocab::from_tokens(TokenizerMode mode, std::vector<std::string> tokens) {
  if (tokens.empty() || tokens[0] != kOovToken) {
    throw Error(ErrorCode::kParseError, "vocabulary must start with the OOV token");
  }
  SubwordVocab vocab(mode);
  vocab.tokens_.clear();
  for (std::uint32_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && !vocab.index_.emplace(tokens[i], i).second) {
      throw Error(ErrorCode::kParseError, "duplicate subword '" + tokens[i] + "'");
    }
    vocab.tokens_.push_back(std::move(tokens[i]));
  }
  return vocab;
}

std::uint32_t SubwordVocab::add(const std::string &subword) {
  auto [it, fresh] = index_.emplace(subword, static_cast<std::uint32_t>(tokens_.size()));
  if (fresh) tokens_.push_back(subword);
  return it->second;
}

std::uint32_t SubwordVocab::lookup(std::string_view subword) const {
  auto it = index_.find(std::string(subword));
  return it == index_.end() ? kOov : it->second;
}

std::vector<std::uint32_t> SubwordVocab::encode(std::string_view surface) const {
  auto tokens = tokenize(surface, mode_);
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size());
  for (const auto &t : tokens) ids.push_back(lookup(t));
  return ids;
}

SubwordVocab build_vocab(std::span<const std::string> surfaces, TokenizerMode mode) {
  SubwordVocab vocab(mode);
  for (const std::string &s : surfaces) {
    std::vector<std::string> tokens;
    try {
      tokens = tokenize(s, mode);
    } catch (const Error &) {
      continue;
    }
    for (const auto &t : tokens) vocab.add(t);
  }
  if (vocab.size() == 1) throw Error(ErrorCode::kEmptyCorpus, "no subwords to index");
  return vocab;
}

}  // namespace kgsyn
