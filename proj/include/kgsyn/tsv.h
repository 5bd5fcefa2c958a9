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

#ifndef KGSYN_TSV_H_
#define KGSYN_TSV_H_

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgsyn/dataset.h"
#include "kgsyn/kg.h"
#include "kgsyn/tokenizer.h"

namespace kgsyn {

// UTF-8, LF-terminated text files. Lines starting with '#' and blank lines
// are skipped; malformed lines raise kParseError naming "source:line".

std::vector<RawTriple> read_triples(std::istream &in, const std::string &source);
std::vector<RawTriple> load_triples(const std::string &path);
void save_triples(const std::string &path, std::span<const RawTriple> triples);

KindRegistry read_kinds(std::istream &in, const std::string &source);
KindRegistry load_kinds(const std::string &path);
void save_kinds(const std::string &path, const KindRegistry &kinds);

using EntityResolver = std::function<std::optional<EntityId>(std::string_view surface)>;

EntityResolver resolver_for(const KnowledgeGraph &kg);
EntityResolver resolver_for(std::span<const std::string> entity_surfaces);

// Rows `mention<TAB>entity<TAB>split`. Duplicate rows are parse errors.
PairDataset read_pairs(std::istream &in, const std::string &source,
                       const EntityResolver &resolve);
PairDataset load_pairs(const std::string &path, const EntityResolver &resolve);
void save_pairs(const std::string &path, const PairDataset &pairs,
                std::span<const std::string> entity_surfaces);

// One document per line; blank lines dropped.
std::vector<std::string> load_corpus(const std::string &path);
void save_corpus(const std::string &path, std::span<const std::string> lines);

// Rows `subword<TAB>index`, indices dense from 0 (the OOV bucket).
SubwordVocab read_vocab(std::istream &in, const std::string &source, TokenizerMode mode);
SubwordVocab load_vocab(const std::string &path, TokenizerMode mode);
void save_vocab(const std::string &path, const SubwordVocab &vocab);

}  // namespace kgsyn

#endif  // KGSYN_TSV_H_
