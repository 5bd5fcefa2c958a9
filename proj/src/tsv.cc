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

#include "kgsyn/tsv.h"

#include <charconv>
#include <fstream>
#include <memory>
#include <unordered_map>
#include <set>
#include <sstream>
#include <tuple>

#include "kgsyn/error.h"

namespace kgsyn {

namespace {

std::ifstream open_in(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream &out, const std::string &path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for '" + path + "'");
}

[[noreturn]] void parse_error(const std::string &source, std::size_t line,
                              const std::string &what) {
  throw Error(ErrorCode::kParseError, source + ":" + std::to_string(line) + ": " + what);
}

// Calls fn(fields, line_number) for each data line.
// Vocabulary files disable comments because trigrams start with '#'.
template <class Fn>
void for_each_row(std::istream &in, const std::string &source, std::size_t arity, Fn &&fn,
                  bool comments = true) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (comments && line[0] == '#')) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != arity) {
      parse_error(source, number,
                  "expected " + std::to_string(arity) + " tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    for (const auto &f : fields) {
      if (f.empty()) parse_error(source, number, "empty field");
    }
    fn(fields, number);
  }
}

// Rejects values the readers would not give back unchanged.
const std::string &field(const std::string &value, const std::string &path, bool leading) {
  const bool bad = value.empty() || value.find_first_of("\t\n\r") != std::string::npos ||
                   (leading && value[0] == '#');
  if (bad) throw Error(ErrorCode::kParseError, path + ": cannot write field '" + value + "'");
  return value;
}

}  // namespace

std::vector<RawTriple> read_triples(std::istream &in, const std::string &source) {
  std::vector<RawTriple> out;
  for_each_row(in, source, 3, [&](std::vector<std::string> &f, std::size_t) {
    out.push_back({std::move(f[0]), std::move(f[1]), std::move(f[2])});
  });
  return out;
}

std::vector<RawTriple> load_triples(const std::string &path) {
  auto in = open_in(path);
  return read_triples(in, path);
}

void save_triples(const std::string &path, std::span<const RawTriple> triples) {
  auto out = open_out(path);
  for (const auto &t : triples) {
    out << field(t.head, path, true) << '\t' << field(t.relation, path, false) << '\t'
        << field(t.tail, path, false) << '\n';
  }
  finish(out, path);
}

KindRegistry read_kinds(std::istream &in, const std::string &source) {
  KindRegistry out;
  for_each_row(in, source, 2, [&](std::vector<std::string> &f, std::size_t line) {
    auto kind = parse_kind(f[1]);
    if (!kind) parse_error(source, line, "kind must be 'instance' or 'concept', got '" + f[1] + "'");
    out.emplace_back(std::move(f[0]), *kind);
  });
  return out;
}

KindRegistry load_kinds(const std::string &path) {
  auto in = open_in(path);
  return read_kinds(in, path);
}

void save_kinds(const std::string &path, const KindRegistry &kinds) {
  auto out = open_out(path);
  for (const auto &[surface, kind] : kinds) {
    out << field(surface, path, true) << '\t' << kind_name(kind) << '\n';
  }
  finish(out, path);
}

EntityResolver resolver_for(const KnowledgeGraph &kg) {
  return [&kg](std::string_view s) { return kg.find_entity(s); };
}

EntityResolver resolver_for(std::span<const std::string> entity_surfaces) {
  auto index = std::make_shared<std::unordered_map<std::string, EntityId>>();
  for (std::uint32_t i = 0; i < entity_surfaces.size(); ++i) {
    index->emplace(entity_surfaces[i], EntityId{i});
  }
  return [index](std::string_view s) -> std::optional<EntityId> {
    auto it = index->find(std::string(s));
    if (it == index->end()) return std::nullopt;
    return it->second;
  };
}

PairDataset read_pairs(std::istream &in, const std::string &source,
                       const EntityResolver &resolve) {
  PairDataset out;
  std::set<std::tuple<std::string, std::uint32_t, Split>> seen;
  for_each_row(in, source, 3, [&](std::vector<std::string> &f, std::size_t line) {
    auto entity = resolve(f[1]);
    if (!entity) {
      throw Error(ErrorCode::kUnknownEntity,
                  source + ":" + std::to_string(line) + ": '" + f[1] + "'");
    }
    auto split = parse_split(f[2]);
    if (!split) {
      throw Error(ErrorCode::kBadSplitTag,
                  source + ":" + std::to_string(line) + ": '" + f[2] + "'");
    }
    if (!seen.emplace(f[0], entity->value, *split).second) {
      parse_error(source, line, "duplicate pair '" + f[0] + "' -> '" + f[1] + "'");
    }
    out.pairs.push_back({std::move(f[0]), *entity, *split});
  });
  return out;
}

PairDataset load_pairs(const std::string &path, const EntityResolver &resolve) {
  auto in = open_in(path);
  return read_pairs(in, path, resolve);
}

void save_pairs(const std::string &path, const PairDataset &pairs,
                std::span<const std::string> entity_surfaces) {
  auto out = open_out(path);
  for (const Pair &p : pairs.pairs) {
    if (p.entity.value >= entity_surfaces.size()) {
      throw Error(ErrorCode::kUnknownEntity, "entity id " + std::to_string(p.entity.value));
    }
    out << field(p.mention, path, true) << '\t'
        << field(entity_surfaces[p.entity.value], path, false) << '\t'
        << split_name(p.split) << '\n';
  }
  finish(out, path);
}

std::vector<std::string> load_corpus(const std::string &path) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

void save_corpus(const std::string &path, std::span<const std::string> lines) {
  auto out = open_out(path);
  for (const auto &l : lines) out << field(l, path, true) << '\n';
  finish(out, path);
}

SubwordVocab read_vocab(std::istream &in, const std::string &source, TokenizerMode mode) {
  std::vector<std::string> tokens;
  for_each_row(in, source, 2, [&](std::vector<std::string> &f, std::size_t line) {
    std::uint64_t index = 0;
    auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), index);
    if (ec != std::errc() || ptr != f[1].data() + f[1].size()) {
      parse_error(source, line, "bad index '" + f[1] + "'");
    }
    if (index != tokens.size()) {
      parse_error(source, line, "index " + f[1] + " out of order");
    }
    tokens.push_back(std::move(f[0]));
  }, /*comments=*/false);
  return SubwordVocab::from_tokens(mode, std::move(tokens));
}

SubwordVocab load_vocab(const std::string &path, TokenizerMode mode) {
  auto in = open_in(path);
  return read_vocab(in, path, mode);
}

void save_vocab(const std::string &path, const SubwordVocab &vocab) {
  auto out = open_out(path);
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    out << field(vocab.token(i), path, false) << '\t' << i << '\n';
  }
  finish(out, path);
}

}  // namespace kgsyn
