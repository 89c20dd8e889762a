// Copyright 2026 The recipegraph Authors.
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

#ifndef RECIPEGRAPH_TEXTPROC_H_
#define RECIPEGRAPH_TEXTPROC_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recipegraph/ontology.h"

namespace recipegraph {

// Rule-based front end for preparation texts: tokenizer, part-of-speech
// cascade, shallow chunker and clause segmenter. Everything here is a pure
// function of (text, ontology).

struct Token {
  std::string surface;
  std::string lower;
  size_t char_start = 0;  // byte offsets into the source text
  size_t char_end = 0;
  size_t index = 0;

  bool operator==(const Token &) const = default;
};

enum class Tag { kVerb, kNoun, kAdj, kDet, kPrep, kConj, kPunct, kNum, kOther };

std::string_view TagName(Tag tag);

struct TaggedToken {
  Token token;
  Tag tag = Tag::kOther;

  bool operator==(const TaggedToken &) const = default;
};

enum class ChunkKind { kVP, kNP, kPP };

std::string_view ChunkKindName(ChunkKind kind);

// A contiguous token span [first, last] with its head.
struct Chunk {
  ChunkKind kind = ChunkKind::kNP;
  size_t first = 0;  // token indices, inclusive
  size_t last = 0;
  size_t head = 0;          // main verb for VP, head noun for NP/PP
  std::string preposition;  // PP only

  bool operator==(const Chunk &) const = default;
};

enum class TemporalMarker { kNone, kWhile, kMeanwhile };

std::string_view TemporalMarkerName(TemporalMarker marker);

struct Clause {
  std::string id;  // c_1, c_2, ... in text order
  size_t number = 0;
  size_t char_start = 0;
  size_t char_end = 0;
  size_t first_token = 0;  // inclusive token range
  size_t last_token = 0;
  std::vector<Chunk> chunks;
  TemporalMarker temporal_marker = TemporalMarker::kNone;
  bool sentence_initial = false;

  bool actionable() const;
  const Chunk *verb_phrase() const;

  bool operator==(const Clause &) const = default;
};

std::vector<Token> Tokenize(std::string_view text);

std::vector<TaggedToken> TagTokens(const std::vector<Token> &tokens,
                                   const Ontology &ontology);

std::vector<Chunk> ChunkTokens(const std::vector<TaggedToken> &tagged);

std::vector<Clause> SegmentClauses(std::string_view text,
                                   const std::vector<TaggedToken> &tagged,
                                   const std::vector<Chunk> &chunks);

// Runs the whole cascade.
struct Analysis {
  std::vector<TaggedToken> tokens;
  std::vector<Chunk> chunks;
  std::vector<Clause> clauses;
};

Analysis Analyze(std::string_view text, const Ontology &ontology);

// `token<TAB>tag<TAB>chunk` lines followed by one line per clause.
std::string DebugDump(std::string_view text, const Analysis &analysis);

}  // namespace recipegraph

#endif  // RECIPEGRAPH_TEXTPROC_H_
