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

#include "recipegraph/textproc.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace recipegraph {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool IsPunctChar(char c) {
  return c == ',' || c == '.' || c == ';' || c == ':' || c == '!' || c == '?';
}

bool IsTerminal(std::string_view s) { return s == "." || s == "!" || s == "?"; }

const std::set<std::string, std::less<>> kDeterminers = {
    "the", "a", "an", "some", "each", "every", "all", "this", "these",
    "that", "those", "your", "its", "their", "any", "another", "both"};

const std::set<std::string, std::less<>> kPrepositions = {
    "to", "into", "in", "on", "onto", "over", "with", "from", "of",
    "for", "at", "by", "under", "through", "until", "about", "across",
    "around", "between", "without", "inside", "atop", "upon", "within",
    "along", "after", "before"};

const std::set<std::string, std::less<>> kConjunctions = {
    "and", "or", "but", "then", "while", "meanwhile", "when"};

const std::set<std::string, std::less<>> kNumberWords = {
    "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "half", "dozen"};

// Adverbs, particles and pronouns folded into OTHER.
const std::set<std::string, std::less<>> kOtherWords = {
    "up", "down", "out", "off", "away", "aside", "together", "back",
    "well", "again", "lengthwise", "crosswise", "it", "them", "they",
    "everything", "not", "very"};

const std::set<std::string, std::less<>> kParticles = {
    "up", "down", "out", "off", "away", "aside", "together", "back"};

// Conjunction-like words skipped when looking for a clause's temporal marker.
const std::set<std::string, std::less<>> kClauseLinkers = {"and", "then", "but"};

bool IsNumeral(std::string_view lower) {
  if (kNumberWords.count(lower)) return true;
  bool digit = false;
  for (char c : lower) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '/' && c != '-') {
      return false;
    }
  }
  return digit;
}

std::optional<Tag> ClosedClass(std::string_view lower) {
  if (lower.size() == 1 && IsPunctChar(lower[0])) return Tag::kPunct;
  if (kDeterminers.count(lower)) return Tag::kDet;
  if (kPrepositions.count(lower)) return Tag::kPrep;
  if (kConjunctions.count(lower)) return Tag::kConj;
  if (IsNumeral(lower)) return Tag::kNum;
  if (kOtherWords.count(lower)) return Tag::kOther;
  return std::nullopt;
}

std::vector<std::string> LowerWordsFrom(const std::vector<Token> &tokens, size_t i) {
  std::vector<std::string> words;
  for (size_t j = i; j < tokens.size() && j < i + 6; ++j) {
    words.push_back(tokens[j].lower);
  }
  return words;
}

// Parses DET? NUM* ADJ* NOUN+ at position i; returns the last index.
std::optional<size_t> MatchNounPhrase(const std::vector<TaggedToken> &tagged,
                                      size_t i, size_t *head) {
  size_t j = i;
  const size_t n = tagged.size();
  if (j < n && tagged[j].tag == Tag::kDet) ++j;
  while (j < n && tagged[j].tag == Tag::kNum) ++j;
  while (j < n && tagged[j].tag == Tag::kAdj) ++j;
  size_t nouns = 0;
  while (j < n && tagged[j].tag == Tag::kNoun) {
    ++j;
    ++nouns;
  }
  if (nouns == 0) return std::nullopt;
  *head = j - 1;
  return j - 1;
}

}  // namespace

std::string_view TagName(Tag tag) {
  switch (tag) {
    case Tag::kVerb: return "VERB";
    case Tag::kNoun: return "NOUN";
    case Tag::kAdj: return "ADJ";
    case Tag::kDet: return "DET";
    case Tag::kPrep: return "PREP";
    case Tag::kConj: return "CONJ";
    case Tag::kPunct: return "PUNCT";
    case Tag::kNum: return "NUM";
    case Tag::kOther: return "OTHER";
  }
  return "OTHER";
}

std::string_view ChunkKindName(ChunkKind kind) {
  switch (kind) {
    case ChunkKind::kVP: return "VP";
    case ChunkKind::kNP: return "NP";
    case ChunkKind::kPP: return "PP";
  }
  return "NP";
}

std::string_view TemporalMarkerName(TemporalMarker marker) {
  switch (marker) {
    case TemporalMarker::kNone: return "NONE";
    case TemporalMarker::kWhile: return "WHILE";
    case TemporalMarker::kMeanwhile: return "MEANWHILE";
  }
  return "NONE";
}

bool Clause::actionable() const { return verb_phrase() != nullptr; }

const Chunk *Clause::verb_phrase() const {
  for (const auto &chunk : chunks) {
    if (chunk.kind == ChunkKind::kVP) return &chunk;
  }
  return nullptr;
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  auto emit = [&](size_t start, size_t end) {
    Token t;
    t.surface = std::string(text.substr(start, end - start));
    t.lower = ToLower(t.surface);
    t.char_start = start;
    t.char_end = end;
    t.index = tokens.size();
    tokens.push_back(std::move(t));
  };
  size_t i = 0;
  while (i < text.size()) {
    if (IsSpace(text[i])) {
      ++i;
      continue;
    }
    if (IsPunctChar(text[i])) {
      emit(i, i + 1);
      ++i;
      continue;
    }
    size_t start = i;
    while (i < text.size() && !IsSpace(text[i]) && !IsPunctChar(text[i])) ++i;
    emit(start, i);
  }
  return tokens;
}

std::vector<TaggedToken> TagTokens(const std::vector<Token> &tokens,
                                   const Ontology &ontology) {
  std::vector<TaggedToken> tagged;
  tagged.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token &tok = tokens[i];
    const Tag *prev = i == 0 ? nullptr : &tagged.back().tag;
    auto tag_as = [&](Tag tag) { tagged.push_back({tok, tag}); };

    if (auto closed = ClosedClass(tok.lower)) {
      tag_as(*closed);
      continue;
    }

    const auto words = LowerWordsFrom(tokens, i);
    const bool action_word = !ontology.LexicalLookup(words, Hierarchy::kAction).empty();
    const bool food_word = !ontology.LexicalLookup(words, Hierarchy::kFood).empty();

    if (action_word) {
      const bool clause_initial =
          !prev || *prev == Tag::kPunct || *prev == Tag::kConj;
      const bool nominal_context =
          prev && (*prev == Tag::kDet || *prev == Tag::kNum || *prev == Tag::kAdj);
      if (clause_initial || (!nominal_context && !food_word)) {
        tag_as(Tag::kVerb);
        continue;
      }
    }
    if (food_word) {
      tag_as(Tag::kNoun);
      continue;
    }
    const std::string &w = tok.lower;
    if (w.size() > 3 && (w.ends_with("ly") || w.ends_with("wise"))) {
      tag_as(Tag::kOther);
      continue;
    }
    // Participle used as a modifier: needs something after it to modify.
    const bool modifies_next =
        i + 1 < tokens.size() && !ClosedClass(tokens[i + 1].lower);
    if (w.size() > 4 && (w.ends_with("ed") || w.ends_with("ing")) && prev &&
        (*prev == Tag::kNoun || *prev == Tag::kDet) && modifies_next) {
      tag_as(Tag::kAdj);
      continue;
    }
    tag_as(Tag::kNoun);
  }
  return tagged;
}

std::vector<Chunk> ChunkTokens(const std::vector<TaggedToken> &tagged) {
  std::vector<Chunk> chunks;
  size_t i = 0;
  while (i < tagged.size()) {
    const Tag tag = tagged[i].tag;
    if (tag == Tag::kVerb) {
      Chunk vp{ChunkKind::kVP, i, i, i, ""};
      if (i + 1 < tagged.size() && tagged[i + 1].tag == Tag::kOther &&
          kParticles.count(tagged[i + 1].token.lower)) {
        vp.last = i + 1;
      }
      chunks.push_back(vp);
      i = vp.last + 1;
      continue;
    }
    size_t head = 0;
    if (tag == Tag::kPrep) {
      if (auto last = MatchNounPhrase(tagged, i + 1, &head)) {
        chunks.push_back({ChunkKind::kPP, i, *last, head, tagged[i].token.lower});
        i = *last + 1;
        continue;
      }
    } else if (tag == Tag::kDet || tag == Tag::kNum || tag == Tag::kAdj ||
               tag == Tag::kNoun) {
      if (auto last = MatchNounPhrase(tagged, i, &head)) {
        chunks.push_back({ChunkKind::kNP, i, *last, head, ""});
        i = *last + 1;
        continue;
      }
    }
    ++i;
  }
  return chunks;
}

std::vector<Clause> SegmentClauses(std::string_view text,
                                   const std::vector<TaggedToken> &tagged,
                                   const std::vector<Chunk> &chunks) {
  (void)text;
  std::vector<Clause> clauses;
  const size_t n = tagged.size();

  auto is_separator = [&](size_t t) {
    const TaggedToken &tok = tagged[t];
    if (tok.tag == Tag::kConj) return true;
    return tok.tag == Tag::kPunct && !IsTerminal(tok.token.lower);
  };

  auto emit = [&](size_t first, size_t last, bool sentence_initial) {
    // Trim punctuation at the edges.
    while (first <= last && tagged[first].tag == Tag::kPunct) ++first;
    while (last >= first && tagged[last].tag == Tag::kPunct) {
      if (last == 0) return;
      --last;
    }
    if (first > last) return;
    Clause clause;
    clause.number = clauses.size() + 1;
    clause.id = "c_" + std::to_string(clause.number);
    clause.first_token = first;
    clause.last_token = last;
    clause.char_start = tagged[first].token.char_start;
    clause.char_end = tagged[last].token.char_end;
    clause.sentence_initial = sentence_initial;
    for (const auto &chunk : chunks) {
      if (chunk.first >= first && chunk.last <= last) clause.chunks.push_back(chunk);
    }
    size_t m = first;
    while (m < last && kClauseLinkers.count(tagged[m].token.lower)) ++m;
    if (tagged[m].token.lower == "while") {
      clause.temporal_marker = TemporalMarker::kWhile;
    } else if (tagged[m].token.lower == "meanwhile") {
      clause.temporal_marker = TemporalMarker::kMeanwhile;
    }
    clauses.push_back(std::move(clause));
  };

  size_t sentence_start = 0;
  while (sentence_start < n) {
    size_t sentence_end = sentence_start;
    while (sentence_end < n && !(tagged[sentence_end].tag == Tag::kPunct &&
                                 IsTerminal(tagged[sentence_end].token.lower))) {
      ++sentence_end;
    }
    if (sentence_end == n) --sentence_end;  // no terminal: last token

    std::vector<const Chunk *> vps;
    for (const auto &chunk : chunks) {
      if (chunk.kind == ChunkKind::kVP && chunk.first >= sentence_start &&
          chunk.last <= sentence_end) {
        vps.push_back(&chunk);
      }
    }
    size_t start = sentence_start;
    for (size_t k = 0; k + 1 < vps.size(); ++k) {
      size_t split = vps[k + 1]->first;
      for (size_t t = vps[k + 1]->first; t > vps[k]->last + 1; --t) {
        if (is_separator(t - 1)) {
          split = t - 1;
          break;
        }
      }
      emit(start, split - 1, start == sentence_start);
      start = split;
    }
    emit(start, sentence_end, start == sentence_start);
    sentence_start = sentence_end + 1;
  }
  return clauses;
}

Analysis Analyze(std::string_view text, const Ontology &ontology) {
  Analysis analysis;
  analysis.tokens = TagTokens(Tokenize(text), ontology);
  analysis.chunks = ChunkTokens(analysis.tokens);
  analysis.clauses = SegmentClauses(text, analysis.tokens, analysis.chunks);
  return analysis;
}

std::string DebugDump(std::string_view text, const Analysis &analysis) {
  std::vector<std::string> labels(analysis.tokens.size(), "O");
  for (const auto &chunk : analysis.chunks) {
    for (size_t t = chunk.first; t <= chunk.last; ++t) {
      labels[t] = (t == chunk.first ? "B-" : "I-") + std::string(ChunkKindName(chunk.kind));
    }
  }
  std::ostringstream out;
  for (size_t i = 0; i < analysis.tokens.size(); ++i) {
    out << analysis.tokens[i].token.surface << '\t' << TagName(analysis.tokens[i].tag)
        << '\t' << labels[i] << '\n';
  }
  for (const auto &clause : analysis.clauses) {
    out << "clause\t" << clause.id << '\t' << clause.char_start << '\t'
        << clause.char_end << '\t' << TemporalMarkerName(clause.temporal_marker)
        << '\t' << (clause.actionable() ? "actionable" : "non-actionable") << '\t'
        << text.substr(clause.char_start, clause.char_end - clause.char_start) << '\n';
  }
  return out.str();
}

}  // namespace recipegraph
