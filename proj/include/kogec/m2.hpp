#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kogec/classify.hpp"
#include "kogec/hangul.hpp"

namespace kogec {

// ---------------------------------------------------------------------------
// Multi-annotator M2 corpus
//
// One block per sentence: an "S" line with the space-tokenized source,
// followed by "A" lines of the form
//   A <start> <end>|||<label>|||<correction>|||<flag>|||<comment>|||<annotator>
// Blocks are separated by one blank line.  The flag and comment fields are
// carried verbatim and never interpreted.
// ---------------------------------------------------------------------------

struct AnnotatedSentence {
  std::vector<std::string> source_tokens;
  std::vector<Edit> edits;

  std::vector<int> annotator_ids() const {
    std::set<int> ids;
    for (const Edit& e : edits) ids.insert(e.annotator);
    return {ids.begin(), ids.end()};
  }

  bool operator==(const AnnotatedSentence&) const = default;
};

struct M2Corpus {
  std::vector<AnnotatedSentence> sentences;

  bool operator==(const M2Corpus&) const = default;
};

class M2ParseError : public std::runtime_error {
 public:
  M2ParseError(std::size_t line, const std::string& reason)
      : std::runtime_error("m2 line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split_fields(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t sep = s.find("|||", start);
    if (sep == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, sep - start));
    start = sep + 3;
  }
}

inline bool spans_overlap(const Edit& a, const Edit& b) {
  return a.src_begin < b.src_end && b.src_begin < a.src_end;
}

// Invariant checks shared by the parser and by callers that build sentences
// in memory; `line_of` maps an edit index to the input line for diagnostics.
template <typename LineOf>
inline void check_sentence(const AnnotatedSentence& s, LineOf line_of) {
  const auto token_count = static_cast<std::int64_t>(s.source_tokens.size());
  std::map<int, std::vector<std::size_t>> by_annotator;
  for (std::size_t i = 0; i < s.edits.size(); ++i) {
    const Edit& e = s.edits[i];
    if (e.is_noop()) {
      by_annotator[e.annotator].push_back(i);
      continue;
    }
    if (e.src_begin < 0 || e.src_end < e.src_begin || e.src_end > token_count)
      throw M2ParseError(line_of(i),
                         "span " + std::to_string(e.src_begin) + ".." +
                             std::to_string(e.src_end) +
                             " out of bounds for " +
                             std::to_string(token_count) + " tokens");
    if (e.annotator < 0)
      throw M2ParseError(line_of(i), "negative annotator id");
    by_annotator[e.annotator].push_back(i);
  }
  for (const auto& [id, indices] : by_annotator) {
    bool has_noop = false;
    for (std::size_t i : indices) has_noop |= s.edits[i].is_noop();
    if (has_noop && indices.size() > 1)
      throw M2ParseError(line_of(indices.back()),
                         "noop mixed with other edits for annotator " +
                             std::to_string(id));
    for (std::size_t a = 0; a < indices.size(); ++a)
      for (std::size_t b = a + 1; b < indices.size(); ++b)
        if (spans_overlap(s.edits[indices[a]], s.edits[indices[b]]))
          throw M2ParseError(line_of(indices[b]),
                             "overlapping spans for annotator " +
                                 std::to_string(id));
  }
}

}  // namespace detail

inline M2Corpus parse_m2(std::string_view text) {
  M2Corpus corpus;
  AnnotatedSentence current;
  std::vector<std::size_t> edit_lines;
  bool in_block = false;
  std::size_t block_start_line = 0;

  auto flush = [&](std::size_t line_no) {
    if (!in_block) return;
    detail::check_sentence(current, [&](std::size_t i) {
      return i < edit_lines.size() ? edit_lines[i] : line_no;
    });
    corpus.sentences.push_back(std::move(current));
    current = {};
    edit_lines.clear();
    in_block = false;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      flush(line_no);
      continue;
    }
    if (line.starts_with("S ") || line == "S") {
      if (in_block)
        throw M2ParseError(line_no, "unexpected S line inside a block");
      in_block = true;
      block_start_line = line_no;
      std::string_view rest = line.size() > 1 ? line.substr(2) : "";
      std::size_t start = 0;
      while (start <= rest.size() && !rest.empty()) {
        std::size_t sp = rest.find(' ', start);
        if (sp == std::string_view::npos) sp = rest.size();
        if (sp > start)
          current.source_tokens.emplace_back(rest.substr(start, sp - start));
        start = sp + 1;
        if (start > rest.size()) break;
      }
      continue;
    }
    if (line.starts_with("A ")) {
      if (!in_block)
        throw M2ParseError(line_no, "A line before any S line");
      const auto fields = detail::split_fields(line.substr(2));
      if (fields.size() != 6)
        throw M2ParseError(line_no, "expected 6 fields, got " +
                                        std::to_string(fields.size()));
      const std::size_t sp = fields[0].find(' ');
      if (sp == std::string_view::npos)
        throw M2ParseError(line_no, "expected '<start> <end>' span");
      const auto begin = detail::parse_int(fields[0].substr(0, sp));
      const auto end = detail::parse_int(fields[0].substr(sp + 1));
      if (!begin || !end)
        throw M2ParseError(line_no, "non-integer span indices");
      const auto annotator = detail::parse_int(fields[5]);
      if (!annotator)
        throw M2ParseError(line_no, "non-integer annotator id");
      Edit e;
      e.src_begin = *begin;
      e.src_end = *end;
      e.label = std::string(fields[1]);
      e.replacement = std::string(fields[2]);
      e.flag = std::string(fields[3]);
      e.comment = std::string(fields[4]);
      e.annotator = static_cast<int>(*annotator);
      if ((e.src_begin == -1) != (e.src_end == -1) ||
          (e.src_begin == -1 && e.label != "noop"))
        throw M2ParseError(line_no, "span -1 is reserved for noop edits");
      if (e.label == "noop" && !e.is_noop())
        throw M2ParseError(line_no, "noop edits must use span -1 -1");
      current.edits.push_back(std::move(e));
      edit_lines.push_back(line_no);
      continue;
    }
    throw M2ParseError(line_no, "unrecognized line: '" +
                                    std::string(line.substr(0, 32)) + "'");
  }
  flush(line_no + 1);
  (void)block_start_line;
  return corpus;
}

inline std::string serialize_edit(const Edit& e) {
  std::string out = "A ";
  out += std::to_string(e.src_begin);
  out.push_back(' ');
  out += std::to_string(e.src_end);
  out += "|||";
  out += e.label;
  out += "|||";
  out += e.replacement;
  out += "|||";
  out += e.flag;
  out += "|||";
  out += e.comment;
  out += "|||";
  out += std::to_string(e.annotator);
  return out;
}

// Inverse of parse_m2: blocks separated by one blank line, single trailing
// newline.  Parsing then serializing a canonical file is byte-identical.
inline std::string serialize_m2(const M2Corpus& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    if (i) out.push_back('\n');
    const AnnotatedSentence& s = corpus.sentences[i];
    out += "S";
    for (const std::string& tok : s.source_tokens) {
      out.push_back(' ');
      out += tok;
    }
    out.push_back('\n');
    for (const Edit& e : s.edits) {
      out += serialize_edit(e);
      out.push_back('\n');
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Edit application
// ---------------------------------------------------------------------------

// Realize one annotator's correction: token spans are replaced right to
// left, then joined with single spaces.  A correction of "" or "-NONE-"
// deletes the span; noop edits leave the source untouched.
inline std::string apply_edits(const AnnotatedSentence& sentence,
                               int annotator) {
  const std::vector<int> ids = sentence.annotator_ids();
  if (!ids.empty() &&
      std::find(ids.begin(), ids.end(), annotator) == ids.end())
    throw std::invalid_argument("apply_edits: annotator " +
                                std::to_string(annotator) +
                                " not present in sentence");

  std::vector<const Edit*> selected;
  for (const Edit& e : sentence.edits)
    if (e.annotator == annotator && !e.is_noop()) selected.push_back(&e);
  std::stable_sort(selected.begin(), selected.end(),
                   [](const Edit* a, const Edit* b) {
                     if (a->src_begin != b->src_begin)
                       return a->src_begin < b->src_begin;
                     return a->src_end < b->src_end;
                   });

  std::vector<std::string> tokens = sentence.source_tokens;
  for (auto it = selected.rbegin(); it != selected.rend(); ++it) {
    const Edit& e = **it;
    std::vector<std::string> repl;
    if (!e.replacement.empty() && e.replacement != "-NONE-") {
      std::size_t start = 0;
      const std::string& r = e.replacement;
      while (start <= r.size()) {
        std::size_t sp = r.find(' ', start);
        if (sp == std::string_view::npos) sp = r.size();
        if (sp > start) repl.push_back(r.substr(start, sp - start));
        start = sp + 1;
        if (start > r.size()) break;
      }
    }
    tokens.erase(tokens.begin() + e.src_begin, tokens.begin() + e.src_end);
    tokens.insert(tokens.begin() + e.src_begin, repl.begin(), repl.end());
  }

  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lint
// ---------------------------------------------------------------------------

enum class LintKind : std::uint8_t {
  SpanOrder,        // an annotator's edits are not sorted by span
  AnnotatorGap,     // annotator ids are not contiguous from 0
  AnnotatorCount,   // annotator count differs from the configured expectation
  EmptyCorrection,  // empty correction on a non-delete label
};

inline std::string_view to_string(LintKind k) {
  switch (k) {
    case LintKind::SpanOrder: return "span-order";
    case LintKind::AnnotatorGap: return "annotator-gap";
    case LintKind::AnnotatorCount: return "annotator-count";
    case LintKind::EmptyCorrection: return "empty-correction";
  }
  return "?";
}

struct LintFinding {
  std::size_t sentence_index = 0;  // zero-based
  LintKind kind;
  std::string message;
};

struct LintOptions {
  // Expected annotators per sentence; 0 disables the check.
  int expected_annotators = 2;
};

inline std::vector<LintFinding> lint(const M2Corpus& corpus,
                                     const LintOptions& options = {}) {
  std::vector<LintFinding> findings;
  for (std::size_t si = 0; si < corpus.sentences.size(); ++si) {
    const AnnotatedSentence& s = corpus.sentences[si];
    const std::vector<int> ids = s.annotator_ids();

    std::map<int, const Edit*> last_seen;
    for (const Edit& e : s.edits) {
      if (e.is_noop()) continue;
      auto [it, inserted] = last_seen.try_emplace(e.annotator, &e);
      if (!inserted) {
        const Edit* prev = it->second;
        if (e.src_begin < prev->src_begin ||
            (e.src_begin == prev->src_begin && e.src_end < prev->src_end))
          findings.push_back(
              {si, LintKind::SpanOrder,
               "edits of annotator " + std::to_string(e.annotator) +
                   " are out of span order"});
        it->second = &e;
      }
      const bool is_delete = e.label.starts_with("U:");
      const bool empty_corr = e.replacement.empty() || e.replacement == "-NONE-";
      if (empty_corr && !is_delete)
        findings.push_back({si, LintKind::EmptyCorrection,
                            "empty correction on label '" + e.label + "'"});
    }

    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (ids[k] != static_cast<int>(k)) {
        findings.push_back({si, LintKind::AnnotatorGap,
                            "annotator ids are not contiguous from 0"});
        break;
      }
    }
    if (options.expected_annotators > 0 &&
        static_cast<int>(ids.size()) != options.expected_annotators)
      findings.push_back(
          {si, LintKind::AnnotatorCount,
           "sentence has " + std::to_string(ids.size()) + " annotators, " +
               "expected " + std::to_string(options.expected_annotators)});
  }
  return findings;
}

}  // namespace kogec
