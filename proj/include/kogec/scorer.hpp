#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "kogec/m2.hpp"

namespace kogec {

// ---------------------------------------------------------------------------
// Multi-reference edit scoring
//
// A hypothesis edit matches a reference edit when both cover the same source
// span and propose the same replacement ("" and "-NONE-" are the same empty
// replacement).  Each sentence is scored against the reference annotator
// that maximizes the sentence-level F score, and the chosen counts are
// pooled over the corpus before computing the reported precision, recall,
// and F.
// ---------------------------------------------------------------------------

struct MatchCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const MatchCounts&) const = default;
};

// With no hypothesis edits precision is 1; with no reference edits recall
// is 1.  F is 0 when both precision and recall are 0.
inline double precision(const MatchCounts& c) {
  return c.tp + c.fp == 0 ? 1.0
                          : static_cast<double>(c.tp) /
                                static_cast<double>(c.tp + c.fp);
}

inline double recall(const MatchCounts& c) {
  return c.tp + c.fn == 0 ? 1.0
                          : static_cast<double>(c.tp) /
                                static_cast<double>(c.tp + c.fn);
}

inline double f_beta(const MatchCounts& c, double beta) {
  const double p = precision(c);
  const double r = recall(c);
  if (p == 0.0 && r == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * p * r / (b2 * p + r);
}

struct MatchOptions {
  // When set, edits must also agree on the label to count as a match.
  bool label_sensitive = false;
};

namespace detail {

inline std::string_view normalized_replacement(const Edit& e) {
  return e.replacement == "-NONE-" ? std::string_view{}
                                   : std::string_view{e.replacement};
}

using MatchKey =
    std::tuple<std::int64_t, std::int64_t, std::string_view, std::string_view>;

inline MatchKey match_key(const Edit& e, const MatchOptions& options) {
  return {e.src_begin, e.src_end, normalized_replacement(e),
          options.label_sensitive ? std::string_view{e.label}
                                  : std::string_view{}};
}

}  // namespace detail

// Count matches between one hypothesis edit set and one reference edit set.
// Noop edits carry no correction and are excluded on both sides.  Equal
// keys pair up greedily; duplicates beyond the pairing count as fp or fn.
inline MatchCounts match_edits(const std::vector<Edit>& hypothesis,
                               const std::vector<Edit>& reference,
                               const MatchOptions& options = {}) {
  std::map<detail::MatchKey, std::uint64_t> ref_keys;
  std::uint64_t ref_total = 0;
  for (const Edit& e : reference) {
    if (e.is_noop()) continue;
    ++ref_keys[detail::match_key(e, options)];
    ++ref_total;
  }
  MatchCounts c;
  for (const Edit& e : hypothesis) {
    if (e.is_noop()) continue;
    const auto it = ref_keys.find(detail::match_key(e, options));
    if (it != ref_keys.end() && it->second > 0) {
      --it->second;
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = ref_total - c.tp;
  return c;
}

struct SentenceEval {
  int chosen_reference = 0;  // annotator id whose edits were scored against
  MatchCounts counts;
};

struct EvalReport {
  MatchCounts counts;  // pooled over best-reference choices
  double precision = 1.0;
  double recall = 1.0;
  double f = 1.0;
  double beta = 0.5;
  std::vector<SentenceEval> sentences;
};

struct EvalOptions {
  double beta = 0.5;
  MatchOptions match;
};

// Score a hypothesis corpus against a multi-annotator reference corpus.
// Corpora are aligned positionally and must agree in length and source
// tokens.  Hypothesis sentences must carry edits of exactly one annotator
// (or none, meaning no changes proposed).
inline EvalReport evaluate(const M2Corpus& hypothesis, const M2Corpus& reference,
                           const EvalOptions& options = {}) {
  if (hypothesis.sentences.size() != reference.sentences.size())
    throw std::invalid_argument(
        "evaluate: hypothesis has " +
        std::to_string(hypothesis.sentences.size()) +
        " sentences, reference has " +
        std::to_string(reference.sentences.size()));

  EvalReport report;
  report.beta = options.beta;
  for (std::size_t i = 0; i < hypothesis.sentences.size(); ++i) {
    const AnnotatedSentence& hyp = hypothesis.sentences[i];
    const AnnotatedSentence& ref = reference.sentences[i];
    if (hyp.source_tokens != ref.source_tokens)
      throw std::invalid_argument(
          "evaluate: source tokens differ at sentence " + std::to_string(i));
    if (hyp.annotator_ids().size() > 1)
      throw std::invalid_argument(
          "evaluate: hypothesis sentence " + std::to_string(i) +
          " carries more than one annotator");

    // Candidate references are the annotators present in the block; a
    // block with no edits contributes one empty reference.
    std::map<int, std::vector<Edit>> refs;
    for (const Edit& e : ref.edits) refs[e.annotator].push_back(e);
    if (refs.empty()) refs[0] = {};

    SentenceEval best;
    double best_f = -1.0;
    for (const auto& [id, edits] : refs) {
      const MatchCounts c = match_edits(hyp.edits, edits, options.match);
      const double f = f_beta(c, options.beta);
      const bool better =
          f > best_f ||
          (f == best_f && (c.tp > best.counts.tp ||
                           (c.tp == best.counts.tp && id < best.chosen_reference)));
      if (better) {
        best = {id, c};
        best_f = f;
      }
    }
    report.counts += best.counts;
    report.sentences.push_back(best);
  }
  report.precision = precision(report.counts);
  report.recall = recall(report.counts);
  report.f = f_beta(report.counts, options.beta);
  return report;
}

}  // namespace kogec
