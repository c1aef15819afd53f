#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "kogec/m2.hpp"

namespace kogec {

// ---------------------------------------------------------------------------
// Corpus statistics
// ---------------------------------------------------------------------------

struct CorpusStats {
  std::uint64_t sentence_count = 0;
  // Sum over sentences of the distinct annotator ids in the block; a noop
  // still counts as one reference for its annotator.
  std::uint64_t reference_count = 0;
  // Distinct annotator ids anywhere in the corpus.
  std::uint64_t annotator_count = 0;
  std::uint64_t source_token_count = 0;
  // Non-noop edits per annotator id, over the whole corpus.
  std::map<int, std::uint64_t> edits_per_annotator;
  // Non-noop edit labels over the whole corpus.
  std::map<std::string, std::uint64_t> label_histogram;

  std::uint64_t edit_count() const {
    std::uint64_t total = 0;
    for (const auto& [id, n] : edits_per_annotator) total += n;
    return total;
  }
};

inline CorpusStats compute_stats(const M2Corpus& corpus) {
  CorpusStats stats;
  stats.sentence_count = corpus.sentences.size();
  std::set<int> all_ids;
  for (const AnnotatedSentence& s : corpus.sentences) {
    const std::vector<int> ids = s.annotator_ids();
    all_ids.insert(ids.begin(), ids.end());
    stats.reference_count += ids.size();
    stats.source_token_count += s.source_tokens.size();
    for (const Edit& e : s.edits) {
      if (e.is_noop()) continue;
      ++stats.edits_per_annotator[e.annotator];
      ++stats.label_histogram[e.label];
    }
  }
  stats.annotator_count = all_ids.size();
  return stats;
}

}  // namespace kogec
