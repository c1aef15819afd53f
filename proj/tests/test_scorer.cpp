#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "kogec/scorer.hpp"

using namespace kogec;

namespace {

Edit mk(std::int64_t begin, std::int64_t end, const std::string& label,
        const std::string& replacement, int annotator) {
  Edit e;
  e.src_begin = begin;
  e.src_end = end;
  e.label = label;
  e.replacement = replacement;
  e.annotator = annotator;
  return e;
}

const std::string kGoldenBlock =
    "S 비행기 음식이 안 막였습니다 .\n"
    "A 1 2|||R:NOUN+ADP → NOUN+ADP|||음식을|||REQUIRED|||-NONE-|||0\n"
    "A 3 4|||R:SPELL|||먹었습니다|||REQUIRED|||-NONE-|||0\n"
    "A 3 4|||R:SPELL|||맞았습니다|||REQUIRED|||-NONE-|||1\n";

// Random multi-annotator corpora over abstract token material; scorer
// behavior depends only on spans and replacement strings.
struct RandomCorpus {
  M2Corpus gold;
  M2Corpus hyp;
};

RandomCorpus make_random_corpus(std::mt19937& rng, int n_sentences,
                                int n_annotators) {
  std::uniform_int_distribution<int> sent_len(1, 8);
  std::uniform_int_distribution<int> n_edits(0, 3);
  std::uniform_int_distribution<int> word(0, 4);
  auto random_edits = [&](int tokens, int annotator) {
    std::vector<Edit> edits;
    const int n = n_edits(rng);
    std::uniform_int_distribution<int> pos(0, tokens);
    std::vector<std::pair<int, int>> spans;
    for (int k = 0; k < n; ++k) {
      int begin = pos(rng);
      int end = std::min(tokens, begin + word(rng) % 2);
      bool overlaps = false;
      for (auto [b, e] : spans)
        overlaps |= begin < e && b < end && !(begin == end || b == e);
      if (overlaps) continue;
      spans.emplace_back(begin, end);
      edits.push_back(mk(begin, end, "R:OTHER", "w" + std::to_string(word(rng)),
                         annotator));
    }
    std::sort(edits.begin(), edits.end(), [](const Edit& a, const Edit& b) {
      return std::pair(a.src_begin, a.src_end) <
             std::pair(b.src_begin, b.src_end);
    });
    return edits;
  };

  RandomCorpus out;
  for (int s = 0; s < n_sentences; ++s) {
    const int tokens = sent_len(rng);
    AnnotatedSentence gold_sentence;
    for (int t = 0; t < tokens; ++t)
      gold_sentence.source_tokens.push_back("t" + std::to_string(t));
    for (int a = 0; a < n_annotators; ++a) {
      auto edits = random_edits(tokens, a);
      if (edits.empty()) edits.push_back(make_noop_edit(a));
      for (auto& e : edits) gold_sentence.edits.push_back(std::move(e));
    }
    AnnotatedSentence hyp_sentence;
    hyp_sentence.source_tokens = gold_sentence.source_tokens;
    hyp_sentence.edits = random_edits(tokens, 0);
    out.gold.sentences.push_back(std::move(gold_sentence));
    out.hyp.sentences.push_back(std::move(hyp_sentence));
  }
  return out;
}

M2Corpus restrict_to_annotator(const M2Corpus& corpus, int annotator) {
  M2Corpus out;
  for (const AnnotatedSentence& s : corpus.sentences) {
    AnnotatedSentence r;
    r.source_tokens = s.source_tokens;
    for (const Edit& e : s.edits)
      if (e.annotator == annotator) r.edits.push_back(e);
    out.sentences.push_back(std::move(r));
  }
  return out;
}

}  // namespace

TEST_CASE("precision and recall conventions") {
  CHECK(precision({0, 0, 0}) == 1.0);
  CHECK(recall({0, 0, 0}) == 1.0);
  CHECK(precision({0, 0, 5}) == 1.0);
  CHECK(recall({0, 5, 0}) == 1.0);
  CHECK(precision({1, 1, 0}) == 0.5);
  CHECK(recall({1, 0, 3}) == 0.25);
  CHECK(f_beta({0, 0, 0}, 0.5) == 1.0);
  // P = R = 0 pins F to 0
  CHECK(f_beta({0, 1, 1}, 0.5) == 0.0);
}

TEST_CASE("f-beta formula") {
  // P = 0.5, R = 1.0, beta = 0.5
  const MatchCounts c{1, 1, 0};
  CHECK(f_beta(c, 0.5) == (1.25 * 0.5 * 1.0) / (0.25 * 0.5 + 1.0));
  CHECK(f_beta(c, 0.5) == Catch::Approx(0.5556).margin(5e-5));
  // beta = 1 reduces to the harmonic mean
  CHECK(f_beta({1, 1, 1}, 1.0) == Catch::Approx(0.5));
  // beta > 1 weights recall, beta < 1 weights precision
  const MatchCounts skew{2, 0, 6};  // P = 1, R = 0.25
  CHECK(f_beta(skew, 0.5) > f_beta(skew, 2.0));
}

TEST_CASE("match_edits pairs by span and replacement") {
  const std::vector<Edit> gold = {
      mk(1, 2, "R:OTHER", "음식을", 0),
      mk(3, 4, "R:SPELL", "먹었습니다", 0),
  };
  SECTION("identity") {
    const MatchCounts c = match_edits(gold, gold);
    CHECK(c == MatchCounts{2, 0, 0});
  }
  SECTION("empty hypothesis") {
    const MatchCounts c = match_edits({}, gold);
    CHECK(c == MatchCounts{0, 0, 2});
  }
  SECTION("same span, different replacement") {
    const std::vector<Edit> hyp = {mk(3, 4, "R:SPELL", "맞았습니다", 0)};
    const MatchCounts c = match_edits(hyp, gold);
    CHECK(c == MatchCounts{0, 1, 2});
  }
  SECTION("labels are diagnostic only by default") {
    const std::vector<Edit> hyp = {mk(1, 2, "WRONG", "음식을", 0)};
    const MatchCounts c = match_edits(hyp, gold);
    CHECK(c == MatchCounts{1, 0, 1});
  }
  SECTION("label-sensitive matching") {
    const std::vector<Edit> hyp = {mk(1, 2, "WRONG", "음식을", 0)};
    const MatchCounts c = match_edits(hyp, gold, {.label_sensitive = true});
    CHECK(c == MatchCounts{0, 1, 2});
    const std::vector<Edit> exact = {mk(1, 2, "R:OTHER", "음식을", 0)};
    CHECK(match_edits(exact, gold, {.label_sensitive = true}) ==
          MatchCounts{1, 0, 1});
  }
  SECTION("empty replacement and its marker are the same") {
    const std::vector<Edit> del_marker = {mk(1, 2, "U:OTHER", "-NONE-", 0)};
    const std::vector<Edit> del_empty = {mk(1, 2, "U:OTHER", "", 0)};
    CHECK(match_edits(del_marker, del_empty) == MatchCounts{1, 0, 0});
    CHECK(match_edits(del_empty, del_marker) == MatchCounts{1, 0, 0});
  }
  SECTION("duplicate edits pair one-to-one") {
    const std::vector<Edit> hyp = {mk(0, 0, "M:OTHER", "그", 0),
                                   mk(0, 0, "M:OTHER", "그", 0)};
    const std::vector<Edit> ref = {mk(0, 0, "M:OTHER", "그", 1)};
    CHECK(match_edits(hyp, ref) == MatchCounts{1, 1, 0});
    CHECK(match_edits(ref, hyp) == MatchCounts{1, 0, 1});
  }
  SECTION("noop edits count as empty lists") {
    const std::vector<Edit> noop = {make_noop_edit(0)};
    CHECK(match_edits(noop, gold) == MatchCounts{0, 0, 2});
    CHECK(match_edits(noop, noop) == MatchCounts{0, 0, 0});
  }
}

TEST_CASE("evaluate picks the best reference per sentence") {
  const M2Corpus gold = parse_m2(kGoldenBlock);
  M2Corpus hyp;
  hyp.sentences.push_back(
      {gold.sentences[0].source_tokens, {mk(3, 4, "R:SPELL", "맞았습니다", 0)}});

  const EvalReport multi = evaluate(hyp, gold);
  CHECK(multi.counts == MatchCounts{1, 0, 0});
  CHECK(multi.precision == 1.0);
  CHECK(multi.recall == 1.0);
  CHECK(multi.f == 1.0);
  REQUIRE(multi.sentences.size() == 1);
  CHECK(multi.sentences[0].chosen_reference == 1);

  // restricted to annotator 0 the same hypothesis scores zero
  const EvalReport single = evaluate(hyp, restrict_to_annotator(gold, 0));
  CHECK(single.counts == MatchCounts{0, 1, 2});
  CHECK(single.f == 0.0);
}

TEST_CASE("unchanged hypothesis against edited gold") {
  const M2Corpus gold = parse_m2(kGoldenBlock);
  M2Corpus hyp;
  hyp.sentences.push_back({gold.sentences[0].source_tokens, {}});
  const EvalReport r = evaluate(hyp, gold);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 0.0);
  CHECK(r.f == 0.0);
  // both references give F = 0 with tp = 0, so the tie falls to annotator 0
  CHECK(r.sentences[0].chosen_reference == 0);
  CHECK(r.counts == MatchCounts{0, 0, 2});
}

TEST_CASE("a block with no edits acts as one empty reference") {
  M2Corpus gold;
  gold.sentences.push_back({{"하나", "둘"}, {}});
  M2Corpus hyp;
  hyp.sentences.push_back({{"하나", "둘"}, {}});
  const EvalReport r = evaluate(hyp, gold);
  CHECK(r.f == 1.0);
  CHECK(r.sentences[0].chosen_reference == 0);

  M2Corpus wrong;
  wrong.sentences.push_back({{"하나", "둘"}, {mk(0, 1, "R:OTHER", "셋", 0)}});
  const EvalReport r2 = evaluate(wrong, gold);
  CHECK(r2.counts == MatchCounts{0, 1, 0});
  CHECK(r2.precision == 0.0);
  CHECK(r2.recall == 1.0);
  CHECK(r2.f == 0.0);
}

TEST_CASE("tie on f goes to higher tp, then lower annotator id") {
  // both references score F = 1 with an empty hypothesis; id 0 wins
  M2Corpus gold;
  gold.sentences.push_back({{"하나"}, {make_noop_edit(0), make_noop_edit(1)}});
  M2Corpus hyp;
  hyp.sentences.push_back({{"하나"}, {}});
  CHECK(evaluate(hyp, gold).sentences[0].chosen_reference == 0);

  // equal F with different tp: the higher-tp reference wins even when the
  // other one has the lower id.  Both references score exactly 0.625:
  //   annotator 0: tp=5 fp=3 fn=3  (P=0.625, R=0.625)
  //   annotator 1: tp=8 fp=0 fn=24 (P=1.0,   R=0.25)
  // and every intermediate value is dyadic, so the tie is bit-exact.
  AnnotatedSentence sent;
  for (int t = 0; t < 32; ++t)
    sent.source_tokens.push_back("t" + std::to_string(t));
  AnnotatedSentence hyp_sent;
  hyp_sent.source_tokens = sent.source_tokens;
  for (int k = 0; k < 8; ++k)
    hyp_sent.edits.push_back(
        mk(k, k, "M:OTHER", "w" + std::to_string(k), 0));
  for (int k = 0; k < 5; ++k)
    sent.edits.push_back(mk(k, k, "M:OTHER", "w" + std::to_string(k), 0));
  for (int k = 8; k < 11; ++k)
    sent.edits.push_back(mk(k, k, "M:OTHER", "y" + std::to_string(k), 0));
  for (int k = 0; k < 8; ++k)
    sent.edits.push_back(mk(k, k, "M:OTHER", "w" + std::to_string(k), 1));
  for (int k = 8; k < 32; ++k)
    sent.edits.push_back(mk(k, k, "M:OTHER", "x" + std::to_string(k), 1));
  M2Corpus gold2;
  gold2.sentences.push_back(std::move(sent));
  M2Corpus hyp2;
  hyp2.sentences.push_back(std::move(hyp_sent));

  const EvalReport r = evaluate(hyp2, gold2);
  CHECK(f_beta({5, 3, 3}, 0.5) == f_beta({8, 0, 24}, 0.5));
  CHECK(r.sentences[0].chosen_reference == 1);
  CHECK(r.counts == MatchCounts{8, 0, 24});
  CHECK(r.f == 0.625);
}

TEST_CASE("evaluate validates corpus alignment") {
  const M2Corpus gold = parse_m2(kGoldenBlock);
  M2Corpus empty;
  CHECK_THROWS_WITH(evaluate(empty, gold),
                    Catch::Matchers::ContainsSubstring("0 sentences"));

  M2Corpus mismatched;
  mismatched.sentences.push_back({{"다른", "문장"}, {}});
  CHECK_THROWS_WITH(evaluate(mismatched, gold),
                    Catch::Matchers::ContainsSubstring("sentence 0"));

  M2Corpus two_ids;
  two_ids.sentences.push_back({gold.sentences[0].source_tokens,
                               {mk(1, 2, "R:OTHER", "음식을", 0),
                                mk(3, 4, "R:SPELL", "먹었습니다", 1)}});
  CHECK_THROWS_WITH(evaluate(two_ids, gold),
                    Catch::Matchers::ContainsSubstring("more than one"));
}

TEST_CASE("self-evaluation scores 1.0 for every annotator (randomized)") {
  std::mt19937 rng(20240822);
  for (int iter = 0; iter < 300; ++iter) {
    const RandomCorpus rc = make_random_corpus(rng, 1 + iter % 5, 2);
    for (int annotator = 0; annotator < 2; ++annotator) {
      M2Corpus self = restrict_to_annotator(rc.gold, annotator);
      const EvalReport r = evaluate(self, rc.gold);
      CHECK(r.f == 1.0);
      CHECK(r.precision == 1.0);
      CHECK(r.recall == 1.0);
    }
  }
}

TEST_CASE("per-sentence multi-reference dominance (randomized)") {
  std::mt19937 rng(20240823);
  for (int iter = 0; iter < 300; ++iter) {
    const RandomCorpus rc = make_random_corpus(rng, 1 + iter % 5, 2);
    const EvalReport multi = evaluate(rc.hyp, rc.gold);
    for (int annotator = 0; annotator < 2; ++annotator) {
      const EvalReport single =
          evaluate(rc.hyp, restrict_to_annotator(rc.gold, annotator));
      REQUIRE(single.sentences.size() == multi.sentences.size());
      for (std::size_t s = 0; s < multi.sentences.size(); ++s) {
        const double chosen_f = f_beta(multi.sentences[s].counts, multi.beta);
        const double fixed_f = f_beta(single.sentences[s].counts, single.beta);
        CHECK(chosen_f >= fixed_f);
      }
    }
  }
}

TEST_CASE("per-sentence selection does not always maximize pooled F") {
  // Reference selection is local to each sentence.  Pooling the selected
  // counts can therefore score below a fixed annotator, and that is the
  // intended behavior:
  //   sentence 1: vs a0 tp=2 fn=5 (F=2/3) beats vs a1 tp=1 fp=1 (F=5/9)
  //   sentence 2: both annotators match all 5 hypothesis edits
  //   pooled multi (7,0,5) F=0.875 < pooled fixed-a1 (6,1,0) F~0.882
  std::vector<std::string> toks;
  for (int t = 0; t < 16; ++t) toks.push_back("t" + std::to_string(t));

  AnnotatedSentence g1, h1;
  g1.source_tokens = h1.source_tokens = toks;
  h1.edits = {mk(0, 0, "M:OTHER", "w0", 0), mk(1, 1, "M:OTHER", "w1", 0)};
  g1.edits = {mk(0, 0, "M:OTHER", "w0", 0), mk(1, 1, "M:OTHER", "w1", 0)};
  for (int k = 2; k < 7; ++k)
    g1.edits.push_back(mk(k, k, "M:OTHER", "g" + std::to_string(k), 0));
  g1.edits.push_back(mk(0, 0, "M:OTHER", "w0", 1));

  AnnotatedSentence g2, h2;
  g2.source_tokens = h2.source_tokens = toks;
  for (int k = 10; k < 15; ++k) {
    h2.edits.push_back(mk(k, k, "M:OTHER", "v" + std::to_string(k), 0));
    g2.edits.push_back(mk(k, k, "M:OTHER", "v" + std::to_string(k), 0));
    g2.edits.push_back(mk(k, k, "M:OTHER", "v" + std::to_string(k), 1));
  }
  M2Corpus gold, hyp;
  gold.sentences = {g1, g2};
  hyp.sentences = {h1, h2};

  const EvalReport multi = evaluate(hyp, gold);
  CHECK(multi.sentences[0].chosen_reference == 0);
  CHECK(multi.counts == MatchCounts{7, 0, 5});
  CHECK(multi.f == Catch::Approx(0.875));

  const EvalReport fixed1 = evaluate(hyp, restrict_to_annotator(gold, 1));
  CHECK(fixed1.counts == MatchCounts{6, 1, 0});
  CHECK(fixed1.f > multi.f);

  // per-sentence dominance still holds on both sentences
  for (std::size_t s = 0; s < 2; ++s)
    CHECK(f_beta(multi.sentences[s].counts, 0.5) >=
          f_beta(fixed1.sentences[s].counts, 0.5));
}

TEST_CASE("adding a duplicate reference changes nothing (randomized)") {
  std::mt19937 rng(20240824);
  for (int iter = 0; iter < 200; ++iter) {
    const RandomCorpus rc = make_random_corpus(rng, 1 + iter % 4, 2);
    M2Corpus padded = rc.gold;
    for (AnnotatedSentence& s : padded.sentences) {
      std::vector<Edit> dup;
      for (const Edit& e : s.edits)
        if (e.annotator == 0) {
          Edit copy = e;
          copy.annotator = 2;
          dup.push_back(std::move(copy));
        }
      for (Edit& e : dup) s.edits.push_back(std::move(e));
    }
    const EvalReport before = evaluate(rc.hyp, rc.gold);
    const EvalReport after = evaluate(rc.hyp, padded);
    CHECK(before.counts == after.counts);
    CHECK(before.f == after.f);
    for (std::size_t s = 0; s < before.sentences.size(); ++s)
      CHECK(before.sentences[s].chosen_reference ==
            after.sentences[s].chosen_reference);
  }
}

TEST_CASE("scores stay within the unit interval (randomized)") {
  std::mt19937 rng(20240825);
  for (int iter = 0; iter < 200; ++iter) {
    const RandomCorpus rc = make_random_corpus(rng, 1 + iter % 4, 3);
    for (double beta : {0.5, 1.0, 2.0}) {
      EvalOptions options;
      options.beta = beta;
      const EvalReport r = evaluate(rc.hyp, rc.gold, options);
      CHECK(r.precision >= 0.0);
      CHECK(r.precision <= 1.0);
      CHECK(r.recall >= 0.0);
      CHECK(r.recall <= 1.0);
      CHECK(r.f >= 0.0);
      CHECK(r.f <= 1.0);
      // perfect precision and recall pin F to 1
      if (r.precision == 1.0 && r.recall == 1.0) CHECK(r.f == 1.0);
    }
  }
}
