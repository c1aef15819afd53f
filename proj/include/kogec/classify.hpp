#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kogec/alignment.hpp"
#include "kogec/hangul.hpp"

namespace kogec {

// ---------------------------------------------------------------------------
// Error labels
//
// Closed label set over the M/R/U base categories, extended with word
// boundary, ordering, spelling, and functional-morpheme codes.  Rendering is
// injective given the POS parameters and parse() inverts it.
// ---------------------------------------------------------------------------

enum class ErrorCode : std::uint8_t {
  AdpUnnecessary,   // particle present in source, absent in target
  AdpMissing,       // particle absent in source, present in target
  AdpSubstitution,  // particle exchanged, content word kept
  Spell,            // content word itself wrong
  MissingBoundary,     // tokens fused in source, separate in target
  UnnecessaryBoundary, // tokens separate in source, fused in target
  Order,            // adjacent tokens swapped
  MissingOther,     // plain insertion
  UnnecessaryOther, // plain deletion
  ReplaceOther,     // substitution with nothing more specific to say
};

struct ErrorLabel {
  ErrorCode code;
  // POS of the content word on each side; only the ADP/PART codes carry
  // them (substitution uses a single POS, mirrored to both sides).
  std::string pos_src;
  std::string pos_tgt;
  ParticleKind kind_src = ParticleKind::Adp;
  ParticleKind kind_tgt = ParticleKind::Adp;

  bool operator==(const ErrorLabel&) const = default;

  std::string render() const {
    switch (code) {
      case ErrorCode::AdpUnnecessary:
        return "R:" + pos_src + "+" + std::string(to_string(kind_src)) +
               " → " + pos_tgt;
      case ErrorCode::AdpMissing:
        return "R:" + pos_src + " → " + pos_tgt + "+" +
               std::string(to_string(kind_tgt));
      case ErrorCode::AdpSubstitution:
        return "R:" + pos_src + "+" + std::string(to_string(kind_src)) +
               " → " + pos_src + "+" + std::string(to_string(kind_tgt));
      case ErrorCode::Spell: return "R:SPELL";
      case ErrorCode::MissingBoundary: return "M:WB";
      case ErrorCode::UnnecessaryBoundary: return "U:WB";
      case ErrorCode::Order: return "R:ORDER";
      case ErrorCode::MissingOther: return "M:OTHER";
      case ErrorCode::UnnecessaryOther: return "U:OTHER";
      case ErrorCode::ReplaceOther: return "R:OTHER";
    }
    return "R:OTHER";
  }

  static std::optional<ErrorLabel> parse(std::string_view text);
};

namespace detail {

inline bool is_pos_symbol(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_'))
      return false;
  return true;
}

struct LabelSide {
  std::string pos;
  std::optional<ParticleKind> kind;
};

inline std::optional<LabelSide> parse_label_side(std::string_view s) {
  LabelSide side;
  const std::size_t plus = s.find('+');
  std::string_view pos = s;
  if (plus != std::string_view::npos) {
    pos = s.substr(0, plus);
    const std::string_view kind = s.substr(plus + 1);
    if (kind == "ADP") {
      side.kind = ParticleKind::Adp;
    } else if (kind == "PART") {
      side.kind = ParticleKind::Part;
    } else {
      return std::nullopt;
    }
  }
  if (!is_pos_symbol(pos)) return std::nullopt;
  side.pos = std::string(pos);
  return side;
}

}  // namespace detail

inline std::optional<ErrorLabel> ErrorLabel::parse(std::string_view text) {
  if (text == "R:SPELL") return ErrorLabel{ErrorCode::Spell, "", ""};
  if (text == "M:WB") return ErrorLabel{ErrorCode::MissingBoundary, "", ""};
  if (text == "U:WB") return ErrorLabel{ErrorCode::UnnecessaryBoundary, "", ""};
  if (text == "R:ORDER") return ErrorLabel{ErrorCode::Order, "", ""};
  if (text == "M:OTHER") return ErrorLabel{ErrorCode::MissingOther, "", ""};
  if (text == "U:OTHER") return ErrorLabel{ErrorCode::UnnecessaryOther, "", ""};
  if (text == "R:OTHER") return ErrorLabel{ErrorCode::ReplaceOther, "", ""};
  if (!text.starts_with("R:")) return std::nullopt;
  const std::string_view body = text.substr(2);
  const std::size_t arrow = body.find(" → ");
  if (arrow == std::string_view::npos) return std::nullopt;
  const auto left = detail::parse_label_side(body.substr(0, arrow));
  const auto right = detail::parse_label_side(
      body.substr(arrow + std::string_view(" → ").size()));
  if (!left || !right) return std::nullopt;
  if (left->kind && right->kind) {
    if (left->pos != right->pos) return std::nullopt;
    return ErrorLabel{ErrorCode::AdpSubstitution, left->pos, left->pos,
                      *left->kind, *right->kind};
  }
  if (left->kind && !right->kind)
    return ErrorLabel{ErrorCode::AdpUnnecessary, left->pos, right->pos,
                      *left->kind, *left->kind};
  if (!left->kind && right->kind)
    return ErrorLabel{ErrorCode::AdpMissing, left->pos, right->pos,
                      *right->kind, *right->kind};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Edits
// ---------------------------------------------------------------------------

// One annotated correction.  Spans are token indices into the source
// sentence; insertions use an empty span, deletions an empty replacement.
// The noop marker (span -1..-1, label "noop") stands for an annotator who
// proposes no change, which is why the span is signed.
struct Edit {
  std::int64_t src_begin = 0;
  std::int64_t src_end = 0;
  std::string label;
  std::string replacement;          // target tokens joined by single spaces
  std::string flag = "REQUIRED";    // carried opaquely
  std::string comment = "-NONE-";   // carried opaquely
  int annotator = 0;

  bool is_noop() const {
    return src_begin == -1 && src_end == -1 && label == "noop";
  }

  bool operator==(const Edit&) const = default;
};

inline Edit make_noop_edit(int annotator) {
  Edit e;
  e.src_begin = -1;
  e.src_end = -1;
  e.label = "noop";
  e.replacement = "-NONE-";
  e.annotator = annotator;
  return e;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

namespace detail {

// POS defaulting: an explicit tag on the token wins; with equal stems an
// explicit tag on the opposite side carries over; otherwise NOUN when the
// functional morpheme in play is a postposition, X when it is anything else.
inline std::string default_pos(const std::optional<ParticleKind>& kind) {
  return kind == ParticleKind::Adp ? "NOUN" : "X";
}

inline std::string resolve_pos(const Eojeol& self, const Eojeol& other,
                               bool stems_equal,
                               const std::optional<ParticleKind>& fallback) {
  if (self.pos) return *self.pos;
  if (stems_equal && other.pos) return *other.pos;
  return default_pos(fallback);
}

}  // namespace detail

// Label one non-EQUAL alignment op.  Decision order:
//   1. boundary/order structure: SPLIT -> M:WB, MERGE -> U:WB,
//      TRANSPOSE -> R:ORDER
//   2. substitutions: equal stems route to the functional-morpheme codes,
//      differing stems collapse to R:SPELL (the morpheme is not annotated
//      separately in that case)
//   3. bare insertions/deletions fall back to the base categories
//      M:OTHER / U:OTHER
inline ErrorLabel classify(const AlignOp& op, std::span<const Eojeol> src,
                           std::span<const Eojeol> tgt) {
  switch (op.kind) {
    case AlignKind::Equal:
      throw std::invalid_argument("classify: EQUAL op carries no error");
    case AlignKind::Split:
      return ErrorLabel{ErrorCode::MissingBoundary, "", ""};
    case AlignKind::Merge:
      return ErrorLabel{ErrorCode::UnnecessaryBoundary, "", ""};
    case AlignKind::Transpose:
      return ErrorLabel{ErrorCode::Order, "", ""};
    case AlignKind::Insert:
      return ErrorLabel{ErrorCode::MissingOther, "", ""};
    case AlignKind::Delete:
      return ErrorLabel{ErrorCode::UnnecessaryOther, "", ""};
    case AlignKind::Substitute:
      break;
  }

  const Eojeol& s = src[op.src_begin];
  const Eojeol& t = tgt[op.tgt_begin];
  if (s.stem != t.stem) return ErrorLabel{ErrorCode::Spell, "", ""};

  if (s.particle && !t.particle) {
    const std::string pos_i = detail::resolve_pos(s, t, true, s.particle_kind);
    const std::string pos_j = detail::resolve_pos(t, s, true, s.particle_kind);
    return ErrorLabel{ErrorCode::AdpUnnecessary, pos_i, pos_j,
                      *s.particle_kind, *s.particle_kind};
  }
  if (!s.particle && t.particle) {
    const std::string pos_i = detail::resolve_pos(s, t, true, t.particle_kind);
    const std::string pos_j = detail::resolve_pos(t, s, true, t.particle_kind);
    return ErrorLabel{ErrorCode::AdpMissing, pos_i, pos_j, *t.particle_kind,
                      *t.particle_kind};
  }
  if (s.particle && t.particle && *s.particle != *t.particle) {
    const std::string pos = detail::resolve_pos(s, t, true, s.particle_kind);
    return ErrorLabel{ErrorCode::AdpSubstitution, pos, pos, *s.particle_kind,
                      *t.particle_kind};
  }
  return ErrorLabel{ErrorCode::ReplaceOther, "", ""};
}

// ---------------------------------------------------------------------------
// One-call annotation pipeline
// ---------------------------------------------------------------------------

inline std::string join_surfaces(std::span<const Eojeol> tokens,
                                 std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += tokens[i].surface;
  }
  return out;
}

// Align two already-tokenized sentences, normalize the script, and classify
// every non-EQUAL op into an Edit ordered by source span.
inline std::vector<Edit> annotate_tokens(std::span<const Eojeol> src,
                                         std::span<const Eojeol> tgt,
                                         int annotator,
                                         const AlignCosts& costs = {}) {
  const std::vector<AlignOp> ops = merge_ops(align(src, tgt, costs), src, tgt);
  std::vector<Edit> edits;
  for (const AlignOp& op : ops) {
    if (op.kind == AlignKind::Equal) continue;
    Edit e;
    e.src_begin = static_cast<std::int64_t>(op.src_begin);
    e.src_end = static_cast<std::int64_t>(op.src_end);
    e.label = classify(op, src, tgt).render();
    e.replacement = op.tgt_begin == op.tgt_end
                        ? "-NONE-"
                        : join_surfaces(tgt, op.tgt_begin, op.tgt_end);
    e.annotator = annotator;
    edits.push_back(std::move(e));
  }
  return edits;
}

// Tokenize, align, normalize the script, and classify every non-EQUAL op
// into an Edit.  Identical sentences yield an empty list.
inline std::vector<Edit> annotate_pair(std::string_view source_text,
                                       std::string_view target_text,
                                       int annotator,
                                       const ParticleLexicon& lexicon,
                                       const AlignCosts& costs = {}) {
  const std::vector<Eojeol> src = tokenize(source_text, lexicon);
  const std::vector<Eojeol> tgt = tokenize(target_text, lexicon);
  return annotate_tokens(src, tgt, annotator, costs);
}

// ---------------------------------------------------------------------------
// Token-annotation side file: one sentence per line, tokens as surface/POS
// pairs, aligned 1:1 with the corpus it annotates.
// ---------------------------------------------------------------------------

class PosFileError : public std::runtime_error {
 public:
  PosFileError(std::size_t line, const std::string& reason)
      : std::runtime_error("pos file line " + std::to_string(line) + ": " +
                           reason),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct PosToken {
  std::string surface;
  std::string pos;
};

inline std::vector<std::vector<PosToken>> parse_pos_annotations(
    std::string_view text) {
  std::vector<std::vector<PosToken>> sentences;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<PosToken> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t sp = line.find(' ', start);
      if (sp == std::string_view::npos) sp = line.size();
      const std::string_view tok = line.substr(start, sp - start);
      start = sp + 1;
      if (tok.empty()) continue;
      const std::size_t slash = tok.rfind('/');
      if (slash == std::string_view::npos || slash == 0 ||
          slash + 1 == tok.size())
        throw PosFileError(line_no, "expected surface/POS, got '" +
                                        std::string(tok) + "'");
      const std::string_view tag = tok.substr(slash + 1);
      if (!detail::is_pos_symbol(tag))
        throw PosFileError(line_no,
                           "bad POS symbol '" + std::string(tag) + "'");
      row.push_back({normalize_nfc(tok.substr(0, slash)), std::string(tag)});
    }
    sentences.push_back(std::move(row));
  }
  return sentences;
}

// Attach side-channel POS tags to a token sequence; surfaces must match.
inline void apply_pos_annotations(std::vector<Eojeol>& tokens,
                                  std::span<const PosToken> row,
                                  std::size_t sentence_no) {
  if (tokens.size() != row.size())
    throw PosFileError(sentence_no, "token count mismatch: sentence has " +
                                        std::to_string(tokens.size()) +
                                        ", side file has " +
                                        std::to_string(row.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].surface != row[i].surface)
      throw PosFileError(sentence_no, "surface mismatch at token " +
                                          std::to_string(i + 1) + ": '" +
                                          tokens[i].surface + "' vs '" +
                                          row[i].surface + "'");
    tokens[i].pos = row[i].pos;
  }
}

// annotate_pair with side-channel POS rows for either side.
inline std::vector<Edit> annotate_pair_with_pos(
    std::string_view source_text, std::string_view target_text, int annotator,
    const ParticleLexicon& lexicon, std::span<const PosToken> source_pos,
    std::span<const PosToken> target_pos, std::size_t sentence_no = 1,
    const AlignCosts& costs = {}) {
  std::vector<Eojeol> src = tokenize(source_text, lexicon);
  std::vector<Eojeol> tgt = tokenize(target_text, lexicon);
  if (!source_pos.empty()) apply_pos_annotations(src, source_pos, sentence_no);
  if (!target_pos.empty()) apply_pos_annotations(tgt, target_pos, sentence_no);
  return annotate_tokens(src, tgt, annotator, costs);
}

}  // namespace kogec
