#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kogec/hangul.hpp"

namespace kogec {

// ---------------------------------------------------------------------------
// Token-level edit script
// ---------------------------------------------------------------------------

enum class AlignKind : std::uint8_t {
  Equal,
  Substitute,
  Insert,
  Delete,
  Transpose,  // two adjacent tokens swapped
  Split,      // one source token -> two target tokens, exact concatenation
  Merge,      // two source tokens -> one target token, exact concatenation
};

inline std::string_view to_string(AlignKind k) {
  switch (k) {
    case AlignKind::Equal: return "EQUAL";
    case AlignKind::Substitute: return "SUBSTITUTE";
    case AlignKind::Insert: return "INSERT";
    case AlignKind::Delete: return "DELETE";
    case AlignKind::Transpose: return "TRANSPOSE";
    case AlignKind::Split: return "SPLIT";
    case AlignKind::Merge: return "MERGE";
  }
  return "?";
}

// Half-open token index ranges into the source and target sequences.  The
// ops of a script are ordered and their spans partition both sequences.
struct AlignOp {
  AlignKind kind;
  std::size_t src_begin, src_end;
  std::size_t tgt_begin, tgt_end;

  bool operator==(const AlignOp&) const = default;
};

// Alignment objective.  Substitution cost is 1 - jamo_similarity so that
// near-misspellings pair up instead of turning into delete/insert noise.
struct AlignCosts {
  double insert_cost = 1.0;
  double delete_cost = 1.0;
  double transpose_cost = 1.0;
  double split_merge_cost = 0.5;
};

namespace detail {

inline const Eojeol& at(std::span<const Eojeol> seq, std::size_t i) {
  return seq[i];
}

struct AlignDp {
  std::span<const Eojeol> src, tgt;
  const AlignCosts& costs;
  std::vector<JamoString> src_jamo, tgt_jamo;

  AlignDp(std::span<const Eojeol> s, std::span<const Eojeol> t,
          const AlignCosts& c)
      : src(s), tgt(t), costs(c) {
    src_jamo.reserve(src.size());
    tgt_jamo.reserve(tgt.size());
    for (const auto& e : src) src_jamo.push_back(decompose_jamo(e.surface));
    for (const auto& e : tgt) tgt_jamo.push_back(decompose_jamo(e.surface));
  }

  double substitution_cost(std::size_t i, std::size_t j) const {
    const auto& a = src_jamo[i].units;
    const auto& b = tgt_jamo[j].units;
    const std::size_t m = std::max(a.size(), b.size());
    if (m == 0) return 0.0;
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(m);
  }
};

}  // namespace detail

// Minimum-cost edit script between two token sequences.  Ties are broken by
// preferring, in order: EQUAL, MERGE, SPLIT, TRANSPOSE, SUBSTITUTE, DELETE,
// INSERT (candidates are tried in that order and replaced only on a strict
// improvement).
inline std::vector<AlignOp> align(std::span<const Eojeol> src,
                                  std::span<const Eojeol> tgt,
                                  const AlignCosts& costs = {}) {
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();
  const detail::AlignDp dp(src, tgt, costs);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cost((n + 1) * (m + 1), kInf);
  std::vector<AlignKind> move((n + 1) * (m + 1), AlignKind::Equal);
  auto idx = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  cost[idx(0, 0)] = 0.0;

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      double best = kInf;
      AlignKind best_kind = AlignKind::Insert;
      auto consider = [&](AlignKind k, std::size_t pi, std::size_t pj,
                          double step) {
        const double c = cost[idx(pi, pj)] + step;
        if (c < best) {
          best = c;
          best_kind = k;
        }
      };
      if (i >= 1 && j >= 1) {
        if (src[i - 1].surface == tgt[j - 1].surface)
          consider(AlignKind::Equal, i - 1, j - 1, 0.0);
      }
      if (i >= 2 && j >= 1 &&
          src[i - 2].surface + src[i - 1].surface == tgt[j - 1].surface)
        consider(AlignKind::Merge, i - 2, j - 1, costs.split_merge_cost);
      if (i >= 1 && j >= 2 &&
          src[i - 1].surface == tgt[j - 2].surface + tgt[j - 1].surface)
        consider(AlignKind::Split, i - 1, j - 2, costs.split_merge_cost);
      if (i >= 2 && j >= 2 && src[i - 2].surface == tgt[j - 1].surface &&
          src[i - 1].surface == tgt[j - 2].surface)
        consider(AlignKind::Transpose, i - 2, j - 2, costs.transpose_cost);
      if (i >= 1 && j >= 1 && src[i - 1].surface != tgt[j - 1].surface)
        consider(AlignKind::Substitute, i - 1, j - 1,
                 dp.substitution_cost(i - 1, j - 1));
      if (i >= 1) consider(AlignKind::Delete, i - 1, j, costs.delete_cost);
      if (j >= 1) consider(AlignKind::Insert, i, j - 1, costs.insert_cost);
      cost[idx(i, j)] = best;
      move[idx(i, j)] = best_kind;
    }
  }

  std::vector<AlignOp> ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const AlignKind k = move[idx(i, j)];
    AlignOp op{k, i, i, j, j};
    switch (k) {
      case AlignKind::Equal:
      case AlignKind::Substitute:
        op.src_begin = i - 1;
        op.tgt_begin = j - 1;
        break;
      case AlignKind::Insert:
        op.tgt_begin = j - 1;
        break;
      case AlignKind::Delete:
        op.src_begin = i - 1;
        break;
      case AlignKind::Transpose:
        op.src_begin = i - 2;
        op.tgt_begin = j - 2;
        break;
      case AlignKind::Split:
        op.src_begin = i - 1;
        op.tgt_begin = j - 2;
        break;
      case AlignKind::Merge:
        op.src_begin = i - 2;
        op.tgt_begin = j - 1;
        break;
    }
    ops.push_back(op);
    i = op.src_begin;
    j = op.tgt_begin;
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

// Total cost of an edit script under the same objective align() minimizes.
inline double script_cost(std::span<const AlignOp> ops,
                          std::span<const Eojeol> src,
                          std::span<const Eojeol> tgt,
                          const AlignCosts& costs = {}) {
  double total = 0.0;
  for (const auto& op : ops) {
    switch (op.kind) {
      case AlignKind::Equal:
        break;
      case AlignKind::Substitute: {
        // same arithmetic as the DP so costs compare exactly
        const JamoString a = decompose_jamo(src[op.src_begin].surface);
        const JamoString b = decompose_jamo(tgt[op.tgt_begin].surface);
        const std::size_t m = std::max(a.units.size(), b.units.size());
        if (m > 0)
          total += static_cast<double>(levenshtein(a.units, b.units)) /
                   static_cast<double>(m);
        break;
      }
      case AlignKind::Insert:
        total += costs.insert_cost;
        break;
      case AlignKind::Delete:
        total += costs.delete_cost;
        break;
      case AlignKind::Transpose:
        total += costs.transpose_cost;
        break;
      case AlignKind::Split:
      case AlignKind::Merge:
        total += costs.split_merge_cost;
        break;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Script normalization
//
// Rewrites delete/insert patterns that encode a boundary or ordering change
// into the dedicated op kinds:
//   DELETE(xy) INSERT(x) INSERT(y)          -> SPLIT     (either order)
//   DELETE(x) DELETE(y) INSERT(xy)          -> MERGE     (either order)
//   DELETE(x) EQUAL(y) INSERT(x)            -> TRANSPOSE (either order)
// Everything else passes through untouched.
// ---------------------------------------------------------------------------

inline std::vector<AlignOp> merge_ops(std::span<const AlignOp> ops,
                                      std::span<const Eojeol> src,
                                      std::span<const Eojeol> tgt) {
  auto src_text = [&](const AlignOp& op) -> const std::string& {
    return src[op.src_begin].surface;
  };
  auto tgt_text = [&](const AlignOp& op) -> const std::string& {
    return tgt[op.tgt_begin].surface;
  };
  auto is = [&](std::size_t i, AlignKind k) {
    return i < ops.size() && ops[i].kind == k;
  };

  std::vector<AlignOp> out;
  std::size_t i = 0;
  while (i < ops.size()) {
    // DELETE + INSERT + INSERT -> SPLIT
    if (is(i, AlignKind::Delete) && is(i + 1, AlignKind::Insert) &&
        is(i + 2, AlignKind::Insert) &&
        src_text(ops[i]) == tgt_text(ops[i + 1]) + tgt_text(ops[i + 2])) {
      out.push_back({AlignKind::Split, ops[i].src_begin, ops[i].src_end,
                     ops[i + 1].tgt_begin, ops[i + 2].tgt_end});
      i += 3;
      continue;
    }
    // INSERT + INSERT + DELETE -> SPLIT
    if (is(i, AlignKind::Insert) && is(i + 1, AlignKind::Insert) &&
        is(i + 2, AlignKind::Delete) &&
        src_text(ops[i + 2]) == tgt_text(ops[i]) + tgt_text(ops[i + 1])) {
      out.push_back({AlignKind::Split, ops[i + 2].src_begin, ops[i + 2].src_end,
                     ops[i].tgt_begin, ops[i + 1].tgt_end});
      i += 3;
      continue;
    }
    // DELETE + DELETE + INSERT -> MERGE
    if (is(i, AlignKind::Delete) && is(i + 1, AlignKind::Delete) &&
        is(i + 2, AlignKind::Insert) &&
        src_text(ops[i]) + src_text(ops[i + 1]) == tgt_text(ops[i + 2])) {
      out.push_back({AlignKind::Merge, ops[i].src_begin, ops[i + 1].src_end,
                     ops[i + 2].tgt_begin, ops[i + 2].tgt_end});
      i += 3;
      continue;
    }
    // INSERT + DELETE + DELETE -> MERGE
    if (is(i, AlignKind::Insert) && is(i + 1, AlignKind::Delete) &&
        is(i + 2, AlignKind::Delete) &&
        src_text(ops[i + 1]) + src_text(ops[i + 2]) == tgt_text(ops[i])) {
      out.push_back({AlignKind::Merge, ops[i + 1].src_begin,
                     ops[i + 2].src_end, ops[i].tgt_begin, ops[i].tgt_end});
      i += 3;
      continue;
    }
    // DELETE(x) EQUAL(y) INSERT(x) -> TRANSPOSE over [x y] / [y x]
    if (is(i, AlignKind::Delete) && is(i + 1, AlignKind::Equal) &&
        is(i + 2, AlignKind::Insert) &&
        src_text(ops[i]) == tgt_text(ops[i + 2])) {
      out.push_back({AlignKind::Transpose, ops[i].src_begin,
                     ops[i + 1].src_end, ops[i + 1].tgt_begin,
                     ops[i + 2].tgt_end});
      i += 3;
      continue;
    }
    // INSERT(x) EQUAL(y) DELETE(x) -> TRANSPOSE over [y x] / [x y]
    if (is(i, AlignKind::Insert) && is(i + 1, AlignKind::Equal) &&
        is(i + 2, AlignKind::Delete) &&
        tgt_text(ops[i]) == src_text(ops[i + 2])) {
      out.push_back({AlignKind::Transpose, ops[i + 1].src_begin,
                     ops[i + 2].src_end, ops[i].tgt_begin,
                     ops[i + 1].tgt_end});
      i += 3;
      continue;
    }
    out.push_back(ops[i]);
    ++i;
  }
  return out;
}

}  // namespace kogec
