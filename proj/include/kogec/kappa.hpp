#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kogec {

// ---------------------------------------------------------------------------
// Inter-rater agreement on rubric scores
//
// Two raters score a set of essays on ten rubric dimensions.  Agreement is
// Cohen's kappa over the paired integer scores, computed per dimension
// group and over the pooled pairs of all groups.
// ---------------------------------------------------------------------------

enum class LearnerGroup : std::uint8_t {
  ForeignBeginner,
  ForeignIntermediate,
  HeritageBeginner,
  HeritageIntermediate,
};

inline std::string_view to_string(LearnerGroup g) {
  switch (g) {
    case LearnerGroup::ForeignBeginner: return "FB";
    case LearnerGroup::ForeignIntermediate: return "FI";
    case LearnerGroup::HeritageBeginner: return "HB";
    case LearnerGroup::HeritageIntermediate: return "HI";
  }
  return "?";
}

inline std::optional<LearnerGroup> parse_learner_group(std::string_view s) {
  if (s == "FB") return LearnerGroup::ForeignBeginner;
  if (s == "FI") return LearnerGroup::ForeignIntermediate;
  if (s == "HB") return LearnerGroup::HeritageBeginner;
  if (s == "HI") return LearnerGroup::HeritageIntermediate;
  return std::nullopt;
}

// Rubric layout: three expression dimensions, four structure dimensions,
// three content dimensions, in this fixed order.
enum class RubricDimension : std::uint8_t {
  GrammaticalAccuracy,
  VocabularyUse,
  Expressions,
  InternalStructure,
  EssayOrganization,
  ParagraphCoherency,
  Length,
  TopicClarity,
  DetailedExplanation,
  Creativity,
};

inline constexpr std::size_t kRubricDimensions = 10;

inline constexpr std::array<RubricDimension, kRubricDimensions>
    kAllRubricDimensions = {
        RubricDimension::GrammaticalAccuracy,
        RubricDimension::VocabularyUse,
        RubricDimension::Expressions,
        RubricDimension::InternalStructure,
        RubricDimension::EssayOrganization,
        RubricDimension::ParagraphCoherency,
        RubricDimension::Length,
        RubricDimension::TopicClarity,
        RubricDimension::DetailedExplanation,
        RubricDimension::Creativity,
};

inline std::string_view to_string(RubricDimension d) {
  switch (d) {
    case RubricDimension::GrammaticalAccuracy: return "grammatical_accuracy";
    case RubricDimension::VocabularyUse: return "vocabulary_use";
    case RubricDimension::Expressions: return "expressions";
    case RubricDimension::InternalStructure: return "internal_structure";
    case RubricDimension::EssayOrganization: return "essay_organization";
    case RubricDimension::ParagraphCoherency: return "paragraph_coherency";
    case RubricDimension::Length: return "length";
    case RubricDimension::TopicClarity: return "topic_clarity";
    case RubricDimension::DetailedExplanation: return "detailed_explanation";
    case RubricDimension::Creativity: return "creativity";
  }
  return "?";
}

enum class RubricCategory : std::uint8_t { Expression, Structure, Content };

inline RubricCategory category_of(RubricDimension d) {
  switch (d) {
    case RubricDimension::GrammaticalAccuracy:
    case RubricDimension::VocabularyUse:
    case RubricDimension::Expressions:
      return RubricCategory::Expression;
    case RubricDimension::InternalStructure:
    case RubricDimension::EssayOrganization:
    case RubricDimension::ParagraphCoherency:
    case RubricDimension::Length:
      return RubricCategory::Structure;
    case RubricDimension::TopicClarity:
    case RubricDimension::DetailedExplanation:
    case RubricDimension::Creativity:
      return RubricCategory::Content;
  }
  return RubricCategory::Content;
}

inline std::string_view to_string(RubricCategory c) {
  switch (c) {
    case RubricCategory::Expression: return "expression";
    case RubricCategory::Structure: return "structure";
    case RubricCategory::Content: return "content";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Score sheets
// ---------------------------------------------------------------------------

// Scores of one rater for one learner group: scores[essay][dimension].
struct ScoreSheet {
  std::vector<std::array<int, kRubricDimensions>> scores;

  std::size_t essay_count() const { return scores.size(); }
  bool operator==(const ScoreSheet&) const = default;
};

// Layout of the flat CSV row holding one rater's scores.
//  EssayMajor: column c holds essay c / D, dimension c % D.
//  DimensionMajor: column c holds dimension c / E, essay c % E.
enum class ColumnOrder : std::uint8_t { EssayMajor, DimensionMajor };

struct ScoreRange {
  int min = 0;
  int max = 10;
};

class ScoreParseError : public std::runtime_error {
 public:
  ScoreParseError(std::size_t row, std::size_t column, const std::string& reason)
      : std::runtime_error("scores row " + std::to_string(row) + ", column " +
                           std::to_string(column) + ": " + reason),
        row_(row),
        column_(column) {}
  std::size_t row() const { return row_; }     // one-based data row
  std::size_t column() const { return column_; }  // one-based column

 private:
  std::size_t row_;
  std::size_t column_;
};

namespace detail {

inline bool is_score_cell(std::string_view cell) {
  if (cell.empty()) return false;
  std::size_t i = cell[0] == '-' ? 1 : 0;
  if (i == cell.size()) return false;
  for (; i < cell.size(); ++i)
    if (cell[i] < '0' || cell[i] > '9') return false;
  return true;
}

inline std::vector<std::string_view> split_csv_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

}  // namespace detail

// Parse a flat CSV of rubric scores: one row per rater, one column per
// (essay, dimension) cell.  A first row whose cells are not all integers is
// treated as a header and skipped.  The column count must be a multiple of
// the dimension count and identical across rows.
inline std::vector<ScoreSheet> parse_scores(std::string_view text,
                                            ColumnOrder order = ColumnOrder::EssayMajor,
                                            ScoreRange range = {}) {
  if (range.min > range.max)
    throw std::invalid_argument("parse_scores: empty score range");

  std::vector<std::vector<int>> rows;
  std::size_t line_index = 0;  // counts non-empty lines, for header detection
  std::size_t data_row = 0;    // one-based, excludes the header
  std::size_t pos = 0;
  std::size_t width = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    const bool last = nl == std::string_view::npos;
    pos = last ? text.size() + 1 : nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim_ws(line).empty()) continue;
    ++line_index;

    const auto cells = detail::split_csv_row(line);
    bool all_numeric = true;
    for (const auto cell : cells)
      all_numeric &= detail::is_score_cell(detail::trim_ws(cell));
    if (line_index == 1 && !all_numeric) continue;  // header row

    ++data_row;
    std::vector<int> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string_view cell = detail::trim_ws(cells[c]);
      if (!detail::is_score_cell(cell))
        throw ScoreParseError(data_row, c + 1,
                              "not an integer: '" + std::string(cell) + "'");
      const int v = std::stoi(std::string(cell));
      if (v < range.min || v > range.max)
        throw ScoreParseError(data_row, c + 1,
                              "score " + std::to_string(v) +
                                  " outside range " + std::to_string(range.min) +
                                  ".." + std::to_string(range.max));
      row.push_back(v);
    }
    if (width == 0) {
      width = row.size();
      if (width % kRubricDimensions != 0)
        throw ScoreParseError(data_row, width,
                              "column count " + std::to_string(width) +
                                  " is not a multiple of " +
                                  std::to_string(kRubricDimensions));
    } else if (row.size() != width) {
      throw ScoreParseError(data_row, row.size(),
                            "expected " + std::to_string(width) +
                                " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }

  std::vector<ScoreSheet> sheets;
  const std::size_t essays = width == 0 ? 0 : width / kRubricDimensions;
  for (const auto& row : rows) {
    ScoreSheet sheet;
    sheet.scores.resize(essays);
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::size_t essay =
          order == ColumnOrder::EssayMajor ? c / kRubricDimensions : c % essays;
      const std::size_t dim =
          order == ColumnOrder::EssayMajor ? c % kRubricDimensions : c / essays;
      sheet.scores[essay][dim] = row[c];
    }
    sheets.push_back(std::move(sheet));
  }
  return sheets;
}

// ---------------------------------------------------------------------------
// Cohen's kappa
// ---------------------------------------------------------------------------

// Unweighted Cohen's kappa over paired categorical ratings.  Marginals are
// accumulated in integers, so chance agreement of 1 is detected exactly and
// returns kappa 1 (both raters constant and equal).
inline double cohen_kappa(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("cohen_kappa: rating lists differ in length");
  if (a.empty())
    throw std::invalid_argument("cohen_kappa: no ratings");

  const std::uint64_t n = a.size();
  std::uint64_t agree = 0;
  std::map<int, std::uint64_t> count_a;
  std::map<int, std::uint64_t> count_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    ++count_a[a[i]];
    ++count_b[b[i]];
  }
  std::uint64_t expected_sum = 0;  // sum of count_a[c] * count_b[c]
  for (const auto& [category, ca] : count_a) {
    const auto it = count_b.find(category);
    if (it != count_b.end()) expected_sum += ca * it->second;
  }
  if (expected_sum == n * n) return 1.0;  // p_e == 1, identical constants

  const double po = static_cast<double>(agree) / static_cast<double>(n);
  const double pe =
      static_cast<double>(expected_sum) / static_cast<double>(n * n);
  return (po - pe) / (1.0 - pe);
}

// ---------------------------------------------------------------------------
// Agreement report
// ---------------------------------------------------------------------------

struct GroupAgreement {
  LearnerGroup group;
  std::size_t pair_count = 0;  // scored (essay, dimension) pairs
  double kappa = 0.0;
};

struct AgreementReport {
  std::vector<GroupAgreement> groups;
  // Kappa over the pooled pairs of every group; absent when no group has
  // any pairs.
  std::optional<double> overall;
  std::size_t overall_pair_count = 0;
};

// Flatten two raters' sheets to paired ratings, one pair per
// (essay, dimension) cell, in essay-major order.
inline void append_pairs(const ScoreSheet& rater_a, const ScoreSheet& rater_b,
                         std::vector<int>& a, std::vector<int>& b) {
  if (rater_a.essay_count() != rater_b.essay_count())
    throw std::invalid_argument("append_pairs: essay counts differ");
  for (std::size_t e = 0; e < rater_a.essay_count(); ++e)
    for (std::size_t d = 0; d < kRubricDimensions; ++d) {
      a.push_back(rater_a.scores[e][d]);
      b.push_back(rater_b.scores[e][d]);
    }
}

// Compute per-group kappa for two raters, plus the pooled overall figure.
// The overall value exists only when all four groups are present; a partial
// report still carries its per-group values.
inline AgreementReport kappa_report(
    const std::vector<std::pair<LearnerGroup, std::array<ScoreSheet, 2>>>&
        groups) {
  AgreementReport report;
  std::vector<int> pooled_a;
  std::vector<int> pooled_b;
  std::set<LearnerGroup> seen;
  for (const auto& [group, sheets] : groups) {
    if (!seen.insert(group).second)
      throw std::invalid_argument("kappa_report: duplicate group " +
                                  std::string(to_string(group)));
    std::vector<int> a;
    std::vector<int> b;
    append_pairs(sheets[0], sheets[1], a, b);
    GroupAgreement g;
    g.group = group;
    g.pair_count = a.size();
    g.kappa = cohen_kappa(a, b);
    report.groups.push_back(g);
    pooled_a.insert(pooled_a.end(), a.begin(), a.end());
    pooled_b.insert(pooled_b.end(), b.begin(), b.end());
  }
  if (seen.size() == 4 && !pooled_a.empty()) {
    report.overall = cohen_kappa(pooled_a, pooled_b);
    report.overall_pair_count = pooled_a.size();
  }
  return report;
}

}  // namespace kogec
