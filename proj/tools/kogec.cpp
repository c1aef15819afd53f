// kogec: command-line front end for the annotation toolkit.
//
// Subcommands: annotate, merge, split, score, kappa, stats, validate.
// Data goes to stdout (or -o), diagnostics to stderr.  Exit codes:
// 0 success, 1 input or contract error, 2 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kogec/kogec.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file(out_path, content);
  }
}

// One line per sentence; a trailing newline does not add an empty sentence.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

kogec::ParticleLexicon load_lexicon(const std::string& path) {
  if (path.empty()) return kogec::ParticleLexicon::defaults();
  return kogec::ParticleLexicon::parse(read_file(path));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// annotate
// ---------------------------------------------------------------------------

struct AnnotateArgs {
  std::string source_path;
  std::string target_path;
  std::string out_path;
  std::string lexicon_path;
  std::string source_pos_path;
  std::string target_pos_path;
  int annotator_id = 0;
  bool no_noop = false;
};

int cmd_annotate(const AnnotateArgs& args) {
  const auto sources = split_lines(read_file(args.source_path));
  const auto targets = split_lines(read_file(args.target_path));
  if (sources.size() != targets.size())
    throw std::runtime_error("line count " + std::to_string(sources.size()) +
                             " vs " + std::to_string(targets.size()));

  const kogec::ParticleLexicon lexicon = load_lexicon(args.lexicon_path);
  std::vector<std::vector<kogec::PosToken>> source_pos;
  std::vector<std::vector<kogec::PosToken>> target_pos;
  if (!args.source_pos_path.empty()) {
    source_pos = kogec::parse_pos_annotations(read_file(args.source_pos_path));
    if (source_pos.size() != sources.size())
      throw std::runtime_error("source side file has " +
                               std::to_string(source_pos.size()) +
                               " sentences, corpus has " +
                               std::to_string(sources.size()));
  }
  if (!args.target_pos_path.empty()) {
    target_pos = kogec::parse_pos_annotations(read_file(args.target_pos_path));
    if (target_pos.size() != targets.size())
      throw std::runtime_error("target side file has " +
                               std::to_string(target_pos.size()) +
                               " sentences, corpus has " +
                               std::to_string(targets.size()));
  }

  kogec::M2Corpus corpus;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    kogec::AnnotatedSentence sentence;
    for (const kogec::Eojeol& tok : kogec::tokenize(sources[i], lexicon))
      sentence.source_tokens.push_back(tok.surface);
    std::vector<kogec::Edit> edits;
    if (source_pos.empty() && target_pos.empty()) {
      edits = kogec::annotate_pair(sources[i], targets[i], args.annotator_id,
                                   lexicon);
    } else {
      static const std::vector<kogec::PosToken> kNone;
      edits = kogec::annotate_pair_with_pos(
          sources[i], targets[i], args.annotator_id, lexicon,
          source_pos.empty() ? std::span<const kogec::PosToken>{kNone}
                             : std::span<const kogec::PosToken>{source_pos[i]},
          target_pos.empty() ? std::span<const kogec::PosToken>{kNone}
                             : std::span<const kogec::PosToken>{target_pos[i]},
          i + 1);
    }
    if (edits.empty() && !args.no_noop)
      edits.push_back(kogec::make_noop_edit(args.annotator_id));
    sentence.edits = std::move(edits);
    corpus.sentences.push_back(std::move(sentence));
  }
  emit(args.out_path, kogec::serialize_m2(corpus));
  return 0;
}

// ---------------------------------------------------------------------------
// merge / split
// ---------------------------------------------------------------------------

int cmd_merge(const std::vector<std::string>& paths,
              const std::string& out_path) {
  std::vector<kogec::M2Corpus> inputs;
  for (const std::string& p : paths)
    inputs.push_back(kogec::parse_m2(read_file(p)));
  for (std::size_t f = 1; f < inputs.size(); ++f) {
    if (inputs[f].sentences.size() != inputs[0].sentences.size())
      throw std::runtime_error("'" + paths[f] + "' has " +
                               std::to_string(inputs[f].sentences.size()) +
                               " sentences, '" + paths[0] + "' has " +
                               std::to_string(inputs[0].sentences.size()));
    for (std::size_t s = 0; s < inputs[f].sentences.size(); ++s)
      if (inputs[f].sentences[s].source_tokens !=
          inputs[0].sentences[s].source_tokens)
        throw std::runtime_error("S line mismatch at sentence " +
                                 std::to_string(s) + " between '" + paths[0] +
                                 "' and '" + paths[f] + "'");
  }

  // Each (file, original annotator id) pair gets the next merged id, file
  // by file in input order, ids ascending within a file.
  std::vector<std::map<int, int>> remap(inputs.size());
  int next_id = 0;
  for (std::size_t f = 0; f < inputs.size(); ++f) {
    std::set<int> ids;
    for (const kogec::AnnotatedSentence& s : inputs[f].sentences)
      for (const kogec::Edit& e : s.edits) ids.insert(e.annotator);
    for (int id : ids) remap[f][id] = next_id++;
  }

  kogec::M2Corpus merged;
  if (!inputs.empty()) {
    merged.sentences.resize(inputs[0].sentences.size());
    for (std::size_t s = 0; s < merged.sentences.size(); ++s) {
      merged.sentences[s].source_tokens = inputs[0].sentences[s].source_tokens;
      for (std::size_t f = 0; f < inputs.size(); ++f)
        for (const kogec::Edit& e : inputs[f].sentences[s].edits) {
          kogec::Edit copy = e;
          copy.annotator = remap[f].at(e.annotator);
          merged.sentences[s].edits.push_back(std::move(copy));
        }
    }
  }
  emit(out_path, kogec::serialize_m2(merged));
  return 0;
}

int cmd_split(const std::string& path, const std::string& out_prefix) {
  const kogec::M2Corpus corpus = kogec::parse_m2(read_file(path));
  std::set<int> ids;
  for (const kogec::AnnotatedSentence& s : corpus.sentences)
    for (const kogec::Edit& e : s.edits) ids.insert(e.annotator);

  for (int id : ids) {
    kogec::M2Corpus part;
    for (const kogec::AnnotatedSentence& s : corpus.sentences) {
      kogec::AnnotatedSentence out;
      out.source_tokens = s.source_tokens;
      for (const kogec::Edit& e : s.edits)
        if (e.annotator == id) out.edits.push_back(e);
      part.sentences.push_back(std::move(out));
    }
    const std::string out_path =
        out_prefix + "." + std::to_string(id) + ".m2";
    write_file(out_path, kogec::serialize_m2(part));
    std::cout << "wrote[" << id << "]=" << out_path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string hyp_path;
  std::string ref_path;
  std::string hyp_format = "m2";  // m2 | text
  std::string lexicon_path;
  double beta = 0.5;
  bool label_sensitive = false;
  bool report = false;
};

int cmd_score(const ScoreArgs& args) {
  const kogec::M2Corpus reference = kogec::parse_m2(read_file(args.ref_path));

  kogec::M2Corpus hypothesis;
  if (args.hyp_format == "m2") {
    hypothesis = kogec::parse_m2(read_file(args.hyp_path));
  } else if (args.hyp_format == "text") {
    const auto lines = split_lines(read_file(args.hyp_path));
    if (lines.size() != reference.sentences.size())
      throw std::runtime_error("hypothesis has " +
                               std::to_string(lines.size()) +
                               " lines, reference has " +
                               std::to_string(reference.sentences.size()) +
                               " sentences");
    const kogec::ParticleLexicon lexicon = load_lexicon(args.lexicon_path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      kogec::AnnotatedSentence sentence;
      sentence.source_tokens = reference.sentences[i].source_tokens;
      const std::string source = join_tokens(sentence.source_tokens);
      sentence.edits = kogec::annotate_pair(source, lines[i], 0, lexicon);
      hypothesis.sentences.push_back(std::move(sentence));
    }
  } else {
    throw std::runtime_error("unknown hypothesis format '" + args.hyp_format +
                             "' (expected m2 or text)");
  }

  kogec::EvalOptions options;
  options.beta = args.beta;
  options.match.label_sensitive = args.label_sensitive;
  const kogec::EvalReport report = kogec::evaluate(hypothesis, reference, options);

  std::map<int, std::size_t> chosen;
  for (const kogec::SentenceEval& s : report.sentences)
    ++chosen[s.chosen_reference];

  if (args.report) {
    std::printf("sentences        %zu\n", report.sentences.size());
    std::printf("tp / fp / fn     %llu / %llu / %llu\n",
                static_cast<unsigned long long>(report.counts.tp),
                static_cast<unsigned long long>(report.counts.fp),
                static_cast<unsigned long long>(report.counts.fn));
    std::printf("precision        %.4f\n", report.precision);
    std::printf("recall           %.4f\n", report.recall);
    std::printf("F%-4.2g            %.4f\n", report.beta, report.f);
    for (const auto& [id, n] : chosen)
      std::printf("chose annotator %d for %zu sentences\n", id, n);
    return 0;
  }
  std::cout << "beta=" << fmt(report.beta) << "\n";
  std::cout << "tp=" << report.counts.tp << "\n";
  std::cout << "fp=" << report.counts.fp << "\n";
  std::cout << "fn=" << report.counts.fn << "\n";
  std::cout << "precision=" << fmt(report.precision) << "\n";
  std::cout << "recall=" << fmt(report.recall) << "\n";
  std::cout << "f=" << fmt(report.f) << "\n";
  for (const auto& [id, n] : chosen)
    std::cout << "chosen[" << id << "]=" << n << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// kappa
// ---------------------------------------------------------------------------

struct KappaArgs {
  std::string fb_path;
  std::string fi_path;
  std::string hb_path;
  std::string hi_path;
  std::string column_order = "essay-major";  // essay-major | dim-major
  std::string score_range = "0:10";
  bool report = false;
};

kogec::ScoreRange parse_range(const std::string& s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("score range must be MIN:MAX, got '" + s + "'");
  try {
    kogec::ScoreRange r;
    r.min = std::stoi(s.substr(0, colon));
    r.max = std::stoi(s.substr(colon + 1));
    if (r.min > r.max) throw std::runtime_error("");
    return r;
  } catch (const std::exception&) {
    throw std::runtime_error("score range must be MIN:MAX, got '" + s + "'");
  }
}

int cmd_kappa(const KappaArgs& args) {
  kogec::ColumnOrder order;
  if (args.column_order == "essay-major") {
    order = kogec::ColumnOrder::EssayMajor;
  } else if (args.column_order == "dim-major") {
    order = kogec::ColumnOrder::DimensionMajor;
  } else {
    throw std::runtime_error("unknown column order '" + args.column_order +
                             "' (expected essay-major or dim-major)");
  }
  const kogec::ScoreRange range = parse_range(args.score_range);

  using Group = kogec::LearnerGroup;
  const std::array<std::pair<Group, const std::string*>, 4> files = {{
      {Group::ForeignBeginner, &args.fb_path},
      {Group::ForeignIntermediate, &args.fi_path},
      {Group::HeritageBeginner, &args.hb_path},
      {Group::HeritageIntermediate, &args.hi_path},
  }};

  std::vector<std::pair<Group, std::array<kogec::ScoreSheet, 2>>> groups;
  for (const auto& [group, path] : files) {
    auto sheets = kogec::parse_scores(read_file(*path), order, range);
    if (sheets.size() != 2)
      throw std::runtime_error("'" + *path + "' has " +
                               std::to_string(sheets.size()) +
                               " rater rows, expected 2");
    groups.emplace_back(group,
                        std::array<kogec::ScoreSheet, 2>{std::move(sheets[0]),
                                                         std::move(sheets[1])});
  }
  const kogec::AgreementReport report = kogec::kappa_report(groups);

  if (args.report) {
    std::printf("%-6s %10s %8s\n", "group", "pairs", "kappa");
    for (const kogec::GroupAgreement& g : report.groups)
      std::printf("%-6s %10zu %8.4f\n",
                  std::string(kogec::to_string(g.group)).c_str(), g.pair_count,
                  g.kappa);
    if (report.overall)
      std::printf("%-6s %10zu %8.4f\n", "all", report.overall_pair_count,
                  *report.overall);
    return 0;
  }
  for (const kogec::GroupAgreement& g : report.groups) {
    std::cout << "kappa[" << kogec::to_string(g.group) << "]=" << fmt(g.kappa)
              << "\n";
    std::cout << "pairs[" << kogec::to_string(g.group) << "]=" << g.pair_count
              << "\n";
  }
  if (report.overall) {
    std::cout << "kappa[all]=" << fmt(*report.overall) << "\n";
    std::cout << "pairs[all]=" << report.overall_pair_count << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// stats / validate
// ---------------------------------------------------------------------------

int cmd_stats(const std::string& path, bool report) {
  const kogec::CorpusStats stats =
      kogec::compute_stats(kogec::parse_m2(read_file(path)));
  if (report) {
    std::printf("sentences   %llu\n",
                static_cast<unsigned long long>(stats.sentence_count));
    std::printf("references  %llu\n",
                static_cast<unsigned long long>(stats.reference_count));
    std::printf("annotators  %llu\n",
                static_cast<unsigned long long>(stats.annotator_count));
    std::printf("tokens      %llu\n",
                static_cast<unsigned long long>(stats.source_token_count));
    std::printf("edits       %llu\n",
                static_cast<unsigned long long>(stats.edit_count()));
    for (const auto& [label, n] : stats.label_histogram)
      std::printf("  %-40s %llu\n", label.c_str(),
                  static_cast<unsigned long long>(n));
    return 0;
  }
  std::cout << "sentences=" << stats.sentence_count << "\n";
  std::cout << "references=" << stats.reference_count << "\n";
  std::cout << "annotators=" << stats.annotator_count << "\n";
  std::cout << "tokens=" << stats.source_token_count << "\n";
  std::cout << "edits=" << stats.edit_count() << "\n";
  for (const auto& [id, n] : stats.edits_per_annotator)
    std::cout << "edits_per_annotator[" << id << "]=" << n << "\n";
  for (const auto& [label, n] : stats.label_histogram)
    std::cout << "label[" << label << "]=" << n << "\n";
  return 0;
}

int cmd_validate(const std::string& path, int expect_annotators, bool strict) {
  kogec::LintOptions options;
  options.expected_annotators = expect_annotators;
  const auto findings =
      kogec::lint(kogec::parse_m2(read_file(path)), options);
  for (std::size_t i = 0; i < findings.size(); ++i)
    std::cout << "finding[" << i << "]=sentence " << findings[i].sentence_index
              << ": " << kogec::to_string(findings[i].kind) << ": "
              << findings[i].message << "\n";
  std::cout << "findings=" << findings.size() << "\n";
  return strict && !findings.empty() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Korean grammatical-error annotation toolkit"};
  app.require_subcommand(1);

  AnnotateArgs annotate;
  CLI::App* an = app.add_subcommand(
      "annotate", "Extract and type edits from parallel text files");
  an->add_option("source", annotate.source_path, "Source sentences, one per line")
      ->required();
  an->add_option("target", annotate.target_path, "Corrected sentences, one per line")
      ->required();
  an->add_option("-o,--out", annotate.out_path, "Output file (default stdout)");
  an->add_option("--lexicon", annotate.lexicon_path,
                 "Particle lexicon (surface<TAB>kind)")
      ->envname("KOGEC_LEXICON");
  an->add_option("--annotator-id", annotate.annotator_id,
                 "Annotator id for emitted edits");
  an->add_option("--source-pos", annotate.source_pos_path,
                 "POS side file for the source corpus (surface/POS tokens)");
  an->add_option("--target-pos", annotate.target_pos_path,
                 "POS side file for the target corpus (surface/POS tokens)");
  an->add_flag("--no-noop", annotate.no_noop,
               "Leave edit-free sentences without a noop line");

  std::vector<std::string> merge_paths;
  std::string merge_out;
  CLI::App* me = app.add_subcommand(
      "merge", "Merge per-annotator files into one multi-annotator file");
  me->add_option("files", merge_paths, "Input files over the same sources")
      ->required()
      ->expected(-1);
  me->add_option("-o,--out", merge_out, "Output file (default stdout)");

  std::string split_path;
  std::string split_prefix;
  CLI::App* sp = app.add_subcommand(
      "split", "Write one file per annotator id (PREFIX.<id>.m2)");
  sp->add_option("file", split_path, "Multi-annotator input file")->required();
  sp->add_option("--out-prefix", split_prefix, "Output path prefix")
      ->required();

  ScoreArgs score;
  CLI::App* sc = app.add_subcommand(
      "score", "Score a hypothesis against multi-annotator references");
  sc->add_option("hypothesis", score.hyp_path, "Hypothesis file")->required();
  sc->add_option("reference", score.ref_path, "Reference file")->required();
  sc->add_option("--hyp-format", score.hyp_format,
                 "Hypothesis format: m2 or text (default m2)");
  sc->add_option("--lexicon", score.lexicon_path,
                 "Particle lexicon, used with --hyp-format text")
      ->envname("KOGEC_LEXICON");
  sc->add_option("--beta", score.beta, "F-score beta (default 0.5)")
      ->envname("KOGEC_BETA");
  sc->add_flag("--label-sensitive", score.label_sensitive,
               "Require matching labels, not just spans and replacements");
  sc->add_flag("--report", score.report, "Human-readable table output");

  KappaArgs kappa;
  CLI::App* ka = app.add_subcommand(
      "kappa", "Rater agreement per learner group and pooled");
  ka->add_option("fb", kappa.fb_path, "Foreign beginner score CSV")->required();
  ka->add_option("fi", kappa.fi_path, "Foreign intermediate score CSV")
      ->required();
  ka->add_option("hb", kappa.hb_path, "Heritage beginner score CSV")
      ->required();
  ka->add_option("hi", kappa.hi_path, "Heritage intermediate score CSV")
      ->required();
  ka->add_option("--column-order", kappa.column_order,
                 "CSV layout: essay-major or dim-major (default essay-major)")
      ->envname("KOGEC_COLUMN_ORDER");
  ka->add_option("--score-range", kappa.score_range,
                 "Valid score range MIN:MAX (default 0:10)")
      ->envname("KOGEC_SCORE_RANGE");
  ka->add_flag("--report", kappa.report, "Human-readable table output");

  std::string stats_path;
  bool stats_report = false;
  CLI::App* st = app.add_subcommand("stats", "Corpus statistics");
  st->add_option("file", stats_path, "Annotated corpus file")->required();
  st->add_flag("--report", stats_report, "Human-readable table output");

  std::string validate_path;
  int expect_annotators = 2;
  bool strict = false;
  CLI::App* va = app.add_subcommand("validate", "Lint an annotated corpus");
  va->add_option("file", validate_path, "Annotated corpus file")->required();
  va->add_option("--expect-annotators", expect_annotators,
                 "Expected annotators per sentence, 0 disables (default 2)")
      ->envname("KOGEC_EXPECT_ANNOTATORS");
  va->add_flag("--strict", strict, "Exit 1 when findings exist");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (an->parsed()) return cmd_annotate(annotate);
    if (me->parsed()) return cmd_merge(merge_paths, merge_out);
    if (sp->parsed()) return cmd_split(split_path, split_prefix);
    if (sc->parsed()) return cmd_score(score);
    if (ka->parsed()) return cmd_kappa(kappa);
    if (st->parsed()) return cmd_stats(stats_path, stats_report);
    if (va->parsed())
      return cmd_validate(validate_path, expect_annotators, strict);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
