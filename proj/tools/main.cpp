// stepverify: step-level proof verification, dataset assembly and score
// evaluation over JSONL files. Subcommand overview is in the README.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stepverify/arith/checker.hpp"
#include "stepverify/arith/theorem.hpp"
#include "stepverify/dataset/record.hpp"
#include "stepverify/fld/parser.hpp"
#include "stepverify/logic/verifier.hpp"
#include "stepverify/parallel.hpp"
#include "stepverify/prm/metrics.hpp"
#include "stepverify/sat/ground.hpp"
#include "stepverify/sat/solver.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace stepverify;

constexpr const char* kVersion = "stepverify 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitDataErrors = 1;
constexpr int kExitIoError = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::pair<std::size_t, json>> read_jsonl(const std::string& path,
                                                     std::size_t& bad_lines) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::pair<std::size_t, json>> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      ++bad_lines;
      std::cerr << path << ":" << line_number << ": skipping malformed JSON line\n";
      continue;
    }
    records.emplace_back(line_number, std::move(j));
  }
  return records;
}

class OutputSink {
 public:
  OutputSink(const std::string& path, bool dry_run) : dry_run_(dry_run) {
    if (dry_run_) return;
    if (path.empty()) {
      out_ = &std::cout;
      return;
    }
    file_.open(path);
    if (!file_) throw IoError("cannot write '" + path + "'");
    out_ = &file_;
  }

  void line(const std::string& text) {
    if (!dry_run_) *out_ << text << '\n';
  }

  void raw(const std::string& text) {
    if (!dry_run_) *out_ << text;
  }

 private:
  bool dry_run_;
  std::ofstream file_;
  std::ostream* out_ = nullptr;
};

struct LogicInput {
  std::string id;
  std::string hypothesis;
  std::vector<std::string> facts;
  std::string proof;
  std::string source_model;
};

struct VerifyLogicOptions {
  std::string problems_path;
  std::string solutions_path;
  std::string out_path;
  bool emit_source = false;
  bool witness_audit = false;
  bool dry_run = false;
  unsigned workers = 1;
};

int run_verify_logic(const VerifyLogicOptions& opt) {
  std::size_t bad_lines = 0;
  auto problem_rows = read_jsonl(opt.problems_path, bad_lines);

  std::map<std::string, std::string> proofs_by_id;
  std::map<std::string, std::string> models_by_id;
  if (!opt.solutions_path.empty()) {
    for (auto& [line_number, row] : read_jsonl(opt.solutions_path, bad_lines)) {
      if (!row.contains("id") || !row.contains("proof")) {
        ++bad_lines;
        std::cerr << opt.solutions_path << ":" << line_number
                  << ": solution record needs id and proof\n";
        continue;
      }
      proofs_by_id[row["id"].get<std::string>()] = row["proof"].get<std::string>();
      if (row.contains("source_model")) {
        models_by_id[row["id"].get<std::string>()] = row["source_model"].get<std::string>();
      }
    }
  }

  std::vector<LogicInput> inputs;
  std::size_t failures = bad_lines;
  for (auto& [line_number, row] : problem_rows) {
    LogicInput input;
    try {
      input.id = row.at("id").get<std::string>();
      input.hypothesis = row.at("hypothesis").get<std::string>();
      input.facts = row.at("facts").get<std::vector<std::string>>();
      if (row.contains("proof")) input.proof = row.at("proof").get<std::string>();
      if (row.contains("source_model")) {
        input.source_model = row.at("source_model").get<std::string>();
      }
    } catch (const json::exception& e) {
      ++failures;
      std::cerr << opt.problems_path << ":" << line_number << ": " << e.what() << '\n';
      continue;
    }
    if (auto it = proofs_by_id.find(input.id); it != proofs_by_id.end()) {
      input.proof = it->second;
    }
    if (auto it = models_by_id.find(input.id); it != models_by_id.end()) {
      input.source_model = it->second;
    }
    if (input.proof.empty()) {
      ++failures;
      std::cerr << "record '" << input.id << "' has no proof\n";
      continue;
    }
    inputs.push_back(std::move(input));
  }

  struct RowResult {
    bool ok = false;
    std::string error;
    json out;
    bool nested_quantifier = false;
    int witness_divergences = 0;
  };

  auto results = parallel_map<RowResult>(inputs.size(), opt.workers, [&](std::size_t i) {
    const LogicInput& input = inputs[i];
    RowResult result;
    try {
      fld::LogicProblem problem =
          fld::parse_logic_problem_parts(input.id, input.hypothesis, input.facts);
      FormatVerdict format = logic::validate_format(input.proof);
      if (!format.ok) {
        result.error = "format rejected (" + format.reason + "): " + format.detail;
        return result;
      }
      fld::DeductionScript script = fld::parse_deduction_script(input.proof);
      sat::GroundingDomain domain = sat::GroundingDomain::for_problem(problem, script);
      logic::VerificationReport report = logic::verify_solution(problem, script, domain);

      if (opt.witness_audit) {
        // Re-run with one more fresh constant; a verdict that moves means
        // the single-witness grounding was too small for this step.
        sat::GroundingDomain wider = domain;
        wider.constants.push_back(wider.constants.back() + "a");
        logic::VerificationReport audited = logic::verify_solution(problem, script, wider);
        for (std::size_t k = 0; k < report.error_labels.size(); ++k) {
          if (report.error_labels[k] != audited.error_labels[k]) ++result.witness_divergences;
        }
      }

      result.nested_quantifier = fld::has_nested_quantifier(problem.hypothesis);
      for (const auto& [fact_id, f] : problem.facts) {
        result.nested_quantifier = result.nested_quantifier || fld::has_nested_quantifier(f);
      }

      json out;
      out["id"] = input.id;
      out["error_labels"] = report.error_labels;
      json reasons = json::array();
      for (const auto& verdict : report.verdicts) reasons.push_back(to_string(verdict.reason));
      out["reasons"] = std::move(reasons);
      out["conclusion_consistent"] = report.conclusion_consistent;
      if (opt.emit_source) {
        std::string problem_text = dataset::logic_problem_instruction();
        problem_text += "\n\n$hypothesis$: " + input.hypothesis + "\n\n$context$:";
        for (std::size_t k = 0; k < input.facts.size(); ++k) {
          std::string_view fact = input.facts[k];
          problem_text += '\n';
          if (fact.rfind("fact", 0) != 0) {
            problem_text += "fact" + std::to_string(k + 1) + ": ";
          }
          problem_text += fact;
        }
        out["problem"] = problem_text;
        json steps = json::array();
        for (const auto& step : script.steps) steps.push_back(step.raw_text);
        out["steps"] = std::move(steps);
        out["source_model"] = input.source_model;
      }
      result.out = std::move(out);
      result.ok = true;
    } catch (const fld::ParseError& e) {
      result.error = e.what();
    }
    return result;
  });

  OutputSink sink(opt.out_path, opt.dry_run);
  std::size_t verified = 0;
  std::size_t nested = 0;
  int divergent = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok) {
      ++failures;
      std::cerr << "record '" << inputs[i].id << "': " << results[i].error << '\n';
      continue;
    }
    if (results[i].nested_quantifier) ++nested;
    divergent += results[i].witness_divergences;
    sink.line(results[i].out.dump());
    ++verified;
  }
  std::cerr << "verify-logic: " << verified << " verified, " << failures << " failed";
  if (nested > 0) {
    std::cerr << "; " << nested << " problems with nested quantifiers (review manually)";
  }
  if (opt.witness_audit) {
    std::cerr << "; witness audit: " << divergent << " step verdicts changed with a second "
              << "fresh constant";
  }
  std::cerr << '\n';
  return failures == 0 ? kExitOk : kExitDataErrors;
}

struct VerifyProofOptions {
  std::string theorems_path;
  std::string out_path;
  bool emit_source = false;
  bool dry_run = false;
  unsigned workers = 1;
};

int run_verify_proof(const VerifyProofOptions& opt) {
  std::size_t bad_lines = 0;
  auto rows = read_jsonl(opt.theorems_path, bad_lines);

  struct ProofInput {
    std::string id;
    std::string theorem;
    std::vector<std::string> steps;
    std::string source_model;
  };
  std::vector<ProofInput> inputs;
  std::size_t failures = bad_lines;
  for (auto& [line_number, row] : rows) {
    try {
      ProofInput input;
      input.id = row.at("id").get<std::string>();
      input.theorem = row.at("theorem").get<std::string>();
      input.steps = row.at("proof_steps").get<std::vector<std::string>>();
      if (row.contains("source_model")) {
        input.source_model = row.at("source_model").get<std::string>();
      }
      inputs.push_back(std::move(input));
    } catch (const json::exception& e) {
      ++failures;
      std::cerr << opt.theorems_path << ":" << line_number << ": " << e.what() << '\n';
    }
  }

  struct RowResult {
    bool ok = false;
    std::string error;
    json out;
  };

  auto results = parallel_map<RowResult>(inputs.size(), opt.workers, [&](std::size_t i) {
    const ProofInput& input = inputs[i];
    RowResult result;
    try {
      arith::TheoremDocument doc = arith::parse_theorem(input.theorem);
      std::vector<arith::ProofStep> steps = arith::parse_proof_steps(input.steps);
      arith::DocumentReport report = arith::verify_document_report(doc, steps);

      json out;
      out["id"] = input.id;
      out["error_labels"] = report.labels;
      out["reasons"] = report.reasons;
      if (opt.emit_source) {
        out["problem"] = dataset::proof_problem_instruction() + "\n\n" + input.theorem;
        out["steps"] = input.steps;
        out["source_model"] = input.source_model;
      }
      result.out = std::move(out);
      result.ok = true;
    } catch (const arith::ParseError& e) {
      result.error = e.what();
    }
    return result;
  });

  OutputSink sink(opt.out_path, opt.dry_run);
  std::size_t verified = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok) {
      ++failures;
      std::cerr << "record '" << inputs[i].id << "': " << results[i].error << '\n';
      continue;
    }
    sink.line(results[i].out.dump());
    ++verified;
  }
  std::cerr << "verify-proof: " << verified << " verified, " << failures << " failed\n";
  return failures == 0 ? kExitOk : kExitDataErrors;
}

struct BuildDatasetOptions {
  std::string reports_path;
  std::string out_path;
  std::string task = "formal_logic";
  std::string balance = "0.5";
  std::uint64_t seed = 0;
  std::size_t target_count = 0;
  std::string source_model;
  bool corrected_template = false;
  bool dry_run = false;
};

int run_build_dataset(const BuildDatasetOptions& opt) {
  std::size_t bad_lines = 0;
  auto rows = read_jsonl(opt.reports_path, bad_lines);

  dataset::BuildConfig cfg;
  cfg.seed = opt.seed;
  cfg.target_count = opt.target_count;
  cfg.last_step_error_fraction = dataset::Fraction::parse(opt.balance);
  cfg.reproduce_paper_typos = !opt.corrected_template;
  dataset::Task task = dataset::task_from_string(opt.task);

  std::size_t failures = bad_lines;
  std::vector<dataset::TrainingRecord> records;
  for (auto& [line_number, row] : rows) {
    try {
      std::string id = row.at("id").get<std::string>();
      auto labels = row.at("error_labels").get<std::vector<bool>>();
      std::string problem = row.at("problem").get<std::string>();
      auto steps = row.at("steps").get<std::vector<std::string>>();
      std::string model = opt.source_model;
      if (model.empty() && row.contains("source_model")) {
        model = row.at("source_model").get<std::string>();
      }
      std::vector<bool> label_bools(labels.begin(), labels.end());
      records.push_back(
          dataset::build_record(id, problem, steps, label_bools, cfg, task, model));
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << opt.reports_path << ":" << line_number << ": " << e.what() << '\n';
    }
  }

  std::vector<dataset::TrainingRecord> balanced;
  try {
    balanced = dataset::balance_dataset(records, cfg);
  } catch (const dataset::InfeasibleBalance& e) {
    std::cerr << e.what() << '\n';
    return kExitDataErrors;
  }

  OutputSink sink(opt.out_path, opt.dry_run);
  sink.raw(dataset::export_jsonl(balanced));
  std::size_t error_last = 0;
  for (const auto& r : balanced) {
    if (!r.error_labels.back()) ++error_last;
  }
  std::cerr << "build-dataset: " << records.size() << " reports in, " << balanced.size()
            << " records out (" << error_last << " error-last), " << failures << " failed\n";
  return failures == 0 ? kExitOk : kExitDataErrors;
}

struct RerankOptions {
  std::string items_path;
  std::string out_path;
  bool dry_run = false;
};

int run_rerank(const RerankOptions& opt) {
  std::size_t bad_lines = 0;
  auto rows = read_jsonl(opt.items_path, bad_lines);

  OutputSink sink(opt.out_path, opt.dry_run);
  std::size_t failures = bad_lines;
  std::size_t total = 0, correct = 0;
  for (auto& [line_number, row] : rows) {
    try {
      prm::RerankItem item;
      item.problem_id = row.at("id").get<std::string>();
      item.gold = row.at("gold").get<std::string>();
      int index = 0;
      for (const json& c : row.at("candidates")) {
        prm::ScoredCandidate candidate;
        candidate.candidate_index = index++;
        candidate.step_scores = c.at("step_scores").get<std::vector<double>>();
        candidate.extracted_answer = c.at("answer").get<std::string>();
        item.candidates.push_back(std::move(candidate));
      }
      int selected = prm::best_of_k(item);
      const prm::ScoredCandidate& chosen = item.candidates.at(selected);
      bool hit = chosen.extracted_answer == item.gold;
      ++total;
      if (hit) ++correct;

      json out;
      out["id"] = item.problem_id;
      out["selected_index"] = selected;
      out["answer"] = chosen.extracted_answer;
      out["gold"] = item.gold;
      out["correct"] = hit;
      out["value"] = hit ? 1.0 : 0.0;
      sink.line(out.dump());
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << opt.items_path << ":" << line_number << ": " << e.what() << '\n';
    }
  }
  double accuracy = total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  std::cerr << "rerank: " << total << " items, accuracy " << accuracy << ", " << failures
            << " failed\n";
  return failures == 0 ? kExitOk : kExitDataErrors;
}

struct EvalAurocOptions {
  std::string scores_path;
  std::string labels_path;
  bool dry_run = false;
};

int run_eval_auroc(const EvalAurocOptions& opt) {
  std::size_t bad_lines = 0;
  auto label_rows = read_jsonl(opt.labels_path, bad_lines);

  std::map<std::string, std::vector<double>> scores_by_id;
  if (!opt.scores_path.empty() && opt.scores_path != opt.labels_path) {
    for (auto& [line_number, row] : read_jsonl(opt.scores_path, bad_lines)) {
      if (!row.contains("id") || !row.contains("step_scores")) {
        ++bad_lines;
        std::cerr << opt.scores_path << ":" << line_number
                  << ": score record needs id and step_scores\n";
        continue;
      }
      scores_by_id[row["id"].get<std::string>()] =
          row["step_scores"].get<std::vector<double>>();
    }
  }

  prm::LabeledScoreSet pooled;
  std::size_t failures = bad_lines;
  std::size_t solutions = 0;
  for (auto& [line_number, row] : label_rows) {
    try {
      std::string id = row.at("id").get<std::string>();
      auto labels = row.at("error_labels").get<std::vector<bool>>();
      std::vector<double> scores;
      if (auto it = scores_by_id.find(id); it != scores_by_id.end()) {
        scores = it->second;
      } else {
        scores = row.at("step_scores").get<std::vector<double>>();
      }
      std::vector<bool> label_bools(labels.begin(), labels.end());
      auto [kept_labels, kept_scores] = prm::truncate_at_first_error(label_bools, scores);
      for (std::size_t i = 0; i < kept_labels.size(); ++i) {
        pooled.pairs.emplace_back(kept_scores[i], kept_labels[i]);
      }
      ++solutions;
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << opt.labels_path << ":" << line_number << ": " << e.what() << '\n';
    }
  }

  std::size_t positives = 0;
  for (const auto& [s, l] : pooled.pairs) {
    if (l) ++positives;
  }
  double value = 0.0;
  try {
    value = prm::auroc(pooled);
  } catch (const prm::SingleClass& e) {
    std::cerr << e.what() << '\n';
    return kExitDataErrors;
  }

  json out;
  out["auroc"] = value;
  out["pairs"] = pooled.pairs.size();
  out["positives"] = positives;
  out["negatives"] = pooled.pairs.size() - positives;
  if (!opt.dry_run) std::cout << out.dump() << '\n';
  std::cerr << "eval-auroc: " << solutions << " solutions pooled, " << failures << " failed\n";
  return failures == 0 ? kExitOk : kExitDataErrors;
}

struct BootstrapOptions {
  std::string a_path;
  std::string b_path;
  int resamples = 10000;
  std::uint64_t seed = 0;
  bool dry_run = false;
};

std::vector<double> read_metric_file(const std::string& path, std::size_t& failures) {
  std::size_t bad_lines = 0;
  auto rows = read_jsonl(path, bad_lines);
  failures += bad_lines;
  std::vector<double> values;
  for (auto& [line_number, row] : rows) {
    if (row.contains("value")) {
      values.push_back(row["value"].get<double>());
    } else if (row.contains("correct")) {
      values.push_back(row["correct"].get<bool>() ? 1.0 : 0.0);
    } else {
      ++failures;
      std::cerr << path << ":" << line_number << ": record needs value or correct\n";
    }
  }
  return values;
}

int run_bootstrap(const BootstrapOptions& opt) {
  std::size_t failures = 0;
  std::vector<double> a = read_metric_file(opt.a_path, failures);
  std::vector<double> b = read_metric_file(opt.b_path, failures);
  prm::BootstrapResult result;
  try {
    result = prm::paired_bootstrap(a, b, opt.resamples, opt.seed);
  } catch (const prm::MetricError& e) {
    std::cerr << e.what() << '\n';
    return kExitDataErrors;
  }
  json out;
  out["p_value"] = result.p_value;
  out["observed_delta"] = result.observed_delta;
  out["resamples"] = result.resamples;
  out["seed"] = result.seed;
  if (!opt.dry_run) std::cout << out.dump() << '\n';
  std::cerr << "bootstrap: " << a.size() << " paired items, " << failures << " failed\n";
  return failures == 0 ? kExitOk : kExitDataErrors;
}

struct ExtractOptions {
  std::string in_path;
  std::string out_path;
  std::string kind = "integer";
  std::string labels;
  bool dry_run = false;
};

int run_extract(const ExtractOptions& opt) {
  prm::AnswerKind kind;
  if (opt.kind == "integer") {
    kind = prm::AnswerKind::Integer;
  } else if (opt.kind == "option_letter") {
    kind = prm::AnswerKind::OptionLetter;
  } else if (opt.kind == "label_word") {
    kind = prm::AnswerKind::LabelWord;
  } else {
    std::cerr << "unknown answer kind '" << opt.kind << "'\n";
    return kExitDataErrors;
  }
  std::vector<std::string> vocabulary;
  std::stringstream ss(opt.labels);
  std::string word;
  while (std::getline(ss, word, ',')) {
    if (!word.empty()) vocabulary.push_back(word);
  }
  if (kind == prm::AnswerKind::LabelWord && vocabulary.empty()) {
    std::cerr << "label_word extraction needs --labels\n";
    return kExitDataErrors;
  }

  std::size_t bad_lines = 0;
  auto rows = read_jsonl(opt.in_path, bad_lines);
  OutputSink sink(opt.out_path, opt.dry_run);
  std::size_t failures = bad_lines;
  std::size_t done = 0;
  for (auto& [line_number, row] : rows) {
    try {
      json out;
      out["id"] = row.at("id").get<std::string>();
      out["answer"] = prm::extract_answer(row.at("text").get<std::string>(), kind, vocabulary);
      sink.line(out.dump());
      ++done;
    } catch (const json::exception& e) {
      ++failures;
      std::cerr << opt.in_path << ":" << line_number << ": " << e.what() << '\n';
    }
  }
  std::cerr << "extract-answers: " << done << " extracted, " << failures << " failed\n";
  return failures == 0 ? kExitOk : kExitDataErrors;
}

struct DimacsOptions {
  std::string formula;
  std::string out_path;
  std::string problems_path;
  std::string solutions_path;
  std::string out_dir;
  bool dry_run = false;
};

int run_dimacs(const DimacsOptions& opt) {
  if (!opt.formula.empty()) {
    fld::Formula f = fld::parse_formula(opt.formula);
    std::vector<std::string> constants;
    fld::collect_constants(f, constants);
    sat::GroundingDomain domain = sat::GroundingDomain::with_witness(std::move(constants));
    sat::CnfFormula cnf = sat::to_cnf(sat::ground(f, domain));
    if (opt.dry_run) return kExitOk;
    if (opt.out_path.empty()) {
      std::cout << sat::to_dimacs(cnf);
      return kExitOk;
    }
    std::ofstream out(opt.out_path);
    if (!out) throw IoError("cannot write '" + opt.out_path + "'");
    out << sat::to_dimacs(cnf);
    return kExitOk;
  }

  if (opt.problems_path.empty() || opt.out_dir.empty()) {
    std::cerr << "dimacs-export needs either --formula or --problems with --out-dir\n";
    return kExitDataErrors;
  }
  std::size_t bad_lines = 0;
  auto rows = read_jsonl(opt.problems_path, bad_lines);
  std::map<std::string, std::string> proofs_by_id;
  if (!opt.solutions_path.empty()) {
    for (auto& [line_number, row] : read_jsonl(opt.solutions_path, bad_lines)) {
      if (row.contains("id") && row.contains("proof")) {
        proofs_by_id[row["id"].get<std::string>()] = row["proof"].get<std::string>();
      }
    }
  }

  if (!opt.dry_run) std::filesystem::create_directories(opt.out_dir);
  std::size_t failures = bad_lines;
  std::size_t written = 0;
  for (auto& [line_number, row] : rows) {
    try {
      std::string id = row.at("id").get<std::string>();
      fld::LogicProblem problem = fld::parse_logic_problem_parts(
          id, row.at("hypothesis").get<std::string>(),
          row.at("facts").get<std::vector<std::string>>());
      std::string proof = row.contains("proof") ? row.at("proof").get<std::string>()
                                                : proofs_by_id.at(id);
      fld::DeductionScript script = fld::parse_deduction_script(proof);
      sat::GroundingDomain domain = sat::GroundingDomain::for_problem(problem, script);

      std::map<std::string, fld::Formula> established;
      for (std::size_t k = 0; k < script.steps.size(); ++k) {
        const fld::DeductionStep& step = script.steps[k];
        // The step obligation: premises together with the negated
        // conclusion; unsatisfiable iff the step is valid.
        std::optional<fld::Formula> body;
        bool refs_ok = true;
        for (const std::string& ref : step.premise_refs) {
          const fld::Formula* premise = problem.find_fact(ref);
          if (!premise) {
            auto it = established.find(ref);
            premise = it == established.end() ? nullptr : &it->second;
          }
          if (!premise) {
            refs_ok = false;
            break;
          }
          fld::Formula g = sat::ground(*premise, domain);
          body = body ? fld::Formula::conjunction(std::move(*body), std::move(g)) : std::move(g);
        }
        established.insert_or_assign(step.target_id, step.conclusion);
        if (!refs_ok) continue;
        fld::Formula neg = fld::Formula::negation(sat::ground(step.conclusion, domain));
        body = body ? fld::Formula::conjunction(std::move(*body), std::move(neg))
                    : std::move(neg);
        sat::CnfFormula cnf = sat::to_cnf(*body);
        if (!opt.dry_run) {
          std::string path = opt.out_dir + "/" + id + "_step" + std::to_string(k + 1) + ".cnf";
          std::ofstream out(path);
          if (!out) throw IoError("cannot write '" + path + "'");
          out << sat::to_dimacs(cnf);
        }
        ++written;
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << opt.problems_path << ":" << line_number << ": " << e.what() << '\n';
    }
  }
  std::cerr << "dimacs-export: " << written << " obligations written, " << failures
            << " failed\n";
  return failures == 0 ? kExitOk : kExitDataErrors;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Step-level proof verification and evaluation toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  VerifyLogicOptions verify_logic_opt;
  auto* verify_logic = app.add_subcommand(
      "verify-logic", "Label deduction steps of symbolic logic solutions");
  verify_logic->add_option("--problems", verify_logic_opt.problems_path,
                           "Problems JSONL: {id, hypothesis, facts[, proof]}")
      ->required();
  verify_logic->add_option("--solutions", verify_logic_opt.solutions_path,
                           "Solutions JSONL: {id, proof}");
  verify_logic->add_option("--out", verify_logic_opt.out_path, "Output JSONL (default stdout)");
  verify_logic->add_flag("--emit-source", verify_logic_opt.emit_source,
                         "Include problem/steps fields for build-dataset");
  verify_logic->add_flag("--witness-audit", verify_logic_opt.witness_audit,
                         "Re-check every step with a second fresh constant and report "
                         "verdict changes");
  verify_logic->add_option("--workers", verify_logic_opt.workers, "Worker threads");
  verify_logic->add_flag("--dry-run", verify_logic_opt.dry_run, "Validate inputs only");

  VerifyProofOptions verify_proof_opt;
  auto* verify_proof = app.add_subcommand(
      "verify-proof", "Label steps of theorem-style arithmetic proofs");
  verify_proof->add_option("--theorems", verify_proof_opt.theorems_path,
                           "Theorems JSONL: {id, theorem, proof_steps}")
      ->required();
  verify_proof->add_option("--out", verify_proof_opt.out_path, "Output JSONL (default stdout)");
  verify_proof->add_flag("--emit-source", verify_proof_opt.emit_source,
                         "Include problem/steps fields for build-dataset");
  verify_proof->add_option("--workers", verify_proof_opt.workers, "Worker threads");
  verify_proof->add_flag("--dry-run", verify_proof_opt.dry_run, "Validate inputs only");

  BuildDatasetOptions build_opt;
  auto* build = app.add_subcommand("build-dataset",
                                   "Assemble labeled reports into conversation records");
  build->add_option("--reports", build_opt.reports_path,
                    "Verification reports JSONL with problem/steps fields")
      ->required();
  build->add_option("--task", build_opt.task, "formal_logic or formal_proof")->required();
  build->add_option("--balance", build_opt.balance, "Last-step error fraction (default 0.5)");
  build->add_option("--seed", build_opt.seed, "Sampling seed")->required();
  build->add_option("--target-count", build_opt.target_count, "Cap on emitted records");
  build->add_option("--source-model", build_opt.source_model, "Override source model field");
  build->add_flag("--corrected-template", build_opt.corrected_template,
                  "Use the corrected solution header instead of the released one");
  build->add_option("--out", build_opt.out_path, "Output JSONL (default stdout)");
  build->add_flag("--dry-run", build_opt.dry_run, "Validate inputs only");

  RerankOptions rerank_opt;
  auto* rerank = app.add_subcommand("rerank", "Best-of-K selection by minimum step score");
  rerank->add_option("--items", rerank_opt.items_path,
                     "Items JSONL: {id, candidates: [{step_scores, answer}], gold}")
      ->required();
  rerank->add_option("--out", rerank_opt.out_path, "Output JSONL (default stdout)");
  rerank->add_flag("--dry-run", rerank_opt.dry_run, "Validate inputs only");

  EvalAurocOptions auroc_opt;
  auto* eval_auroc = app.add_subcommand(
      "eval-auroc", "Step-level AUROC with first-error truncation");
  eval_auroc->add_option("--labels", auroc_opt.labels_path,
                         "Labels JSONL: {id, error_labels[, step_scores]}")
      ->required();
  eval_auroc->add_option("--scores", auroc_opt.scores_path,
                         "Scores JSONL: {id, step_scores}, joined on id");
  eval_auroc->add_flag("--dry-run", auroc_opt.dry_run, "Validate inputs only");

  BootstrapOptions bootstrap_opt;
  auto* bootstrap = app.add_subcommand("bootstrap", "One-sided paired bootstrap test");
  bootstrap->add_option("--a", bootstrap_opt.a_path, "Baseline per-item metrics JSONL")
      ->required();
  bootstrap->add_option("--b", bootstrap_opt.b_path, "Treatment per-item metrics JSONL")
      ->required();
  bootstrap->add_option("--resamples", bootstrap_opt.resamples, "Resample count");
  bootstrap->add_option("--seed", bootstrap_opt.seed, "Resampling seed")->required();
  bootstrap->add_flag("--dry-run", bootstrap_opt.dry_run, "Validate inputs only");

  ExtractOptions extract_opt;
  auto* extract = app.add_subcommand("extract-answers", "Pull final answers out of free text");
  extract->add_option("--in", extract_opt.in_path, "Input JSONL: {id, text}")->required();
  extract->add_option("--kind", extract_opt.kind, "integer, option_letter or label_word")
      ->required();
  extract->add_option("--labels", extract_opt.labels, "Comma-separated label vocabulary");
  extract->add_option("--out", extract_opt.out_path, "Output JSONL (default stdout)");
  extract->add_flag("--dry-run", extract_opt.dry_run, "Validate inputs only");

  DimacsOptions dimacs_opt;
  auto* dimacs = app.add_subcommand("dimacs-export",
                                    "Export step obligations or a formula as DIMACS CNF");
  dimacs->add_option("--formula", dimacs_opt.formula, "Single formula to export");
  dimacs->add_option("--out", dimacs_opt.out_path, "Output path for --formula");
  dimacs->add_option("--problems", dimacs_opt.problems_path, "Problems JSONL");
  dimacs->add_option("--solutions", dimacs_opt.solutions_path, "Solutions JSONL");
  dimacs->add_option("--out-dir", dimacs_opt.out_dir, "Directory for per-step CNF files");
  dimacs->add_flag("--dry-run", dimacs_opt.dry_run, "Validate inputs only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitDataErrors;
  }

  try {
    if (verify_logic->parsed()) return run_verify_logic(verify_logic_opt);
    if (verify_proof->parsed()) return run_verify_proof(verify_proof_opt);
    if (build->parsed()) return run_build_dataset(build_opt);
    if (rerank->parsed()) return run_rerank(rerank_opt);
    if (eval_auroc->parsed()) return run_eval_auroc(auroc_opt);
    if (bootstrap->parsed()) return run_bootstrap(bootstrap_opt);
    if (extract->parsed()) return run_extract(extract_opt);
    if (dimacs->parsed()) return run_dimacs(dimacs_opt);
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitDataErrors;
  }
  return kExitDataErrors;
}
