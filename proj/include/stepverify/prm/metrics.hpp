#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stepverify::prm {

class MetricError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class EmptyScores : public MetricError {
 public:
  EmptyScores() : MetricError("step score list is empty") {}
};

class LengthMismatch : public MetricError {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : MetricError("length mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class SingleClass : public MetricError {
 public:
  SingleClass() : MetricError("both classes must be present") {}
};

class NonFinite : public MetricError {
 public:
  NonFinite() : MetricError("logits must be finite") {}
};

struct ScoredCandidate {
  int candidate_index = 0;
  std::vector<double> step_scores;  // each in [0,1]
  std::string extracted_answer;
  std::string final_answer_gold;
};

struct RerankItem {
  std::string problem_id;
  std::vector<ScoredCandidate> candidates;
  std::string gold;
};

/// Score/label pairs pooled across solutions after first-error truncation.
/// Label true marks a correct step.
struct LabeledScoreSet {
  std::vector<std::pair<double, bool>> pairs;
};

struct BootstrapResult {
  double p_value = 1.0;
  int resamples = 0;
  std::uint64_t seed = 0;
  double observed_delta = 0.0;
};

/// Solution score: the minimum step score.
double aggregate_min(std::span<const double> step_scores);

/// Index of the candidate with the highest solution score; ties go to the
/// lowest candidate_index.
int best_of_k(const RerankItem& item);

/// Two-class softmax probability of "correct", computed with the max
/// subtracted so large logits do not overflow.
double score_from_logits(double logit_correct, double logit_incorrect);

/// Keeps the prefix up to and including the first incorrect step;
/// error-free inputs pass through whole.
std::pair<std::vector<bool>, std::vector<double>> truncate_at_first_error(
    const std::vector<bool>& labels, std::span<const double> scores);

/// Mann-Whitney AUROC with tie handling: ties between a correct and an
/// incorrect step count one half.
double auroc(const LabeledScoreSet& set);

/// One-sided paired bootstrap for "b improves on a": resamples item
/// indices with replacement and reports the fraction of resamples in which
/// mean(b) - mean(a) <= 0. Deterministic under (inputs, resamples, seed)
/// regardless of how the resample blocks are scheduled.
BootstrapResult paired_bootstrap(std::span<const double> per_item_a,
                                 std::span<const double> per_item_b, int resamples,
                                 std::uint64_t seed);

enum class AnswerKind { Integer, OptionLetter, LabelWord };

/// Pulls the final answer out of free text; empty string when nothing
/// matches. Integer answers are the last digit group, commas stripped and
/// leading zeros removed; option letters are the last standalone A-E;
/// label words the last vocabulary hit, case-insensitive.
std::string extract_answer(std::string_view text, AnswerKind kind,
                           std::span<const std::string> label_vocabulary = {});

}  // namespace stepverify::prm
