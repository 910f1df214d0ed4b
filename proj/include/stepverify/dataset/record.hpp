#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stepverify::dataset {

enum class Task { FormalLogic, FormalProof };

std::string to_string(Task task);
Task task_from_string(const std::string& name);

struct Message {
  std::string role;  // "user" or "assistant"
  std::string content;

  bool operator==(const Message&) const = default;
};

/// One labeled conversation record: the problem plus first step, then one
/// user message per remaining step, each answered with exactly "correct"
/// or "incorrect".
struct TrainingRecord {
  std::string id;
  std::vector<Message> messages;
  std::vector<bool> error_labels;  // true = step is correct
  Task task = Task::FormalLogic;
  std::string source_model;

  bool operator==(const TrainingRecord&) const = default;
};

/// Exact nonnegative fraction, kept rational so balancing is never subject
/// to floating-point rounding.
struct Fraction {
  std::int64_t num = 1;
  std::int64_t den = 2;

  static Fraction parse(const std::string& text);  // "0.5", "1/2", "1", "0"
  bool operator==(const Fraction&) const = default;
};

struct BuildConfig {
  std::size_t target_count = 0;  // 0 = no cap
  Fraction last_step_error_fraction{1, 2};
  std::uint64_t seed = 0;
  std::string instruction_template;  // empty = built-in default
  bool reproduce_paper_typos = true;
};

/// The released records carry a misspelled solution header; keep it unless
/// configured otherwise.
const std::string& default_instruction();
std::string solution_header(bool reproduce_paper_typos);

/// Task-specific preamble placed before the problem statement when a
/// record's problem text is assembled from raw inputs.
const std::string& logic_problem_instruction();
const std::string& proof_problem_instruction();

class LengthMismatch : public std::invalid_argument {
 public:
  LengthMismatch(std::size_t steps, std::size_t labels);
};

class InfeasibleBalance : public std::runtime_error {
 public:
  explicit InfeasibleBalance(const std::string& detail);
};

class MalformedLine : public std::runtime_error {
 public:
  MalformedLine(std::size_t line_number, const std::string& detail);

  std::size_t line_number() const { return line_number_; }

 private:
  std::size_t line_number_;
};

class InvalidRecord : public std::runtime_error {
 public:
  explicit InvalidRecord(const std::string& detail);
};

TrainingRecord build_record(const std::string& id, const std::string& problem_text,
                            std::span<const std::string> steps, const std::vector<bool>& labels,
                            const BuildConfig& cfg, Task task, const std::string& source_model);

/// Seed-deterministic downsample in which the share of records whose final
/// label is an error equals the configured fraction exactly. Within each
/// class the input order is preserved. Sizes round down to the largest
/// feasible exact split; `target_count` caps the total.
std::vector<TrainingRecord> balance_dataset(const std::vector<TrainingRecord>& records,
                                            const BuildConfig& cfg);

/// One JSON object per line, UTF-8, keys in the order id, error_labels,
/// messages, task, source_model. Import of an exported stream reproduces
/// the records exactly.
void export_jsonl(std::span<const TrainingRecord> records, std::ostream& out);
std::string export_jsonl(std::span<const TrainingRecord> records);
std::vector<TrainingRecord> import_jsonl(std::istream& in);
std::vector<TrainingRecord> import_jsonl(const std::string& text);

/// Message/label alignment rules; throws InvalidRecord on violation.
void validate_record(const TrainingRecord& record);

}  // namespace stepverify::dataset
