#include "stepverify/dataset/record.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace stepverify::dataset {

using json = nlohmann::ordered_json;

std::string to_string(Task task) {
  return task == Task::FormalLogic ? "formal_logic" : "formal_proof";
}

Task task_from_string(const std::string& name) {
  if (name == "formal_logic") return Task::FormalLogic;
  if (name == "formal_proof") return Task::FormalProof;
  throw std::invalid_argument("unknown task '" + name + "'");
}

const std::string& default_instruction() {
  static const std::string text =
      "Your task is to evaluate the accuracy of each step in the provided solution to the "
      "above question. For each step, respond with \"correct\" if the reasoning is logically "
      "valid and mathematically sound, or if the step is a general statement or transition "
      "that does not contain reasoning. Respond with \"incorrect\" if the step includes any "
      "errors or flawed logic.";
  return text;
}

std::string solution_header(bool reproduce_paper_typos) {
  return reproduce_paper_typos ? "** Sotluion **" : "** Solution **";
}

const std::string& logic_problem_instruction() {
  static const std::string text =
      "Based on the provided facts ($context$), either prove or disprove the hypothesis or "
      "state that it is unknown. The facts and the hypothesis are written in logical formulas "
      "as follows: capital letters such as \"{A}\", \"{B}\", \"{AB}\" are predicates, small "
      "letters such as \"{a}\", \"{b}\", \"{ab}\" are constants, \"&\" is logical conjunction, "
      "\"v\" is logical disjunction, \"¬\" is negation, \"->\" is implication, \"(x)\" is "
      "\"for all x\", and \"(Ex)\" is \"for some x\".";
  return text;
}

const std::string& proof_problem_instruction() {
  static const std::string text =
      "Generate a proof for the following theorem in the Isabelle proof assistant format.";
  return text;
}

LengthMismatch::LengthMismatch(std::size_t steps, std::size_t labels)
    : std::invalid_argument("got " + std::to_string(steps) + " steps but " +
                            std::to_string(labels) + " labels") {}

InfeasibleBalance::InfeasibleBalance(const std::string& detail)
    : std::runtime_error("infeasible balance: " + detail) {}

MalformedLine::MalformedLine(std::size_t line_number, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line_number) + ": " + detail),
      line_number_(line_number) {}

InvalidRecord::InvalidRecord(const std::string& detail)
    : std::runtime_error("invalid record: " + detail) {}

Fraction Fraction::parse(const std::string& text) {
  auto fail = [&] { throw std::invalid_argument("malformed fraction '" + text + "'"); };
  if (text.empty()) fail();
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    std::int64_t num = 0, den = 0;
    try {
      num = std::stoll(text.substr(0, slash));
      den = std::stoll(text.substr(slash + 1));
    } catch (const std::exception&) {
      fail();
    }
    if (den <= 0 || num < 0 || num > den) fail();
    return Fraction{num, den};
  }
  // Decimal form: shift the point out exactly.
  std::int64_t num = 0, den = 1;
  bool seen_dot = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) fail();
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') fail();
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    if (num > (std::int64_t{1} << 40)) fail();
  }
  if (num > den) fail();
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Fraction{num, den};
}

TrainingRecord build_record(const std::string& id, const std::string& problem_text,
                            std::span<const std::string> steps, const std::vector<bool>& labels,
                            const BuildConfig& cfg, Task task, const std::string& source_model) {
  if (steps.size() != labels.size() || steps.empty()) {
    throw LengthMismatch(steps.size(), labels.size());
  }

  const std::string& instruction =
      cfg.instruction_template.empty() ? default_instruction() : cfg.instruction_template;

  TrainingRecord record;
  record.id = id;
  record.task = task;
  record.source_model = source_model;
  record.error_labels.assign(labels.begin(), labels.end());

  std::string first = "** Problem **\n" + problem_text + "\n\n** Task **\n" + instruction +
                      "\n\n" + solution_header(cfg.reproduce_paper_typos) + "\n" + steps[0];
  record.messages.push_back(Message{"user", std::move(first)});
  record.messages.push_back(Message{"assistant", labels[0] ? "correct" : "incorrect"});
  for (std::size_t i = 1; i < steps.size(); ++i) {
    record.messages.push_back(Message{"user", steps[i]});
    record.messages.push_back(Message{"assistant", labels[i] ? "correct" : "incorrect"});
  }
  return record;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased bounded draw; fixed algorithm so outputs do not depend on the
// standard library build.
std::uint64_t bounded(std::uint64_t& state, std::uint64_t n) {
  std::uint64_t limit = n * (UINT64_MAX / n);
  while (true) {
    state = splitmix64(state);
    if (state < limit) return state % n;
  }
}

// Keep `keep` of the indices 0..total-1, chosen uniformly, in order.
std::vector<std::size_t> sample_indices(std::size_t total, std::size_t keep,
                                        std::uint64_t& state) {
  std::vector<std::size_t> all(total);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < keep; ++i) {
    std::size_t j = i + static_cast<std::size_t>(bounded(state, total - i));
    std::swap(all[i], all[j]);
  }
  all.resize(keep);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

std::vector<TrainingRecord> balance_dataset(const std::vector<TrainingRecord>& records,
                                            const BuildConfig& cfg) {
  std::vector<std::size_t> correct_last;
  std::vector<std::size_t> error_last;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TrainingRecord& r = records[i];
    if (r.error_labels.empty()) throw InvalidRecord("record '" + r.id + "' has no labels");
    (r.error_labels.back() ? correct_last : error_last).push_back(i);
  }

  const auto [num, den] = cfg.last_step_error_fraction;
  const std::int64_t correct_share = den - num;
  if (num > 0 && correct_share > 0 && (error_last.empty() || correct_last.empty())) {
    throw InfeasibleBalance("fraction " + std::to_string(num) + "/" + std::to_string(den) +
                            " needs both classes, got " + std::to_string(correct_last.size()) +
                            " correct-last and " + std::to_string(error_last.size()) +
                            " error-last records");
  }

  // Largest k with k*num error-last and k*(den-num) correct-last records
  // available; totals are multiples of den, so the fraction is exact.
  std::int64_t k = -1;
  if (num > 0) k = static_cast<std::int64_t>(error_last.size()) / num;
  if (correct_share > 0) {
    std::int64_t k2 = static_cast<std::int64_t>(correct_last.size()) / correct_share;
    k = k < 0 ? k2 : std::min(k, k2);
  }
  if (cfg.target_count > 0) k = std::min(k, static_cast<std::int64_t>(cfg.target_count) / den);

  std::size_t take_error = static_cast<std::size_t>(k * num);
  std::size_t take_correct = static_cast<std::size_t>(k * correct_share);

  std::uint64_t state = splitmix64(cfg.seed ^ 0x5349u);
  std::vector<std::size_t> keep_correct = sample_indices(correct_last.size(), take_correct, state);
  std::vector<std::size_t> keep_error = sample_indices(error_last.size(), take_error, state);

  // Merge the two classes back into input order.
  std::vector<std::size_t> selected;
  selected.reserve(take_correct + take_error);
  for (std::size_t i : keep_correct) selected.push_back(correct_last[i]);
  for (std::size_t i : keep_error) selected.push_back(error_last[i]);
  std::sort(selected.begin(), selected.end());

  std::vector<TrainingRecord> out;
  out.reserve(selected.size());
  for (std::size_t i : selected) out.push_back(records[i]);
  return out;
}

void validate_record(const TrainingRecord& record) {
  if (record.messages.empty()) throw InvalidRecord(record.id + ": no messages");
  std::size_t assistants = 0;
  for (std::size_t i = 0; i < record.messages.size(); ++i) {
    const Message& m = record.messages[i];
    const char* expected = i % 2 == 0 ? "user" : "assistant";
    if (m.role != expected) {
      throw InvalidRecord(record.id + ": message " + std::to_string(i) + " has role '" + m.role +
                          "', expected '" + expected + "'");
    }
    if (m.role == "assistant") {
      if (m.content != "correct" && m.content != "incorrect") {
        throw InvalidRecord(record.id + ": assistant content must be correct/incorrect");
      }
      ++assistants;
    }
  }
  if (record.messages.size() % 2 != 0) {
    throw InvalidRecord(record.id + ": unanswered trailing user message");
  }
  if (assistants != record.error_labels.size()) {
    throw InvalidRecord(record.id + ": " + std::to_string(assistants) + " assistant messages vs " +
                        std::to_string(record.error_labels.size()) + " labels");
  }
  std::size_t label = 0;
  for (const Message& m : record.messages) {
    if (m.role != "assistant") continue;
    bool says_correct = m.content == "correct";
    if (says_correct != record.error_labels[label]) {
      throw InvalidRecord(record.id + ": label " + std::to_string(label) +
                          " disagrees with its assistant message");
    }
    ++label;
  }
}

namespace {

json record_to_json(const TrainingRecord& record) {
  json j;
  j["id"] = record.id;
  j["error_labels"] = record.error_labels;
  json messages = json::array();
  for (const Message& m : record.messages) {
    json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    messages.push_back(std::move(msg));
  }
  j["messages"] = std::move(messages);
  j["task"] = to_string(record.task);
  j["source_model"] = record.source_model;
  return j;
}

TrainingRecord record_from_json(const json& j, std::size_t line_number) {
  try {
    TrainingRecord record;
    record.id = j.at("id").get<std::string>();
    record.error_labels = j.at("error_labels").get<std::vector<bool>>();
    for (const json& m : j.at("messages")) {
      record.messages.push_back(
          Message{m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    }
    if (j.contains("task")) record.task = task_from_string(j.at("task").get<std::string>());
    if (j.contains("source_model")) {
      record.source_model = j.at("source_model").get<std::string>();
    }
    return record;
  } catch (const json::exception& e) {
    throw MalformedLine(line_number, e.what());
  } catch (const std::invalid_argument& e) {
    throw MalformedLine(line_number, e.what());
  }
}

}  // namespace

void export_jsonl(std::span<const TrainingRecord> records, std::ostream& out) {
  for (const TrainingRecord& record : records) {
    validate_record(record);
    out << record_to_json(record).dump() << '\n';
  }
}

std::string export_jsonl(std::span<const TrainingRecord> records) {
  std::ostringstream out;
  export_jsonl(records, out);
  return out.str();
}

std::vector<TrainingRecord> import_jsonl(std::istream& in) {
  std::vector<TrainingRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw MalformedLine(line_number, "not valid JSON");
    records.push_back(record_from_json(j, line_number));
  }
  return records;
}

std::vector<TrainingRecord> import_jsonl(const std::string& text) {
  std::istringstream in(text);
  return import_jsonl(in);
}

}  // namespace stepverify::dataset
