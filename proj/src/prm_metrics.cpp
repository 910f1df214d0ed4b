#include "stepverify/prm/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace stepverify::prm {

double aggregate_min(std::span<const double> step_scores) {
  if (step_scores.empty()) throw EmptyScores();
  return *std::min_element(step_scores.begin(), step_scores.end());
}

int best_of_k(const RerankItem& item) {
  if (item.candidates.empty()) throw EmptyScores();
  const ScoredCandidate* best = nullptr;
  double best_score = 0.0;
  for (const ScoredCandidate& candidate : item.candidates) {
    double score = aggregate_min(candidate.step_scores);
    if (!best || score > best_score ||
        (score == best_score && candidate.candidate_index < best->candidate_index)) {
      best = &candidate;
      best_score = score;
    }
  }
  return best->candidate_index;
}

double score_from_logits(double logit_correct, double logit_incorrect) {
  if (!std::isfinite(logit_correct) || !std::isfinite(logit_incorrect)) throw NonFinite();
  double m = std::max(logit_correct, logit_incorrect);
  double ec = std::exp(logit_correct - m);
  double ei = std::exp(logit_incorrect - m);
  return ec / (ec + ei);
}

std::pair<std::vector<bool>, std::vector<double>> truncate_at_first_error(
    const std::vector<bool>& labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw LengthMismatch(labels.size(), scores.size());
  std::size_t keep = labels.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) {
      keep = i + 1;
      break;
    }
  }
  return {std::vector<bool>(labels.begin(), labels.begin() + keep),
          std::vector<double>(scores.begin(), scores.begin() + keep)};
}

double auroc(const LabeledScoreSet& set) {
  std::size_t n = set.pairs.size();
  std::size_t positives = 0;
  for (const auto& [score, label] : set.pairs) {
    if (label) ++positives;
  }
  std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw SingleClass();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.pairs[a].first < set.pairs[b].first;
  });

  // Twice the midrank stays integral, so the only division is the final
  // one.
  std::vector<unsigned long long> rank2(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && set.pairs[order[j + 1]].first == set.pairs[order[i]].first) ++j;
    // Items i..j share scores; midrank * 2 = (i+1) + (j+1).
    unsigned long long shared = static_cast<unsigned long long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = shared;
    i = j + 1;
  }

  unsigned long long rank_sum2 = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (set.pairs[k].second) rank_sum2 += rank2[k];
  }
  // U * 2 = rank_sum2 - positives * (positives + 1)
  unsigned long long u2 =
      rank_sum2 - static_cast<unsigned long long>(positives) * (positives + 1);
  return static_cast<double>(u2) /
         (2.0 * static_cast<double>(positives) * static_cast<double>(negatives));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t bounded(std::uint64_t& state, std::uint64_t n) {
  std::uint64_t limit = n * (UINT64_MAX / n);
  while (true) {
    state = splitmix64(state);
    if (state < limit) return state % n;
  }
}

constexpr int kBlockSize = 1024;

}  // namespace

BootstrapResult paired_bootstrap(std::span<const double> per_item_a,
                                 std::span<const double> per_item_b, int resamples,
                                 std::uint64_t seed) {
  if (per_item_a.size() != per_item_b.size()) {
    throw LengthMismatch(per_item_a.size(), per_item_b.size());
  }
  if (per_item_a.size() < 2) throw MetricError("paired bootstrap needs at least 2 items");
  if (resamples <= 0) throw MetricError("resamples must be positive");

  const std::size_t n = per_item_a.size();
  std::vector<double> delta(n);
  double observed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    delta[i] = per_item_b[i] - per_item_a[i];
    observed += delta[i];
  }
  observed /= static_cast<double>(n);

  // Per-block seeds derived from the master seed keep the result identical
  // however the blocks are scheduled.
  long long not_better = 0;
  int blocks = (resamples + kBlockSize - 1) / kBlockSize;
  for (int block = 0; block < blocks; ++block) {
    std::uint64_t state = splitmix64(seed ^ (0x9e3779b9ULL + static_cast<std::uint64_t>(block)));
    int in_block = std::min(kBlockSize, resamples - block * kBlockSize);
    for (int r = 0; r < in_block; ++r) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += delta[bounded(state, n)];
      if (sum <= 0.0) ++not_better;
    }
  }

  BootstrapResult result;
  result.p_value = static_cast<double>(not_better) / static_cast<double>(resamples);
  result.resamples = resamples;
  result.seed = seed;
  result.observed_delta = observed;
  return result;
}

std::string extract_answer(std::string_view text, AnswerKind kind,
                           std::span<const std::string> label_vocabulary) {
  switch (kind) {
    case AnswerKind::Integer: {
      // Last run of digits, allowing comma group separators inside.
      std::size_t best_start = std::string_view::npos;
      std::size_t best_end = 0;
      std::size_t i = 0;
      while (i < text.size()) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
          ++i;
          continue;
        }
        std::size_t start = i;
        std::size_t end = i;
        while (end < text.size()) {
          if (std::isdigit(static_cast<unsigned char>(text[end]))) {
            ++end;
          } else if (text[end] == ',' && end + 1 < text.size() &&
                     std::isdigit(static_cast<unsigned char>(text[end + 1]))) {
            ++end;
          } else {
            break;
          }
        }
        best_start = start;
        best_end = end;
        i = end;
      }
      if (best_start == std::string_view::npos) return "";
      std::string digits;
      for (std::size_t k = best_start; k < best_end; ++k) {
        if (text[k] != ',') digits += text[k];
      }
      std::size_t nonzero = digits.find_first_not_of('0');
      if (nonzero == std::string::npos) return "0";
      return digits.substr(nonzero);
    }
    case AnswerKind::OptionLetter: {
      std::string found;
      for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c < 'A' || c > 'E') continue;
        bool left_paren = i > 0 && text[i - 1] == '(';
        bool right_paren = i + 1 < text.size() && text[i + 1] == ')';
        if (left_paren && right_paren) {
          found = std::string(1, c);
          continue;
        }
        bool left_ok = i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]));
        bool right_ok =
            i + 1 >= text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1]));
        if (left_ok && right_ok) found = std::string(1, c);
      }
      return found;
    }
    case AnswerKind::LabelWord: {
      std::string found;
      std::size_t found_at = 0;
      std::string lowered(text);
      std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      for (const std::string& word : label_vocabulary) {
        std::string needle = word;
        std::transform(needle.begin(), needle.end(), needle.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        std::size_t pos = lowered.rfind(needle);
        while (pos != std::string::npos) {
          bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(lowered[pos - 1]));
          std::size_t end = pos + needle.size();
          bool right_ok =
              end >= lowered.size() || !std::isalnum(static_cast<unsigned char>(lowered[end]));
          if (left_ok && right_ok) break;
          pos = pos == 0 ? std::string::npos : lowered.rfind(needle, pos - 1);
        }
        if (pos != std::string::npos && (found.empty() || pos >= found_at)) {
          found = word;
          found_at = pos;
        }
      }
      return found;
    }
  }
  return "";
}

}  // namespace stepverify::prm
