#include <doctest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "oracles.hpp"
#include "stepverify/prm/metrics.hpp"

using namespace stepverify;
using prm::LabeledScoreSet;
using prm::RerankItem;
using prm::ScoredCandidate;

namespace {

std::vector<double> random_scores(testgen::Rng& rng, std::size_t n, int granularity = 0) {
  std::vector<double> scores(n);
  for (double& s : scores) {
    if (granularity > 0) {
      s = static_cast<double>(testgen::pick(rng, granularity)) / (granularity - 1);
    } else {
      s = static_cast<double>(rng() % 1000000) / 999999.0;
    }
  }
  return scores;
}

}  // namespace

TEST_CASE("aggregate_min basics") {
  std::vector<double> worked = {0.98, 0.06};
  CHECK(prm::aggregate_min(worked) == doctest::Approx(0.06));
  std::vector<double> single = {0.42};
  CHECK(prm::aggregate_min(single) == 0.42);
  CHECK_THROWS_AS(prm::aggregate_min(std::vector<double>{}), prm::EmptyScores);
}

TEST_CASE("aggregate_min equals a fold and lower-bounds every element") {
  testgen::Rng rng(10101);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> scores = random_scores(rng, 1 + testgen::pick(rng, 12));
    double folded = scores[0];
    for (double s : scores) folded = s < folded ? s : folded;
    double result = prm::aggregate_min(scores);
    CHECK(result == folded);
    bool attained = false;
    for (double s : scores) {
      CHECK(result <= s);
      attained = attained || s == result;
    }
    CHECK(attained);
  }
}

TEST_CASE("best_of_k picks the highest minimum and breaks ties low") {
  RerankItem item;
  item.candidates.push_back({0, {0.5, 0.3}, "x", ""});
  item.candidates.push_back({1, {0.9, 0.9}, "y", ""});
  CHECK(prm::best_of_k(item) == 1);

  RerankItem ties;
  ties.candidates.push_back({0, {0.5}, "x", ""});
  ties.candidates.push_back({1, {0.5}, "y", ""});
  ties.candidates.push_back({2, {0.5}, "z", ""});
  CHECK(prm::best_of_k(ties) == 0);
}

TEST_CASE("best_of_k is invariant under strictly increasing transforms") {
  testgen::Rng rng(22122);
  auto transforms = std::vector<double (*)(double)>{
      [](double x) { return x * 0.5 + 0.25; },
      [](double x) { return x * x * 0.9 + 0.05; },
      [](double x) { return 1.0 / (1.0 + std::exp(-4.0 * (x - 0.5))); },
  };
  for (int i = 0; i < 500; ++i) {
    RerankItem item;
    int k = 2 + static_cast<int>(testgen::pick(rng, 6));
    for (int c = 0; c < k; ++c) {
      item.candidates.push_back(
          {c, random_scores(rng, 1 + testgen::pick(rng, 5), 7), "", ""});
    }
    int baseline = prm::best_of_k(item);
    auto transform = transforms[testgen::pick(rng, transforms.size())];
    RerankItem mapped = item;
    for (auto& candidate : mapped.candidates) {
      for (double& s : candidate.step_scores) s = transform(s);
    }
    CAPTURE(i);
    CHECK(prm::best_of_k(mapped) == baseline);
  }
}

TEST_CASE("score_from_logits matches a long-double softmax") {
  CHECK(prm::score_from_logits(0.0, 0.0) == 0.5);
  CHECK(prm::score_from_logits(3.5, 3.5) == 0.5);
  CHECK(prm::score_from_logits(-700.0, -700.0) == 0.5);
  CHECK(prm::score_from_logits(1000.0, 0.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(prm::score_from_logits(std::nan(""), 0.0), prm::NonFinite);
  CHECK_THROWS_AS(prm::score_from_logits(0.0, INFINITY), prm::NonFinite);

  testgen::Rng rng(3344);
  for (int i = 0; i < 2000; ++i) {
    double lc = (static_cast<double>(rng() % 4000) - 2000.0) / 100.0;
    double li = (static_cast<double>(rng() % 4000) - 2000.0) / 100.0;
    long double m = std::max(lc, li);
    long double ec = std::exp(static_cast<long double>(lc) - m);
    long double ei = std::exp(static_cast<long double>(li) - m);
    double expected = static_cast<double>(ec / (ec + ei));
    CHECK(prm::score_from_logits(lc, li) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("truncate_at_first_error keeps the prefix through the first false") {
  std::vector<bool> labels = {true, false, true, true};
  std::vector<double> scores = {0.9, 0.2, 0.8, 0.7};
  auto [out_labels, out_scores] = prm::truncate_at_first_error(labels, scores);
  CHECK(out_labels == std::vector<bool>{true, false});
  CHECK(out_scores == std::vector<double>{0.9, 0.2});

  std::vector<bool> clean = {true, true};
  std::vector<double> clean_scores = {0.9, 0.8};
  auto [l2, s2] = prm::truncate_at_first_error(clean, clean_scores);
  CHECK(l2 == clean);
  CHECK(s2 == clean_scores);

  std::vector<bool> mismatched = {true};
  CHECK_THROWS_AS(prm::truncate_at_first_error(mismatched, clean_scores),
                  prm::LengthMismatch);
}

TEST_CASE("truncated output has at most one false, only at the end") {
  testgen::Rng rng(77001);
  for (int i = 0; i < 1000; ++i) {
    std::size_t n = 1 + testgen::pick(rng, 10);
    std::vector<bool> labels(n);
    for (std::size_t k = 0; k < n; ++k) labels[k] = testgen::pick(rng, 3) != 0;
    std::vector<double> scores = random_scores(rng, n);
    auto [out_labels, out_scores] = prm::truncate_at_first_error(labels, scores);
    REQUIRE(out_labels.size() == out_scores.size());
    REQUIRE(!out_labels.empty());
    for (std::size_t k = 0; k + 1 < out_labels.size(); ++k) CHECK(out_labels[k]);
    // A false can only close the vector.
    std::size_t falses = 0;
    for (bool b : out_labels) falses += b ? 0 : 1;
    CHECK(falses <= 1);
    if (falses == 1) CHECK(!out_labels.back());
  }
}

TEST_CASE("auroc basics") {
  LabeledScoreSet perfect;
  perfect.pairs = {{0.9, true}, {0.1, false}};
  CHECK(prm::auroc(perfect) == 1.0);

  LabeledScoreSet all_tied;
  all_tied.pairs = {{0.5, true}, {0.5, false}, {0.5, true}, {0.5, false}};
  CHECK(prm::auroc(all_tied) == 0.5);

  LabeledScoreSet single;
  single.pairs = {{0.9, true}, {0.8, true}};
  CHECK_THROWS_AS(prm::auroc(single), prm::SingleClass);
}

TEST_CASE("auroc matches the pairwise oracle, ties included") {
  testgen::Rng rng(90807);
  for (int i = 0; i < 100; ++i) {
    LabeledScoreSet set;
    std::size_t n = 2 + testgen::pick(rng, 60);
    bool seen_true = false, seen_false = false;
    // A small score granularity forces plenty of ties.
    for (std::size_t k = 0; k < n; ++k) {
      bool label = testgen::pick(rng, 2) == 0;
      double score = static_cast<double>(testgen::pick(rng, 6)) / 5.0;
      set.pairs.emplace_back(score, label);
      seen_true = seen_true || label;
      seen_false = seen_false || !label;
    }
    if (!seen_true) set.pairs.emplace_back(0.3, true);
    if (!seen_false) set.pairs.emplace_back(0.4, false);
    double expected = oracle::pairwise_auroc(set);
    double actual = prm::auroc(set);
    CAPTURE(i);
    CHECK(actual == doctest::Approx(expected).epsilon(1e-9));
    CHECK(actual >= 0.0);
    CHECK(actual <= 1.0);
  }
}

TEST_CASE("auroc is invariant under strictly increasing transforms") {
  testgen::Rng rng(90906);
  for (int i = 0; i < 100; ++i) {
    LabeledScoreSet set;
    for (int k = 0; k < 30; ++k) {
      set.pairs.emplace_back(static_cast<double>(testgen::pick(rng, 8)) / 7.0,
                             testgen::pick(rng, 2) == 0);
    }
    set.pairs.emplace_back(0.1, true);
    set.pairs.emplace_back(0.2, false);
    double base = prm::auroc(set);
    LabeledScoreSet mapped = set;
    for (auto& [score, label] : mapped.pairs) score = std::exp(3.0 * score);
    CHECK(prm::auroc(mapped) == doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("paired bootstrap degenerate cases") {
  std::vector<double> a = {0.2, 0.4, 0.6, 0.8};
  prm::BootstrapResult equal = prm::paired_bootstrap(a, a, 2000, 7);
  CHECK(equal.p_value == 1.0);
  CHECK(equal.observed_delta == 0.0);

  std::vector<double> b = {1.2, 1.4, 1.6, 1.8};
  prm::BootstrapResult dominant = prm::paired_bootstrap(a, b, 2000, 7);
  CHECK(dominant.p_value == 0.0);
  CHECK(dominant.observed_delta == doctest::Approx(1.0));

  std::vector<double> one = {0.5};
  CHECK_THROWS_AS(prm::paired_bootstrap(one, one, 100, 7), prm::MetricError);
  std::vector<double> three = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(prm::paired_bootstrap(a, three, 100, 7), prm::LengthMismatch);
}

TEST_CASE("paired bootstrap is deterministic under its seed") {
  testgen::Rng rng(2211);
  std::vector<double> a = random_scores(rng, 40);
  std::vector<double> b = a;
  for (double& x : b) x += (static_cast<double>(rng() % 100) - 45.0) / 1000.0;
  prm::BootstrapResult first = prm::paired_bootstrap(a, b, 5000, 99);
  for (int i = 0; i < 3; ++i) {
    prm::BootstrapResult again = prm::paired_bootstrap(a, b, 5000, 99);
    CHECK(again.p_value == first.p_value);
  }
  prm::BootstrapResult other = prm::paired_bootstrap(a, b, 5000, 100);
  (void)other;  // different seed may move the estimate, must not crash
}

TEST_CASE("10k-resample p stays within 0.01 of a million-resample reference") {
  // Fixed 50-item case: 0/1 outcomes with a modest true improvement.
  std::vector<double> a(50), b(50);
  testgen::Rng rng(445566);
  for (std::size_t i = 0; i < 50; ++i) {
    a[i] = testgen::pick(rng, 2) == 0 ? 1.0 : 0.0;
    b[i] = testgen::pick(rng, 5) == 0 ? 1.0 : a[i];
  }
  prm::BootstrapResult reference = prm::paired_bootstrap(a, b, 1000000, 314);
  prm::BootstrapResult estimate = prm::paired_bootstrap(a, b, 10000, 42);
  CHECK(std::abs(estimate.p_value - reference.p_value) <= 0.01);
}

TEST_CASE("answer extraction by kind") {
  using prm::AnswerKind;
  CHECK(prm::extract_answer("Therefore, the answer (arabic numerals) is 12.",
                            AnswerKind::Integer) == "12");
  CHECK(prm::extract_answer("", AnswerKind::Integer).empty());
  CHECK(prm::extract_answer("прибыль 1,234,567 usd", AnswerKind::Integer) == "1234567");
  CHECK(prm::extract_answer("values 007 then 042", AnswerKind::Integer) == "42");
  CHECK(prm::extract_answer("all zeros 000", AnswerKind::Integer) == "0");

  CHECK(prm::extract_answer("The answer is (B) 7pm to 9pm", AnswerKind::OptionLetter) == "B");
  CHECK(prm::extract_answer("options A, B and C; pick C", AnswerKind::OptionLetter) == "C");
  CHECK(prm::extract_answer("no option here", AnswerKind::OptionLetter).empty());

  std::vector<std::string> vocab = {"PROVED", "DISPROVED", "UNKNOWN"};
  CHECK(prm::extract_answer("the label is DISPROVED", AnswerKind::LabelWord, vocab) ==
        "DISPROVED");
  CHECK(prm::extract_answer("proved then disproved", AnswerKind::LabelWord, vocab) ==
        "DISPROVED");
  CHECK(prm::extract_answer("nothing matches", AnswerKind::LabelWord, vocab).empty());
}

TEST_CASE("planted answers are extracted with full accuracy") {
  testgen::Rng rng(889900);
  const std::vector<std::string> prefixes = {
      "After some work, the answer (arabic numerals) is ",
      "We conclude the result equals ",
      "Answer: "};
  for (int i = 0; i < 500; ++i) {
    long planted = static_cast<long>(testgen::pick(rng, 100000));
    std::string text = "Step 1 computes 17 and step 2 uses 99. " +
                       prefixes[testgen::pick(rng, prefixes.size())] +
                       std::to_string(planted) + ".";
    CHECK(prm::extract_answer(text, prm::AnswerKind::Integer) == std::to_string(planted));
  }
}
