#include <doctest.h>

#include <map>

#include "generators.hpp"
#include "oracles.hpp"
#include "stepverify/arith/checker.hpp"
#include "stepverify/arith/theorem.hpp"

using namespace stepverify;
using arith::ArithExpr;
using arith::Rational;
using arith::Sort;

namespace {

const char* kAgeTheorem =
    "theorem example:\n"
    "    assumes \"(Jorge_age_2005::nat) = 16\"\n"
    "        and \"(Jorge_age_difference::nat) = 24\"\n"
    "        and \"(Jorge_current_age::nat) = Jorge_age_2005 + (2022 - 2005)\"\n"
    "        and \"(Simon_current_age::nat) = Jorge_current_age + Jorge_age_difference\"\n"
    "        and \"(Simon_age_2010::nat) = Simon_current_age + (2010 - 2022 + 2005)\"\n"
    "    shows \"Simon_age_2010 = 50\"";

const std::vector<std::string> kAgeSteps = {
    "We'll start from the beginning and proceed logically.",
    "have \"Jorge_current_age = 16 + (2022 - 2005)\" using assms by simp",
    "then have \"Jorge_current_age = 16 + 17\" using assms by simp\n"
    "then have \"Jorge_current_age = 33\" using assms by simp",
    "then have \"Simon_current_age = 33 + 24\" using assms by simp",
    "then have \"Simon_current_age = 57\" using assms by simp",
    "then have \"Simon_age_2010 = 57 + (2010 - 2022 + 2005)\" using assms by simp",
    "then have \"Simon_age_2010 = 57 + 83\" using assms by simp"};

const char* kWalletTheorem =
    "theorem example:\n"
    "    assumes \"(wallet_cost::nat) = 100\"\n"
    "        and \"(betty_savings::nat) = wallet_cost div 2\"\n"
    "        and \"(parent_contribution::nat) = 15\"\n"
    "        and \"(grandparent_contribution::nat) = 2 * parent_contribution\"\n"
    "        and \"(total_savings::nat) = betty_savings + parent_contribution + "
    "grandparent_contribution\"\n"
    "        and \"(additional_needed::nat) = wallet_cost - total_savings\"\n"
    "    shows \"additional_needed = 5\"";

const char* kWalletProof =
    "proof -\n"
    "    have \"betty_savings = wallet_cost div 2\"\n"
    "        using assms by simp\n"
    "    then have \"betty_savings = 50\"\n"
    "        using assms by simp\n"
    "    have \"grandparent_contribution = 2 * parent_contribution\"\n"
    "        by simp\n"
    "    then have \"grandparent_contribution = 30\"\n"
    "        using assms by simp\n"
    "    then have \"parent_contribution + grandparent_contribution = 45\"\n"
    "        using assms by simp\n"
    "    then have \"total_savings = 95\"\n"
    "        using assms by simp\n"
    "    then have \"additional_needed = wallet_cost - total_savings\"\n"
    "        using assms by simp\n"
    "    then have \"additional_needed = 5\"\n"
    "        using assms by simp\n"
    "    thus ?thesis\n"
    "        using assms by simp\n"
    "qed";

const char* kInvalidOperatorDoc =
    "theorem example:\n"
    "    assumes \"(Weng_hourly_wage::real) = 12\"\n"
    "        and \"(babysitting_minutes::real) = 50\"\n"
    "        and \"(babysitting_hours::real) = babysitting_minutes / 60\"\n"
    "        and \"(Weng_earnings::real) = Weng_hourly_wage * babysitting_hours\"\n"
    "    shows \"Weng_earnings = 10\"\n"
    "proof -\n"
    "    have \"Weng_hourly_wage / 60 = 0.20\"\n"
    "        sorry\n"
    "    then have \"babysitting_minutes × (Weng_hourly_wage / 60) = 10\"\n"
    "        sorry\n"
    "    then have \"Weng_earnings = 10\"\n"
    "        sorry\n"
    "    thus ?thesis\n"
    "        sorry\n"
    "qed";

arith::Env nat_env(std::initializer_list<std::pair<const char*, long>> bindings) {
  arith::Env env;
  for (const auto& [name, value] : bindings) {
    env[name] = arith::Binding{Sort::Nat, Rational(value)};
  }
  return env;
}

}  // namespace

TEST_CASE("parse_theorem reads the age fixture") {
  arith::TheoremDocument doc = arith::parse_theorem(kAgeTheorem);
  REQUIRE(doc.assumptions.size() == 5);
  for (const auto& a : doc.assumptions) CHECK(a.sort == Sort::Nat);
  CHECK(doc.assumptions[0].var == "Jorge_age_2005");
  CHECK(doc.shows.lhs == ArithExpr::var("Simon_age_2010"));
  CHECK(doc.shows.rhs == ArithExpr::literal(50));
}

TEST_CASE("parse_theorem minimal document") {
  arith::TheoremDocument doc =
      arith::parse_theorem("theorem t: assumes \"(x::nat) = 1\" shows \"x = 1\"");
  REQUIRE(doc.assumptions.size() == 1);
  CHECK(doc.assumptions[0].var == "x");
}

TEST_CASE("parse_theorem rejects bad sorts, cycles and rebinding") {
  CHECK_THROWS_AS(arith::parse_theorem("theorem t: assumes \"(x::int) = 1\" shows \"x = 1\""),
                  arith::UnknownSort);
  CHECK_THROWS_AS(
      arith::parse_theorem(
          "theorem t: assumes \"(x::nat) = y + 1\" and \"(y::nat) = x + 1\" shows \"x = 1\""),
      arith::CyclicDefinition);
  CHECK_THROWS_AS(
      arith::parse_theorem("theorem t: assumes \"(x::nat) = x + 1\" shows \"x = 1\""),
      arith::CyclicDefinition);
  CHECK_THROWS_AS(
      arith::parse_theorem(
          "theorem t: assumes \"(x::nat) = 1\" and \"(x::nat) = 2\" shows \"x = 1\""),
      arith::ParseError);
}

TEST_CASE("proof steps classify as transition, have and show") {
  std::vector<arith::ProofStep> steps = arith::parse_proof_steps(kAgeSteps);
  REQUIRE(steps.size() == 7);
  CHECK(steps[0].kind == arith::ProofStep::Kind::Transition);
  CHECK(steps[1].kind == arith::ProofStep::Kind::Have);
  CHECK(steps[2].kind == arith::ProofStep::Kind::Have);
  CHECK(steps[2].equations.size() == 2);  // two have lines, one step
  CHECK(steps[1].uses_assms);

  std::vector<std::string> show = {"show ?thesis using assms by simp"};
  CHECK(arith::parse_proof_steps(show)[0].kind == arith::ProofStep::Kind::ShowThesis);
}

TEST_CASE("show with an explicit quoted goal is checked like a have") {
  arith::TheoremDocument doc =
      arith::parse_theorem("theorem t: assumes \"(x::nat) = 5\" shows \"x = 5\"");
  std::vector<std::string> good = {"thus \"x = 5\" by simp"};
  std::vector<arith::ProofStep> steps = arith::parse_proof_steps(good);
  CHECK(steps[0].kind == arith::ProofStep::Kind::Have);
  CHECK(arith::verify_document(doc, steps).labels == std::vector<bool>{true});

  std::vector<std::string> bad = {"show \"x = 6\" by simp"};
  CHECK(arith::verify_document(doc, arith::parse_proof_steps(bad)).labels ==
        std::vector<bool>{false});
}

TEST_CASE("a have step without a parseable equation is a parse error") {
  std::vector<std::string> steps = {"then have nothing useful"};
  CHECK_THROWS_AS(arith::parse_proof_steps(steps), arith::ParseError);
}

TEST_CASE("block proofs split into steps") {
  std::vector<arith::ProofStep> steps = arith::parse_proof(kWalletProof);
  REQUIRE(steps.size() == 9);
  CHECK(steps[0].kind == arith::ProofStep::Kind::Have);
  CHECK(steps[8].kind == arith::ProofStep::Kind::ShowThesis);
  CHECK(!steps[2].uses_assms);  // the `by simp` step
}

TEST_CASE("eval_expr frozen values") {
  arith::Env env;
  // nat: monus then add, left associative.
  ArithExpr monus_chain = arith::parse_equation("x = 2010 - 2022 + 2005").rhs;
  CHECK(arith::eval_expr(monus_chain, env, Sort::Nat) == Rational(2005));

  ArithExpr division = arith::parse_equation("x = 100 div 2").rhs;
  CHECK(arith::eval_expr(division, env, Sort::Nat) == Rational(50));

  ArithExpr fraction = arith::parse_equation("x = 12 / 60").rhs;
  CHECK(arith::eval_expr(fraction, env, Sort::Real) == Rational(1, 5));
  CHECK(arith::parse_decimal("0.20") == Rational(1, 5));
}

TEST_CASE("eval_expr error paths") {
  arith::Env env = nat_env({{"x", 4}});
  CHECK_THROWS_AS(
      arith::eval_expr(arith::parse_equation("q = y + 1").rhs, env, Sort::Nat),
      arith::UnboundVariable);
  CHECK_THROWS_AS(
      arith::eval_expr(arith::parse_equation("q = x div 0").rhs, env, Sort::Nat),
      arith::DivisionByZero);
  CHECK_THROWS_AS(arith::eval_expr(arith::parse_equation("q = x / 2").rhs, env, Sort::Nat),
                  arith::SortMismatch);
  CHECK_THROWS_AS(arith::eval_expr(arith::parse_equation("q = 0.5 + x").rhs, env, Sort::Nat),
                  arith::SortMismatch);
  CHECK_THROWS_AS(arith::eval_expr(arith::parse_equation("q = x div 2").rhs, env, Sort::Real),
                  arith::SortMismatch);
}

TEST_CASE("operator precedence in expressions") {
  arith::Env env;
  CHECK(arith::eval_expr(arith::parse_equation("q = 2 + 3 * 4").rhs, env, Sort::Nat) ==
        Rational(14));
  CHECK(arith::eval_expr(arith::parse_equation("q = 20 - 6 - 4").rhs, env, Sort::Nat) ==
        Rational(10));
  CHECK(arith::eval_expr(arith::parse_equation("q = 100 div 2 * 5").rhs, env, Sort::Nat) ==
        Rational(250));  // left associative across div and *
  CHECK(arith::eval_expr(arith::parse_equation("q = (2 + 3) * 4").rhs, env, Sort::Nat) ==
        Rational(20));
}

TEST_CASE("the age fixture labels six true then one false") {
  arith::TheoremDocument doc = arith::parse_theorem(kAgeTheorem);
  std::vector<arith::ProofStep> steps = arith::parse_proof_steps(kAgeSteps);
  arith::StepLabelVector labels = arith::verify_document(doc, steps);
  CHECK(labels.labels ==
        std::vector<bool>{true, true, true, true, true, true, false});
}

TEST_CASE("transition-only proofs label all true") {
  arith::TheoremDocument doc =
      arith::parse_theorem("theorem t: assumes \"(x::nat) = 1\" shows \"x = 1\"");
  std::vector<std::string> messages = {"First we think.", "Then we conclude."};
  std::vector<arith::ProofStep> steps = arith::parse_proof_steps(messages);
  arith::StepLabelVector labels = arith::verify_document(doc, steps);
  CHECK(labels.labels == std::vector<bool>{true, true});
}

TEST_CASE("x = x holds for any bound variable") {
  arith::TheoremDocument doc =
      arith::parse_theorem("theorem t: assumes \"(x::nat) = 7\" shows \"x = 7\"");
  std::vector<std::string> messages = {"have \"x = x\" using assms by simp"};
  arith::StepLabelVector labels =
      arith::verify_document(doc, arith::parse_proof_steps(messages));
  CHECK(labels.labels == std::vector<bool>{true});
}

TEST_CASE("prior have equalities are trusted even when wrong") {
  arith::TheoremDocument doc = arith::parse_theorem(
      "theorem t: assumes \"(x::nat) = 5\" and \"(y::nat) = x * 2\" shows \"y = 10\"");
  std::vector<std::string> messages = {
      "have \"x = 6\" using assms by simp",        // wrong
      "then have \"x = 6\" using assms by simp"};  // consistent with step 1
  arith::StepLabelVector labels =
      arith::verify_document(doc, arith::parse_proof_steps(messages));
  CHECK(labels.labels == std::vector<bool>{false, true});
}

TEST_CASE("show thesis is judged against assumptions alone") {
  arith::TheoremDocument doc = arith::parse_theorem(
      "theorem t: assumes \"(x::nat) = 5\" shows \"x = 5\"");
  std::vector<std::string> messages = {
      "have \"x = 999\" using assms by simp",  // wrong and rebinding
      "show ?thesis using assms by simp"};
  arith::StepLabelVector labels =
      arith::verify_document(doc, arith::parse_proof_steps(messages));
  CHECK(labels.labels == std::vector<bool>{false, true});
}

TEST_CASE("environment monotonicity: later steps never change earlier labels") {
  testgen::Rng rng(36912);
  for (int i = 0; i < 50; ++i) {
    testgen::GeneratedTheorem gen = testgen::random_nat_theorem(rng, 3 + i % 4);
    arith::TheoremDocument doc = arith::parse_theorem(gen.theorem_text);
    std::vector<arith::ProofStep> all = arith::parse_proof_steps(gen.step_messages);
    arith::StepLabelVector full = arith::verify_document(doc, all);
    std::span<const arith::ProofStep> prefix(all.data(), all.size() - 1);
    arith::StepLabelVector partial = arith::verify_document(doc, prefix);
    for (std::size_t k = 0; k < partial.labels.size(); ++k) {
      CHECK(partial.labels[k] == full.labels[k]);
    }
  }
}

TEST_CASE("correct chains label all true") {
  testgen::Rng rng(52077);
  for (int i = 0; i < 100; ++i) {
    testgen::GeneratedTheorem gen = testgen::random_nat_theorem(rng, 3 + i % 5);
    arith::TheoremDocument doc = arith::parse_theorem(gen.theorem_text);
    std::vector<arith::ProofStep> steps = arith::parse_proof_steps(gen.step_messages);
    arith::StepLabelVector labels = arith::verify_document(doc, steps);
    for (std::size_t k = 0; k < labels.labels.size(); ++k) {
      CAPTURE(gen.theorem_text);
      CHECK(labels.labels[k]);
    }
  }
}

TEST_CASE("a perturbed literal flips exactly the perturbed step") {
  testgen::Rng rng(81320);
  for (int i = 0; i < 500; ++i) {
    testgen::GeneratedTheorem gen = testgen::random_nat_theorem(rng, 3 + i % 5);
    std::size_t which = testgen::pick(rng, gen.perturbable.size());
    std::size_t step_index = gen.perturbable[which];
    long long original = gen.stated_values[which];
    long long perturbed = original + 1 + static_cast<long long>(testgen::pick(rng, 7));
    std::string& message = gen.step_messages[step_index];
    std::string needle = "= " + std::to_string(original) + "\"";
    std::size_t at = message.find(needle);
    REQUIRE(at != std::string::npos);
    message.replace(at, needle.size(), "= " + std::to_string(perturbed) + "\"");

    arith::TheoremDocument doc = arith::parse_theorem(gen.theorem_text);
    std::vector<arith::ProofStep> steps = arith::parse_proof_steps(gen.step_messages);
    arith::StepLabelVector labels = arith::verify_document(doc, steps);
    for (std::size_t k = 0; k < labels.labels.size(); ++k) {
      CAPTURE(i);
      CAPTURE(step_index);
      CHECK(labels.labels[k] == (k != step_index));
    }
  }
}

TEST_CASE("theorem render-parse round-trip") {
  testgen::Rng rng(660912);
  for (int i = 0; i < 200; ++i) {
    testgen::GeneratedTheorem gen = testgen::random_nat_theorem(rng, 2 + i % 6);
    arith::TheoremDocument doc = arith::parse_theorem(gen.theorem_text);
    arith::TheoremDocument again = arith::parse_theorem(arith::render_theorem(doc));
    REQUIRE(again.assumptions.size() == doc.assumptions.size());
    for (std::size_t k = 0; k < doc.assumptions.size(); ++k) {
      CHECK(again.assumptions[k].var == doc.assumptions[k].var);
      CHECK(again.assumptions[k].sort == doc.assumptions[k].sort);
      CHECK(again.assumptions[k].defining_expr == doc.assumptions[k].defining_expr);
    }
    CHECK(again.shows.lhs == doc.shows.lhs);
    CHECK(again.shows.rhs == doc.shows.rhs);
  }
}

TEST_CASE("proof render-parse round-trip") {
  testgen::Rng rng(707211);
  for (int i = 0; i < 500; ++i) {
    testgen::GeneratedTheorem gen = testgen::random_nat_theorem(rng, 2 + i % 6);
    std::vector<arith::ProofStep> steps = arith::parse_proof_steps(gen.step_messages);
    std::vector<arith::ProofStep> again = arith::parse_proof(arith::render_proof(steps));
    REQUIRE(again.size() == steps.size());
    for (std::size_t k = 0; k < steps.size(); ++k) {
      CHECK(again[k].kind == steps[k].kind);
      CHECK(again[k].uses_assms == steps[k].uses_assms);
      REQUIRE(again[k].equations.size() == steps[k].equations.size());
      for (std::size_t e = 0; e < steps[k].equations.size(); ++e) {
        CHECK(again[k].equations[e].lhs == steps[k].equations[e].lhs);
        CHECK(again[k].equations[e].rhs == steps[k].equations[e].rhs);
      }
    }
  }
}

TEST_CASE("format filter: the invalid multiplication symbol is rejected") {
  FormatVerdict verdict = arith::validate_theorem_format(kInvalidOperatorDoc);
  CHECK(!verdict.ok);
  CHECK(verdict.reason == "invalid_operator");
}

TEST_CASE("format filter: the wallet document is accepted and verifies") {
  std::string document = std::string(kWalletTheorem) + "\n" + kWalletProof;
  FormatVerdict verdict = arith::validate_theorem_format(document);
  CHECK(verdict.ok);

  arith::TheoremDocument doc = arith::parse_theorem(kWalletTheorem);
  std::vector<arith::ProofStep> steps = arith::parse_proof(kWalletProof);
  arith::DocumentReport report = arith::verify_document_report(doc, steps);
  for (std::size_t k = 0; k < report.labels.size(); ++k) {
    CAPTURE(k);
    CAPTURE(report.reasons[k]);
    CHECK(report.labels[k]);
  }
  // The betty_savings = 50 step in particular.
  CHECK(steps[1].equations[0].raw == "betty_savings = 50");
  CHECK(report.labels[1]);
}

TEST_CASE("format filter: noise is rejected as a parse error") {
  FormatVerdict verdict = arith::validate_theorem_format("*** random noise @@@");
  CHECK(!verdict.ok);
  CHECK(verdict.reason == "parse_error");
}

TEST_CASE("theorem parsing never fails with anything but a ParseError") {
  testgen::Rng rng(56473);
  const std::string alphabet = "theormsau\"()::=+-*/div nat real 0129.x_\n×<";
  for (int i = 0; i < 2000; ++i) {
    std::string text;
    std::size_t n = testgen::pick(rng, 60);
    for (std::size_t k = 0; k < n; ++k) text += alphabet[testgen::pick(rng, alphabet.size())];
    try {
      (void)arith::parse_theorem(text);
    } catch (const arith::ParseError&) {
    }
    FormatVerdict verdict = arith::validate_theorem_format(text);
    (void)verdict;  // must classify, never throw
  }
}

TEST_CASE("evaluation agrees with an independent gmp implementation") {
  testgen::Rng rng(48155);
  for (int i = 0; i < 300; ++i) {
    testgen::GeneratedTheorem gen = testgen::random_nat_theorem(rng, 3 + i % 5);
    arith::TheoremDocument doc = arith::parse_theorem(gen.theorem_text);
    arith::Env env = arith::build_assumption_env(doc);

    oracle::GmpEnv gmp_env;
    for (const auto& [name, binding] : env) {
      gmp_env[name] = oracle::GmpBinding{binding.sort, oracle::to_gmp(binding.value)};
    }
    for (const auto& assumption : doc.assumptions) {
      Rational ours = arith::eval_expr(assumption.defining_expr, env, assumption.sort);
      mpq_class theirs = oracle::gmp_eval(assumption.defining_expr, gmp_env, assumption.sort);
      CHECK(oracle::to_gmp(ours) == theirs);
    }
  }
}

TEST_CASE("real-sorted evaluation is exact in both implementations") {
  arith::TheoremDocument doc = arith::parse_theorem(
      "theorem t: assumes \"(rate::real) = 12 / 60\" and \"(minutes::real) = 50\"\n"
      "and \"(earnings::real) = minutes * rate\" shows \"earnings = 10\"");
  arith::Env env = arith::build_assumption_env(doc);
  CHECK(env.at("rate").value == Rational(1, 5));
  CHECK(env.at("earnings").value == Rational(10));

  oracle::GmpEnv gmp_env;
  for (const auto& [name, binding] : env) {
    gmp_env[name] = oracle::GmpBinding{binding.sort, oracle::to_gmp(binding.value)};
  }
  for (const auto& assumption : doc.assumptions) {
    mpq_class theirs = oracle::gmp_eval(assumption.defining_expr, gmp_env, assumption.sort);
    CHECK(oracle::to_gmp(env.at(assumption.var).value) == theirs);
  }

  std::vector<std::string> messages = {"have \"earnings = 10\" using assms by simp"};
  arith::StepLabelVector labels =
      arith::verify_document(doc, arith::parse_proof_steps(messages));
  CHECK(labels.labels == std::vector<bool>{true});
}
