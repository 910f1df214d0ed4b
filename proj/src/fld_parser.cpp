#include "stepverify/fld/parser.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace stepverify::fld {

ParseError::ParseError(std::size_t offset, std::string expected)
    : std::runtime_error("parse error at byte " + std::to_string(offset) + ": " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

DuplicateTarget::DuplicateTarget(std::size_t offset, const std::string& target)
    : ParseError(offset, "duplicate target '" + target + "'") {}

NonConsecutiveFactIds::NonConsecutiveFactIds(std::size_t offset, const std::string& detail)
    : ParseError(offset, "non-consecutive fact ids: " + detail) {}

UnsupportedConstruct::UnsupportedConstruct(std::size_t offset, const std::string& construct)
    : ParseError(offset, "unsupported construct '" + construct + "'") {}

std::string to_string(ProofLabel label) {
  switch (label) {
    case ProofLabel::Proved: return "PROVED";
    case ProofLabel::Disproved: return "DISPROVED";
    case ProofLabel::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

const Formula* LogicProblem::find_fact(const std::string& ref) const {
  for (const auto& [id, f] : facts) {
    if (id == ref) return &f;
  }
  return nullptr;
}

namespace {

constexpr std::string_view kNegation = "¬";  // U+00AC

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_lower_ident(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

bool is_upper_ident(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!is_ident_char(c)) return false;
  }
  return true;
}

// Tracks predicate arity (0 or 1) across one parse session. Mixed use of
// the same predicate is rejected because grounding requires a fixed arity.
class AritySession {
 public:
  void note(const std::string& pred, bool applied, std::size_t offset) {
    auto [it, inserted] = arity_.emplace(pred, applied);
    if (!inserted && it->second != applied) {
      throw ParseError(offset, "predicate '{" + pred + "}' used with mixed arity");
    }
  }

 private:
  std::map<std::string, bool> arity_;
};

class FormulaParser {
 public:
  FormulaParser(std::string_view text, std::size_t base_offset, AritySession& arity)
      : text_(text), base_(base_offset), arity_(arity) {}

  Formula parse() {
    Formula f = parse_quantified();
    skip_ws();
    if (pos_ != text_.size()) fail("end of formula");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(base_ + pos_, "expected " + expected);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool at_negation() const {
    return text_.substr(pos_, kNegation.size()) == kNegation;
  }

  bool literal_ahead(std::string_view lit) {
    skip_ws();
    return text_.substr(pos_, lit.size()) == lit;
  }

  bool consume(std::string_view lit) {
    if (!literal_ahead(lit)) return false;
    pos_ += lit.size();
    return true;
  }

  std::string_view peek_ident() {
    skip_ws();
    std::size_t end = pos_;
    while (end < text_.size() && is_ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  // An identifier with no whitespace before it, used for variable
  // arguments written tight against the closing brace ({A}x).
  std::string_view peek_adjacent_ident() const {
    std::size_t end = pos_;
    while (end < text_.size() && is_ident_char(text_[end])) ++end;
    return text_.substr(pos_, end - pos_);
  }

  // Lookahead for a quantifier prefix: '(' ident '):'.
  bool quantifier_ahead() {
    skip_ws();
    std::size_t p = pos_;
    if (p >= text_.size() || text_[p] != '(') return false;
    ++p;
    std::size_t start = p;
    while (p < text_.size() && is_ident_char(text_[p])) ++p;
    if (p == start) return false;
    if (p >= text_.size() || text_[p] != ')') return false;
    ++p;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && text_[p] == ':';
  }

  Formula parse_quantified() {
    if (quantifier_ahead()) {
      skip_ws();
      std::size_t quant_at = pos_;
      ++pos_;  // '('
      std::string_view tok = peek_adjacent_ident();
      pos_ += tok.size();
      bool existential = tok.size() >= 2 && tok[0] == 'E' &&
                         is_lower_ident(tok.substr(1));
      std::string var = existential ? std::string(tok.substr(1)) : std::string(tok);
      if (!existential && !is_lower_ident(tok)) {
        throw ParseError(base_ + quant_at, "expected quantifier variable");
      }
      if (var == "v") {
        throw ParseError(base_ + quant_at,
                         "quantifier variable 'v' conflicts with the disjunction operator");
      }
      if (!consume(")")) fail("')'");
      if (!consume(":")) fail("':' after quantifier");
      bound_.push_back(var);
      Formula body = parse_quantified();
      bound_.pop_back();
      return existential ? Formula::exists(var, std::move(body))
                         : Formula::forall(var, std::move(body));
    }
    return parse_implies();
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (consume("->")) {
      // Right associative; the right side may itself be quantified.
      Formula rhs = parse_quantified();
      return Formula::implication(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  bool or_operator_ahead() {
    skip_ws();
    std::string_view tok = peek_adjacent_ident();
    return tok == "v";
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (or_operator_ahead()) {
      pos_ += 1;
      lhs = Formula::disjunction(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_not();
    while (consume("&")) {
      lhs = Formula::conjunction(std::move(lhs), parse_not());
    }
    return lhs;
  }

  Formula parse_not() {
    skip_ws();
    if (at_negation()) {
      pos_ += kNegation.size();
      return Formula::negation(parse_not());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("formula");
    if (quantifier_ahead()) {
      // A quantifier prefix in operand position scopes over the rest of
      // the enclosing formula, matching the prefix notation.
      return parse_quantified();
    }
    if (text_[pos_] == '(') {
      ++pos_;
      Formula inner = parse_quantified();
      if (!consume(")")) fail("')'");
      return inner;
    }
    if (text_[pos_] == '{') return parse_atom();
    fail("'{', '(' or '¬'");
  }

  std::string parse_braced(bool& upper) {
    // pos_ is at '{'.
    std::size_t open = pos_;
    ++pos_;
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name.empty()) throw ParseError(base_ + start, "expected identifier inside braces");
    if (pos_ >= text_.size() || text_[pos_] != '}') fail("'}'");
    ++pos_;
    if (is_upper_ident(name)) {
      upper = true;
    } else if (is_lower_ident(name)) {
      upper = false;
    } else {
      throw ParseError(base_ + open, "identifier inside braces must be alphanumeric");
    }
    return std::string(name);
  }

  Formula parse_atom() {
    std::size_t atom_at = pos_;
    bool upper = false;
    std::string pred = parse_braced(upper);
    if (!upper) {
      throw ParseError(base_ + atom_at, "predicate (uppercase identifier) before argument");
    }
    // Constant argument: another braced identifier, lowercase.
    if (pos_ < text_.size() && text_[pos_] == '{') {
      std::size_t arg_at = pos_;
      bool arg_upper = false;
      std::string arg = parse_braced(arg_upper);
      if (arg_upper) {
        throw ParseError(base_ + arg_at, "constant (lowercase identifier) as atom argument");
      }
      arity_.note(pred, true, base_ + atom_at);
      return Formula::atom(std::move(pred), Term::constant(std::move(arg)));
    }
    // Variable argument: identifier written tight against the brace.
    std::string_view tok = peek_adjacent_ident();
    if (!tok.empty() && tok != "v") {
      std::string var(tok);
      bool bound = false;
      for (const auto& b : bound_) {
        if (b == var) bound = true;
      }
      if (!bound) {
        throw ParseError(base_ + pos_,
                         "variable '" + var + "' bound by an enclosing quantifier");
      }
      pos_ += tok.size();
      arity_.note(pred, true, base_ + atom_at);
      return Formula::atom(std::move(pred), Term::variable(std::move(var)));
    }
    arity_.note(pred, false, base_ + atom_at);
    return Formula::atom(std::move(pred));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t base_;
  AritySession& arity_;
  std::vector<std::string> bound_;
};

Formula parse_formula_at(std::string_view text, std::size_t base, AritySession& arity) {
  return FormulaParser(text, base, arity).parse();
}

std::string_view trim(std::string_view s, std::size_t& lead) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  lead = b;
  return s.substr(b, e - b);
}

std::string_view trim(std::string_view s) {
  std::size_t lead = 0;
  return trim(s, lead);
}

// Splits `fact1 & int2` style reference lists and validates each token.
std::vector<std::string> parse_refs(std::string_view text, std::size_t base) {
  std::vector<std::string> refs;
  std::size_t pos = 0;
  while (true) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    std::size_t start = pos;
    while (pos < text.size() && is_ident_char(text[pos])) ++pos;
    std::string tok(text.substr(start, pos - start));
    if (tok.empty()) throw ParseError(base + start, "expected premise reference");
    if (tok.rfind("assump", 0) == 0 || tok == "void") {
      throw UnsupportedConstruct(base + start, tok);
    }
    bool fact = tok.rfind("fact", 0) == 0 && tok.size() > 4;
    bool inter = tok.rfind("int", 0) == 0 && tok.size() > 3;
    std::string_view digits =
        fact ? std::string_view(tok).substr(4) : inter ? std::string_view(tok).substr(3) : "";
    bool numeric = !digits.empty() && digits[0] != '0';
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
    }
    if (!(fact || inter) || !numeric) {
      throw ParseError(base + start, "premise reference of the form factN or intN");
    }
    refs.push_back(std::move(tok));
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos < text.size() && text[pos] == '&') {
      ++pos;
      continue;
    }
    if (pos != text.size()) throw ParseError(base + pos, "'&' or '->' between references");
    return refs;
  }
}

int target_index(std::string_view id) {
  // Expects `int` + positive integer; returns the integer.
  if (id.rfind("int", 0) != 0 || id.size() <= 3) return -1;
  std::string_view digits = id.substr(3);
  if (digits[0] == '0') return -1;
  int value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
    value = value * 10 + (c - '0');
    if (value > 1000000) return -1;
  }
  return value;
}

DeductionStep parse_step(std::string_view text, std::size_t base, AritySession& arity) {
  if (text.find("assump") != std::string_view::npos) {
    throw UnsupportedConstruct(base + text.find("assump"), "assump");
  }
  std::size_t arrow = text.find("->");
  if (arrow == std::string_view::npos) throw ParseError(base, "'->' in deduction step");
  std::vector<std::string> refs = parse_refs(text.substr(0, arrow), base);
  std::size_t after = arrow + 2;
  std::size_t colon = text.find(':', after);
  if (colon == std::string_view::npos) throw ParseError(base + after, "':' after target id");
  std::size_t lead = 0;
  std::string_view target = trim(text.substr(after, colon - after), lead);
  if (target.rfind("assump", 0) == 0) {
    throw UnsupportedConstruct(base + after + lead, std::string(target));
  }
  if (target_index(target) < 0) {
    throw ParseError(base + after + lead, "target of the form intN");
  }
  std::string_view body = text.substr(colon + 1);
  Formula conclusion = parse_formula_at(body, base + colon + 1, arity);
  return DeductionStep{std::move(refs), std::string(target), std::move(conclusion),
                       std::string(trim(text))};
}

// Step boundaries: ';' or newline, outside of nothing (formulas contain
// neither).
std::vector<std::pair<std::size_t, std::string_view>> split_steps(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';' || text[i] == '\n') {
      std::size_t lead = 0;
      std::string_view seg = trim(text.substr(start, i - start), lead);
      if (!seg.empty()) out.emplace_back(start + lead, seg);
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

Formula parse_formula(std::string_view text) {
  AritySession arity;
  return parse_formula_at(text, 0, arity);
}

DeductionScript parse_deduction_script(std::string_view text) {
  static constexpr std::string_view kProofTag = "$proof$:";
  static constexpr std::string_view kLabelTag = "$proof_label$:";
  std::size_t proof_at = text.find(kProofTag);
  if (proof_at == std::string_view::npos) throw ParseError(0, "'$proof$:' section");
  std::size_t label_at = text.find(kLabelTag, proof_at);
  if (label_at == std::string_view::npos) {
    throw ParseError(text.size(), "'$proof_label$:' section");
  }

  std::size_t steps_begin = proof_at + kProofTag.size();
  std::string_view steps_text = text.substr(steps_begin, label_at - steps_begin);

  DeductionScript script;
  AritySession arity;
  std::set<std::string> seen;
  for (const auto& [offset, seg] : split_steps(steps_text)) {
    DeductionStep step = parse_step(seg, steps_begin + offset, arity);
    if (!seen.insert(step.target_id).second) {
      throw DuplicateTarget(steps_begin + offset, step.target_id);
    }
    script.steps.push_back(std::move(step));
  }

  std::string_view label = trim(text.substr(label_at + kLabelTag.size()));
  if (label == "PROVED") {
    script.proof_label = ProofLabel::Proved;
  } else if (label == "DISPROVED") {
    script.proof_label = ProofLabel::Disproved;
  } else if (label == "UNKNOWN") {
    script.proof_label = ProofLabel::Unknown;
  } else {
    throw ParseError(label_at + kLabelTag.size(), "PROVED, DISPROVED or UNKNOWN");
  }
  return script;
}

namespace {

LogicProblem build_problem(const std::string& id, std::string_view hypothesis_text,
                           std::size_t hypothesis_base,
                           const std::vector<std::pair<std::size_t, std::string_view>>& fact_lines) {
  AritySession arity;
  std::size_t lead = 0;
  std::string_view hyp = trim(hypothesis_text, lead);
  Formula hypothesis = parse_formula_at(hyp, hypothesis_base + lead, arity);
  std::vector<std::pair<std::string, Formula>> facts;
  int expected = 1;
  for (const auto& [offset, line] : fact_lines) {
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos || line.rfind("fact", 0) != 0) {
      throw ParseError(offset, "line of the form 'factN: <formula>'");
    }
    std::string fact_id(trim(line.substr(0, colon)));
    std::string_view digits = std::string_view(fact_id).substr(4);
    int n = 0;
    bool numeric = !digits.empty();
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) numeric = false;
      else n = n * 10 + (c - '0');
    }
    if (!numeric) throw ParseError(offset, "fact id of the form factN");
    if (n != expected) {
      throw NonConsecutiveFactIds(offset, "got " + fact_id + ", expected fact" +
                                              std::to_string(expected));
    }
    ++expected;
    Formula f = parse_formula_at(line.substr(colon + 1), offset + colon + 1, arity);
    facts.emplace_back(std::move(fact_id), std::move(f));
  }
  return LogicProblem{id, std::move(hypothesis), std::move(facts)};
}

}  // namespace

LogicProblem parse_logic_problem(std::string_view text) {
  static constexpr std::string_view kHypTag = "$hypothesis$:";
  static constexpr std::string_view kCtxTag = "$context$:";
  std::size_t hyp_at = text.find(kHypTag);
  if (hyp_at == std::string_view::npos) throw ParseError(0, "'$hypothesis$:' section");
  std::size_t ctx_at = text.find(kCtxTag, hyp_at);
  if (ctx_at == std::string_view::npos) throw ParseError(text.size(), "'$context$:' section");

  std::size_t hyp_begin = hyp_at + kHypTag.size();
  std::string_view hyp_text = text.substr(hyp_begin, ctx_at - hyp_begin);

  std::vector<std::pair<std::size_t, std::string_view>> fact_lines;
  std::size_t ctx_begin = ctx_at + kCtxTag.size();
  std::string_view ctx = text.substr(ctx_begin);
  std::size_t start = 0;
  for (std::size_t i = 0; i <= ctx.size(); ++i) {
    if (i == ctx.size() || ctx[i] == '\n') {
      std::size_t lead = 0;
      std::string_view line = trim(ctx.substr(start, i - start), lead);
      if (!line.empty()) fact_lines.emplace_back(ctx_begin + start + lead, line);
      start = i + 1;
    }
  }
  return build_problem("", hyp_text, hyp_begin, fact_lines);
}

LogicProblem parse_logic_problem_parts(const std::string& id, std::string_view hypothesis,
                                       const std::vector<std::string>& facts) {
  std::vector<std::string> prefixed;
  prefixed.reserve(facts.size());
  for (std::size_t i = 0; i < facts.size(); ++i) {
    std::string_view f = trim(facts[i]);
    if (f.rfind("fact", 0) == 0 && f.find(':') != std::string_view::npos) {
      prefixed.emplace_back(f);
    } else {
      prefixed.push_back("fact" + std::to_string(i + 1) + ": " + std::string(f));
    }
  }
  std::vector<std::pair<std::size_t, std::string_view>> fact_lines;
  fact_lines.reserve(prefixed.size());
  for (const auto& line : prefixed) fact_lines.emplace_back(0, line);
  return build_problem(id, hypothesis, 0, fact_lines);
}

std::string render_deduction_step(const DeductionStep& step) {
  std::string out;
  for (std::size_t i = 0; i < step.premise_refs.size(); ++i) {
    if (i) out += " & ";
    out += step.premise_refs[i];
  }
  out += " -> ";
  out += step.target_id;
  out += ": ";
  out += render_formula(step.conclusion);
  return out;
}

std::string render_deduction_script(const DeductionScript& script) {
  std::string out = "$proof$:\n";
  for (const auto& step : script.steps) {
    out += render_deduction_step(step);
    out += ";\n";
  }
  out += "\n$proof_label$: ";
  out += to_string(script.proof_label);
  return out;
}

}  // namespace stepverify::fld
