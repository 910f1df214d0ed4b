#include "stepverify/arith/theorem.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace stepverify::arith {

ParseError::ParseError(std::size_t offset, std::string expected, bool invalid_operator)
    : std::runtime_error("parse error at byte " + std::to_string(offset) + ": " + expected),
      offset_(offset),
      expected_(std::move(expected)),
      invalid_operator_(invalid_operator) {}

CyclicDefinition::CyclicDefinition(const std::string& vars)
    : ParseError(0, "cyclic assumption definitions involving " + vars) {}

UnknownSort::UnknownSort(std::size_t offset, const std::string& sort)
    : ParseError(offset, "unknown sort '" + sort + "' (expected nat or real)") {}

const Assumption* TheoremDocument::find(const std::string& var) const {
  for (const Assumption& a : assumptions) {
    if (a.var == var) return &a;
  }
  return nullptr;
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Recursive-descent expression parser:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/'|'div') factor)*
//   factor := NUMBER | IDENT | '(' expr ')'
class ExprParser {
 public:
  ExprParser(std::string_view text, std::size_t base) : text_(text), base_(base) {}

  ArithExpr parse() {
    ArithExpr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail_here("end of expression");
    return e;
  }

 private:
  [[noreturn]] void fail_here(const std::string& expected) {
    // Anything outside the accepted token set is an operator-level
    // rejection, which the format filter reports separately.
    bool bad_symbol = pos_ < text_.size() && !is_ident_char(text_[pos_]) &&
                      std::string_view("+-*/()= \t").find(text_[pos_]) == std::string_view::npos;
    throw ParseError(base_ + pos_, "expected " + expected, bad_symbol);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool keyword_div_ahead() {
    skip_ws();
    if (text_.substr(pos_, 3) != "div") return false;
    return pos_ + 3 >= text_.size() || !is_ident_char(text_[pos_ + 3]);
  }

  ArithExpr parse_sum() {
    ArithExpr lhs = parse_term();
    while (true) {
      if (consume('+')) {
        lhs = ArithExpr::binary(ArithExpr::Kind::Add, std::move(lhs), parse_term());
      } else if (consume('-')) {
        lhs = ArithExpr::binary(ArithExpr::Kind::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  ArithExpr parse_term() {
    ArithExpr lhs = parse_factor();
    while (true) {
      if (consume('*')) {
        lhs = ArithExpr::binary(ArithExpr::Kind::Mul, std::move(lhs), parse_factor());
      } else if (keyword_div_ahead()) {
        pos_ += 3;
        lhs = ArithExpr::binary(ArithExpr::Kind::IntDiv, std::move(lhs), parse_factor());
      } else if (consume('/')) {
        lhs = ArithExpr::binary(ArithExpr::Kind::Div, std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ArithExpr parse_factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail_here("number, variable or '('");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      ArithExpr inner = parse_sum();
      if (!consume(')')) fail_here("')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        ++pos_;
      }
      std::string lexeme(text_.substr(start, pos_ - start));
      Rational value;
      try {
        value = parse_decimal(lexeme);
      } catch (const std::invalid_argument&) {
        throw ParseError(base_ + start, "well-formed numeral");
      }
      return ArithExpr::literal(std::move(value), std::move(lexeme));
    }
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "div") throw ParseError(base_ + start, "operand before 'div'");
      return ArithExpr::var(std::move(name));
    }
    fail_here("number, variable or '('");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t base_;
};

ArithExpr parse_expr_at(std::string_view text, std::size_t base) {
  return ExprParser(text, base).parse();
}

Equation parse_equation_at(std::string_view text, std::size_t base) {
  std::size_t eq = text.find('=');
  if (eq == std::string_view::npos) throw ParseError(base, "'=' in equation");
  if (text.find('=', eq + 1) != std::string_view::npos) {
    throw ParseError(base + eq + 1, "a single '=' per equation");
  }
  ArithExpr lhs = parse_expr_at(text.substr(0, eq), base);
  ArithExpr rhs = parse_expr_at(text.substr(eq + 1), base + eq + 1);
  return Equation{std::move(lhs), std::move(rhs), std::string(trim(text))};
}

// Extracts "quoted" segments with their offsets.
std::vector<std::pair<std::size_t, std::string_view>> quoted_segments(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find('"', pos);
    if (open == std::string_view::npos) return out;
    std::size_t close = text.find('"', open + 1);
    if (close == std::string_view::npos) {
      throw ParseError(open, "closing '\"'");
    }
    out.emplace_back(open + 1, text.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
}

bool contains_word(std::string_view text, std::string_view word) {
  std::size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::string_view::npos) {
    bool left_ok = pos == 0 || !is_ident_char(text[pos - 1]);
    std::size_t end = pos + word.size();
    bool right_ok = end >= text.size() || !is_ident_char(text[end]);
    if (left_ok && right_ok) return true;
    pos += 1;
  }
  return false;
}

// `have` occurrences outside quoted equations decide the step kind.
bool has_keyword_outside_quotes(std::string_view text, std::string_view word) {
  std::string unquoted;
  bool in_quotes = false;
  for (char c : text) {
    if (c == '"') {
      in_quotes = !in_quotes;
      unquoted += ' ';
      continue;
    }
    unquoted += in_quotes ? ' ' : c;
  }
  return contains_word(unquoted, word);
}

}  // namespace

Equation parse_equation(std::string_view text) { return parse_equation_at(text, 0); }

TheoremDocument parse_theorem(std::string_view text) {
  std::size_t pos = 0;

  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_ident = [&]() -> std::string {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && is_ident_char(text[pos])) ++pos;
    return std::string(text.substr(start, pos - start));
  };

  // Anchor on `theorem <name>:`; the word alone may occur in surrounding
  // prose.
  std::string name;
  std::size_t kw = 0;
  bool anchored = false;
  while ((kw = text.find("theorem", kw)) != std::string_view::npos) {
    bool left_ok = kw == 0 || !is_ident_char(text[kw - 1]);
    pos = kw + 7;
    kw += 7;
    if (!left_ok || (pos < text.size() && is_ident_char(text[pos]))) continue;
    name = read_ident();
    skip_ws();
    if (name.empty() || pos >= text.size() || text[pos] != ':') continue;
    ++pos;
    anchored = true;
    break;
  }
  if (!anchored) throw ParseError(0, "'theorem <name>:' header");

  skip_ws();
  if (text.substr(pos, 7) != "assumes") throw ParseError(pos, "'assumes'");
  pos += 7;

  TheoremDocument doc;
  doc.name = std::move(name);
  doc.raw_text = std::string(trim(text));

  auto read_quoted = [&]() -> std::pair<std::size_t, std::string_view> {
    skip_ws();
    if (pos >= text.size() || text[pos] != '"') throw ParseError(pos, "'\"'");
    std::size_t open = pos;
    std::size_t close = text.find('"', open + 1);
    if (close == std::string_view::npos) throw ParseError(open, "closing '\"'");
    pos = close + 1;
    return {open + 1, text.substr(open + 1, close - open - 1)};
  };

  std::set<std::string> declared;
  while (true) {
    auto [offset, quoted] = read_quoted();
    // (Var::sort) = expr
    std::string_view body = trim(quoted);
    std::size_t local = offset + (quoted.size() - body.size());
    if (body.empty() || body[0] != '(') throw ParseError(local, "'(' opening the binder");
    std::size_t sep = body.find("::");
    if (sep == std::string_view::npos) throw ParseError(local, "'::' sort annotation");
    std::string var(trim(body.substr(1, sep - 1)));
    if (var.empty() || !is_ident_start(var[0])) throw ParseError(local + 1, "variable name");
    std::size_t close = body.find(')', sep);
    if (close == std::string_view::npos) throw ParseError(local + sep, "')' closing the binder");
    std::string sort_name(trim(body.substr(sep + 2, close - sep - 2)));
    Sort sort;
    if (sort_name == "nat") {
      sort = Sort::Nat;
    } else if (sort_name == "real") {
      sort = Sort::Real;
    } else {
      throw UnknownSort(local + sep + 2, sort_name);
    }
    std::size_t eq = body.find('=', close);
    if (eq == std::string_view::npos) throw ParseError(local + close, "'=' after binder");
    ArithExpr expr = parse_expr_at(body.substr(eq + 1), local + eq + 1);
    if (!declared.insert(var).second) {
      throw ParseError(local, "distinct variable per assumption ('" + var + "' rebound)");
    }
    doc.assumptions.push_back(Assumption{std::move(var), sort, std::move(expr),
                                         std::string(body)});

    skip_ws();
    if (text.substr(pos, 3) == "and" &&
        (pos + 3 >= text.size() || !is_ident_char(text[pos + 3]))) {
      pos += 3;
      continue;
    }
    break;
  }

  skip_ws();
  if (text.substr(pos, 5) != "shows") throw ParseError(pos, "'shows'");
  pos += 5;
  auto [shows_offset, shows_text] = read_quoted();
  doc.shows = parse_equation_at(shows_text, shows_offset);

  // The dependency graph over assumption variables must be acyclic; a
  // reference to a variable defined by no assumption is left to fail at
  // evaluation time instead.
  std::map<std::string, std::vector<std::string>> deps;
  for (const Assumption& a : doc.assumptions) {
    std::vector<std::string> vars;
    a.defining_expr.collect_vars(vars);
    vars.erase(std::remove_if(vars.begin(), vars.end(),
                              [&](const std::string& v) { return declared.count(v) == 0; }),
               vars.end());
    deps[a.var] = std::move(vars);
  }
  std::map<std::string, int> state;  // 0 new, 1 visiting, 2 done
  std::vector<std::string> stack;
  auto visit = [&](auto&& self, const std::string& v) -> bool {
    int& s = state[v];
    if (s == 2) return true;
    if (s == 1) return false;
    s = 1;
    stack.push_back(v);
    for (const std::string& d : deps[v]) {
      if (!self(self, d)) return false;
    }
    stack.pop_back();
    s = 2;
    return true;
  };
  for (const Assumption& a : doc.assumptions) {
    if (!visit(visit, a.var)) {
      std::string cycle;
      for (const std::string& v : stack) cycle += (cycle.empty() ? "" : ", ") + v;
      throw CyclicDefinition(cycle);
    }
  }
  return doc;
}

namespace {

ProofStep classify_step(std::string_view raw, int index) {
  ProofStep step;
  step.index = index;
  step.raw_text = std::string(trim(raw));
  step.uses_assms = has_keyword_outside_quotes(raw, "assms");

  bool shows = has_keyword_outside_quotes(raw, "show") ||
               has_keyword_outside_quotes(raw, "thus");
  if (has_keyword_outside_quotes(raw, "have")) {
    step.kind = ProofStep::Kind::Have;
    for (const auto& [offset, quoted] : quoted_segments(raw)) {
      step.equations.push_back(parse_equation_at(quoted, offset));
    }
    if (step.equations.empty()) {
      throw ParseError(0, "quoted equation in a 'have' step");
    }
    return step;
  }
  if (shows && raw.find("?thesis") != std::string_view::npos) {
    step.kind = ProofStep::Kind::ShowThesis;
    return step;
  }
  if (shows) {
    // `show "..."` with an explicit goal: judged like a have.
    for (const auto& [offset, quoted] : quoted_segments(raw)) {
      step.equations.push_back(parse_equation_at(quoted, offset));
    }
    if (!step.equations.empty()) {
      step.kind = ProofStep::Kind::Have;
      return step;
    }
  }
  step.kind = ProofStep::Kind::Transition;
  return step;
}

}  // namespace

std::vector<ProofStep> parse_proof(std::string_view text) {
  // Strip the block delimiters.
  std::string_view body = text;
  std::size_t open = body.find("proof");
  if (open != std::string_view::npos) {
    std::size_t after = open + 5;
    while (after < body.size() &&
           (std::isspace(static_cast<unsigned char>(body[after])) || body[after] == '-')) {
      ++after;
    }
    body = body.substr(after);
  }
  std::size_t qed = body.rfind("qed");
  if (qed != std::string_view::npos) body = body.substr(0, qed);

  // Group lines into steps at have/then/show/thus boundaries; tactic
  // continuation lines attach to the step above.
  std::vector<std::string> groups;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == '\n') {
      std::string_view line = trim(body.substr(start, i - start));
      start = i + 1;
      if (line.empty()) continue;
      bool starts_step = contains_word(line.substr(0, 5), "have") ||
                         contains_word(line.substr(0, 5), "then") ||
                         contains_word(line.substr(0, 5), "show") ||
                         contains_word(line.substr(0, 5), "thus");
      if (groups.empty() || starts_step) {
        groups.emplace_back(line);
      } else {
        groups.back() += "\n";
        groups.back() += line;
      }
    }
  }

  std::vector<ProofStep> steps;
  steps.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    steps.push_back(classify_step(groups[i], static_cast<int>(i)));
  }
  return steps;
}

std::vector<ProofStep> parse_proof_steps(std::span<const std::string> messages) {
  std::vector<ProofStep> steps;
  steps.reserve(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    steps.push_back(classify_step(messages[i], static_cast<int>(i)));
  }
  return steps;
}

std::string render_theorem(const TheoremDocument& doc) {
  std::string out = "theorem " + doc.name + ":\n";
  for (std::size_t i = 0; i < doc.assumptions.size(); ++i) {
    const Assumption& a = doc.assumptions[i];
    out += i == 0 ? "    assumes \"" : "        and \"";
    out += "(" + a.var + "::" + to_string(a.sort) + ") = " + render_expr(a.defining_expr);
    out += "\"\n";
  }
  out += "    shows \"" + render_expr(doc.shows.lhs) + " = " + render_expr(doc.shows.rhs) + "\"";
  return out;
}

std::string render_proof(std::span<const ProofStep> steps) {
  std::string out = "proof -\n";
  for (const ProofStep& step : steps) {
    switch (step.kind) {
      case ProofStep::Kind::Transition:
        out += "    " + step.raw_text + "\n";
        break;
      case ProofStep::Kind::Have:
        // Several equations stay on one line so the grouping survives a
        // parse of the rendered block.
        out += "    have";
        for (const Equation& eq : step.equations) {
          out += " \"" + render_expr(eq.lhs) + " = " + render_expr(eq.rhs) + "\"";
        }
        out += step.uses_assms ? "\n        using assms by simp\n" : "\n        by simp\n";
        break;
      case ProofStep::Kind::ShowThesis:
        out += "    show ?thesis\n";
        out += step.uses_assms ? "        using assms by simp\n" : "        by simp\n";
        break;
    }
  }
  out += "qed";
  return out;
}

namespace {

// Locates a `proof -` block opener; a bare occurrence of the word inside
// an identifier does not count.
std::size_t find_proof_block(std::string_view text) {
  std::size_t pos = 0;
  while ((pos = text.find("proof", pos)) != std::string_view::npos) {
    bool left_ok = pos == 0 || !is_ident_char(text[pos - 1]);
    std::size_t after = pos + 5;
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (left_ok && after < text.size() && text[after] == '-') return pos;
    pos += 5;
  }
  return std::string_view::npos;
}

}  // namespace

FormatVerdict validate_theorem_format(std::string_view text) {
  try {
    TheoremDocument doc = parse_theorem(text);
    (void)doc;
    std::size_t proof_at = find_proof_block(text);
    if (proof_at != std::string_view::npos) {
      std::vector<ProofStep> steps = parse_proof(text.substr(proof_at));
      (void)steps;
    }
  } catch (const ParseError& e) {
    if (e.invalid_operator()) {
      return FormatVerdict::reject("invalid_operator", e.expected(), e.offset());
    }
    return FormatVerdict::reject("parse_error", e.expected(), e.offset());
  }
  return FormatVerdict::accept();
}

}  // namespace stepverify::arith
