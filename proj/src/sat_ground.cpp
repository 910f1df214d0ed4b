#include "stepverify/sat/ground.hpp"

#include <algorithm>
#include <map>

#include "stepverify/sat/solver.hpp"

namespace stepverify::sat {

namespace {

using fld::Formula;
using Kind = fld::Formula::Kind;

Formula substitute(const Formula& f, const std::string& var, const std::string& constant) {
  switch (f.kind()) {
    case Kind::Atom:
      if (f.arg() && f.arg()->kind == fld::Term::Kind::Variable && f.arg()->name == var) {
        return Formula::atom(f.predicate(), fld::Term::constant(constant));
      }
      return f;
    case Kind::Not:
      return Formula::negation(substitute(f.child(), var, constant));
    case Kind::And:
      return Formula::conjunction(substitute(f.lhs(), var, constant),
                                  substitute(f.rhs(), var, constant));
    case Kind::Or:
      return Formula::disjunction(substitute(f.lhs(), var, constant),
                                  substitute(f.rhs(), var, constant));
    case Kind::Implies:
      return Formula::implication(substitute(f.lhs(), var, constant),
                                  substitute(f.rhs(), var, constant));
    case Kind::Forall:
    case Kind::Exists:
      // An inner binder of the same name shadows the outer one.
      if (f.var() == var) return f;
      if (f.kind() == Kind::Forall) {
        return Formula::forall(f.var(), substitute(f.child(), var, constant));
      }
      return Formula::exists(f.var(), substitute(f.child(), var, constant));
  }
  return f;
}

std::string fresh_witness(const std::vector<std::string>& taken) {
  for (int i = 1;; ++i) {
    std::string candidate = "w" + std::to_string(i);
    if (std::find(taken.begin(), taken.end(), candidate) == taken.end()) return candidate;
  }
}

}  // namespace

GroundingDomain GroundingDomain::over(std::vector<std::string> constants) {
  GroundingDomain d;
  d.constants = std::move(constants);
  if (d.constants.empty()) {
    d.constants.push_back(fresh_witness(d.constants));
    d.includes_fresh_witness = true;
  }
  return d;
}

GroundingDomain GroundingDomain::with_witness(std::vector<std::string> constants) {
  GroundingDomain d;
  d.constants = std::move(constants);
  d.constants.push_back(fresh_witness(d.constants));
  d.includes_fresh_witness = true;
  return d;
}

GroundingDomain GroundingDomain::for_problem(const fld::LogicProblem& problem) {
  std::vector<std::string> constants;
  fld::collect_constants(problem.hypothesis, constants);
  for (const auto& [id, f] : problem.facts) fld::collect_constants(f, constants);
  constants.push_back(fresh_witness(constants));
  GroundingDomain d;
  d.constants = std::move(constants);
  d.includes_fresh_witness = true;
  return d;
}

GroundingDomain GroundingDomain::for_problem(const fld::LogicProblem& problem,
                                             const fld::DeductionScript& script) {
  std::vector<std::string> constants;
  fld::collect_constants(problem.hypothesis, constants);
  for (const auto& [id, f] : problem.facts) fld::collect_constants(f, constants);
  for (const auto& step : script.steps) fld::collect_constants(step.conclusion, constants);
  constants.push_back(fresh_witness(constants));
  GroundingDomain d;
  d.constants = std::move(constants);
  d.includes_fresh_witness = true;
  return d;
}

fld::Formula ground(const fld::Formula& f, const GroundingDomain& domain) {
  switch (f.kind()) {
    case Kind::Atom:
      return f;
    case Kind::Not:
      return Formula::negation(ground(f.child(), domain));
    case Kind::And:
      return Formula::conjunction(ground(f.lhs(), domain), ground(f.rhs(), domain));
    case Kind::Or:
      return Formula::disjunction(ground(f.lhs(), domain), ground(f.rhs(), domain));
    case Kind::Implies:
      return Formula::implication(ground(f.lhs(), domain), ground(f.rhs(), domain));
    case Kind::Forall:
    case Kind::Exists: {
      bool universal = f.kind() == Kind::Forall;
      std::optional<Formula> acc;
      for (const std::string& c : domain.constants) {
        Formula inst = ground(substitute(f.child(), f.var(), c), domain);
        if (!acc) {
          acc = std::move(inst);
        } else {
          acc = universal ? Formula::conjunction(std::move(*acc), std::move(inst))
                          : Formula::disjunction(std::move(*acc), std::move(inst));
        }
      }
      return *acc;  // domains are nonempty by construction
    }
  }
  return f;
}

namespace {

std::string atom_key(const Formula& atom) {
  std::string key = "{" + atom.predicate() + "}";
  if (atom.arg()) {
    if (atom.arg()->kind == fld::Term::Kind::Constant) {
      key += "{" + atom.arg()->name + "}";
    } else {
      key += atom.arg()->name;
    }
  }
  return key;
}

void collect_atoms(const Formula& f, std::vector<std::string>& order,
                   std::map<std::string, int>& index) {
  if (f.kind() == Kind::Atom) {
    std::string key = atom_key(f);
    if (index.emplace(key, static_cast<int>(order.size())).second) order.push_back(key);
    return;
  }
  if (f.kind() == Kind::Not || f.is_quantifier()) {
    collect_atoms(f.child(), order, index);
    return;
  }
  collect_atoms(f.lhs(), order, index);
  collect_atoms(f.rhs(), order, index);
}

// Negation normal form over {Atom, Not, And, Or}; implications rewritten.
Formula to_nnf(const Formula& f, bool negated) {
  switch (f.kind()) {
    case Kind::Atom:
      return negated ? Formula::negation(f) : f;
    case Kind::Not:
      return to_nnf(f.child(), !negated);
    case Kind::And:
      if (negated) {
        return Formula::disjunction(to_nnf(f.lhs(), true), to_nnf(f.rhs(), true));
      }
      return Formula::conjunction(to_nnf(f.lhs(), false), to_nnf(f.rhs(), false));
    case Kind::Or:
      if (negated) {
        return Formula::conjunction(to_nnf(f.lhs(), true), to_nnf(f.rhs(), true));
      }
      return Formula::disjunction(to_nnf(f.lhs(), false), to_nnf(f.rhs(), false));
    case Kind::Implies:
      if (negated) {
        return Formula::conjunction(to_nnf(f.lhs(), false), to_nnf(f.rhs(), true));
      }
      return Formula::disjunction(to_nnf(f.lhs(), true), to_nnf(f.rhs(), false));
    case Kind::Forall:
    case Kind::Exists:
      throw QuantifierPresent();
  }
  throw QuantifierPresent();
}

bool is_literal(const Formula& f) {
  return f.kind() == Kind::Atom || (f.kind() == Kind::Not && f.child().kind() == Kind::Atom);
}

// Collects the literals of a pure disjunction tree; false if a conjunction
// occurs underneath.
bool flatten_clause(const Formula& f, std::vector<const Formula*>& literals) {
  if (is_literal(f)) {
    literals.push_back(&f);
    return true;
  }
  if (f.kind() == Kind::Or) {
    return flatten_clause(f.lhs(), literals) && flatten_clause(f.rhs(), literals);
  }
  return false;
}

class TseitinEncoder {
 public:
  TseitinEncoder(CnfFormula& cnf, const std::map<std::string, int>& atom_index)
      : cnf_(cnf), atom_index_(atom_index) {}

  Literal literal_for_atom(const Formula& f) const {
    if (f.kind() == Kind::Atom) return atom_index_.at(atom_key(f)) + 1;
    return -(atom_index_.at(atom_key(f.child())) + 1);
  }

  // Returns a literal equivalent to the NNF subformula, introducing an
  // auxiliary variable per internal connective.
  Literal encode(const Formula& f) {
    if (is_literal(f)) return literal_for_atom(f);

    Literal left = encode(f.lhs());
    Literal right = encode(f.rhs());
    Literal aux = ++cnf_.num_vars;  // 1-based literal for the new variable
    if (f.kind() == Kind::And) {
      // aux <-> left & right
      cnf_.add_clause(Clause({-aux, left}));
      cnf_.add_clause(Clause({-aux, right}));
      cnf_.add_clause(Clause({aux, -left, -right}));
    } else {
      // aux <-> left v right
      cnf_.add_clause(Clause({-aux, left, right}));
      cnf_.add_clause(Clause({aux, -left}));
      cnf_.add_clause(Clause({aux, -right}));
    }
    return aux;
  }

 private:
  CnfFormula& cnf_;
  const std::map<std::string, int>& atom_index_;
};

void flatten_conjuncts(const Formula& f, std::vector<const Formula*>& out) {
  if (f.kind() == Kind::And) {
    flatten_conjuncts(f.lhs(), out);
    flatten_conjuncts(f.rhs(), out);
    return;
  }
  out.push_back(&f);
}

}  // namespace

CnfFormula to_cnf(const fld::Formula& f) {
  if (fld::contains_quantifier(f)) throw QuantifierPresent();

  std::vector<std::string> atom_order;
  std::map<std::string, int> atom_index;
  collect_atoms(f, atom_order, atom_index);

  CnfFormula cnf;
  cnf.num_vars = static_cast<int>(atom_order.size());
  for (int i = 0; i < cnf.num_vars; ++i) cnf.var_names.emplace(i, atom_order[i]);

  Formula nnf = to_nnf(f, false);

  std::vector<const Formula*> conjuncts;
  flatten_conjuncts(nnf, conjuncts);

  TseitinEncoder encoder(cnf, atom_index);
  for (const Formula* conjunct : conjuncts) {
    std::vector<const Formula*> literals;
    if (flatten_clause(*conjunct, literals)) {
      std::vector<Literal> lits;
      lits.reserve(literals.size());
      for (const Formula* lit : literals) lits.push_back(encoder.literal_for_atom(*lit));
      cnf.add_clause(Clause(std::move(lits)));
    } else {
      cnf.add_clause(Clause({encoder.encode(*conjunct)}));
    }
  }
  return cnf;
}

bool entails(std::span<const fld::Formula> premises, const fld::Formula& conclusion,
             const GroundingDomain& domain) {
  std::optional<Formula> body;
  for (const Formula& p : premises) {
    Formula g = ground(p, domain);
    body = body ? Formula::conjunction(std::move(*body), std::move(g)) : std::move(g);
  }
  Formula negated_goal = Formula::negation(ground(conclusion, domain));
  body = body ? Formula::conjunction(std::move(*body), std::move(negated_goal))
              : std::move(negated_goal);
  return !solve(to_cnf(*body)).satisfiable;
}

}  // namespace stepverify::sat
