#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trilin/expr.hpp"
#include "trilin/zero_test.hpp"

namespace trilin {

struct Unknown {
  std::string name;
  std::vector<std::string> args;
  bool may_vanish = false;
};

struct Equation {
  Expr expr;           // must vanish identically in x, u, p, q
  std::string solves;  // the unknown this equation determines
  std::string origin;  // human-readable role of the equation
};

// Auxiliary unknowns and the differential conditions they satisfy. Unknowns
// appear as placeholder symbols (H, H_x, H_u, ...).
struct DeterminingSystem {
  std::string branch;
  std::vector<Unknown> unknowns;  // in solving order
  std::vector<Equation> equations;
  std::vector<std::string> params;
  // Values already fixed, e.g. phi for the Yumaguzhin construction.
  Bindings fixed;
  // Free-form data needed to rebuild the target (K, J, sign, ...).
  Bindings data;

  Placeholders placeholders() const;
  const Unknown& unknown(const std::string& name) const;
  std::vector<Expr> equations_for(const std::string& name) const;

  std::string to_json() const;
  static DeterminingSystem from_json(const std::string& text);
};

// Replaces the placeholder symbols of one unknown by value and its partial
// derivatives with respect to the declared arguments.
Expr substitute_unknown(const Expr& e, const Placeholders& ph, const std::string& unknown,
                        const Expr& value);
Expr substitute_unknowns(const Expr& e, const Placeholders& ph, const Bindings& values);

// Clears denominators and returns the coefficients of the monomials in vars,
// each stripped of monomial and numeric content free of placeholders.
// Throws NotPolynomialInJetVars when vars occur non-polynomially.
std::vector<Expr> match_coefficients(const Expr& e, const std::vector<std::string>& vars);

enum class AnsatzFamily { Monomial, SumOfMonomials, PolynomialOfDegree };

std::string to_string(AnsatzFamily f);

struct AnsatzOptions {
  std::vector<AnsatzFamily> families = {AnsatzFamily::Monomial, AnsatzFamily::SumOfMonomials,
                                        AnsatzFamily::PolynomialOfDegree};
  int max_exp = 6;       // monomial exponents in [-max_exp, max_exp]
  int extra_exp = 2;     // exponents of non-variable factors
  int sum_exp = 2;       // monomials of the sum family
  int sum_terms = 3;
  int degree = 4;
  int budget = 20000;    // candidates screened per unknown
  int alternates = 3;    // solutions kept for unknowns of nonlinear equations
  std::uint64_t seed = 20240611;
  ZeroTestOptions zero;
};

struct Candidate {
  Expr value;
  AnsatzFamily family = AnsatzFamily::Monomial;
};

// Candidate solutions of the equations of one unknown, every one of them
// exactly verified, in deterministic order. Throws SearchBudgetExceeded.
std::vector<Candidate> solve_unknown(const std::vector<Expr>& equations, const Unknown& unknown,
                                     const Placeholders& ph, const AnsatzOptions& options,
                                     std::size_t limit);

struct AnsatzResult {
  bool solved = false;
  Bindings values;
  std::map<std::string, AnsatzFamily> families;
  std::map<std::string, std::vector<Expr>> alternates;
  // On failure: the first unknown without a candidate, and the system with
  // the unknowns solved before it moved into `fixed`.
  std::string failed_unknown;
  DeterminingSystem residual;
};

AnsatzResult solve_ansatz(const DeterminingSystem& sys, const AnsatzOptions& options = {});

// True when every equation vanishes under the given values.
bool satisfies(const DeterminingSystem& sys, const Bindings& values,
               const ZeroTestOptions& options = {});

}  // namespace trilin
