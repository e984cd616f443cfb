#pragma once

// Parser for the compact expression grammar embedded in input documents.
//
// Three entry points share one lexer and resolver:
//
//   * elements  - Laurent polynomials in the declared group variables with
//                 scalar coefficients: integers, rationals p/q, parameter
//                 names, variable names, + - * ^, parentheses, plus the
//                 scalar builtins exp(<parameter form>) and zeta;
//   * scalars   - the same grammar with no group variables in scope;
//   * words     - free words in the generators, letters name or name^power,
//                 separated by whitespace or '*'.
//
// '/' is part of a rational literal only, so q^1/2 is rejected with a
// message demanding parentheses instead of parsing as (q^1)/2.  Fractional
// exponents are accepted exactly when the base is an invertible unit (an
// exponential or a root of unity); negative exponents additionally accept
// torus monomials.  Every diagnostic carries a column number.

#include <string>

#include "twist/hopf.hpp"
#include "twist/twisted.hpp"

namespace twist::cli {

hopf::Element parse_element(const std::string& text, const hopf::GroupData& g);
scalars::Scalar parse_scalar(const std::string& text, const scalars::ParamTable& pt);
twistalg::Word parse_word(const std::string& text, const hopf::GroupData& g);

}  // namespace twist::cli
