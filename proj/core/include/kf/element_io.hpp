#pragma once
// Textual element syntax.
//
//   element := '0' | term ('+' term)*
//   term    := factor ('*' factor)*
//   factor  := 'I{' int (',' int)* '}' | 'L' int | 'R' int
//            | 'U' int ('^' int)? | 'E' int | '1'
//
// Whitespace between tokens is ignored.  Elements are parsed by multiplying
// the listed generators in order, so any expression denotes a well-defined
// algebra element; printing emits one product of generators per pure term
// (left idempotent, then transition letters, then U powers, then E markers),
// which round-trips exactly.

#include "kf/algebra.hpp"
#include "kf/dual_algebra.hpp"

#include <stdexcept>

namespace kf {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Elem parse_elem(const std::string& s, int m, int k, bool quotient = true);
DualElem parse_dual(const std::string& s, int n, const Matching& M);

std::string term_str(const Term& t, int m);
std::string elem_str(const Elem& e);
std::string dual_term_str(const DualMono& t, int n);
std::string dual_str(const DualElem& e);

} // namespace kf
