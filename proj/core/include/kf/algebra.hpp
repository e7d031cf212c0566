#pragma once
// Strands-style bordered algebras B0(m,k), B(m,k) and the subalgebra C(n),
// over F2.  Idempotents are k-element subsets of {0,...,m}, stored as
// bitmasks.  A pure algebra element is determined by its two idempotents and
// its weight vector; weights live in (1/2)Z so we store doubled weights as
// ints.  The quotient algebra B(m,k) = B0(m,k)/J is handled by testing each
// pure term for membership in the ideal J and dropping it.

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace kf {

using Idem = uint32_t; // bit i set <=> i is in the idempotent state, 0 <= i <= m

int popcount(Idem x);
std::vector<int> idem_elems(Idem x);            // sorted list of members
Idem idem_from(const std::vector<int>& xs);
std::string idem_str(Idem x);                   // "{1,3}"

// v^x_i = #{ x in state | x >= i }, for i = 1..m
std::vector<int> weight_vector(Idem x, int m);

// all k-element subsets of {0..m}
std::vector<Idem> all_states(int m, int k);

// One pure term: I_left * U^w * I_right with doubled weight vector dw
// (dw[i-1] = 2 * weight_i).
struct Term {
  Idem left = 0;
  Idem right = 0;
  std::vector<int> dw;
  auto operator<=>(const Term&) const = default;
};

// F2 linear combination of pure terms of B0(m,k).
struct Elem {
  int m = 0;
  std::set<Term> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const Elem&) const = default;
};

// minimal doubled weight |v^x - v^y| componentwise; a term is a valid pure
// element of B0 iff dw_i >= min_i and dw_i == min_i (mod 2)
std::vector<int> min_dw(Idem x, Idem y, int m);
bool term_valid(const Term& t, int m);

bool too_far(Idem x, Idem y);
// membership in the two-sided ideal J generated by L_{i+1}L_i, R_iR_{i+1}
// and I_x U_j for x disjoint from {j-1,j}
bool in_ideal(const Term& t, int m);

// --- element arithmetic (char 2) ---
Elem zero(int m);
Elem add(const Elem& a, const Elem& b);
void add_term(Elem& e, const Term& t);          // toggles (F2)
// product; if quotient is true, reduce mod J (i.e. work in B(m,k))
Elem mul(const Elem& a, const Elem& b, bool quotient = true);

// --- distinguished elements of B(m,k) ---
Elem idem_elem(Idem x, int m);
Elem identity(int m, int k);
Elem gen_L(int i, int m, int k, bool quotient = true);
Elem gen_R(int i, int m, int k, bool quotient = true);
Elem gen_U(int j, int m, int k, int power = 1, bool quotient = true);

// A matching: partition of {1,...,2n} into ordered pairs (first,second); the
// ordering fixes signs of Alexander gradings.
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  int n() const { return (int)pairs.size(); }
  int partner(int i) const;
  bool contains_pair(int i, int j) const;
  bool operator==(const Matching&) const = default;
};

Matching consecutive_matching(int n); // {(2i-1, 2i)}

// curvature mu_0 = sum_{(i,j) in M} U_i U_j in B(2n,n)
Elem mu0(const Matching& M, int n);

// --- gradings (doubled, to stay in Z) ---
int delta2(const Term& t);                      // 2 * Delta = -sum dw_i
int delta2(const Elem& e);                      // requires homogeneous; asserts
int alex2(const Term& t, int i, int j);         // 2 * (w_i - w_j)
std::vector<int> alex2(const Elem& e, const Matching& M); // homogeneous

// --- the subalgebra C(n) of B(2n,n): idempotents avoiding {0,2n} ---
bool in_C(Idem x, int n);
Elem restrict_C(const Elem& e, int n);          // drop terms outside C(n)
std::vector<Idem> all_states_C(int n);

} // namespace kf
