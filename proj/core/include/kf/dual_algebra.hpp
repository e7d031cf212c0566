#pragma once
// The quotient dual algebra on 2n strands: B(2n, n+1) extended by
// Clifford-type generators E_1,...,E_2n.  Relations: E_i commutes with all of
// B; E_i^2 = 0; E_iE_j = E_jE_i for unmatched pairs; E_jE_i = E_iE_j + 1 for
// matched pairs.  Differential: dE_i = U_i, d|_B = 0, extended by Leibniz
// (char 2).  Normal form: B-part first, then markers E_i in increasing order.

#include "kf/algebra.hpp"

namespace kf {

struct DualMono {
  Term body;           // pure element of B(2n, n+1)
  uint32_t markers = 0; // bit i set => factor E_i, 1 <= i <= 2n
  auto operator<=>(const DualMono&) const = default;
};

struct DualElem {
  int n = 0;           // strand count is 2n; idempotents have size n+1
  std::set<DualMono> terms;
  bool is_zero() const { return terms.empty(); }
  bool operator==(const DualElem&) const = default;
};

DualElem dual_zero(int n);
void dual_add_term(DualElem& e, const DualMono& t);
DualElem dual_add(const DualElem& a, const DualElem& b);

// inject b in B(2n,n+1) into the dual algebra
DualElem dual_from_b(const Elem& b, int n);
DualElem dual_idem(Idem x, int n);
DualElem dual_identity(int n);
DualElem dual_E(int i, int n);          // sum over idempotents of I_x E_i
DualElem dual_gen_L(int i, int n);
DualElem dual_gen_R(int i, int n);
DualElem dual_gen_U(int i, int n, int power = 1);

DualElem dual_mul(const DualElem& a, const DualElem& b, const Matching& M);
DualElem dual_diff(const DualElem& a);

int dual_delta2(const DualMono& t);     // 2*Delta = 2*#markers - 2*weight
int dual_delta2(const DualElem& e);     // asserts homogeneity
// doubled Alexander footprint: body weight plus 1 per marker
std::vector<int> dual_alex2(const DualMono& t, const Matching& M);
std::vector<int> dual_alex2(const DualElem& e, const Matching& M);

} // namespace kf
