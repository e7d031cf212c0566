#pragma once
// Explicit bimodule data for the diagram pieces: the canonical DD bimodule,
// the DD bimodules of a local minimum and of positive/negative crossings, and
// the one-generator type D module of the standard maxima configuration.
//
// The minimum DD is not transcribed from a table; it is computed by boxing
// the dual-side DA bimodule of the minimum (whose actions are determined by
// an explicit weight-transport map) against the canonical DD.  validate_dd is
// one arbiter for the remaining convention choice (MinMarker); the exact
// identity "DA table (x) canonical DD = minimum DD" settles it: only the
// PartnerOfC convention is reachable by canonical-DD paths.

#include "kf/structures.hpp"

namespace kf {

// relabel a matching through the transposition i <-> i+1
Matching transpose_matching(const Matching& M, int i);

// matching induced on {1..2n} when a cap joins strands c, c+1 of a matching
// on {1..2n+2}: pairs away from the cap pull back through the insertion map
// phi_c, and the partners of c and c+1 become matched to each other.
// Throws if {c,c+1} is itself a pair (the cap would close a circle).
Matching contract_matching(const Matching& M1, int c);

// all perfect matchings on {1,...,2n}
std::vector<Matching> all_matchings(int n);

// insertion map phi_c, extended by phi_c(0) = 0
int phi_c(int j, int c);

// one generator at the idempotent {1,3,...,2n-1}, no differential, with the
// consecutive matching (which kills the curvature at that idempotent)
TypeD standard_k(int n);

// canonical DD bimodule between B(2n,n) and the dual algebra on 2n strands,
// both with matching M: generators are the n-element states x (dual
// idempotent the complement), differential sum L_i(x)R_i + R_i(x)L_i +
// U_i(x)E_i
DD canonical_dd(int n, const Matching& M);

// ---- local minimum (cap joining strands c, c+1 of the upper diagram) ----

// which of the two strands matched into the cap carries the extra marker in
// the weight-transport map (and, with it, which of U_c E_{c+1} / U_{c+1} E_c
// appears in the one-input action)
enum class MinMarker { PartnerOfCPlus1, PartnerOfC };

// generator index set: states y for the dual algebra on 2n+2 strands with
// c in y and |y cap {c-1,c,c+1}| <= 2
std::vector<Idem> min_allowed_states(int n, int c);

// the B(2n,n)-state paired with an allowed y: the unique x with
// |y cap {c-1,c,c+1}| + |x cap {c-1}| = 2 and phi_c(x) disjoint from y
Idem min_psi_prime(Idem y, int n, int c);

// DD bimodule of the minimum: B side B(2n,n) with the contracted matching,
// dual side on 2n+2 strands with matching M1
DD dd_min(int n, int c, const Matching& M1,
          MinMarker marker = MinMarker::PartnerOfC);

// ---- crossings between strands i, i+1 (1 <= i <= 2n-1) ----

// B side B(2n,n) with matching M, dual side on 2n strands with matching
// transpose_matching(M, i)
DD dd_pos(int n, int i, const Matching& M);
DD dd_neg(int n, int i, const Matching& M);

} // namespace kf
