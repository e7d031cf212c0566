#pragma once
// Shared hand-computed fixtures.

#include "kf/element_io.hpp"
#include "kf/structures.hpp"

namespace kf::fixtures {

// Type D structure of the 2-bridge cap with three crossings (the trefoil's
// upper diagram on four strands), five generators.  Two of the ten listed
// labels (L2*U1 and R3*U4) die in the quotient: U1 slides past L2 onto
// I{2,3} where it vanishes, and likewise U4 past R3 onto I{1,2}.  The
// structure relation holds for the matching {{1,2},{3,4}} only: the
// surviving compositions at each generator reproduce exactly the part of
// U1*U2 + U3*U4 that the idempotent keeps alive.
inline TypeD trefoil_cap(const Matching& M = Matching{{{1, 2}, {3, 4}}}) {
  int m = 4, k = 2;
  TypeD D;
  D.m = m;
  D.k = k;
  D.matching = M;
  int x1 = D.add_gen("x1", idem_from({2, 3}));
  int x2 = D.add_gen("x2", idem_from({2, 3}));
  int t = D.add_gen("t", idem_from({1, 3}));
  int y1 = D.add_gen("y1", idem_from({1, 2}));
  int y2 = D.add_gen("y2", idem_from({1, 2}));
  auto lbl = [&](int src, int dst, const char* s) {
    Elem e = mul(mul(idem_elem(D.idems[src], m), parse_elem(s, m, k)),
                 idem_elem(D.idems[dst], m));
    D.add_arrow(src, dst, e);
  };
  lbl(x1, x2, "U4");
  lbl(x2, x1, "U3");
  lbl(x2, t, "L2*U1");
  lbl(t, x2, "R2");
  lbl(t, y1, "L3");
  lbl(y1, t, "R3*U4");
  lbl(y1, y2, "U2");
  lbl(y2, y1, "U1");
  lbl(x2, y2, "L2*L3");
  lbl(y1, x1, "R3*R2");
  return D;
}

} // namespace kf::fixtures
