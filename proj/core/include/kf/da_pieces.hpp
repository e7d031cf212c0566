#pragma once
// DA action tables for the standard diagram pieces, recovered from the
// explicit DD bimodules (bimodules.hpp) by inverting the box tensor with the
// canonical DD bimodule.  An exact inversion of the explicit tables is
// impossible: a few of their terms (U-powers tensor a single E-letter on
// certain self-arrows) are produced by no canonical-DD path.  The inversion
// therefore targets box_reachable_form(...), the DD obtained by dropping the
// unreachable terms and re-closing the curved relation with reachable
// arrows; it is a valid curved DD agreeing with the explicit table on every
// reachable term.  Since every canonical-DD arrow carries a
// single algebra letter, the letter-sequence actions are an F2 linear system
// over the canonical path space (solve_letter_actions); actions on composite
// inputs are then forced by the curved DA structure relations (complete_da),
// allowing letter re-gaugings that keep the box output fixed (solve_da).
// Affine families in the U-power exponents are fitted afterwards so the
// table stays finite (generalize_da).

#include "kf/bimodules.hpp"
#include "kf/structures.hpp"

namespace kf {

struct SolveBounds {
  int path_cap = 10;    // max canonical-DD path length per letter action
  int weight_cap = 8;   // doubled input weight for the relation closure
  // skip target terms no canonical-DD path can produce instead of throwing
  // (they are reported through the dropped list)
  bool drop_unreachable = false;
};

// identity bimodule of B(m,k): delta^1_2(x, b) = b (x) x for every pure b
DATable identity_da(int m, int k, const Matching& M);

// The curved DD with the same generators as target that the box tensor can
// actually reproduce: target terms whose dual part no canonical-DD path can
// produce are dropped, and the curved DD relation is re-closed by adding
// reachable arrows (typically marker arrows whose dual differential takes
// over the role of the dropped terms).  Throws if no such closure exists
// within the bounds.  If target itself is fully reachable this returns it
// unchanged.
DD box_reachable_form(const DD& target, const DD& canon,
                      const SolveBounds& bounds = {});

// concrete letter-sequence actions with box_da_dd(T, canon) == target;
// throws std::runtime_error if no consistent assignment exists.  With
// bounds.drop_unreachable, provably unreachable target terms are collected
// into *dropped (if given) and excluded from the system.
DATable solve_letter_actions(const DD& target, const DD& canon,
                             const SolveBounds& bounds = {},
                             std::vector<std::string>* dropped = nullptr);

// compare a box output against the target using the generator names: a box
// generator "x|p" corresponds to the target generator "x"
bool dd_equal_named(const DD& boxed, const DD& target);

// extend T with composite-input actions until the curved DA relations hold
// for every input sequence of doubled weight <= bounds.weight_cap
void complete_da(DATable& T, const SolveBounds& bounds = {});

// full inversion: box_reachable_form + letter solve + relation closure,
// solved jointly so the completion may re-gauge letter actions in
// combinations that leave the boxed DD fixed.  On return
// box_da_dd(result, canon) equals the form (written to *form if given) and
// the curved DA relations hold up to bounds.weight_cap.
DATable solve_da(const DD& target, const DD& canon,
                 const SolveBounds& bounds = {}, DD* form = nullptr);

// replace concrete action families by parametric ones (affine U-exponents)
DATable generalize_da(const DATable& T);

} // namespace kf
