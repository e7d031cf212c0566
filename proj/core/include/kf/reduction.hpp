#pragma once
// Cancellation of invertible differential components.  An arrow component is
// cancellable when it is an idempotent term (zero weight); cancelling the
// pair (src, dst) rewires a -> dst and src -> b into a -> b with the product
// label.  Edge selection is deterministic: smallest source index, then
// smallest target index, so reductions are reproducible across runs.

#include "kf/structures.hpp"

namespace kf {

// fully cancel a curved type D structure; the result has no idempotent label
// terms and is homotopy equivalent to the input over B(m,k)
TypeD reduce_type_d(const TypeD& D);

// same for a free bigraded complex: cancel unit (U^0 V^0) matrix entries
FreeComplex reduce_free(const FreeComplex& C);

// rank over F2; each row is a bitmask of column indices
int f2_rank(std::vector<uint64_t> rows);

// dimension of the homology of C mod (U,V) (i.e. generators minus twice the
// F2 rank of the unit part of the differential)
int hat_homology_rank(const FreeComplex& C);

} // namespace kf
