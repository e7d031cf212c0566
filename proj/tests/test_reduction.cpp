#include "doctest.h"
#include "fixtures.hpp"
#include "kf/bimodules.hpp"
#include "kf/element_io.hpp"
#include "kf/reduction.hpp"

#include <random>

using namespace kf;

namespace {

using Mat = std::vector<uint64_t>;

Mat mat_mul(const Mat& A, const Mat& B) {
  Mat C(A.size(), 0);
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < B.size(); ++j)
      if (A[i] >> j & 1) C[i] ^= B[j];
  return C;
}

// inverse over F2 by elimination; requires full rank
Mat mat_inv(Mat A) {
  int n = (int)A.size();
  Mat I(n);
  for (int i = 0; i < n; ++i) I[i] = 1ull << i;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && !(A[pivot] >> col & 1)) ++pivot;
    REQUIRE(pivot < n);
    std::swap(A[col], A[pivot]);
    std::swap(I[col], I[pivot]);
    for (int r = 0; r < n; ++r)
      if (r != col && (A[r] >> col & 1)) {
        A[r] ^= A[col];
        I[r] ^= I[col];
      }
  }
  return I;
}

} // namespace

TEST_CASE("rank over F2") {
  CHECK(f2_rank({}) == 0);
  CHECK(f2_rank({0, 0}) == 0);
  CHECK(f2_rank({1, 2, 4}) == 3);
  CHECK(f2_rank({3, 5, 6}) == 2); // third row is the sum of the first two
  CHECK(f2_rank({7, 7, 7}) == 1);
}

TEST_CASE("type D cancellation rewires through the algebra") {
  // a --U1--> y <--1-- x --U2--> b over B(2,1), all generators at idem {1}.
  // Cancelling (x,y) rewires a -> b with label U1*U2, which dies in the
  // quotient, so the result is two generators with no arrows.
  TypeD D;
  D.m = 2;
  D.k = 1;
  Idem s = idem_from({1});
  int a = D.add_gen("a", s);
  int x = D.add_gen("x", s);
  int y = D.add_gen("y", s);
  int b = D.add_gen("b", s);
  D.add_arrow(a, y, parse_elem("I{1}*U1", 2, 1));
  D.add_arrow(x, y, parse_elem("I{1}", 2, 1));
  D.add_arrow(x, b, parse_elem("I{1}*U2", 2, 1));
  CHECK(!D.reduced());

  TypeD R = reduce_type_d(D);
  CHECK(R.gen_ids == std::vector<std::string>{"a", "b"});
  CHECK(R.arrows.empty());
  CHECK(R.reduced());
  CHECK(validate_type_d(R).pass);
}

TEST_CASE("trefoil cap structure") {
  SUBCASE("validates for exactly one matching") {
    int good = 0;
    for (const auto& M : all_matchings(2)) {
      TypeD D = fixtures::trefoil_cap(M);
      // two of the ten drawn labels are killed by the quotient
      CHECK(D.arrows.size() == 8);
      if (validate_type_d(D).pass) {
        ++good;
        CHECK(M.contains_pair(1, 2));
        CHECK(M.contains_pair(3, 4));
      }
    }
    CHECK(good == 1);
  }
  SUBCASE("already reduced; reduction is the identity on it") {
    TypeD D = fixtures::trefoil_cap();
    CHECK(D.reduced());
    TypeD R = reduce_type_d(D);
    CHECK(R.gen_ids == D.gen_ids);
    CHECK(R.idems == D.idems);
    CHECK(R.arrows == D.arrows);
  }
}

TEST_CASE("free complex reduction computes homology rank") {
  // conjugate a disjoint-pair differential by a random change of basis;
  // full cancellation must recover the number of unpaired generators
  std::mt19937 rng(20260825);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + (int)(rng() % 11);
    int pairs = (int)(rng() % (n / 2 + 1));
    Mat d0(n, 0);
    for (int p = 0; p < pairs; ++p) d0[2 * p] = 1ull << (2 * p + 1);

    Mat P(n, 0);
    do {
      for (int i = 0; i < n; ++i)
        P[i] = rng() & ((n >= 64 ? ~0ull : (1ull << n) - 1));
    } while (f2_rank(P) != n);
    Mat d = mat_mul(mat_mul(P, d0), mat_inv(P));

    Mat d2 = mat_mul(d, d);
    for (int i = 0; i < n; ++i) REQUIRE(d2[i] == 0);

    FreeComplex C;
    C.base = FreeComplex::Base::F2;
    for (int i = 0; i < n; ++i) C.gen_ids.push_back("g" + std::to_string(i));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i] >> j & 1) C.add_entry(i, j, 0, 0);

    int expect = n - 2 * pairs;
    CHECK(hat_homology_rank(C) == expect);
    FreeComplex R = reduce_free(C);
    CAPTURE(trial);
    CAPTURE(n);
    CAPTURE(pairs);
    CHECK((int)R.gen_ids.size() == expect);
    CHECK(R.diff.empty());
  }
}
