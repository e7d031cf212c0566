#include "doctest.h"
#include "kf/dual_algebra.hpp"

#include <random>

using namespace kf;

namespace {

DualElem random_elem(int n, const Matching& M, std::mt19937& rng, int nterms,
                     int wbudget) {
  int m = 2 * n;
  auto states = all_states(m, n + 1);
  std::uniform_int_distribution<size_t> pick_state(0, states.size() - 1);
  std::uniform_int_distribution<int> pick_w(0, wbudget);
  std::uniform_int_distribution<int> coin(0, 1);
  DualElem e = dual_zero(n);
  for (int t = 0; t < nterms; ++t) {
    Idem x = states[pick_state(rng)];
    // random E-word over a random body I_x U^w
    std::vector<int> dw(m, 0);
    int budget = pick_w(rng);
    for (int b = 0; b < budget; ++b) {
      std::uniform_int_distribution<int> pick_i(1, m);
      dw[pick_i(rng) - 1] += 2;
    }
    Term body{x, x, dw};
    if (in_ideal(body, m)) continue;
    uint32_t markers = 0;
    for (int i = 1; i <= m; ++i)
      if (coin(rng)) markers |= (1u << i);
    dual_add_term(e, DualMono{body, markers});
  }
  return e;
}

std::vector<Matching> matchings_upto(int n) {
  std::vector<Matching> out = {consecutive_matching(n)};
  if (n == 2) {
    out.push_back(Matching{{{1, 4}, {2, 3}}});
    out.push_back(Matching{{{1, 3}, {2, 4}}});
  }
  if (n == 3) {
    out.push_back(Matching{{{1, 6}, {2, 5}, {3, 4}}});
    out.push_back(Matching{{{1, 4}, {2, 6}, {3, 5}}});
  }
  return out;
}

} // namespace

TEST_CASE("Clifford relations") {
  SUBCASE("matched pair anticommutator is 1") {
    Matching M{{{1, 2}}};
    int n = 1;
    DualElem lhs = dual_add(dual_mul(dual_E(1, n), dual_E(2, n), M),
                            dual_mul(dual_E(2, n), dual_E(1, n), M));
    CHECK(lhs == dual_identity(n));
  }
  SUBCASE("unmatched pair commutes") {
    Matching M{{{1, 2}, {3, 4}}};
    int n = 2;
    DualElem lhs = dual_add(dual_mul(dual_E(1, n), dual_E(3, n), M),
                            dual_mul(dual_E(3, n), dual_E(1, n), M));
    CHECK(lhs.is_zero());
  }
  SUBCASE("squares vanish") {
    Matching M{{{1, 2}}};
    CHECK(dual_mul(dual_E(2, 1), dual_E(2, 1), M).is_zero());
  }
}

TEST_CASE("E commutes with B") {
  int n = 2;
  Matching M{{{1, 4}, {2, 3}}};
  for (int i = 1; i <= 2 * n; ++i)
    for (int j = 1; j <= 2 * n; ++j) {
      for (DualElem b :
           {dual_gen_L(j, n), dual_gen_R(j, n), dual_gen_U(j, n)}) {
        CHECK(dual_mul(dual_E(i, n), b, M) == dual_mul(b, dual_E(i, n), M));
      }
    }
}

TEST_CASE("differential") {
  SUBCASE("dE_i = U_i") {
    int n = 2;
    for (int i = 1; i <= 2 * n; ++i)
      CHECK(dual_diff(dual_E(i, n)) == dual_gen_U(i, n));
  }
  SUBCASE("Leibniz on a pair of markers") {
    int n = 2;
    Matching M = consecutive_matching(n);
    DualElem e12 = dual_mul(dual_E(1, n), dual_E(3, n), M);
    DualElem expect = dual_add(dual_mul(dual_gen_U(1, n), dual_E(3, n), M),
                               dual_mul(dual_E(1, n), dual_gen_U(3, n), M));
    CHECK(dual_diff(e12) == expect);
  }
  SUBCASE("d of a B element vanishes") {
    int n = 2;
    CHECK(dual_diff(dual_gen_L(2, n)).is_zero());
    CHECK(dual_diff(dual_gen_U(1, n)).is_zero());
  }
  SUBCASE("d squared = 0 on random elements") {
    std::mt19937 rng(11);
    for (int n = 1; n <= 3; ++n)
      for (const auto& M : matchings_upto(n))
        for (int trial = 0; trial < 30; ++trial) {
          DualElem e = random_elem(n, M, rng, 3, 4);
          CHECK(dual_diff(dual_diff(e)).is_zero());
        }
  }
  SUBCASE("d of the matched anticommutator vanishes") {
    for (int n = 1; n <= 3; ++n)
      for (const auto& M : matchings_upto(n))
        for (auto [i, j] : M.pairs) {
          DualElem acomm = dual_add(dual_mul(dual_E(i, n), dual_E(j, n), M),
                                    dual_mul(dual_E(j, n), dual_E(i, n), M));
          CHECK(dual_diff(acomm).is_zero());
        }
  }
}

TEST_CASE("normal form confluence") {
  std::mt19937 rng(5);
  for (int n = 1; n <= 3; ++n)
    for (const auto& M : matchings_upto(n))
      for (int trial = 0; trial < 20; ++trial) {
        DualElem a = random_elem(n, M, rng, 2, 2);
        DualElem b = random_elem(n, M, rng, 2, 2);
        DualElem c = random_elem(n, M, rng, 2, 2);
        CHECK(dual_mul(dual_mul(a, b, M), c, M) ==
              dual_mul(a, dual_mul(b, c, M), M));
      }
}

TEST_CASE("dual gradings") {
  int n = 2;
  Matching M{{{1, 4}, {2, 3}}};
  SUBCASE("Delta(E_i) = 0") {
    for (int i = 1; i <= 2 * n; ++i) CHECK(dual_delta2(dual_E(i, n)) == 0);
  }
  SUBCASE("A(E_i) = A(U_i)") {
    for (int i = 1; i <= 2 * n; ++i)
      CHECK(dual_alex2(dual_E(i, n), M) == dual_alex2(dual_gen_U(i, n), M));
  }
  SUBCASE("d drops Delta by 1 on monomials") {
    DualElem e = dual_E(1, n);
    CHECK(dual_delta2(dual_diff(e)) == dual_delta2(e) - 2);
  }
  SUBCASE("multiplication is Delta-additive") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      DualElem a = random_elem(n, M, rng, 1, 2);
      DualElem b = random_elem(n, M, rng, 1, 2);
      if (a.is_zero() || b.is_zero()) continue;
      DualElem p = dual_mul(a, b, M);
      for (const auto& t : p.terms) {
        CHECK(dual_delta2(t) ==
              dual_delta2(*a.terms.begin()) + dual_delta2(*b.terms.begin()));
      }
    }
  }
}
