#include "doctest.h"
#include "kf/element_io.hpp"

using namespace kf;

TEST_CASE("parse basic elements") {
  int m = 4, k = 2;
  CHECK(parse_elem("0", m, k).is_zero());
  CHECK(parse_elem("1", m, k) == identity(m, k));
  CHECK(parse_elem("L2", m, k) == gen_L(2, m, k));
  CHECK(parse_elem("U1^2", m, k) == gen_U(1, m, k, 2));
  CHECK(parse_elem("I{1,3}", m, k) == idem_elem(idem_from({1, 3}), m));
  CHECK(parse_elem("I{1,3} * U2", m, k) ==
        mul(idem_elem(idem_from({1, 3}), m), gen_U(2, m, k)));
  CHECK(parse_elem("L2*L3 + R1", m, k) ==
        add(mul(gen_L(2, m, k), gen_L(3, m, k)), gen_R(1, m, k)));
}

TEST_CASE("parse errors") {
  int m = 4, k = 2;
  CHECK_THROWS_AS(parse_elem("", m, k), ParseError);
  CHECK_THROWS_AS(parse_elem("L9", m, k), ParseError);
  CHECK_THROWS_AS(parse_elem("I{1}", m, k), ParseError);
  CHECK_THROWS_AS(parse_elem("L2 +", m, k), ParseError);
  CHECK_THROWS_AS(parse_elem("Q3", m, k), ParseError);
  CHECK_THROWS_AS(parse_elem("E2", m, k), ParseError);
  CHECK_THROWS_AS(parse_elem("L2 L3", m, k), ParseError);
}

TEST_CASE("print / parse round trip") {
  int m = 4, k = 2;
  std::vector<std::string> sources = {
      "L2", "R3", "U1^2", "I{1,3}", "L2*L3", "U2*L2", "R2*R3*U4",
      "I{2,4}*U2*U3", "L2*R2", "L3*U1 + R1*U4^2"};
  for (const auto& src : sources) {
    Elem e = parse_elem(src, m, k);
    Elem back = parse_elem(elem_str(e), m, k);
    CAPTURE(src);
    CAPTURE(elem_str(e));
    CHECK(back == e);
  }
}

TEST_CASE("dual elements") {
  int n = 2;
  Matching M{{{1, 4}, {2, 3}}};
  CHECK(parse_dual("E3", n, M) == dual_E(3, n));
  CHECK(parse_dual("U1*E3", n, M) ==
        dual_mul(dual_gen_U(1, n), dual_E(3, n), M));
  SUBCASE("Clifford reduction through the parser") {
    // E3*E2 = E2*E3 + 1 for the matched pair {2,3}
    DualElem lhs = parse_dual("E3*E2", n, M);
    DualElem rhs = parse_dual("E2*E3 + 1", n, M);
    CHECK(lhs == rhs);
  }
  SUBCASE("round trip") {
    for (const char* src : {"E1", "L2*E3", "U1^2*E2*E4", "R3*U2 + E1*E2"}) {
      DualElem e = parse_dual(src, n, M);
      DualElem back = parse_dual(dual_str(e), n, M);
      CAPTURE(src);
      CHECK(back == e);
    }
  }
}

TEST_CASE("printing is canonical") {
  int m = 4, k = 2;
  CHECK(elem_str(zero(m)) == "0");
  Elem e = mul(idem_elem(idem_from({1, 3}), m), gen_U(2, m, k));
  CHECK(elem_str(e) == "I{1,3}*U2");
}
