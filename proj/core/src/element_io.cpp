#include "kf/element_io.hpp"

#include <cassert>
#include <cctype>

namespace kf {

namespace {

struct Scanner {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  char next() {
    skip_ws();
    if (pos >= s.size()) throw ParseError("unexpected end of element");
    return s[pos++];
  }
  void expect(char c) {
    char g = next();
    if (g != c)
      throw ParseError(std::string("expected '") + c + "', got '" + g + "'");
  }
  int integer() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit((unsigned char)s[pos]))
      throw ParseError("expected integer at position " + std::to_string(pos));
    int v = 0;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos]))
      v = v * 10 + (s[pos++] - '0');
    return v;
  }
};

struct Factor {
  char kind; // 'I','L','R','U','E','1','0'
  std::vector<int> idem;
  int index = 0;
  int power = 1;
};

Factor read_factor(Scanner& sc) {
  Factor f;
  char c = sc.next();
  switch (c) {
    case 'I': {
      f.kind = 'I';
      sc.expect('{');
      if (sc.peek() != '}') {
        f.idem.push_back(sc.integer());
        while (sc.peek() == ',') {
          sc.next();
          f.idem.push_back(sc.integer());
        }
      }
      sc.expect('}');
      return f;
    }
    case 'L':
    case 'R':
    case 'E':
      f.kind = c;
      f.index = sc.integer();
      return f;
    case 'U':
      f.kind = 'U';
      f.index = sc.integer();
      if (sc.peek() == '^') {
        sc.next();
        f.power = sc.integer();
      }
      return f;
    case '1':
    case '0':
      f.kind = c;
      return f;
    default:
      throw ParseError(std::string("unexpected character '") + c + "'");
  }
}

template <typename E, typename FactorFn, typename MulFn, typename AddFn>
E parse_generic(const std::string& s, E one, E zero_e, FactorFn to_elem,
                MulFn mul_fn, AddFn add_fn) {
  Scanner sc{s};
  E total = zero_e;
  bool first_term = true;
  while (true) {
    if (!first_term) sc.expect('+');
    E term = one;
    bool first_factor = true;
    while (true) {
      if (!first_factor) sc.expect('*');
      Factor f = read_factor(sc);
      if (f.kind == '0')
        term = zero_e;
      else if (f.kind != '1')
        term = mul_fn(term, to_elem(f));
      first_factor = false;
      if (sc.peek() != '*') break;
    }
    total = add_fn(total, term);
    first_term = false;
    if (sc.eof()) break;
    if (sc.peek() != '+')
      throw ParseError("trailing input at position " + std::to_string(sc.pos));
  }
  return total;
}

// letters (kind, index) factoring the transition part of a pure term,
// one coordinate moved one step per letter, never overshooting
std::vector<std::pair<char, int>> transition_letters(Idem x, Idem y) {
  std::vector<std::pair<char, int>> letters;
  auto cur = idem_elems(x);
  auto tgt = idem_elems(y);
  assert(cur.size() == tgt.size());
  bool progress = true;
  while (progress) {
    progress = false;
    for (size_t t = 0; t < cur.size(); ++t) {
      if (cur[t] > tgt[t]) {
        bool occupied = t > 0 && cur[t - 1] == cur[t] - 1;
        if (occupied) continue;
        letters.push_back({'L', cur[t]});
        cur[t] -= 1;
        progress = true;
        break;
      }
      if (cur[t] < tgt[t]) {
        bool occupied = t + 1 < cur.size() && cur[t + 1] == cur[t] + 1;
        if (occupied) continue;
        letters.push_back({'R', cur[t] + 1});
        cur[t] += 1;
        progress = true;
        break;
      }
    }
  }
  assert(cur == tgt);
  return letters;
}

} // namespace

Elem parse_elem(const std::string& s, int m, int k, bool quotient) {
  auto to_elem = [&](const Factor& f) -> Elem {
    switch (f.kind) {
      case 'I': {
        for (int i : f.idem)
          if (i < 0 || i > m) throw ParseError("idempotent entry out of range");
        Idem x = idem_from(f.idem);
        if (popcount(x) != k || (int)f.idem.size() != k)
          throw ParseError("idempotent is not a " + std::to_string(k) +
                           "-element state");
        return idem_elem(x, m);
      }
      case 'L':
      case 'R':
        if (f.index < 1 || f.index > m) throw ParseError("strand index out of range");
        return f.kind == 'L' ? gen_L(f.index, m, k, quotient)
                             : gen_R(f.index, m, k, quotient);
      case 'U':
        if (f.index < 1 || f.index > m) throw ParseError("strand index out of range");
        return gen_U(f.index, m, k, f.power, quotient);
      case 'E':
        throw ParseError("E factors are only valid in dual-algebra elements");
      default:
        throw ParseError("bad factor");
    }
  };
  return parse_generic(
      s, identity(m, k), zero(m), to_elem,
      [&](const Elem& a, const Elem& b) { return mul(a, b, quotient); },
      [](const Elem& a, const Elem& b) { return add(a, b); });
}

DualElem parse_dual(const std::string& s, int n, const Matching& M) {
  int m = 2 * n, k = n + 1;
  auto to_elem = [&](const Factor& f) -> DualElem {
    switch (f.kind) {
      case 'I': {
        for (int i : f.idem)
          if (i < 0 || i > m) throw ParseError("idempotent entry out of range");
        Idem x = idem_from(f.idem);
        if (popcount(x) != k || (int)f.idem.size() != k)
          throw ParseError("idempotent is not a " + std::to_string(k) +
                           "-element state");
        return dual_idem(x, n);
      }
      case 'L':
        if (f.index < 1 || f.index > m) throw ParseError("strand index out of range");
        return dual_gen_L(f.index, n);
      case 'R':
        if (f.index < 1 || f.index > m) throw ParseError("strand index out of range");
        return dual_gen_R(f.index, n);
      case 'U':
        if (f.index < 1 || f.index > m) throw ParseError("strand index out of range");
        return dual_gen_U(f.index, n, f.power);
      case 'E':
        if (f.index < 1 || f.index > m) throw ParseError("strand index out of range");
        return dual_E(f.index, n);
      default:
        throw ParseError("bad factor");
    }
  };
  return parse_generic(
      s, dual_identity(n), dual_zero(n), to_elem,
      [&](const DualElem& a, const DualElem& b) { return dual_mul(a, b, M); },
      [](const DualElem& a, const DualElem& b) { return dual_add(a, b); });
}

std::string term_str(const Term& t, int m) {
  std::string out = "I" + idem_str(t.left);
  for (auto [kind, idx] : transition_letters(t.left, t.right))
    out += std::string("*") + kind + std::to_string(idx);
  auto mn = min_dw(t.left, t.right, m);
  for (int i = 1; i <= m; ++i) {
    int extra = t.dw[i - 1] - mn[i - 1];
    assert(extra >= 0 && extra % 2 == 0);
    if (extra == 0) continue;
    out += "*U" + std::to_string(i);
    if (extra > 2) out += "^" + std::to_string(extra / 2);
  }
  return out;
}

std::string elem_str(const Elem& e) {
  if (e.terms.empty()) return "0";
  std::string out;
  for (const auto& t : e.terms) {
    if (!out.empty()) out += " + ";
    out += term_str(t, e.m);
  }
  return out;
}

std::string dual_term_str(const DualMono& t, int n) {
  std::string out = term_str(t.body, 2 * n);
  for (int i = 1; i <= 2 * n; ++i)
    if (t.markers & (1u << i)) out += "*E" + std::to_string(i);
  return out;
}

std::string dual_str(const DualElem& e) {
  if (e.terms.empty()) return "0";
  std::string out;
  for (const auto& t : e.terms) {
    if (!out.empty()) out += " + ";
    out += dual_term_str(t, e.n);
  }
  return out;
}

} // namespace kf
