#include "kf/algebra.hpp"

#include <bit>
#include <cassert>
#include <cstdlib>
#include <stdexcept>

namespace kf {

int popcount(Idem x) { return std::popcount(x); }

std::vector<int> idem_elems(Idem x) {
  std::vector<int> out;
  for (int i = 0; x >> i; ++i)
    if (x & (1u << i)) out.push_back(i);
  return out;
}

Idem idem_from(const std::vector<int>& xs) {
  Idem x = 0;
  for (int i : xs) x |= (1u << i);
  return x;
}

std::string idem_str(Idem x) {
  std::string s = "{";
  bool first = true;
  for (int i : idem_elems(x)) {
    if (!first) s += ",";
    s += std::to_string(i);
    first = false;
  }
  return s + "}";
}

std::vector<int> weight_vector(Idem x, int m) {
  std::vector<int> v(m);
  for (int i = 1; i <= m; ++i) v[i - 1] = std::popcount(x >> i);
  return v;
}

std::vector<Idem> all_states(int m, int k) {
  std::vector<Idem> out;
  for (Idem x = 0; x < (1u << (m + 1)); ++x)
    if (std::popcount(x) == k) out.push_back(x);
  return out;
}

std::vector<int> min_dw(Idem x, Idem y, int m) {
  auto vx = weight_vector(x, m), vy = weight_vector(y, m);
  std::vector<int> out(m);
  for (int i = 0; i < m; ++i) out[i] = std::abs(vx[i] - vy[i]);
  return out;
}

bool term_valid(const Term& t, int m) {
  if ((int)t.dw.size() != m) return false;
  if (std::popcount(t.left) != std::popcount(t.right)) return false;
  Idem allowed = (1u << (m + 1)) - 1;
  if ((t.left & ~allowed) || (t.right & ~allowed)) return false;
  auto mn = min_dw(t.left, t.right, m);
  for (int i = 0; i < m; ++i)
    if (t.dw[i] < mn[i] || ((t.dw[i] - mn[i]) & 1)) return false;
  return true;
}

bool too_far(Idem x, Idem y) {
  auto xs = idem_elems(x), ys = idem_elems(y);
  assert(xs.size() == ys.size());
  for (size_t t = 0; t < xs.size(); ++t)
    if (std::abs(xs[t] - ys[t]) >= 2) return true;
  return false;
}

bool in_ideal(const Term& t, int m) {
  if (too_far(t.left, t.right)) return true;
  Idem both = t.left & t.right;
  for (int i = 0; i <= m; ++i) {
    if (both & (1u << i)) continue;
    // scan j > i while everything strictly between lies in both idempotents
    for (int j = i + 1; j <= m; ++j) {
      bool between_ok = true;
      for (int s = i + 1; s < j; ++s)
        if (!(both & (1u << s))) { between_ok = false; break; }
      if (!between_ok) break;
      if (both & (1u << j)) continue;
      bool weights_ok = true;
      for (int s = i + 1; s <= j; ++s)
        if (t.dw[s - 1] < 2) { weights_ok = false; break; }
      if (!weights_ok) continue;
      int cx = std::popcount(t.left & ((2u << i) - 1));
      int cy = std::popcount(t.right & ((2u << i) - 1));
      if (cx == cy) return true;
    }
  }
  return false;
}

Elem zero(int m) { return Elem{m, {}}; }

void add_term(Elem& e, const Term& t) {
  auto it = e.terms.find(t);
  if (it != e.terms.end())
    e.terms.erase(it);
  else
    e.terms.insert(t);
}

Elem add(const Elem& a, const Elem& b) {
  assert(a.m == b.m);
  Elem out = a;
  for (const auto& t : b.terms) add_term(out, t);
  return out;
}

Elem mul(const Elem& a, const Elem& b, bool quotient) {
  assert(a.m == b.m);
  Elem out = zero(a.m);
  for (const auto& s : a.terms)
    for (const auto& t : b.terms) {
      if (s.right != t.left) continue;
      Term p{s.left, t.right, s.dw};
      for (int i = 0; i < a.m; ++i) p.dw[i] += t.dw[i];
      assert(term_valid(p, a.m));
      if (quotient && in_ideal(p, a.m)) continue;
      add_term(out, p);
    }
  return out;
}

Elem idem_elem(Idem x, int m) {
  Elem e = zero(m);
  e.terms.insert(Term{x, x, std::vector<int>(m, 0)});
  return e;
}

Elem identity(int m, int k) {
  Elem e = zero(m);
  for (Idem x : all_states(m, k))
    e.terms.insert(Term{x, x, std::vector<int>(m, 0)});
  return e;
}

Elem gen_L(int i, int m, int k, bool quotient) {
  // sum of gamma_{x,y} with one coordinate moving i -> i-1
  Elem e = zero(m);
  for (Idem x : all_states(m, k)) {
    if (!(x & (1u << i)) || (x & (1u << (i - 1)))) continue;
    Idem y = (x & ~(1u << i)) | (1u << (i - 1));
    Term t{x, y, min_dw(x, y, m)};
    if (!quotient || !in_ideal(t, m)) e.terms.insert(t);
  }
  return e;
}

Elem gen_R(int i, int m, int k, bool quotient) {
  Elem e = zero(m);
  for (Idem x : all_states(m, k)) {
    if (!(x & (1u << i)) || (x & (1u << (i - 1)))) continue;
    Idem y = (x & ~(1u << i)) | (1u << (i - 1));
    Term t{y, x, min_dw(y, x, m)};
    if (!quotient || !in_ideal(t, m)) e.terms.insert(t);
  }
  return e;
}

Elem gen_U(int j, int m, int k, int power, bool quotient) {
  Elem e = zero(m);
  for (Idem x : all_states(m, k)) {
    std::vector<int> dw(m, 0);
    dw[j - 1] = 2 * power;
    Term t{x, x, dw};
    if (!quotient || !in_ideal(t, m)) e.terms.insert(t);
  }
  return e;
}

int Matching::partner(int i) const {
  for (auto [a, b] : pairs) {
    if (a == i) return b;
    if (b == i) return a;
  }
  throw std::out_of_range("matching: no pair containing " + std::to_string(i));
}

bool Matching::contains_pair(int i, int j) const {
  for (auto [a, b] : pairs)
    if ((a == i && b == j) || (a == j && b == i)) return true;
  return false;
}

Matching consecutive_matching(int n) {
  Matching M;
  for (int i = 1; i <= n; ++i) M.pairs.push_back({2 * i - 1, 2 * i});
  return M;
}

Elem mu0(const Matching& M, int n) {
  int m = 2 * n;
  Elem out = zero(m);
  for (auto [i, j] : M.pairs) {
    Elem uij = mul(gen_U(i, m, n, 1), gen_U(j, m, n, 1));
    out = add(out, uij);
  }
  return out;
}

int delta2(const Term& t) {
  int s = 0;
  for (int w : t.dw) s += w;
  return -s;
}

int delta2(const Elem& e) {
  assert(!e.terms.empty());
  int d = delta2(*e.terms.begin());
  for (const auto& t : e.terms) assert(delta2(t) == d);
  return d;
}

int alex2(const Term& t, int i, int j) { return t.dw[i - 1] - t.dw[j - 1]; }

std::vector<int> alex2(const Elem& e, const Matching& M) {
  assert(!e.terms.empty());
  std::vector<int> out;
  for (auto [i, j] : M.pairs) out.push_back(alex2(*e.terms.begin(), i, j));
  for (const auto& t : e.terms) {
    size_t p = 0;
    for (auto [i, j] : M.pairs) assert(alex2(t, i, j) == out[p++]);
  }
  return out;
}

bool in_C(Idem x, int n) { return !(x & 1u) && !(x & (1u << (2 * n))); }

Elem restrict_C(const Elem& e, int n) {
  Elem out = zero(e.m);
  for (const auto& t : e.terms)
    if (in_C(t.left, n) && in_C(t.right, n)) out.terms.insert(t);
  return out;
}

std::vector<Idem> all_states_C(int n) {
  std::vector<Idem> out;
  for (Idem x : all_states(2 * n, n))
    if (in_C(x, n)) out.push_back(x);
  return out;
}

} // namespace kf
