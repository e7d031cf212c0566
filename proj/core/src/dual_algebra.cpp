#include "kf/dual_algebra.hpp"

#include <cassert>

namespace kf {

namespace {

// Normalize a word of E-indices into an F2 set of sorted marker masks,
// applying E_i^2 = 0 and the (anti)commutation relations.
void normalize_word(std::vector<int> w, const Matching& M,
                    std::set<uint32_t>& out) {
  for (size_t t = 0; t + 1 < w.size(); ++t) {
    if (w[t] < w[t + 1]) continue;
    if (w[t] == w[t + 1]) return; // square is zero
    std::vector<int> swapped = w;
    std::swap(swapped[t], swapped[t + 1]);
    normalize_word(std::move(swapped), M, out);
    if (M.contains_pair(w[t], w[t + 1])) {
      std::vector<int> dropped;
      for (size_t s = 0; s < w.size(); ++s)
        if (s != t && s != t + 1) dropped.push_back(w[s]);
      normalize_word(std::move(dropped), M, out);
    }
    return;
  }
  uint32_t mask = 0;
  for (int i : w) mask |= (1u << i);
  auto it = out.find(mask);
  if (it != out.end())
    out.erase(it);
  else
    out.insert(mask);
}

std::vector<int> mask_to_word(uint32_t mask) {
  std::vector<int> w;
  for (int i = 0; mask >> i; ++i)
    if (mask & (1u << i)) w.push_back(i);
  return w;
}

} // namespace

DualElem dual_zero(int n) { return DualElem{n, {}}; }

void dual_add_term(DualElem& e, const DualMono& t) {
  auto it = e.terms.find(t);
  if (it != e.terms.end())
    e.terms.erase(it);
  else
    e.terms.insert(t);
}

DualElem dual_add(const DualElem& a, const DualElem& b) {
  assert(a.n == b.n);
  DualElem out = a;
  for (const auto& t : b.terms) dual_add_term(out, t);
  return out;
}

DualElem dual_from_b(const Elem& b, int n) {
  assert(b.m == 2 * n);
  DualElem out = dual_zero(n);
  for (const auto& t : b.terms) out.terms.insert(DualMono{t, 0});
  return out;
}

DualElem dual_idem(Idem x, int n) {
  DualElem out = dual_zero(n);
  out.terms.insert(DualMono{Term{x, x, std::vector<int>(2 * n, 0)}, 0});
  return out;
}

DualElem dual_identity(int n) {
  return dual_from_b(identity(2 * n, n + 1), n);
}

DualElem dual_E(int i, int n) {
  DualElem out = dual_zero(n);
  for (Idem x : all_states(2 * n, n + 1))
    out.terms.insert(DualMono{Term{x, x, std::vector<int>(2 * n, 0)}, 1u << i});
  return out;
}

DualElem dual_gen_L(int i, int n) { return dual_from_b(gen_L(i, 2 * n, n + 1), n); }
DualElem dual_gen_R(int i, int n) { return dual_from_b(gen_R(i, 2 * n, n + 1), n); }
DualElem dual_gen_U(int i, int n, int power) {
  return dual_from_b(gen_U(i, 2 * n, n + 1, power), n);
}

DualElem dual_mul(const DualElem& a, const DualElem& b, const Matching& M) {
  assert(a.n == b.n);
  int m = 2 * a.n;
  DualElem out = dual_zero(a.n);
  for (const auto& s : a.terms)
    for (const auto& t : b.terms) {
      if (s.body.right != t.body.left) continue;
      Term body{s.body.left, t.body.right, s.body.dw};
      for (int i = 0; i < m; ++i) body.dw[i] += t.body.dw[i];
      if (in_ideal(body, m)) continue;
      std::vector<int> word = mask_to_word(s.markers);
      for (int i : mask_to_word(t.markers)) word.push_back(i);
      std::set<uint32_t> masks;
      normalize_word(std::move(word), M, masks);
      for (uint32_t mk : masks) dual_add_term(out, DualMono{body, mk});
    }
  return out;
}

DualElem dual_diff(const DualElem& a) {
  int m = 2 * a.n;
  DualElem out = dual_zero(a.n);
  for (const auto& t : a.terms)
    for (int i : mask_to_word(t.markers)) {
      Term body = t.body;
      body.dw[i - 1] += 2;
      if (in_ideal(body, m)) continue;
      dual_add_term(out, DualMono{body, t.markers & ~(1u << i)});
    }
  return out;
}

int dual_delta2(const DualMono& t) {
  // Delta = #markers - total weight, with each marker carrying weight 1; the
  // marker contributions cancel, leaving minus the body weight.
  return delta2(t.body);
}

int dual_delta2(const DualElem& e) {
  assert(!e.terms.empty());
  int d = dual_delta2(*e.terms.begin());
  for (const auto& t : e.terms) assert(dual_delta2(t) == d);
  return d;
}

std::vector<int> dual_alex2(const DualMono& t, const Matching& M) {
  std::vector<int> out;
  for (auto [i, j] : M.pairs) {
    int wi = t.body.dw[i - 1] + ((t.markers >> i) & 1) * 2;
    int wj = t.body.dw[j - 1] + ((t.markers >> j) & 1) * 2;
    out.push_back(wi - wj);
  }
  return out;
}

std::vector<int> dual_alex2(const DualElem& e, const Matching& M) {
  assert(!e.terms.empty());
  auto out = dual_alex2(*e.terms.begin(), M);
  for (const auto& t : e.terms) assert(dual_alex2(t, M) == out);
  return out;
}

} // namespace kf
