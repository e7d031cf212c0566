#include "kf/bimodules.hpp"

#include <cassert>
#include <map>
#include <optional>
#include <stdexcept>

namespace kf {

namespace {

Idem full_state(int m) { return (Idem)((1u << (m + 1)) - 1); }

} // namespace

Matching transpose_matching(const Matching& M, int i) {
  auto tau = [i](int j) { return j == i ? i + 1 : j == i + 1 ? i : j; };
  Matching out;
  for (auto [a, b] : M.pairs) out.pairs.push_back({tau(a), tau(b)});
  return out;
}

Matching contract_matching(const Matching& M1, int c) {
  if (M1.contains_pair(c, c + 1))
    throw std::invalid_argument("contract_matching: cap closes a circle");
  auto unphi = [c](int j) { return j < c ? j : j - 2; };
  Matching M2;
  int s = -1, t = -1;
  for (auto [a, b] : M1.pairs) {
    bool ca = (a == c || a == c + 1), cb = (b == c || b == c + 1);
    if (!ca && !cb) {
      M2.pairs.push_back({unphi(a), unphi(b)});
    } else if (ca != cb) {
      int inside = ca ? a : b, outside = ca ? b : a;
      if (inside == c)
        s = unphi(outside);
      else
        t = unphi(outside);
    }
  }
  assert(s > 0 && t > 0);
  M2.pairs.push_back({s, t});
  return M2;
}

std::vector<Matching> all_matchings(int n) {
  std::vector<Matching> out;
  std::vector<int> left;
  for (int i = 1; i <= 2 * n; ++i) left.push_back(i);
  Matching cur;
  auto rec = [&](auto&& self) -> void {
    if (left.empty()) {
      out.push_back(cur);
      return;
    }
    int a = left.front();
    for (size_t q = 1; q < left.size(); ++q) {
      int b = left[q];
      std::vector<int> rest;
      for (size_t r = 0; r < left.size(); ++r)
        if (r != 0 && r != q) rest.push_back(left[r]);
      std::swap(left, rest);
      cur.pairs.push_back({a, b});
      self(self);
      cur.pairs.pop_back();
      std::swap(left, rest);
    }
  };
  rec(rec);
  return out;
}

int phi_c(int j, int c) { return j < c ? j : j + 2; }

TypeD standard_k(int n) {
  TypeD D;
  D.m = 2 * n;
  D.k = n;
  D.matching = consecutive_matching(n);
  std::vector<int> odds;
  for (int i = 1; i <= n; ++i) odds.push_back(2 * i - 1);
  D.add_gen("k", idem_from(odds));
  return D;
}

DD canonical_dd(int n, const Matching& M) {
  int m = 2 * n;
  DD K;
  K.mB = m;
  K.kB = n;
  K.matchB = M;
  K.nDual = n;
  K.matchDual = M;
  Idem full = full_state(m);
  auto states = all_states(m, n);
  std::map<Idem, int> index;
  for (Idem x : states) index[x] = K.add_gen(idem_str(x), x, full ^ x);
  for (Idem x : states) {
    int src = index[x];
    Elem ix = idem_elem(x, m);
    DualElem iy = dual_idem(full ^ x, n);
    for (int i = 1; i <= m; ++i) {
      Elem bl = mul(ix, gen_L(i, m, n));
      if (!bl.is_zero()) {
        Idem x2 = bl.terms.begin()->right;
        K.add_arrow(src, index[x2], bl, dual_mul(iy, dual_gen_R(i, n), M));
      }
      Elem br = mul(ix, gen_R(i, m, n));
      if (!br.is_zero()) {
        Idem x2 = br.terms.begin()->right;
        K.add_arrow(src, index[x2], br, dual_mul(iy, dual_gen_L(i, n), M));
      }
      Elem bu = mul(ix, gen_U(i, m, n));
      if (!bu.is_zero())
        K.add_arrow(src, src, bu, dual_mul(iy, dual_E(i, n), M));
    }
  }
  return K;
}

// ---------------------------------------------------------------- minimum --

std::vector<Idem> min_allowed_states(int n, int c) {
  int m1 = 2 * n + 2;
  std::vector<Idem> out;
  for (Idem y : all_states(m1, n + 2)) {
    if (!(y & (1u << c))) continue;
    int cnt = 0;
    for (int t = c - 1; t <= c + 1; ++t)
      if (t >= 0 && t <= m1 && (y & (1u << t))) ++cnt;
    if (cnt <= 2) out.push_back(y);
  }
  return out;
}

Idem min_psi_prime(Idem y, int n, int c) {
  int m1 = 2 * n + 2;
  int cnt = 0;
  for (int t = c - 1; t <= c + 1; ++t)
    if (t >= 0 && t <= m1 && (y & (1u << t))) ++cnt;
  std::optional<Idem> found;
  for (Idem x : all_states(2 * n, n)) {
    int xc = (c >= 1 && (x & (1u << (c - 1)))) ? 1 : 0;
    if (cnt + xc != 2) continue;
    Idem image = 0;
    for (int j : idem_elems(x)) image |= (1u << phi_c(j, c));
    if (image & y) continue;
    if (found) throw std::runtime_error("min_psi_prime: not unique");
    found = x;
  }
  if (!found) throw std::runtime_error("min_psi_prime: no paired state");
  return *found;
}

namespace {

// image of one dual-algebra label of the canonical DD under the minimum's
// weight-transport map: body weights move through phi_c (zero on the two new
// strands), markers move through phi_c except the special one, which picks up
// an extra marker at the cap
DualElem min_transport(const DualMono& a, Idem y, int n, int c,
                       const Matching& M1, int special, int extra_marker,
                       const std::map<Idem, int>& allowed_index) {
  int m1 = 2 * n + 2;
  Idem full2 = full_state(2 * n);
  Idem xdst = full2 ^ a.body.right; // B-state paired with the target
  std::vector<int> dw(m1, 0);
  for (int j = 1; j <= 2 * n; ++j) dw[phi_c(j, c) - 1] = a.body.dw[j - 1];
  std::optional<Term> body;
  for (const auto& [z, idx] : allowed_index) {
    if (min_psi_prime(z, n, c) != xdst) continue;
    Term cand{y, z, dw};
    if (!term_valid(cand, m1) || in_ideal(cand, m1)) continue;
    if (body) throw std::runtime_error("min_transport: ambiguous target");
    body = cand;
  }
  DualElem res = dual_zero(n + 1);
  if (!body) return res; // the move does not exist at this idempotent

  dual_add_term(res, DualMono{*body, 0});
  std::vector<int> marks;
  for (int j = 1; j <= 2 * n; ++j)
    if (a.markers & (1u << j)) marks.push_back(j);
  for (auto it = marks.rbegin(); it != marks.rend(); ++it) {
    DualElem ej = dual_E(phi_c(*it, c), n + 1);
    if (*it == special) ej = dual_add(ej, dual_E(extra_marker, n + 1));
    res = dual_mul(ej, res, M1);
  }
  return res;
}

} // namespace

DD dd_min(int n, int c, const Matching& M1, MinMarker marker) {
  int m1 = 2 * n + 2, m2 = 2 * n;
  Matching M2 = contract_matching(M1, c);
  DD C = canonical_dd(n, M2);
  DD K;
  K.mB = m2;
  K.kB = n;
  K.matchB = M2;
  K.nDual = n + 1;
  K.matchDual = M1;
  auto ys = min_allowed_states(n, c);
  std::map<Idem, int> yindex;
  for (Idem y : ys) yindex[y] = K.add_gen("P" + idem_str(y), min_psi_prime(y, n, c), y);

  int cap_strand = (marker == MinMarker::PartnerOfCPlus1) ? c + 1 : c;
  int partner = M1.partner(cap_strand);
  if (partner == c || partner == c + 1)
    throw std::runtime_error("dd_min: cap strand matched into the cap");
  int special = partner < c ? partner : partner - 2;
  int extra_marker = (marker == MinMarker::PartnerOfCPlus1) ? c : c + 1;
  int u_idx = (marker == MinMarker::PartnerOfCPlus1) ? c : c + 1;
  int e_idx = (marker == MinMarker::PartnerOfCPlus1) ? c + 1 : c;

  DualElem d11 =
      dual_add(dual_mul(dual_gen_R(c + 1, n + 1), dual_gen_R(c, n + 1), M1),
               dual_mul(dual_gen_L(c, n + 1), dual_gen_L(c + 1, n + 1), M1));
  d11 = dual_add(
      d11, dual_mul(dual_gen_U(u_idx, n + 1), dual_E(e_idx, n + 1), M1));

  for (Idem y : ys) {
    int src = yindex[y];
    Idem x = K.idemB[src];
    Term bid{x, x, std::vector<int>(m2, 0)};
    for (const DualMono& t : d11.terms) {
      if (t.body.left != y) continue;
      auto it = yindex.find(t.body.right);
      if (it == yindex.end())
        throw std::runtime_error("dd_min: one-input action leaves the allowed states");
      if (K.idemB[it->second] != x)
        throw std::runtime_error("dd_min: one-input action moves the B idempotent");
      K.add_arrow_terms(src, it->second, {{bid, t}});
    }
    int cg = C.gen_index(idem_str(x));
    assert(cg >= 0);
    for (const auto& [key, label] : C.arrows) {
      if (key.first != cg) continue;
      for (const auto& [b, a] : label) {
        DualElem img =
            min_transport(a, y, n, c, M1, special, extra_marker, yindex);
        for (const DualMono& t : img.terms)
          K.add_arrow_terms(src, yindex.at(t.body.right), {{b, t}});
      }
    }
  }
  return K;
}

// --------------------------------------------------------------- crossings --

namespace {

enum class PType { N, S, W, E };

struct PGen {
  Idem x, y;
  PType t;
};

const char* ptype_str(PType t) {
  switch (t) {
    case PType::N: return "N";
    case PType::S: return "S";
    case PType::W: return "W";
    default: return "E";
  }
}

struct PRule {
  std::optional<PType> from, to;
  Elem b;
  DualElem d;
};

} // namespace

DD dd_pos(int n, int i, const Matching& M) {
  int m = 2 * n;
  if (i < 1 || i > m - 1) throw std::invalid_argument("dd_pos: bad site");
  Matching Mt = transpose_matching(M, i);
  DD K;
  K.mB = m;
  K.kB = n;
  K.matchB = M;
  K.nDual = n;
  K.matchDual = Mt;
  Idem full = full_state(m);

  std::vector<PGen> gens;
  for (Idem x : all_states(m, n)) {
    Idem y = full ^ x;
    gens.push_back({x, y, (x & (1u << i)) ? PType::N : PType::S});
  }
  for (Idem x : all_states(m, n)) {
    if (!(x & (1u << i))) continue;
    if (!(x & (1u << (i - 1))))
      gens.push_back({x, ((full ^ x) & ~(1u << (i - 1))) | (1u << i), PType::W});
    if (!(x & (1u << (i + 1))))
      gens.push_back({x, ((full ^ x) & ~(1u << (i + 1))) | (1u << i), PType::E});
  }
  for (const auto& g : gens)
    K.add_gen(std::string(ptype_str(g.t)) + idem_str(g.x), g.x, g.y);

  auto dm = [&](const DualElem& a, const DualElem& b) {
    return dual_mul(a, b, Mt);
  };
  std::vector<PRule> rules;
  for (int j = 1; j <= m; ++j) {
    if (j != i && j != i + 1) {
      rules.push_back({{}, {}, gen_R(j, m, n), dual_gen_L(j, n)});
      rules.push_back({{}, {}, gen_L(j, m, n), dual_gen_R(j, n)});
    }
    int tj = (j == i) ? i + 1 : (j == i + 1) ? i : j;
    rules.push_back({{}, {}, gen_U(j, m, n), dual_E(tj, n)});
  }
  using PT = PType;
  rules.push_back({PT::S, PT::W, gen_R(i, m, n), dual_gen_U(i + 1, n)});
  rules.push_back({PT::S, PT::W, gen_L(i + 1, m, n),
                   dm(dual_gen_R(i + 1, n), dual_gen_R(i, n))});
  rules.push_back({PT::W, PT::S, gen_L(i, m, n), dual_identity(n)});
  rules.push_back({PT::E, PT::S, gen_R(i + 1, m, n), dual_identity(n)});
  rules.push_back({PT::S, PT::E, gen_L(i + 1, m, n), dual_gen_U(i, n)});
  rules.push_back({PT::S, PT::E, gen_R(i, m, n),
                   dm(dual_gen_L(i, n), dual_gen_L(i + 1, n))});
  rules.push_back({PT::W, PT::N, identity(m, n), dual_gen_L(i, n)});
  rules.push_back({PT::N, PT::W, gen_U(i + 1, m, n), dual_gen_R(i, n)});
  rules.push_back({PT::N, PT::W, mul(gen_R(i + 1, m, n), gen_R(i, m, n)),
                   dual_gen_L(i + 1, n)});
  rules.push_back({PT::E, PT::N, identity(m, n), dual_gen_R(i + 1, n)});
  rules.push_back({PT::N, PT::E, gen_U(i, m, n), dual_gen_L(i + 1, n)});
  rules.push_back({PT::N, PT::E, mul(gen_L(i, m, n), gen_L(i + 1, m, n)),
                   dual_gen_R(i, n)});

  for (size_t s = 0; s < gens.size(); ++s)
    for (size_t d = 0; d < gens.size(); ++d)
      for (const auto& r : rules) {
        if (r.from && *r.from != gens[s].t) continue;
        if (r.to && *r.to != gens[d].t) continue;
        Elem be = mul(mul(idem_elem(gens[s].x, m), r.b),
                      idem_elem(gens[d].x, m));
        if (be.is_zero()) continue;
        DualElem de =
            dm(dm(dual_idem(gens[s].y, n), r.d), dual_idem(gens[d].y, n));
        if (de.is_zero()) continue;
        K.add_arrow((int)s, (int)d, be, de);
      }
  return K;
}

DD dd_neg(int n, int i, const Matching& M) {
  DD P = dd_pos(n, i, M);
  DD K;
  K.mB = P.mB;
  K.kB = P.kB;
  K.matchB = P.matchB;
  K.nDual = P.nDual;
  K.matchDual = P.matchDual;
  for (size_t g = 0; g < P.gen_ids.size(); ++g)
    K.add_gen(P.gen_ids[g], P.idemB[g], P.idemDual[g]);
  for (const auto& [key, label] : P.arrows) {
    DDLabel flipped;
    for (const auto& [b, d] : label) {
      Term bt{b.right, b.left, b.dw};
      Term dt{d.body.right, d.body.left, d.body.dw};
      flipped.insert({bt, DualMono{dt, d.markers}});
    }
    K.add_arrow_terms(key.second, key.first, flipped);
  }
  return K;
}

} // namespace kf
