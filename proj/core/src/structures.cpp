#include "kf/structures.hpp"

#include "kf/element_io.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <queue>

namespace kf {

namespace {

Elem mu0_general(const Matching& M, int m, int k) {
  Elem out = zero(m);
  for (auto [i, j] : M.pairs)
    out = add(out, mul(gen_U(i, m, k), gen_U(j, m, k)));
  return out;
}

int term_weight2(const Term& t) {
  int s = 0;
  for (int w : t.dw) s += w;
  return s;
}

bool is_idempotent_term(const Term& t) {
  return t.left == t.right && term_weight2(t) == 0;
}

} // namespace

std::string Report::summary() const {
  if (pass) return "pass";
  std::string out = "FAIL";
  for (const auto& f : failures) out += "\n  - " + f;
  return out;
}

// ---------------------------------------------------------------- TypeD --

int TypeD::add_gen(const std::string& id, Idem idem) {
  gen_ids.push_back(id);
  idems.push_back(idem);
  return (int)gen_ids.size() - 1;
}

void TypeD::add_arrow(int src, int dst, const Elem& label) {
  if (label.is_zero()) return;
  auto key = std::make_pair(src, dst);
  auto it = arrows.find(key);
  if (it == arrows.end()) {
    arrows.emplace(key, label);
  } else {
    it->second = add(it->second, label);
    if (it->second.is_zero()) arrows.erase(it);
  }
}

const Elem* TypeD::arrow(int src, int dst) const {
  auto it = arrows.find({src, dst});
  return it == arrows.end() ? nullptr : &it->second;
}

int TypeD::gen_index(const std::string& id) const {
  for (size_t i = 0; i < gen_ids.size(); ++i)
    if (gen_ids[i] == id) return (int)i;
  return -1;
}

bool TypeD::reduced() const {
  for (const auto& [key, label] : arrows)
    for (const auto& t : label.terms)
      if (term_weight2(t) == 0) return false;
  return true;
}

Report validate_type_d(const TypeD& D) {
  Report rep;
  for (const auto& [key, label] : D.arrows) {
    auto [src, dst] = key;
    for (const auto& t : label.terms) {
      if (t.left != D.idems[src] || t.right != D.idems[dst]) {
        rep.fail("arrow " + D.gen_ids[src] + " -> " + D.gen_ids[dst] +
                 " label " + term_str(t, D.m) + " has wrong idempotents");
      }
    }
  }
  Elem mu = D.matching.pairs.empty() ? zero(D.m)
                                     : mu0_general(D.matching, D.m, D.k);
  int N = (int)D.gen_ids.size();
  for (int x = 0; x < N; ++x) {
    std::map<int, Elem> acc;
    for (const auto& [k1, l1] : D.arrows) {
      if (k1.first != x) continue;
      int y = k1.second;
      for (const auto& [k2, l2] : D.arrows) {
        if (k2.first != y) continue;
        Elem prod = mul(l1, l2);
        if (prod.is_zero()) continue;
        auto [it, fresh] = acc.try_emplace(k2.second, prod);
        if (!fresh) it->second = add(it->second, prod);
      }
    }
    Elem curv = mul(idem_elem(D.idems[x], D.m), mu);
    if (!curv.is_zero()) {
      auto [it, fresh] = acc.try_emplace(x, curv);
      if (!fresh) it->second = add(it->second, curv);
    }
    for (const auto& [z, e] : acc)
      if (!e.is_zero())
        rep.fail("structure relation fails at " + D.gen_ids[x] + " -> " +
                 D.gen_ids[z] + ": residue " + elem_str(e));
  }
  if (!relative_delta(D)) rep.fail("arrow labels not Delta-consistent");
  if (!relative_alex(D)) rep.fail("arrow labels not Alexander-consistent");
  return rep;
}

namespace {

// integrate per-arrow grading differences over the arrow graph; diff(src) -
// diff(dst) must equal drop(label); returns assignment or nullopt
template <typename Value, typename DropFn, typename ZeroFn>
std::optional<std::vector<Value>> integrate_gradings(int N,
    const std::map<std::pair<int, int>, Elem>& arrows, DropFn drop,
    ZeroFn zero_value) {
  std::vector<std::optional<Value>> gr(N);
  for (int root = 0; root < N; ++root) {
    if (gr[root]) continue;
    gr[root] = zero_value();
    std::queue<int> bfs;
    bfs.push(root);
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      for (const auto& [key, label] : arrows) {
        auto [s, t] = key;
        if (s != u && t != u) continue;
        auto d = drop(label);
        if (!d) return std::nullopt; // inhomogeneous label
        // gr[s] = gr[t] + *d
        if (s == u && !gr[t]) {
          gr[t] = *gr[u] - *d;
          bfs.push(t);
        } else if (t == u && !gr[s]) {
          gr[s] = *gr[u] + *d;
          bfs.push(s);
        } else {
          int a = (s == u) ? u : s, b = (s == u) ? t : u;
          if (!(*gr[a] == *gr[b] + *d)) return std::nullopt;
        }
      }
    }
  }
  std::vector<Value> out;
  for (auto& g : gr) out.push_back(*g);
  return out;
}

} // namespace

std::optional<std::vector<Rat>> relative_delta(const TypeD& D) {
  auto drop = [&](const Elem& label) -> std::optional<Rat> {
    // Delta(x) - 1 = Delta(b) + Delta(y)  =>  Delta(x)-Delta(y) = Delta(b)+1
    std::optional<Rat> out;
    for (const auto& t : label.terms) {
      Rat d = half(delta2(t)) + Rat(1);
      if (out && !(*out == d)) return std::nullopt;
      out = d;
    }
    return out;
  };
  return integrate_gradings<Rat>((int)D.gen_ids.size(), D.arrows, drop,
                                 [] { return Rat(0); });
}

std::optional<std::vector<std::vector<Rat>>> relative_alex(const TypeD& D) {
  size_t np = D.matching.pairs.size();
  auto drop = [&](const Elem& label) -> std::optional<std::vector<Rat>> {
    std::optional<std::vector<Rat>> out;
    for (const auto& t : label.terms) {
      std::vector<Rat> a;
      for (auto [i, j] : D.matching.pairs) a.push_back(half(alex2(t, i, j)));
      if (out && !(*out == a)) return std::nullopt;
      out = a;
    }
    return out;
  };
  auto zero_vec = [&] { return std::vector<Rat>(np, Rat(0)); };
  // componentwise vector arithmetic via a thin wrapper
  struct Vec {
    std::vector<Rat> v;
    Vec operator+(const Vec& o) const {
      Vec r = *this;
      for (size_t i = 0; i < v.size(); ++i) r.v[i] = r.v[i] + o.v[i];
      return r;
    }
    Vec operator-(const Vec& o) const {
      Vec r = *this;
      for (size_t i = 0; i < v.size(); ++i) r.v[i] = r.v[i] - o.v[i];
      return r;
    }
    bool operator==(const Vec& o) const { return v == o.v; }
  };
  auto dropv = [&](const Elem& label) -> std::optional<Vec> {
    auto d = drop(label);
    if (!d) return std::nullopt;
    return Vec{*d};
  };
  auto res = integrate_gradings<Vec>((int)D.gen_ids.size(), D.arrows, dropv,
                                     [&] { return Vec{zero_vec()}; });
  if (!res) return std::nullopt;
  std::vector<std::vector<Rat>> out;
  for (auto& g : *res) out.push_back(g.v);
  return out;
}

// ------------------------------------------------------------------- DD --

int DD::add_gen(const std::string& id, Idem ib, Idem idual) {
  gen_ids.push_back(id);
  idemB.push_back(ib);
  idemDual.push_back(idual);
  return (int)gen_ids.size() - 1;
}

void DD::add_arrow_terms(int src, int dst, const DDLabel& terms) {
  if (terms.empty()) return;
  auto& label = arrows[{src, dst}];
  for (const auto& t : terms) {
    auto it = label.find(t);
    if (it != label.end())
      label.erase(it);
    else
      label.insert(t);
  }
  if (label.empty()) arrows.erase({src, dst});
}

void DD::add_arrow(int src, int dst, const Elem& b, const DualElem& d) {
  DDLabel terms;
  for (const auto& tb : b.terms)
    for (const auto& td : d.terms) terms.insert({tb, td});
  add_arrow_terms(src, dst, terms);
}

int DD::gen_index(const std::string& id) const {
  for (size_t i = 0; i < gen_ids.size(); ++i)
    if (gen_ids[i] == id) return (int)i;
  return -1;
}

namespace {

std::string dd_label_str(const DDLabel& label, int mB, int nDual) {
  std::string out;
  for (const auto& [b, d] : label) {
    if (!out.empty()) out += " + ";
    out += "(" + term_str(b, mB) + " | " + dual_term_str(d, nDual) + ")";
  }
  return out.empty() ? "0" : out;
}

// multiply two DD labels: B parts in B(mB,kB), dual parts in the dual algebra
DDLabel dd_label_mul(const DDLabel& l1, const DDLabel& l2, int mB,
                     const Matching& matchDual, int nDual) {
  DDLabel out;
  auto toggle = [&](const DDTermPair& p) {
    auto it = out.find(p);
    if (it != out.end())
      out.erase(it);
    else
      out.insert(p);
  };
  for (const auto& [b1, d1] : l1)
    for (const auto& [b2, d2] : l2) {
      if (b1.right != b2.left) continue;
      Term b{b1.left, b2.right, b1.dw};
      for (int i = 0; i < mB; ++i) b.dw[i] += b2.dw[i];
      if (in_ideal(b, mB)) continue;
      DualElem dm = dual_mul(DualElem{nDual, {d1}}, DualElem{nDual, {d2}},
                             matchDual);
      for (const auto& d : dm.terms) toggle({b, d});
    }
  return out;
}

} // namespace

Report validate_dd(const DD& K) {
  Report rep;
  for (const auto& [key, label] : K.arrows) {
    auto [src, dst] = key;
    for (const auto& [b, d] : label) {
      if (b.left != K.idemB[src] || b.right != K.idemB[dst])
        rep.fail("arrow " + K.gen_ids[src] + " -> " + K.gen_ids[dst] +
                 ": B-part idempotent mismatch on " + term_str(b, K.mB));
      if (d.body.left != K.idemDual[src] || d.body.right != K.idemDual[dst])
        rep.fail("arrow " + K.gen_ids[src] + " -> " + K.gen_ids[dst] +
                 ": dual idempotent mismatch on " +
                 dual_term_str(d, K.nDual));
    }
  }
  Elem mu = K.matchB.pairs.empty() ? zero(K.mB)
                                   : mu0_general(K.matchB, K.mB, K.kB);
  int N = (int)K.gen_ids.size();
  for (int x = 0; x < N; ++x) {
    std::map<int, DDLabel> acc;
    auto toggle_into = [&](int dst, const DDTermPair& p) {
      auto& bucket = acc[dst];
      auto it = bucket.find(p);
      if (it != bucket.end())
        bucket.erase(it);
      else
        bucket.insert(p);
    };
    for (const auto& [k1, l1] : K.arrows) {
      if (k1.first != x) continue;
      int y = k1.second;
      // composition terms
      for (const auto& [k2, l2] : K.arrows) {
        if (k2.first != y) continue;
        DDLabel prod = dd_label_mul(l1, l2, K.mB, K.matchDual, K.nDual);
        for (const auto& p : prod) toggle_into(k2.second, p);
      }
      // differential of the dual factor
      for (const auto& [b, d] : l1) {
        DualElem dd = dual_diff(DualElem{K.nDual, {d}});
        for (const auto& t : dd.terms) toggle_into(y, {b, t});
      }
    }
    // curvature I_x mu0 (x) 1
    Elem curv = mul(idem_elem(K.idemB[x], K.mB), mu);
    DualMono dual_id{Term{K.idemDual[x], K.idemDual[x],
                          std::vector<int>(2 * K.nDual, 0)},
                     0};
    for (const auto& t : curv.terms) toggle_into(x, {t, dual_id});
    for (const auto& [z, label] : acc)
      if (!label.empty())
        rep.fail("DD relation fails at " + K.gen_ids[x] + " -> " +
                 K.gen_ids[z] + ": residue " +
                 dd_label_str(label, K.mB, K.nDual));
  }
  // Delta-homogeneity per arrow plus global consistency, by integration
  {
    std::vector<std::optional<Rat>> gr(N);
    bool ok = true;
    for (int root = 0; root < N && ok; ++root) {
      if (gr[root]) continue;
      gr[root] = Rat(0);
      std::queue<int> bfs;
      bfs.push(root);
      while (!bfs.empty() && ok) {
        int u = bfs.front();
        bfs.pop();
        for (const auto& [key, label] : K.arrows) {
          auto [s, t] = key;
          if (s != u && t != u) continue;
          std::optional<Rat> d;
          for (const auto& [b, dm] : label) {
            Rat v = half(delta2(b) + dual_delta2(dm)) + Rat(1);
            if (d && !(*d == v)) { ok = false; break; }
            d = v;
          }
          if (!ok) break;
          if (s == u && !gr[t]) {
            gr[t] = *gr[u] - *d;
            bfs.push(t);
          } else if (t == u && !gr[s]) {
            gr[s] = *gr[u] + *d;
            bfs.push(s);
          } else if (!(*gr[s] == *gr[t] + *d)) {
            ok = false;
          }
        }
      }
    }
    if (!ok) rep.fail("DD arrows not Delta-homogeneous/consistent");
  }
  return rep;
}

bool dd_equal(const DD& a, const DD& b) {
  if (a.mB != b.mB || a.kB != b.kB || a.nDual != b.nDual) return false;
  if (a.gen_ids.size() != b.gen_ids.size()) return false;
  auto key_map = [](const DD& K) {
    std::map<std::pair<Idem, Idem>, int> out;
    for (size_t i = 0; i < K.gen_ids.size(); ++i) {
      auto key = std::make_pair(K.idemB[i], K.idemDual[i]);
      if (out.count(key)) return std::map<std::pair<Idem, Idem>, int>{};
      out[key] = (int)i;
    }
    return out;
  };
  auto ka = key_map(a), kb = key_map(b);
  if (ka.empty() || kb.empty()) return false; // non-unique idempotent pairs
  std::vector<int> a_to_b(a.gen_ids.size(), -1);
  for (const auto& [key, ia] : ka) {
    auto it = kb.find(key);
    if (it == kb.end()) return false;
    a_to_b[ia] = it->second;
  }
  std::map<std::pair<int, int>, DDLabel> mapped;
  for (const auto& [key, label] : a.arrows)
    mapped[{a_to_b[key.first], a_to_b[key.second]}] = label;
  return mapped == b.arrows;
}

// ------------------------------------------------------------- patterns --

bool Pattern::concrete() const {
  for (const auto& c : coefs)
    for (int v : c)
      if (v != 0) return false;
  return true;
}

Term Pattern::instantiate(const std::vector<int>& vals) const {
  assert(vals.size() >= coefs.size());
  Term t = base;
  for (size_t p = 0; p < coefs.size(); ++p)
    for (size_t i = 0; i < t.dw.size(); ++i) t.dw[i] += vals[p] * coefs[p][i];
  return t;
}

bool pattern_match(const Pattern& p, const Term& t,
                   std::vector<std::optional<int>>& binding) {
  if (t.left != p.base.left || t.right != p.base.right) return false;
  int m = (int)t.dw.size();
  // residual = t.dw - base - (bound params)
  std::vector<int> res(t.dw);
  for (int i = 0; i < m; ++i) res[i] -= p.base.dw[i];
  std::vector<int> unbound;
  for (int q = 0; q < p.params(); ++q) {
    bool active = false;
    for (int i = 0; i < m; ++i) active |= (p.coefs[q][i] != 0);
    if (!active) continue;
    if ((int)binding.size() > q && binding[q]) {
      for (int i = 0; i < m; ++i) res[i] -= *binding[q] * p.coefs[q][i];
    } else {
      unbound.push_back(q);
    }
  }
  // solve res = sum over unbound params of a_q * coef_q with a_q >= 0
  std::function<bool(size_t, std::vector<int>&)> solve =
      [&](size_t idx, std::vector<int>& res_now) -> bool {
    if (idx == unbound.size()) {
      for (int v : res_now)
        if (v != 0) return false;
      return true;
    }
    int q = unbound[idx];
    // bound on a_q from the first strand with positive coefficient
    int limit = -1;
    for (int i = 0; i < m; ++i)
      if (p.coefs[q][i] > 0) {
        int lim = res_now[i] / p.coefs[q][i];
        limit = (limit < 0) ? lim : std::min(limit, lim);
      }
    if (limit < 0) return false; // param with no positive coefficient here
    for (int a = 0; a <= limit; ++a) {
      std::vector<int> next(res_now);
      for (int i = 0; i < m; ++i) next[i] -= a * p.coefs[q][i];
      bool neg = false;
      for (int v : next) neg |= (v < 0);
      if (neg) continue;
      if (solve(idx + 1, next)) {
        if ((int)binding.size() <= q) binding.resize(q + 1);
        binding[q] = a;
        return true;
      }
    }
    return false;
  };
  std::vector<int> res0 = res;
  return solve(0, res0);
}

int DATable::add_gen(const std::string& id, Idem out, Idem in) {
  gen_ids.push_back(id);
  out_idems.push_back(out);
  in_idems.push_back(in);
  return (int)gen_ids.size() - 1;
}

int DATable::gen_index(const std::string& id) const {
  for (size_t i = 0; i < gen_ids.size(); ++i)
    if (gen_ids[i] == id) return (int)i;
  return -1;
}

std::vector<DAAction> instantiate_actions(const DATable& T, int wcutoff) {
  std::vector<DAAction> out;
  for (const auto& act : T.actions) {
    if (act.params == 0) {
      int w = 0;
      bool live = !in_ideal(act.output.base, T.mOut);
      for (const auto& in : act.inputs) {
        w += term_weight2(in.base);
        live &= !is_idempotent_term(in.base) && !in_ideal(in.base, T.mIn);
      }
      if (live && w <= 2 * wcutoff) out.push_back(act);
      continue;
    }
    // every parameter must increase some input's weight, else instantiation
    // would not terminate
    for (int q = 0; q < act.params; ++q) {
      bool grows = false;
      for (const auto& in : act.inputs)
        if (q < in.params())
          for (int v : in.coefs[q]) grows |= (v > 0);
      if (!grows)
        throw GuardExceeded("parametric action with input-free parameter");
    }
    std::vector<int> vals(act.params, 0);
    while (true) {
      std::vector<Pattern> ins;
      int w = 0;
      for (const auto& in : act.inputs) {
        Term t = in.instantiate(vals);
        ins.push_back(Pattern(t));
        w += term_weight2(t);
      }
      // instances whose inputs are idempotents or die in the ideal act on
      // zero and must not contribute
      bool live = true;
      for (const auto& in : ins)
        live &= !is_idempotent_term(in.base) && !in_ideal(in.base, T.mIn);
      Term outt = act.output.instantiate(vals);
      live &= !in_ideal(outt, T.mOut);
      if (live && w <= 2 * wcutoff) {
        DAAction inst;
        inst.src = act.src;
        inst.dst = act.dst;
        inst.inputs = ins;
        inst.output = Pattern(outt);
        inst.params = 0;
        out.push_back(inst);
      }
      // odometer with weight pruning
      int q = 0;
      for (; q < act.params; ++q) {
        ++vals[q];
        int w2 = 0;
        for (const auto& in : act.inputs) w2 += term_weight2(in.instantiate(vals));
        if (w2 <= 2 * wcutoff) break;
        vals[q] = 0;
      }
      if (q == act.params) break;
    }
  }
  return out;
}

// ------------------------------------------------------------ validate_da --

namespace {

} // namespace

// all factorizations of a pure term u into products p*q of two non-idempotent
// pure terms (p*q = u exactly, since weights add and idempotents compose)
std::vector<std::pair<Term, Term>> term_factorizations(const Term& u, int m,
                                                       int k) {
  std::vector<std::pair<Term, Term>> out;
  for (Idem mid : all_states(m, k)) {
    auto mnp = min_dw(u.left, mid, m);
    auto mnq = min_dw(mid, u.right, m);
    // componentwise: dwp in [mnp, u.dw - mnq], parity of mnp
    std::vector<int> dwp(mnp);
    bool feasible = true;
    for (int i = 0; i < m; ++i) {
      if (mnp[i] + mnq[i] > u.dw[i] ||
          ((u.dw[i] - mnp[i] - mnq[i]) % 2) != 0)
        feasible = false;
    }
    if (!feasible) continue;
    // odometer over even extras for p
    while (true) {
      Term p{u.left, mid, dwp};
      Term q{mid, u.right, u.dw};
      for (int i = 0; i < m; ++i) q.dw[i] -= dwp[i];
      if (!is_idempotent_term(p) && !is_idempotent_term(q) &&
          !in_ideal(p, m) && !in_ideal(q, m))
        out.push_back({p, q});
      int i = 0;
      for (; i < m; ++i) {
        dwp[i] += 2;
        if (dwp[i] + mnq[i] <= u.dw[i]) break;
        dwp[i] = mnp[i];
      }
      if (i == m) break;
    }
  }
  return out;
}

Report validate_da(const DATable& T, int wcutoff) {
  Report rep;
  // well-formedness
  for (const auto& act : T.actions) {
    Idem cur = T.in_idems[act.src];
    for (const auto& in : act.inputs) {
      if (in.base.left != cur) {
        rep.fail("action from " + T.gen_ids[act.src] +
                 ": input chain idempotent mismatch");
        break;
      }
      cur = in.base.right;
      if (is_idempotent_term(in.base) && in.concrete())
        rep.fail("action from " + T.gen_ids[act.src] +
                 ": idempotent used as input");
    }
    if (cur != T.in_idems[act.dst])
      rep.fail("action from " + T.gen_ids[act.src] + " to " +
               T.gen_ids[act.dst] + ": input chain does not reach target");
    if (act.output.base.left != T.out_idems[act.src] ||
        act.output.base.right != T.out_idems[act.dst])
      rep.fail("action from " + T.gen_ids[act.src] +
               ": output idempotent mismatch");
  }
  if (!rep.pass) return rep;

  for (const auto& [key, bucket] : da_residues(T, wcutoff)) {
    std::string seq_str;
    for (const auto& t : key.second) {
      if (!seq_str.empty()) seq_str += ", ";
      seq_str += term_str(t, T.mIn);
    }
    std::string val;
    for (const auto& [t, dst] : bucket) {
      if (!val.empty()) val += " + ";
      val += term_str(t, T.mOut) + "(x)" + T.gen_ids[dst];
    }
    rep.fail("DA relation fails at " + T.gen_ids[key.first] + " on (" +
             seq_str + "): residue " + val);
    if (rep.failures.size() > 20) break;
  }
  return rep;
}

DAResidues da_residues(const DATable& T, int wcutoff) {
  auto acts = instantiate_actions(T, wcutoff + 2);
  Elem muIn = T.matchIn.pairs.empty() ? zero(T.mIn)
                                      : mu0_general(T.matchIn, T.mIn, T.kIn);
  Elem muOut = T.matchOut.pairs.empty()
                   ? zero(T.mOut)
                   : mu0_general(T.matchOut, T.mOut, T.kOut);

  using Key = std::pair<int, std::vector<Term>>;
  DAResidues acc;
  auto toggle = [&](const Key& key, const Term& out, int dst) {
    auto& bucket = acc[key];
    auto it = bucket.find({out, dst});
    if (it != bucket.end())
      bucket.erase(it);
    else
      bucket.insert({out, dst});
  };
  auto seq_weight = [&](const std::vector<Term>& seq) {
    int w = 0;
    for (const auto& t : seq) w += term_weight2(t);
    return w;
  };
  auto seq_of = [](const std::vector<Pattern>& ins) {
    std::vector<Term> seq;
    for (const auto& p : ins) seq.push_back(p.base);
    return seq;
  };

  // composition terms
  for (const auto& a1 : acts)
    for (const auto& a2 : acts) {
      if (a1.dst != a2.src) continue;
      std::vector<Term> seq = seq_of(a1.inputs);
      for (const auto& p : a2.inputs) seq.push_back(p.base);
      if (seq_weight(seq) > 2 * wcutoff) continue;
      Elem prod = mul(Elem{T.mOut, {a1.output.base}},
                      Elem{T.mOut, {a2.output.base}});
      for (const auto& t : prod.terms) toggle({a1.src, seq}, t, a2.dst);
    }
  // mu2-insertion terms
  for (const auto& a : acts) {
    std::vector<Term> seq = seq_of(a.inputs);
    if (seq_weight(seq) > 2 * wcutoff) continue;
    for (size_t t = 0; t < seq.size(); ++t)
      for (const auto& [p, q] : term_factorizations(seq[t], T.mIn, T.kIn)) {
        std::vector<Term> split;
        for (size_t s = 0; s < seq.size(); ++s) {
          if (s == t) {
            split.push_back(p);
            split.push_back(q);
          } else {
            split.push_back(seq[s]);
          }
        }
        toggle({a.src, split}, a.output.base, a.dst);
      }
  }
  // curvature-insertion terms: input equal to a term of mu0^in removed
  for (const auto& a : acts) {
    std::vector<Term> seq = seq_of(a.inputs);
    for (size_t t = 0; t < seq.size(); ++t) {
      if (!muIn.terms.count(seq[t])) continue;
      std::vector<Term> shorter;
      for (size_t s = 0; s < seq.size(); ++s)
        if (s != t) shorter.push_back(seq[s]);
      if (seq_weight(shorter) > 2 * wcutoff) continue;
      toggle({a.src, shorter}, a.output.base, a.dst);
    }
  }
  // output curvature at the empty sequence
  for (int g = 0; g < (int)T.gen_ids.size(); ++g) {
    Elem curv = mul(idem_elem(T.out_idems[g], T.mOut), muOut);
    for (const auto& t : curv.terms) toggle({g, {}}, t, g);
  }

  for (auto it = acc.begin(); it != acc.end();)
    it = it->second.empty() ? acc.erase(it) : std::next(it);
  return acc;
}

// ---------------------------------------------------------------- boxes --

TypeD box_da_d(const DATable& T, const TypeD& D, const BoxOptions& opt) {
  if (T.mIn != D.m || T.kIn != D.k)
    throw std::invalid_argument("box_da_d: algebra mismatch");
  TypeD out;
  out.m = T.mOut;
  out.k = T.kOut;
  out.matching = T.matchOut;
  std::map<std::pair<int, int>, int> index;
  for (int x = 0; x < (int)T.gen_ids.size(); ++x)
    for (int p = 0; p < (int)D.gen_ids.size(); ++p)
      if (T.in_idems[x] == D.idems[p])
        index[{x, p}] =
            out.add_gen(T.gen_ids[x] + "|" + D.gen_ids[p], T.out_idems[x]);

  for (const auto& act : T.actions) {
    // DFS matching act.inputs against paths in D
    std::function<void(int, int, int, std::vector<std::optional<int>>&)> rec =
        [&](int step, int start_p, int cur_p,
            std::vector<std::optional<int>>& binding) {
          if (step == (int)act.inputs.size()) {
            std::vector<int> vals(act.params, 0);
            for (int q = 0; q < act.params; ++q) {
              if (q < (int)binding.size() && binding[q]) vals[q] = *binding[q];
              else if (q < act.output.params() &&
                       !act.output.concrete()) {
                bool active = false;
                for (int v : act.output.coefs[q]) active |= (v != 0);
                if (active)
                  throw GuardExceeded(
                      "box_da_d: output parameter not bound by inputs");
              }
            }
            Term outt = act.output.instantiate(vals);
            if (!in_ideal(outt, T.mOut))
              out.add_arrow(index.at({act.src, start_p}),
                            index.at({act.dst, cur_p}),
                            Elem{T.mOut, {outt}});
            return;
          }
          for (const auto& [key, label] : D.arrows) {
            if (key.first != cur_p) continue;
            for (const auto& t : label.terms) {
              auto saved = binding;
              if (pattern_match(act.inputs[step], t, binding))
                rec(step + 1, start_p, key.second, binding);
              binding = saved;
            }
          }
        };
    for (int p = 0; p < (int)D.gen_ids.size(); ++p) {
      if (D.idems[p] != T.in_idems[act.src]) continue;
      std::vector<std::optional<int>> binding;
      rec(0, p, p, binding);
    }
  }
  return out;
}

DD box_da_dd(const DATable& T, const DD& K, const BoxOptions& opt) {
  if (T.mIn != K.mB || T.kIn != K.kB)
    throw std::invalid_argument("box_da_dd: algebra mismatch");
  DD out;
  out.mB = T.mOut;
  out.kB = T.kOut;
  out.matchB = T.matchOut;
  out.nDual = K.nDual;
  out.matchDual = K.matchDual;
  std::map<std::pair<int, int>, int> index;
  for (int x = 0; x < (int)T.gen_ids.size(); ++x)
    for (int p = 0; p < (int)K.gen_ids.size(); ++p)
      if (T.in_idems[x] == K.idemB[p])
        index[{x, p}] = out.add_gen(T.gen_ids[x] + "|" + K.gen_ids[p],
                                    T.out_idems[x], K.idemDual[p]);

  for (const auto& act : T.actions) {
    std::function<void(int, int, int, const DualElem&,
                       std::vector<std::optional<int>>&)>
        rec = [&](int step, int start_p, int cur_p, const DualElem& dual_acc,
                  std::vector<std::optional<int>>& binding) {
          if (step == (int)act.inputs.size()) {
            std::vector<int> vals(act.params, 0);
            for (int q = 0; q < act.params; ++q)
              if (q < (int)binding.size() && binding[q]) vals[q] = *binding[q];
            Term outt = act.output.instantiate(vals);
            if (!in_ideal(outt, T.mOut))
              out.add_arrow(index.at({act.src, start_p}),
                            index.at({act.dst, cur_p}),
                            Elem{T.mOut, {outt}}, dual_acc);
            return;
          }
          for (const auto& [key, label] : K.arrows) {
            if (key.first != cur_p) continue;
            for (const auto& [b, d] : label) {
              auto saved = binding;
              if (pattern_match(act.inputs[step], b, binding)) {
                DualElem dstep{K.nDual, {d}};
                DualElem next =
                    opt.reverse_dual_order
                        ? dual_mul(dstep, dual_acc, K.matchDual)
                        : dual_mul(dual_acc, dstep, K.matchDual);
                if (!next.is_zero())
                  rec(step + 1, start_p, key.second, next, binding);
              }
              binding = saved;
            }
          }
        };
    for (int p = 0; p < (int)K.gen_ids.size(); ++p) {
      if (K.idemB[p] != T.in_idems[act.src]) continue;
      std::vector<std::optional<int>> binding;
      rec(0, p, p, dual_idem(K.idemDual[p], K.nDual), binding);
    }
  }
  return out;
}

// --------------------------------------------------------- path modules --

int PathModule::add_node(const std::string& id, Idem idem, bool module_gen) {
  nodes.push_back({id, idem, module_gen});
  return (int)nodes.size() - 1;
}

void FreeComplex::add_entry(int src, int dst, int u, int v) {
  auto& cell = diff[{src, dst}];
  auto it = cell.find({u, v});
  if (it != cell.end())
    cell.erase(it);
  else
    cell.insert({u, v});
  if (cell.empty()) diff.erase({src, dst});
}

FreeComplex pair_path_module(const PathModule& P, const TypeD& D,
                             const BoxOptions& opt) {
  FreeComplex C;
  C.base = (P.base == PathModule::Base::UV)  ? FreeComplex::Base::UV
           : (P.base == PathModule::Base::U) ? FreeComplex::Base::U
                                             : FreeComplex::Base::F2;
  std::map<std::pair<int, int>, int> index;
  for (int v = 0; v < (int)P.nodes.size(); ++v) {
    if (!P.nodes[v].module_gen) continue;
    for (int p = 0; p < (int)D.gen_ids.size(); ++p)
      if (P.nodes[v].idem == D.idems[p]) {
        index[{v, p}] = (int)C.gen_ids.size();
        C.gen_ids.push_back(P.nodes[v].id + "|" + D.gen_ids[p]);
      }
  }
  for (const auto& [start, gi] : index) {
    auto [v0, p0] = start;
    // DFS: interior nodes must be auxiliary
    std::function<void(int, int, int, int, int)> rec = [&](int vn, int pn,
                                                           int uexp, int vexp,
                                                           int depth) {
      if (depth > opt.delta_drop_cap)
        throw GuardExceeded("pair_path_module: path length guard exceeded");
      for (const auto& e : P.edges) {
        if (e.src != vn) continue;
        for (const auto& [key, label] : D.arrows) {
          if (key.first != pn) continue;
          for (const auto& t : label.terms) {
            std::vector<std::optional<int>> binding;
            if (!pattern_match(e.input, t, binding)) continue;
            int u2 = e.output.u_base, v2 = e.output.v_base;
            for (size_t q = 0; q < e.output.u_coefs.size(); ++q)
              if (q < binding.size() && binding[q])
                u2 += *binding[q] * e.output.u_coefs[q];
            for (size_t q = 0; q < e.output.v_coefs.size(); ++q)
              if (q < binding.size() && binding[q])
                v2 += *binding[q] * e.output.v_coefs[q];
            int nu = uexp + u2, nv = vexp + v2;
            if (C.base == FreeComplex::Base::UV && nu > 0 && nv > 0)
              continue; // killed by UV = 0
            if (C.base == FreeComplex::Base::U && nv > 0) continue;
            if (C.base == FreeComplex::Base::F2 && (nu > 0 || nv > 0))
              continue;
            if (P.nodes[e.dst].module_gen) {
              auto it = index.find({e.dst, key.second});
              if (it != index.end()) C.add_entry(gi, it->second, nu, nv);
            } else {
              rec(e.dst, key.second, nu, nv, depth + 1);
            }
          }
        }
      }
    };
    rec(v0, p0, 0, 0, 0);
  }
  return C;
}

} // namespace kf
