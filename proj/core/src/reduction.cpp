#include "kf/reduction.hpp"

#include <optional>
#include <stdexcept>

namespace kf {

namespace {

const Term* unit_term(const Elem& e) {
  for (const auto& t : e.terms) {
    bool zero = true;
    for (int v : t.dw)
      if (v) {
        zero = false;
        break;
      }
    if (zero) return &t;
  }
  return nullptr;
}

bool has_unit(const std::set<std::pair<int, int>>& entry) {
  return entry.count({0, 0}) != 0;
}

} // namespace

TypeD reduce_type_d(const TypeD& D) {
  int n = (int)D.gen_ids.size();
  std::vector<char> alive(n, 1);
  auto arrows = D.arrows;

  auto accumulate = [&](int a, int b, const Elem& e) {
    if (e.is_zero()) return;
    auto key = std::make_pair(a, b);
    auto it = arrows.find(key);
    if (it == arrows.end()) {
      arrows.emplace(key, e);
    } else {
      it->second = add(it->second, e);
      if (it->second.is_zero()) arrows.erase(it);
    }
  };

  while (true) {
    int cs = -1, cd = -1;
    for (const auto& [key, label] : arrows) {
      if (key.first == key.second) continue;
      if (unit_term(label)) {
        cs = key.first;
        cd = key.second;
        break;
      }
    }
    if (cs < 0) break;
    if (arrows.at({cs, cd}).terms.size() != 1)
      throw std::runtime_error(
          "reduce_type_d: invertible component with extra terms");
    std::vector<std::pair<int, Elem>> in, out;
    for (const auto& [key, label] : arrows) {
      if (key.second == cd && key.first != cs && key.first != cd)
        in.push_back({key.first, label});
      if (key.first == cs && key.second != cd && key.second != cs)
        out.push_back({key.second, label});
    }
    for (const auto& [a, B] : in)
      for (const auto& [b, C] : out) accumulate(a, b, mul(B, C));
    for (auto it = arrows.begin(); it != arrows.end();) {
      auto [s, d] = it->first;
      if (s == cs || s == cd || d == cs || d == cd)
        it = arrows.erase(it);
      else
        ++it;
    }
    alive[cs] = alive[cd] = 0;
  }

  TypeD R;
  R.m = D.m;
  R.k = D.k;
  R.matching = D.matching;
  std::vector<int> remap(n, -1);
  for (int g = 0; g < n; ++g)
    if (alive[g]) remap[g] = R.add_gen(D.gen_ids[g], D.idems[g]);
  for (const auto& [key, label] : arrows)
    R.add_arrow(remap[key.first], remap[key.second], label);
  return R;
}

FreeComplex reduce_free(const FreeComplex& C) {
  int n = (int)C.gen_ids.size();
  std::vector<char> alive(n, 1);
  auto diff = C.diff;

  auto mono_mul = [&](std::pair<int, int> a,
                      std::pair<int, int> b) -> std::optional<std::pair<int, int>> {
    int u = a.first + b.first, v = a.second + b.second;
    if (C.base == FreeComplex::Base::UV && u > 0 && v > 0) return std::nullopt;
    return std::make_pair(u, v);
  };
  auto accumulate = [&](int a, int b, std::pair<int, int> m) {
    auto& entry = diff[{a, b}];
    auto it = entry.find(m);
    if (it != entry.end())
      entry.erase(it);
    else
      entry.insert(m);
    if (entry.empty()) diff.erase({a, b});
  };

  while (true) {
    int cs = -1, cd = -1;
    for (const auto& [key, entry] : diff) {
      if (key.first == key.second) continue;
      if (has_unit(entry)) {
        cs = key.first;
        cd = key.second;
        break;
      }
    }
    if (cs < 0) break;
    if (diff.at({cs, cd}).size() != 1)
      throw std::runtime_error("reduce_free: unit entry with extra terms");
    std::vector<std::pair<int, std::set<std::pair<int, int>>>> in, out;
    for (const auto& [key, entry] : diff) {
      if (key.second == cd && key.first != cs && key.first != cd)
        in.push_back({key.first, entry});
      if (key.first == cs && key.second != cd && key.second != cs)
        out.push_back({key.second, entry});
    }
    for (const auto& [a, B] : in)
      for (const auto& [b, Cc] : out)
        for (const auto& mb : B)
          for (const auto& mc : Cc)
            if (auto m = mono_mul(mb, mc)) accumulate(a, b, *m);
    for (auto it = diff.begin(); it != diff.end();) {
      auto [s, d] = it->first;
      if (s == cs || s == cd || d == cs || d == cd)
        it = diff.erase(it);
      else
        ++it;
    }
    alive[cs] = alive[cd] = 0;
  }

  FreeComplex R;
  R.base = C.base;
  std::vector<int> remap(n, -1);
  for (int g = 0; g < n; ++g)
    if (alive[g]) {
      remap[g] = (int)R.gen_ids.size();
      R.gen_ids.push_back(C.gen_ids[g]);
    }
  for (const auto& [key, entry] : diff)
    for (const auto& [u, v] : entry)
      R.add_entry(remap[key.first], remap[key.second], u, v);
  return R;
}

int f2_rank(std::vector<uint64_t> rows) {
  int rank = 0;
  for (int col = 0; col < 64; ++col) {
    uint64_t bit = 1ull << col;
    size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot] & bit)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (size_t r = 0; r < rows.size(); ++r)
      if (r != (size_t)rank && (rows[r] & bit)) rows[r] ^= rows[rank];
    ++rank;
  }
  return rank;
}

int hat_homology_rank(const FreeComplex& C) {
  int n = (int)C.gen_ids.size();
  std::vector<uint64_t> rows(n, 0);
  for (const auto& [key, entry] : C.diff)
    if (entry.count({0, 0})) rows[key.first] |= 1ull << key.second;
  return n - 2 * f2_rank(rows);
}

} // namespace kf
