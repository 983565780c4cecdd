#pragma once

// Shared helpers: label-based vectors and sets, rank bookkeeping.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mcm/mcm.hpp"

namespace mcm::test {

// "2*M1 + B", "A + D+ + D-", "0". Summands are separated by " + " since labels may contain '+'.
inline ModuleVector vec(const TranslationQuiver& q, std::string_view text) {
  ModuleVector out;
  if (text == "0") return out;
  std::size_t at = 0;
  while (at <= text.size()) {
    auto cut = text.find(" + ", at);
    auto term = text.substr(at, cut == std::string_view::npos ? std::string_view::npos : cut - at);
    std::uint64_t mult = 1;
    if (auto star = term.find('*'); star != std::string_view::npos) {
      mult = std::stoull(std::string(term.substr(0, star)));
      term = term.substr(star + 1);
    }
    out.add(q.at(term), mult);
    if (cut == std::string_view::npos) break;
    at = cut + 3;
  }
  return out;
}

inline VertexSet set_of(const TranslationQuiver& q, const std::vector<std::string>& labels) {
  VertexSet s(q.size());
  for (auto& l : labels) s.insert(q.at(l));
  return s;
}

inline std::vector<std::int64_t> rank_of(const TranslationQuiver& q, const ModuleVector& v) {
  std::vector<std::int64_t> r;
  for (auto [id, m] : v) {
    const auto& rk = q.vertices[id].rank;
    if (!rk) throw QuiverError("vertex " + q.label(id) + " has no rank");
    r.resize(std::max(r.size(), rk->size()), 0);
    for (std::size_t i = 0; i < rk->size(); ++i) r[i] += static_cast<std::int64_t>(m) * (*rk)[i];
  }
  return r;
}

// rank(middle) = rank(target) + rank(kernel): holds for every exact 0 -> K -> M' -> X (-> finite length)
inline bool rank_additive(const TranslationQuiver& q, VertexId target, const ModuleVector& middle,
                          const ModuleVector& kernel) {
  auto lhs = rank_of(q, middle);
  auto rhs = rank_of(q, ModuleVector{{target, 1}});
  auto k = rank_of(q, kernel);
  std::size_t n = std::max({lhs.size(), rhs.size(), k.size()});
  lhs.resize(n, 0);
  rhs.resize(n, 0);
  k.resize(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (lhs[i] != rhs[i] + k[i]) return false;
  return true;
}

// Ranks of a finite resolution T0 <- T1 <- ... <- Tn: every syzygy is nonzero with nonnegative rank
// and rank(T1) - rank(K0) = rank(T0).
inline bool rank_consistent(const TranslationQuiver& q, const std::vector<ModuleVector>& t) {
  if (t.size() < 2) return true;
  auto sub = [](std::vector<std::int64_t> a, std::vector<std::int64_t> b) {
    a.resize(std::max(a.size(), b.size()), 0);
    b.resize(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
  };
  // k runs through the syzygies: the kernel of T_i -> T_i-1, starting from T_n itself
  auto k = rank_of(q, t.back());
  for (std::size_t i = t.size() - 2; i >= 2; --i) {
    k = sub(rank_of(q, t[i]), k);
    bool nonzero = false;
    for (auto x : k) {
      if (x < 0) return false;
      nonzero |= x != 0;
    }
    if (!nonzero) return false;
  }
  auto image = sub(rank_of(q, t[1]), k);
  auto zero = sub(image, rank_of(q, t[0]));
  return std::all_of(zero.begin(), zero.end(), [](auto x) { return x == 0; });
}

inline std::vector<ModuleVector> terms(const TranslationQuiver& q, const std::vector<std::string>& texts) {
  std::vector<ModuleVector> out;
  for (auto& t : texts) out.push_back(vec(q, t));
  return out;
}

inline const TranslationQuiver& fixture(const std::string& key) {
  static std::map<std::string, TranslationQuiver> cache;
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, catalog::from_key(key)).first;
  return it->second;
}

// Labels of the real vertices whose bit is set, in ascending id order.
inline std::vector<std::string> labels_of(const TranslationQuiver& q, SubsetIndex mask) {
  std::vector<std::string> out;
  auto real = q.real_vertices();
  for (std::size_t i = 0; i < real.size(); ++i)
    if (mask >> i & 1) out.push_back(q.label(real[i]));
  return out;
}

inline SubsetIndex mask_of(const TranslationQuiver& q, const std::vector<std::string>& labels) {
  auto real = q.real_vertices();
  SubsetIndex m = 0;
  for (auto& l : labels) {
    auto v = q.at(l);
    auto pos = std::find(real.begin(), real.end(), v) - real.begin();
    m |= SubsetIndex{1} << pos;
  }
  return m;
}

}  // namespace mcm::test
