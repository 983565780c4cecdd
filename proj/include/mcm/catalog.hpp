#pragma once

// Built-in quivers: A_n curve generators, cyclic quotient surfaces, shipped fixtures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "quiver.hpp"

#ifndef MCM_SPECTRA_DATA_DIR
#define MCM_SPECTRA_DATA_DIR "data"
#endif

namespace mcm::catalog {

namespace detail {

inline Vertex vertex(VertexId id, std::string label, VertexKind kind, std::vector<std::uint32_t> rank) {
  return Vertex{id, std::move(label), kind, std::move(rank)};
}

inline void both_ways(TranslationQuiver& q, VertexId a, VertexId b) {
  q.arrows[{a, b}] += 1;
  q.arrows[{b, a}] += 1;
}

}  // namespace detail

// A_{2k} curve: I_0 (free), ..., I_k, loop at I_k.
inline TranslationQuiver a_even_curve(int k) {
  if (k < 1) throw QuiverError("a_even_curve: k must be >= 1");
  TranslationQuiver q;
  q.name = "A" + std::to_string(2 * k) + " curve";
  q.dim = 1;
  for (int l = 0; l <= k; ++l)
    q.vertices.push_back(detail::vertex(l, "I" + std::to_string(l),
                                        l == 0 ? VertexKind::free : VertexKind::nonfree, {1}));
  for (int l = 0; l < k; ++l) detail::both_ways(q, l, l + 1);
  q.arrows[{static_cast<VertexId>(k), static_cast<VertexId>(k)}] += 1;
  for (int l = 1; l <= k; ++l) q.tau[l] = l;
  return insert_formal_zero(std::move(q));
}

// A_{2k+1} curve: I_0 (free), ..., I_k and the two branches D+, D-.
inline TranslationQuiver a_odd_curve(int k) {
  if (k < 0) throw QuiverError("a_odd_curve: k must be >= 0");
  TranslationQuiver q;
  q.name = "A" + std::to_string(2 * k + 1) + " curve";
  q.dim = 1;
  for (int l = 0; l <= k; ++l)
    q.vertices.push_back(detail::vertex(l, "I" + std::to_string(l),
                                        l == 0 ? VertexKind::free : VertexKind::nonfree, {1, 1}));
  VertexId dp = k + 1, dm = k + 2;
  q.vertices.push_back(detail::vertex(dp, "D+", VertexKind::nonfree, {1, 0}));
  q.vertices.push_back(detail::vertex(dm, "D-", VertexKind::nonfree, {0, 1}));
  for (int l = 0; l < k; ++l) detail::both_ways(q, l, l + 1);
  detail::both_ways(q, k, dp);
  detail::both_ways(q, k, dm);
  for (int l = 1; l <= k; ++l) q.tau[l] = l;
  q.tau[dp] = dm;
  q.tau[dm] = dp;
  return insert_formal_zero(std::move(q));
}

// Cyclic quotient surface C_{n,q}: arrows i -> i+1, i -> i+q, tau(i) = i-(1+q).
inline TranslationQuiver cyclic_surface(int n, int q_) {
  if (n < 2 || q_ < 1 || q_ >= n) throw QuiverError("cyclic_surface: need 1 <= q < n");
  if (std::gcd(n, q_) != 1) throw QuiverError("cyclic_surface: q must be coprime to n");
  TranslationQuiver q;
  q.name = "C_{" + std::to_string(n) + "," + std::to_string(q_) + "} surface";
  q.dim = 2;
  for (int i = 0; i < n; ++i)
    q.vertices.push_back(detail::vertex(i, std::to_string(i),
                                        i == 0 ? VertexKind::free : VertexKind::nonfree, {1}));
  for (int i = 0; i < n; ++i) {
    q.arrows[{static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n)}] += 1;
    q.arrows[{static_cast<VertexId>(i), static_cast<VertexId>((i + q_) % n)}] += 1;
    q.tau[i] = static_cast<VertexId>(((i - 1 - q_) % n + n) % n);
  }
  return q;
}

inline std::vector<std::string> fixture_keys() {
  std::vector<std::string> keys;
  for (int n = 4; n <= 13; ++n) keys.push_back("d_curve_" + std::to_string(n));
  for (auto k : {"e6_curve", "e7_curve", "e8_curve", "d53_surface", "d75_surface"}) keys.emplace_back(k);
  return keys;
}

inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv("MCM_SPECTRA_DATA_DIR"); env && *env) return env;
  return MCM_SPECTRA_DATA_DIR;
}

// Accepts "d_curve_5" as well as "d_curve(5)"; "cyclic_surface(8,5)" as "cyclic_surface_8_5".
inline std::string canonical_key(std::string key) {
  for (auto& c : key)
    if (c == '(' || c == ',') c = '_';
  std::string out;
  for (char c : key)
    if (c != ')' && c != ' ') out += c;
  return out;
}

inline TranslationQuiver load_fixture(const std::string& key_in) {
  std::string key = canonical_key(key_in);
  auto keys = fixture_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw QuiverError("unknown catalog key '" + key_in + "'");
  auto path = data_dir() / (key + ".json");
  std::ifstream in(path);
  if (!in) throw QuiverError("cannot read fixture " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return normalize(parse_quiver(ss.str()));
}

namespace detail {

inline std::vector<int> params(const std::string& key, const std::string& family) {
  std::vector<int> out;
  std::string rest = key.substr(family.size());
  std::stringstream ss(rest);
  std::string part;
  while (std::getline(ss, part, '_')) {
    if (part.empty()) continue;
    try {
      std::size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw QuiverError("bad parameter '" + part + "' in catalog key '" + key + "'");
    }
  }
  return out;
}

}  // namespace detail

// Any catalog quiver: fixtures plus the parametrised generator families.
inline TranslationQuiver from_key(const std::string& key_in) {
  std::string key = canonical_key(key_in);
  auto starts = [&](const std::string& p) { return key.rfind(p + "_", 0) == 0; };
  if (starts("a_even_curve")) {
    auto p = detail::params(key, "a_even_curve");
    if (p.size() != 1) throw QuiverError("a_even_curve takes one parameter");
    return a_even_curve(p[0]);
  }
  if (starts("a_odd_curve")) {
    auto p = detail::params(key, "a_odd_curve");
    if (p.size() != 1) throw QuiverError("a_odd_curve takes one parameter");
    return a_odd_curve(p[0]);
  }
  if (starts("cyclic_surface")) {
    auto p = detail::params(key, "cyclic_surface");
    if (p.size() != 2) throw QuiverError("cyclic_surface takes two parameters");
    return cyclic_surface(p[0], p[1]);
  }
  return load_fixture(key);
}

}  // namespace mcm::catalog
