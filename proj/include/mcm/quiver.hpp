#pragma once

// Translation quivers: data model, JSON documents, validation.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mcm {

using VertexId = std::uint32_t;
inline constexpr VertexId no_vertex = static_cast<VertexId>(-1);

enum class VertexKind { free, nonfree, formal_zero };

inline std::string_view to_string(VertexKind k) {
  switch (k) {
    case VertexKind::free: return "free";
    case VertexKind::nonfree: return "nonfree";
    case VertexKind::formal_zero: return "formal_zero";
  }
  return "?";
}

struct Vertex {
  VertexId id = 0;
  std::string label;
  VertexKind kind = VertexKind::nonfree;
  std::optional<std::vector<std::uint32_t>> rank;

  bool operator==(const Vertex&) const = default;
};

struct QuiverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : QuiverError {
  using QuiverError::QuiverError;
};

// Formal nonnegative combination of vertices, kept sorted by id.
class ModuleVector {
 public:
  using Entry = std::pair<VertexId, std::uint64_t>;

  ModuleVector() = default;
  ModuleVector(std::initializer_list<Entry> init) {
    for (auto [v, m] : init) add(v, m);
  }

  void add(VertexId v, std::uint64_t m) {
    if (m == 0) return;
    auto it = std::lower_bound(e_.begin(), e_.end(), v,
                               [](const Entry& a, VertexId b) { return a.first < b; });
    if (it != e_.end() && it->first == v) it->second += m;
    else e_.insert(it, {v, m});
  }

  void add(const ModuleVector& o, std::uint64_t scale = 1) {
    if (scale == 0) return;
    for (auto [v, m] : o.e_) add(v, m * scale);
  }

  std::uint64_t operator[](VertexId v) const {
    auto it = std::lower_bound(e_.begin(), e_.end(), v,
                               [](const Entry& a, VertexId b) { return a.first < b; });
    return (it != e_.end() && it->first == v) ? it->second : 0;
  }

  bool empty() const { return e_.empty(); }
  std::size_t size() const { return e_.size(); }
  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto& [v, m] : e_) t += m;
    return t;
  }
  std::vector<VertexId> support() const {
    std::vector<VertexId> s;
    s.reserve(e_.size());
    for (auto& [v, m] : e_) s.push_back(v);
    return s;
  }
  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }
  const std::vector<Entry>& entries() const { return e_; }

  bool operator==(const ModuleVector&) const = default;

 private:
  std::vector<Entry> e_;
};

// Dense membership set over vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : bits_(n, false) {}
  VertexSet(std::size_t n, std::initializer_list<VertexId> ids) : bits_(n, false) {
    for (auto v : ids) insert(v);
  }

  void insert(VertexId v) {
    if (v >= bits_.size()) bits_.resize(v + 1, false);
    if (!bits_[v]) {
      bits_[v] = true;
      ++count_;
    }
  }
  bool contains(VertexId v) const { return v < bits_.size() && bits_[v]; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::vector<VertexId> members() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < bits_.size(); ++v)
      if (bits_[v]) out.push_back(v);
    return out;
  }

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

struct TranslationQuiver {
  std::string name;
  int dim = 1;
  std::vector<Vertex> vertices;
  std::map<std::pair<VertexId, VertexId>, std::uint32_t> arrows;  // (from, to) -> mult
  std::map<VertexId, VertexId> tau;

  std::size_t size() const { return vertices.size(); }

  VertexId free_vertex() const {
    for (auto& v : vertices)
      if (v.kind == VertexKind::free) return v.id;
    return no_vertex;
  }
  VertexId zero_vertex() const {
    for (auto& v : vertices)
      if (v.kind == VertexKind::formal_zero) return v.id;
    return no_vertex;
  }
  bool is_real(VertexId v) const {
    return v < vertices.size() && vertices[v].kind != VertexKind::formal_zero;
  }
  std::vector<VertexId> real_vertices() const {
    std::vector<VertexId> out;
    for (auto& v : vertices)
      if (v.kind != VertexKind::formal_zero) out.push_back(v.id);
    return out;
  }
  const std::string& label(VertexId v) const { return vertices.at(v).label; }

  // Label lookup. "R" also names the free vertex when no vertex carries that label.
  std::optional<VertexId> find(std::string_view label) const {
    for (auto& v : vertices)
      if (v.label == label) return v.id;
    if (label == "R") {
      auto f = free_vertex();
      if (f != no_vertex) return f;
    }
    return std::nullopt;
  }

  VertexId at(std::string_view label) const {
    if (auto v = find(label)) return *v;
    std::string known;
    for (auto& v : vertices) {
      if (v.kind == VertexKind::formal_zero) continue;
      if (!known.empty()) known += ", ";
      known += v.label;
    }
    throw QuiverError("unknown vertex label '" + std::string(label) + "' (valid labels: " +
                      known + ")");
  }

  bool operator==(const TranslationQuiver&) const = default;
};

namespace detail {

inline std::string location(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <class T>
T field(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(where + "." + key + ": wrong type");
  }
}

inline VertexKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "free") return VertexKind::free;
  if (s == "nonfree") return VertexKind::nonfree;
  if (s == "formal_zero") return VertexKind::formal_zero;
  throw ParseError(where + ".kind: unknown kind '" + s + "'");
}

}  // namespace detail

inline TranslationQuiver quiver_from_json(const nlohmann::json& doc) {
  using detail::field;
  if (!doc.is_object()) throw ParseError("document: expected a JSON object");
  TranslationQuiver q;
  q.name = doc.contains("name") ? field<std::string>(doc, "name", "document") : "";
  q.dim = field<int>(doc, "dim", "document");
  if (q.dim != 1 && q.dim != 2) throw ParseError("document.dim: must be 1 or 2");

  auto verts = doc.find("vertices");
  if (verts == doc.end() || !verts->is_array())
    throw ParseError("document: missing array 'vertices'");
  if (verts->empty()) throw ParseError("empty quiver");
  std::vector<std::optional<Vertex>> slots(verts->size());
  for (std::size_t i = 0; i < verts->size(); ++i) {
    std::string where = "vertices[" + std::to_string(i) + "]";
    const auto& jv = (*verts)[i];
    Vertex v;
    auto id = field<long long>(jv, "id", where);
    if (id < 0) throw ParseError(where + ".id: negative id");
    if (static_cast<std::size_t>(id) >= verts->size())
      throw ParseError(where + ".id: ids must be dense 0.." + std::to_string(verts->size() - 1) +
                       ", got " + std::to_string(id));
    v.id = static_cast<VertexId>(id);
    v.label = field<std::string>(jv, "label", where);
    v.kind = detail::parse_kind(field<std::string>(jv, "kind", where), where);
    if (jv.contains("rank") && !jv["rank"].is_null()) {
      try {
        v.rank = jv["rank"].get<std::vector<std::uint32_t>>();
      } catch (const nlohmann::json::exception&) {
        throw ParseError(where + ".rank: expected an array of nonnegative integers");
      }
    }
    if (slots[v.id]) throw ParseError(where + ": duplicate vertex id " + std::to_string(v.id));
    slots[v.id] = std::move(v);
  }
  for (auto& s : slots) q.vertices.push_back(std::move(*s));

  auto vertex_ref = [&](const nlohmann::json& obj, const char* key, const std::string& where) {
    auto id = field<long long>(obj, key, where);
    if (id < 0 || static_cast<std::size_t>(id) >= q.vertices.size())
      throw ParseError(where + "." + key + ": unknown vertex id " + std::to_string(id));
    return static_cast<VertexId>(id);
  };

  if (doc.contains("arrows")) {
    const auto& arr = doc["arrows"];
    if (!arr.is_array()) throw ParseError("document.arrows: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string where = "arrows[" + std::to_string(i) + "]";
      auto from = vertex_ref(arr[i], "from", where);
      auto to = vertex_ref(arr[i], "to", where);
      long long mult = arr[i].contains("mult") ? field<long long>(arr[i], "mult", where) : 1;
      if (mult < 1) throw ParseError(where + ".mult: must be >= 1, got " + std::to_string(mult));
      q.arrows[{from, to}] += static_cast<std::uint32_t>(mult);
    }
  }
  if (doc.contains("tau")) {
    const auto& t = doc["tau"];
    if (!t.is_array()) throw ParseError("document.tau: expected an array");
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::string where = "tau[" + std::to_string(i) + "]";
      auto from = vertex_ref(t[i], "from", where);
      auto to = vertex_ref(t[i], "to", where);
      if (q.tau.count(from))
        throw ParseError(where + ": tau defined twice on vertex " + std::to_string(from));
      q.tau[from] = to;
    }
  }
  return q;
}

inline TranslationQuiver parse_quiver(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("syntax error at " + detail::location(text, e.byte) + ": " + e.what());
  }
  return quiver_from_json(doc);
}

inline nlohmann::ordered_json quiver_to_json(const TranslationQuiver& q) {
  nlohmann::ordered_json doc;
  doc["name"] = q.name;
  doc["dim"] = q.dim;
  doc["vertices"] = nlohmann::ordered_json::array();
  for (auto& v : q.vertices) {
    nlohmann::ordered_json jv;
    jv["id"] = v.id;
    jv["label"] = v.label;
    jv["kind"] = std::string(to_string(v.kind));
    if (v.rank) jv["rank"] = *v.rank;
    doc["vertices"].push_back(std::move(jv));
  }
  doc["arrows"] = nlohmann::ordered_json::array();
  for (auto& [e, m] : q.arrows) {
    nlohmann::ordered_json ja;
    ja["from"] = e.first;
    ja["to"] = e.second;
    ja["mult"] = m;
    doc["arrows"].push_back(std::move(ja));
  }
  doc["tau"] = nlohmann::ordered_json::array();
  for (auto& [a, b] : q.tau) {
    nlohmann::ordered_json jt;
    jt["from"] = a;
    jt["to"] = b;
    doc["tau"].push_back(std::move(jt));
  }
  return doc;
}

inline std::string emit_quiver(const TranslationQuiver& q, int indent = 1) {
  return quiver_to_json(q).dump(indent) + "\n";
}

// Content hash: FNV-1a 64 over the compact canonical document.
inline std::string quiver_id(const TranslationQuiver& q) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : quiver_to_json(q).dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int i = 15; i >= 0; --i) out += hex[(h >> (4 * i)) & 0xf];
  return out;
}

inline TranslationQuiver insert_formal_zero(TranslationQuiver q) {
  if (q.dim != 1) throw QuiverError("insert_formal_zero: quiver has dim 2, formal zero is only for curves");
  if (q.zero_vertex() != no_vertex) throw QuiverError("insert_formal_zero: formal zero already present");
  VertexId f = q.free_vertex();
  if (f == no_vertex) throw QuiverError("insert_formal_zero: no free vertex");
  if (q.tau.count(f)) throw QuiverError("insert_formal_zero: tau already defined on the free vertex");
  Vertex z;
  z.id = static_cast<VertexId>(q.vertices.size());
  z.label = "0";
  z.kind = VertexKind::formal_zero;
  q.vertices.push_back(z);
  q.tau[f] = z.id;
  q.tau[z.id] = f;
  return q;
}

// Curves get their formal zero if missing; everything else is returned unchanged.
inline TranslationQuiver normalize(TranslationQuiver q) {
  if (q.dim == 1 && q.zero_vertex() == no_vertex && q.free_vertex() != no_vertex &&
      !q.tau.count(q.free_vertex()))
    return insert_formal_zero(std::move(q));
  return q;
}

struct Violation {
  std::string code;
  std::string message;
};

inline std::vector<Violation> validate(const TranslationQuiver& q) {
  std::vector<Violation> out;
  auto add = [&](std::string code, std::string msg) { out.push_back({std::move(code), std::move(msg)}); };
  auto lab = [&](VertexId v) {
    return v < q.vertices.size() ? "'" + q.vertices[v].label + "'" : "#" + std::to_string(v);
  };

  if (q.vertices.empty()) {
    add("empty", "quiver has no vertices");
    return out;
  }
  if (q.dim != 1 && q.dim != 2) add("dim", "dim must be 1 or 2");
  for (std::size_t i = 0; i < q.vertices.size(); ++i)
    if (q.vertices[i].id != i) add("ids", "vertex ids must be dense and ordered 0..n-1");

  std::map<std::string, VertexId> seen_label;
  for (auto& v : q.vertices)
    if (auto [it, fresh] = seen_label.emplace(v.label, v.id); !fresh)
      add("label", "label '" + v.label + "' used by more than one vertex");

  std::size_t nfree = 0, nzero = 0;
  for (auto& v : q.vertices) {
    nfree += v.kind == VertexKind::free;
    nzero += v.kind == VertexKind::formal_zero;
  }
  if (nfree != 1) add("free", "exactly one free vertex required, found " + std::to_string(nfree));
  if (nzero > 1) add("zero", "at most one formal_zero vertex allowed, found " + std::to_string(nzero));
  if (nzero > 0 && q.dim != 1) add("zero", "formal_zero vertex only allowed when dim = 1");

  for (auto& [e, m] : q.arrows) {
    if (e.first >= q.size() || e.second >= q.size()) {
      add("arrow", "arrow references unknown vertex");
      continue;
    }
    if (!q.is_real(e.first) || !q.is_real(e.second))
      add("zero", "formal_zero vertex has incident arrow " + lab(e.first) + " -> " + lab(e.second));
    if (m < 1) add("arrow", "arrow multiplicity must be >= 1");
  }

  VertexId f = q.free_vertex();
  VertexId z = q.zero_vertex();
  std::map<VertexId, VertexId> preimage;
  for (auto& [a, b] : q.tau) {
    if (a >= q.size() || b >= q.size()) {
      add("tau", "tau references unknown vertex");
      continue;
    }
    auto [it, fresh] = preimage.emplace(b, a);
    if (!fresh) add("tau", "tau not injective: " + lab(it->second) + " and " + lab(a) + " both map to " + lab(b));
  }
  for (auto& v : q.vertices) {
    auto it = q.tau.find(v.id);
    if (q.dim == 1) {
      if (v.kind == VertexKind::free) {
        if (it == q.tau.end())
          add("tau", "tau undefined on free vertex " + lab(v.id) + " (curves need the formal zero vertex)");
        else if (it->second != z)
          add("tau", "tau(free) must be the formal zero vertex");
      } else if (v.kind == VertexKind::formal_zero) {
        if (it == q.tau.end() || it->second != f) add("tau", "tau(formal zero) must be the free vertex");
      } else if (it == q.tau.end()) {
        add("tau", "tau undefined on " + lab(v.id));
      } else if (it->second == z) {
        add("tau", "tau maps nonfree " + lab(v.id) + " to the formal zero vertex");
      }
    } else if (it == q.tau.end()) {
      add("tau", "tau undefined on " + lab(v.id));
    }
  }

  for (auto& [e, m] : q.arrows) {
    auto [u, v] = e;
    auto it = q.tau.find(v);
    if (it == q.tau.end() || it->second == z || it->second >= q.size()) continue;
    auto back = q.arrows.find({it->second, u});
    std::uint32_t have = back == q.arrows.end() ? 0 : back->second;
    if (have != m)
      add("mesh", "mesh: arrow " + lab(u) + " -> " + lab(v) + " (mult " + std::to_string(m) +
                      ") needs tau(" + lab(v) + ") = " + lab(it->second) + " -> " + lab(u) +
                      " with equal multiplicity, found " + std::to_string(have));
  }

  std::optional<std::size_t> rank_len;
  for (auto& v : q.vertices) {
    if (!v.rank) continue;
    if (!rank_len) rank_len = v.rank->size();
    else if (*rank_len != v.rank->size())
      add("rank", "rank vectors differ in length (vertex " + lab(v.id) + ")");
  }
  return out;
}

inline ModuleVector theta(const TranslationQuiver& q, VertexId v) {
  if (v >= q.size()) throw QuiverError("theta: unknown vertex id " + std::to_string(v));
  if (!q.is_real(v)) throw QuiverError("theta: undefined on the formal zero vertex");
  ModuleVector out;
  for (auto& [e, m] : q.arrows)
    if (e.second == v) out.add(e.first, m);
  return out;
}

// "2*M1+B" style rendering by label; the zero vector renders as "0".
inline std::string format_vector(const TranslationQuiver& q, const ModuleVector& mv) {
  if (mv.empty()) return "0";
  std::string s;
  for (auto& [v, m] : mv) {
    if (!s.empty()) s += "+";
    if (m != 1) s += std::to_string(m) + "*";
    s += q.label(v);
  }
  return s;
}

inline nlohmann::ordered_json vector_to_json(const TranslationQuiver& q, const ModuleVector& mv) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (auto& [v, m] : mv) j[q.label(v)] = m;
  return j;
}

}  // namespace mcm
