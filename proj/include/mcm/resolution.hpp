#pragma once

// Minimal projective resolutions of the simples of End_R(M) and global dimension.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ladder.hpp"

namespace mcm {

inline constexpr std::size_t default_max_steps = 10000;

struct Budgets {
  std::size_t max_levels = default_max_levels;
  std::size_t max_steps = default_max_steps;
};

enum class ResolutionStatus { finite, infinite, budget_exhausted };

inline std::string_view to_string(ResolutionStatus s) {
  switch (s) {
    case ResolutionStatus::finite: return "finite";
    case ResolutionStatus::infinite: return "infinite";
    case ResolutionStatus::budget_exhausted: return "budget_exhausted";
  }
  return "?";
}

struct Resolution {
  VertexId simple_at = no_vertex;
  std::vector<ModuleVector> terms;    // T_0 = {z:1}, then projective terms
  std::vector<ModuleVector> kernels;  // K_0, K_1, ...
  ResolutionStatus status = ResolutionStatus::finite;
  std::size_t pd = 0;                     // finite only
  std::size_t period_detected_at = 0;     // infinite: step whose non-S support repeats
  std::size_t period_matches = 0;         // infinite: the earlier step it repeats
  std::string diagnostic;                 // budget_exhausted: what ran out
};

// Memo of knit results for one fixed S, indexed by target.
class ApproximationCache {
 public:
  ApproximationCache(const Engine& e, const VertexSet& s, std::size_t max_levels)
      : knitter_(e), s_(&s), max_levels_(max_levels), slots_(e.size()) {}

  // nullptr when the level budget runs out
  const Approximation* get(VertexId target) {
    auto& slot = slots_[target];
    if (!slot.done) {
      slot.done = true;
      slot.ok = knitter_.run(target, [this](VertexId v) { return s_->contains(v); }, max_levels_,
                             slot.a);
    }
    return slot.ok ? &slot.a : nullptr;
  }

  // Already computed approximation, if any; never knits.
  const Approximation* peek(VertexId target) const {
    const auto& slot = slots_[target];
    return slot.done && slot.ok ? &slot.a : nullptr;
  }

  // Rebind to another S, keeping the scratch buffers.
  void reset(const VertexSet& s) {
    s_ = &s;
    for (auto& slot : slots_) slot.done = false;
  }

 private:
  struct Slot {
    bool done = false;
    bool ok = false;
    Approximation a;
  };
  Knitter knitter_;
  const VertexSet* s_;
  std::size_t max_levels_;
  std::vector<Slot> slots_;
};

inline Resolution resolve_simple(ApproximationCache& cache, const VertexSet& s, VertexId z,
                                 std::size_t max_steps = default_max_steps) {
  Resolution r;
  r.simple_at = z;
  r.terms.push_back(ModuleVector{{z, 1}});
  const Approximation* first = cache.get(z);
  if (!first) {
    r.status = ResolutionStatus::budget_exhausted;
    r.diagnostic = "level budget exhausted knitting the approximation of the target";
    return r;
  }
  r.terms.push_back(first->middle);
  r.kernels.push_back(first->kernel);

  std::vector<std::vector<VertexId>> seen;
  for (std::size_t step = 0;; ++step) {
    if (step >= max_steps) {
      r.status = ResolutionStatus::budget_exhausted;
      r.diagnostic = "resolution step budget " + std::to_string(max_steps) + " exhausted";
      return r;
    }
    const ModuleVector& k = r.kernels.back();
    ModuleVector p, c;
    for (auto [v, m] : k) (s.contains(v) ? p : c).add(v, m);
    if (c.empty()) {
      if (!p.empty()) r.terms.push_back(p);
      r.status = ResolutionStatus::finite;
      for (std::size_t i = r.terms.size(); i-- > 0;)
        if (!r.terms[i].empty()) {
          r.pd = i;
          break;
        }
      return r;
    }
    auto sup = c.support();
    for (std::size_t j = 0; j < seen.size(); ++j)
      if (seen[j] == sup) {
        r.status = ResolutionStatus::infinite;
        r.period_detected_at = step;
        r.period_matches = j;
        return r;
      }
    seen.push_back(std::move(sup));
    ModuleVector next_term = p, next_kernel;
    for (auto [v, m] : c) {
      const Approximation* a = cache.get(v);
      if (!a) {
        r.status = ResolutionStatus::budget_exhausted;
        r.diagnostic = "level budget exhausted knitting the approximation of a kernel summand";
        return r;
      }
      next_term.add(a->middle, m);
      next_kernel.add(a->kernel, m);
    }
    r.terms.push_back(std::move(next_term));
    r.kernels.push_back(std::move(next_kernel));
  }
}

inline void check_set(const TranslationQuiver& q, const VertexSet& s) {
  if (s.empty()) throw QuiverError("S must be nonempty");
  for (VertexId v : s.members())
    if (v >= q.size() || !q.is_real(v)) throw QuiverError("S must contain only real vertices");
}

inline Resolution resolve_simple(const Engine& e, const VertexSet& s, VertexId z,
                                 const Budgets& b = {}) {
  check_set(e.quiver(), s);
  if (!s.contains(z)) throw QuiverError("resolve_simple: the simple's vertex must belong to S");
  ApproximationCache cache(e, s, b.max_levels);
  return resolve_simple(cache, s, z, b.max_steps);
}

inline Resolution resolve_simple(const TranslationQuiver& q, const VertexSet& s, VertexId z,
                                 const Budgets& b = {}) {
  Engine e(q);
  return resolve_simple(e, s, z, b);
}

struct GlobalDimension {
  enum Kind { finite, infinite, unknown } kind = finite;
  std::size_t value = 0;                 // finite only
  VertexId witness = no_vertex;          // simple attaining the max, the infinite one, or the exhausted one
  std::string diagnostic;

  bool operator==(const GlobalDimension& o) const { return kind == o.kind && value == o.value; }
};

inline std::string to_string(const GlobalDimension& g) {
  switch (g.kind) {
    case GlobalDimension::finite: return std::to_string(g.value);
    case GlobalDimension::infinite: return "infinite";
    case GlobalDimension::unknown: return "unknown";
  }
  return "?";
}

// Max pd over the simples; stops at the first infinite simple.
inline GlobalDimension global_dimension(ApproximationCache& cache, const VertexSet& s,
                                        std::size_t max_steps = default_max_steps) {
  GlobalDimension g;
  bool unknown = false;
  for (VertexId z : s.members()) {
    Resolution r = resolve_simple(cache, s, z, max_steps);
    if (r.status == ResolutionStatus::infinite) {
      g.kind = GlobalDimension::infinite;
      g.value = 0;
      g.witness = z;
      g.diagnostic.clear();
      return g;
    }
    if (r.status == ResolutionStatus::budget_exhausted) {
      if (!unknown) {
        g.witness = z;
        g.diagnostic = r.diagnostic;
      }
      unknown = true;
      continue;
    }
    if (!unknown && (g.witness == no_vertex || r.pd > g.value)) {
      g.value = r.pd;
      g.witness = z;
    }
  }
  if (unknown) {
    g.kind = GlobalDimension::unknown;
    g.value = 0;
  }
  return g;
}

inline GlobalDimension global_dimension(const Engine& e, const VertexSet& s, const Budgets& b = {}) {
  check_set(e.quiver(), s);
  ApproximationCache cache(e, s, b.max_levels);
  return global_dimension(cache, s, b.max_steps);
}

inline GlobalDimension global_dimension(const TranslationQuiver& q, const VertexSet& s,
                                        const Budgets& b = {}) {
  Engine e(q);
  return global_dimension(e, s, b);
}

}  // namespace mcm
