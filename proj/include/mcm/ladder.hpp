#pragma once

// Knitting on the level-wise cover of an AR quiver: minimal right add(S)-approximations.

#include <cstdint>
#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "quiver.hpp"

namespace mcm {

enum class EntryStatus : std::uint8_t { live, in_S, negative, zero, initial };

inline std::string_view to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::live: return "live";
    case EntryStatus::in_S: return "in_S";
    case EntryStatus::negative: return "negative";
    case EntryStatus::zero: return "zero";
    case EntryStatus::initial: return "initial";
  }
  return "?";
}

struct CoverEntry {
  VertexId vertex;
  std::int64_t raw;
  EntryStatus status;
};

struct CoverLevel {
  std::size_t index = 0;
  std::vector<CoverEntry> entries;  // ascending vertex id
};

struct Approximation {
  VertexId target = no_vertex;
  std::vector<VertexId> set;
  ModuleVector middle;
  ModuleVector kernel;
  std::size_t levels_used = 0;
};

inline constexpr std::size_t default_max_levels = 10000;

struct KnitBudgetExhausted : std::runtime_error {
  KnitBudgetExhausted(Approximation partial_, std::size_t budget)
      : std::runtime_error("knit: level budget " + std::to_string(budget) +
                           " exhausted before the ladder terminated"),
        partial(std::move(partial_)) {}
  Approximation partial;
};

// Immutable adjacency view of a quiver, shared by every knit against it.
class Engine {
 public:
  explicit Engine(const TranslationQuiver& q) : q_(&q), n_(q.size()) {
    pred_off_.assign(n_ + 1, 0);
    succ_off_.assign(n_ + 1, 0);
    for (auto& [e, m] : q.arrows) {
      ++pred_off_[e.second + 1];
      ++succ_off_[e.first + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) {
      pred_off_[i + 1] += pred_off_[i];
      succ_off_[i + 1] += succ_off_[i];
    }
    preds_.resize(q.arrows.size());
    succs_.resize(q.arrows.size());
    auto pf = pred_off_, sf = succ_off_;
    for (auto& [e, m] : q.arrows) {
      preds_[pf[e.second]++] = {e.first, m};
      succs_[sf[e.first]++] = {e.second, m};
    }
    tau_inv_.assign(n_, no_vertex);
    zero_ = q.zero_vertex();
    for (auto& [a, b] : q.tau)
      if (b < n_) tau_inv_[b] = a;
  }

  const TranslationQuiver& quiver() const { return *q_; }
  std::size_t size() const { return n_; }
  VertexId zero() const { return zero_; }
  VertexId tau_inv(VertexId v) const { return tau_inv_[v]; }

  struct Adj {
    VertexId v;
    std::uint32_t mult;
  };
  std::span<const Adj> preds(VertexId v) const {
    return {preds_.data() + pred_off_[v], preds_.data() + pred_off_[v + 1]};
  }
  std::span<const Adj> succs(VertexId v) const {
    return {succs_.data() + succ_off_[v], succs_.data() + succ_off_[v + 1]};
  }

 private:
  const TranslationQuiver* q_;
  std::size_t n_;
  std::vector<std::size_t> pred_off_, succ_off_;
  std::vector<Adj> preds_, succs_;
  std::vector<VertexId> tau_inv_;
  VertexId zero_ = no_vertex;
};

// Reusable scratch space so repeated knits do not allocate.
class Knitter {
 public:
  explicit Knitter(const Engine& e)
      : e_(&e), n_(e.size()), raw_(3 * n_), status_(3 * n_), stamp_(3 * n_, 0),
        mark_(n_, 0), mid_(n_, 0), ker_(n_, 0) {}

  // Returns false when the level budget runs out; out holds the partial state then.
  template <class InSet>
  bool run(VertexId target, const InSet& in_s, std::size_t max_levels, Approximation& out,
           std::vector<CoverLevel>* trace = nullptr) {
    std::fill(mid_.begin(), mid_.end(), 0);
    std::fill(ker_.begin(), ker_.end(), 0);

    // level L lives in slot L % 3; an entry is present when its stamp equals the slot tag
    auto eff = [&](std::size_t level, VertexId v) -> std::int64_t {
      if (v == no_vertex || v == e_->zero()) return 0;
      std::size_t i = (level % 3) * n_ + v;
      if (stamp_[i] != tag_[level % 3]) return 0;
      auto s = status_[i];
      return (s == EntryStatus::live || s == EntryStatus::initial) ? raw_[i] : 0;
    };
    auto open_level = [&](std::size_t level) {
      tag_[level % 3] = ++tick_;
      members_[level % 3].clear();
    };
    auto put = [&](std::size_t level, VertexId v, std::int64_t k, EntryStatus s) {
      std::size_t i = (level % 3) * n_ + v;
      stamp_[i] = tag_[level % 3];
      raw_[i] = k;
      status_[i] = s;
      members_[level % 3].push_back(v);
    };

    // levels -1 and -2 are absent
    tag_[1] = ++tick_;
    tag_[2] = ++tick_;
    members_[1].clear();
    members_[2].clear();
    open_level(0);
    put(0, target, 1, EntryStatus::initial);
    if (trace) {
      trace->clear();
      trace->push_back({0, {{target, 1, EntryStatus::initial}}});
    }
    std::size_t prev_live = 1;
    std::size_t level = 0;
    bool ok = true;
    while (true) {
      ++level;
      if (level > max_levels) {
        ok = false;
        level = max_levels;
        break;
      }
      open_level(level);
      // candidates: vertices with an arrow into the previous level
      ++mark_round_;
      std::vector<VertexId>& cand = cand_;
      cand.clear();
      for (VertexId w : members_[(level - 1) % 3])
        for (auto [u, m] : e_->preds(w))
          if (mark_[u] != mark_round_) {
            mark_[u] = mark_round_;
            cand.push_back(u);
          }
      std::sort(cand.begin(), cand.end());
      std::size_t live = 0;
      for (VertexId u : cand) {
        std::int64_t k = 0;
        for (auto [w, m] : e_->succs(u)) k += static_cast<std::int64_t>(m) * eff(level - 1, w);
        if (level >= 2) k -= eff(level - 2, e_->tau_inv(u));
        EntryStatus s;
        if (k < 0) {
          s = EntryStatus::negative;
          ker_[u] += -k;
        } else if (in_s(u)) {
          s = EntryStatus::in_S;
          mid_[u] += k;
        } else if (k == 0) {
          s = EntryStatus::zero;
        } else {
          s = EntryStatus::live;
          ++live;
        }
        put(level, u, k, s);
      }
      if (trace) {
        CoverLevel cl{level, {}};
        for (VertexId u : cand) {
          std::size_t i = (level % 3) * n_ + u;
          cl.entries.push_back({u, raw_[i], status_[i]});
        }
        trace->push_back(std::move(cl));
      }
      if (live == 0 && prev_live == 0) break;
      prev_live = live;
    }
    out.target = target;
    out.middle = ModuleVector{};
    out.kernel = ModuleVector{};
    for (VertexId v = 0; v < n_; ++v) {
      if (mid_[v] > 0) out.middle.add(v, static_cast<std::uint64_t>(mid_[v]));
      if (ker_[v] > 0) out.kernel.add(v, static_cast<std::uint64_t>(ker_[v]));
    }
    out.levels_used = level;
    return ok;
  }

 private:
  const Engine* e_;
  std::size_t n_;
  std::vector<std::int64_t> raw_;
  std::vector<EntryStatus> status_;
  std::vector<std::uint64_t> stamp_;
  std::vector<std::uint64_t> mark_;
  std::uint64_t mark_round_ = 0;
  std::uint64_t tag_[3] = {0, 0, 0};
  std::uint64_t tick_ = 0;
  std::vector<std::int64_t> mid_, ker_;
  std::vector<VertexId> members_[3];
  std::vector<VertexId> cand_;
};

inline void check_knit_args(const TranslationQuiver& q, VertexId target, const VertexSet& s) {
  if (target >= q.size() || !q.is_real(target))
    throw QuiverError("knit: target must be a real vertex");
  if (s.empty()) throw QuiverError("knit: S must be nonempty");
  for (VertexId v : s.members())
    if (v >= q.size() || !q.is_real(v)) throw QuiverError("knit: S must contain only real vertices");
}

inline Approximation knit(const Engine& e, VertexId target, const VertexSet& s,
                          std::size_t max_levels = default_max_levels,
                          std::vector<CoverLevel>* trace = nullptr) {
  check_knit_args(e.quiver(), target, s);
  Knitter k(e);
  Approximation a;
  bool ok = k.run(target, [&](VertexId v) { return s.contains(v); }, max_levels, a, trace);
  a.set = s.members();
  if (!ok) throw KnitBudgetExhausted(std::move(a), max_levels);
  return a;
}

inline Approximation knit(const TranslationQuiver& q, VertexId target, const VertexSet& s,
                          std::size_t max_levels = default_max_levels,
                          std::vector<CoverLevel>* trace = nullptr) {
  Engine e(q);
  return knit(e, target, s, max_levels, trace);
}

}  // namespace mcm
