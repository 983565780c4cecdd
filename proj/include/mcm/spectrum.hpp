#pragma once

// Global spectrum: gl.dim of End_R(M) over every basic M, i.e. every nonempty subset of
// indecomposables. Subset index = bitmask over the real vertices in ascending id order.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "resolution.hpp"

namespace mcm {

using SubsetIndex = std::uint64_t;
using IndexRange = std::pair<SubsetIndex, SubsetIndex>;  // half-open [first, second)

inline constexpr int checkpoint_version = 1;
inline constexpr std::size_t max_spectrum_vertices = 62;

struct SpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpectrumReport {
  std::string quiver_id;
  std::map<std::size_t, std::uint64_t> histogram;  // gldim -> count
  std::uint64_t infinite_count = 0;
  std::uint64_t unknown_count = 0;
  SubsetIndex total_subsets = 0;
  std::vector<IndexRange> completed_ranges;  // disjoint, sorted, merged

  std::uint64_t classified() const {
    std::uint64_t t = infinite_count + unknown_count;
    for (auto& [d, c] : histogram) t += c;
    return t;
  }
  std::uint64_t completed() const {
    std::uint64_t t = 0;
    for (auto& [a, b] : completed_ranges) t += b - a;
    return t;
  }
  bool complete() const { return total_subsets > 0 && completed() == total_subsets; }

  bool operator==(const SpectrumReport&) const = default;
};

inline std::vector<IndexRange> merge_ranges(std::vector<IndexRange> r) {
  std::sort(r.begin(), r.end());
  std::vector<IndexRange> out;
  for (auto& x : r) {
    if (x.first >= x.second) continue;
    if (!out.empty() && x.first <= out.back().second) out.back().second = std::max(out.back().second, x.second);
    else out.push_back(x);
  }
  return out;
}

// want minus done; both sorted and merged
inline std::vector<IndexRange> subtract_ranges(IndexRange want, const std::vector<IndexRange>& done) {
  std::vector<IndexRange> out;
  SubsetIndex at = want.first;
  for (auto& [a, b] : done) {
    if (b <= at) continue;
    if (a >= want.second) break;
    if (a > at) out.push_back({at, a});
    at = std::max(at, b);
    if (at >= want.second) break;
  }
  if (at < want.second) out.push_back({at, want.second});
  return out;
}

// "A..B", half-open
inline IndexRange parse_range(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw SpectrumError("range must look like A..B, got '" + s + "'");
  auto num = [&](const std::string& part) -> SubsetIndex {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw SpectrumError("range bound '" + part + "' is not a nonnegative integer");
    return std::stoull(part);
  };
  IndexRange r{num(s.substr(0, dots)), num(s.substr(dots + 2))};
  if (r.first >= r.second) throw SpectrumError("range " + s + " is empty");
  return r;
}

// ---- checkpoints ----

inline nlohmann::ordered_json report_core_json(const SpectrumReport& r) {
  nlohmann::ordered_json j;
  j["quiver_id"] = r.quiver_id;
  j["total_subsets"] = r.total_subsets;
  j["completed_ranges"] = nlohmann::ordered_json::array();
  for (auto& [a, b] : r.completed_ranges) j["completed_ranges"].push_back({a, b});
  j["histogram"] = nlohmann::ordered_json::object();
  for (auto& [d, c] : r.histogram) j["histogram"][std::to_string(d)] = c;
  j["infinite_count"] = r.infinite_count;
  j["unknown_count"] = r.unknown_count;
  return j;
}

inline void checkpoint_write(const SpectrumReport& r, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["version"] = checkpoint_version;
  auto core = report_core_json(r);
  for (auto& [k, v] : core.items()) j[k] = v;
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw SpectrumError("cannot write checkpoint " + tmp.string());
    out << j.dump(1) << "\n";
    out.flush();
    if (!out) throw SpectrumError("write failed for checkpoint " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw SpectrumError("cannot replace checkpoint " + path.string() + ": " + ec.message());
}

inline SpectrumReport checkpoint_read(const std::filesystem::path& path,
                                      const std::optional<std::string>& expect_quiver_id = {}) {
  std::ifstream in(path);
  if (!in) throw SpectrumError("cannot read checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  SpectrumReport r;
  try {
    auto j = nlohmann::json::parse(ss.str());
    int version = j.at("version").get<int>();
    if (version != checkpoint_version)
      throw SpectrumError("checkpoint version " + std::to_string(version) + " not supported (expected " +
                          std::to_string(checkpoint_version) + ")");
    r.quiver_id = j.at("quiver_id").get<std::string>();
    r.total_subsets = j.value("total_subsets", SubsetIndex{0});
    for (auto& x : j.at("completed_ranges")) {
      auto a = x.at(0).get<SubsetIndex>(), b = x.at(1).get<SubsetIndex>();
      if (a >= b) throw SpectrumError("corrupted checkpoint: empty range");
      r.completed_ranges.push_back({a, b});
    }
    for (auto& [k, v] : j.at("histogram").items()) {
      std::size_t used = 0;
      auto d = std::stoull(k, &used);
      if (used != k.size()) throw SpectrumError("corrupted checkpoint: histogram key '" + k + "'");
      r.histogram[d] = v.get<std::uint64_t>();
    }
    r.infinite_count = j.at("infinite_count").get<std::uint64_t>();
    r.unknown_count = j.at("unknown_count").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw SpectrumError("corrupted checkpoint " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument&) {
    throw SpectrumError("corrupted checkpoint " + path.string() + ": bad histogram key");
  }
  auto merged = merge_ranges(r.completed_ranges);
  if (merged != r.completed_ranges)
    throw SpectrumError("corrupted checkpoint: completed ranges overlap or are unsorted");
  if (r.total_subsets && !r.completed_ranges.empty() &&
      (r.completed_ranges.front().first < 1 || r.completed_ranges.back().second > r.total_subsets + 1))
    throw SpectrumError("corrupted checkpoint: range outside 1.." + std::to_string(r.total_subsets + 1));
  if (r.classified() != r.completed())
    throw SpectrumError("corrupted checkpoint: counts sum to " + std::to_string(r.classified()) +
                        " but completed ranges cover " + std::to_string(r.completed()));
  if (expect_quiver_id && *expect_quiver_id != r.quiver_id)
    throw SpectrumError("checkpoint quiver_id " + r.quiver_id + " does not match quiver " + *expect_quiver_id);
  return r;
}

// ---- enumeration ----

struct SpectrumOptions {
  unsigned jobs = 1;
  Budgets budgets;
  std::optional<std::filesystem::path> checkpoint;
  bool resume = false;
  std::optional<IndexRange> range;
  std::optional<std::filesystem::path> dump;  // CSV: mask,set,gldim
  double checkpoint_seconds = 10.0;
  std::optional<std::uint64_t> stop_after;    // stop once at least this many subsets are done this run
  const std::atomic<bool>* cancel = nullptr;  // external interrupt
};

inline std::int64_t classify_code(const GlobalDimension& g) {
  switch (g.kind) {
    case GlobalDimension::finite: return static_cast<std::int64_t>(g.value);
    case GlobalDimension::infinite: return -1;
    case GlobalDimension::unknown: return -2;
  }
  return -2;
}

namespace detail {

struct ChunkResult {
  std::size_t index = 0;
  IndexRange range;
  std::map<std::size_t, std::uint64_t> histogram;
  std::uint64_t infinite = 0, unknown = 0;
  std::vector<std::int64_t> codes;  // only when dumping
};

inline std::string subset_labels(const TranslationQuiver& q, const std::vector<VertexId>& real, SubsetIndex mask) {
  std::string s;
  for (std::size_t i = 0; i < real.size(); ++i)
    if (mask >> i & 1) {
      if (!s.empty()) s += ' ';
      s += q.label(real[i]);
    }
  return s;
}

}  // namespace detail

inline SpectrumReport enumerate_spectrum(const TranslationQuiver& q, const SpectrumOptions& opts = {}) {
  const auto real = q.real_vertices();
  if (real.empty()) throw SpectrumError("quiver has no real vertices");
  if (real.size() > max_spectrum_vertices)
    throw SpectrumError("spectrum enumeration supports at most " + std::to_string(max_spectrum_vertices) +
                        " vertices, quiver has " + std::to_string(real.size()));
  const SubsetIndex total = (SubsetIndex{1} << real.size()) - 1;
  const std::string qid = quiver_id(q);

  IndexRange want{1, total + 1};
  if (opts.range) {
    if (opts.range->first < 1 || opts.range->second > total + 1)
      throw SpectrumError("range " + std::to_string(opts.range->first) + ".." +
                          std::to_string(opts.range->second) + " outside 1.." + std::to_string(total + 1));
    want = *opts.range;
  }
  if (opts.resume && !opts.checkpoint) throw SpectrumError("resume requires a checkpoint path");

  SpectrumReport rep;
  rep.quiver_id = qid;
  rep.total_subsets = total;
  if (opts.resume && std::filesystem::exists(*opts.checkpoint)) {
    rep = checkpoint_read(*opts.checkpoint, qid);
    if (rep.total_subsets != 0 && rep.total_subsets != total)
      throw SpectrumError("checkpoint total_subsets does not match quiver");
    rep.total_subsets = total;
  }

  // pending work in ascending order, cut into chunks
  auto pending = subtract_ranges(want, rep.completed_ranges);
  SubsetIndex todo = 0;
  for (auto& [a, b] : pending) todo += b - a;
  unsigned jobs = std::max(1u, opts.jobs);
  SubsetIndex chunk = std::clamp<SubsetIndex>(todo / (SubsetIndex{jobs} * 16), 1, 4096);
  std::vector<IndexRange> chunks;
  for (auto [a, b] : pending)
    for (SubsetIndex s = a; s < b; s += chunk) chunks.push_back({s, std::min(b, s + chunk)});

  std::ofstream dump;
  if (opts.dump) {
    dump.open(*opts.dump, opts.resume ? std::ios::app : std::ios::trunc);
    if (!dump) throw SpectrumError("cannot open dump file " + opts.dump->string());
    if (!opts.resume || std::filesystem::file_size(*opts.dump) == 0) dump << "mask,set,gldim\n";
  }

  Engine engine(q);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::atomic<std::uint64_t> done_this_run{0};
  std::mutex mu;
  std::condition_variable cv;
  std::deque<detail::ChunkResult> ready;
  std::size_t finished_workers = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      VertexSet s(q.size());
      ApproximationCache cache(engine, s, opts.budgets.max_levels);
      while (!stop.load()) {
        std::size_t ci = next.fetch_add(1);
        if (ci >= chunks.size()) break;
        detail::ChunkResult res;
        res.index = ci;
        res.range = chunks[ci];
        for (SubsetIndex mask = res.range.first; mask < res.range.second; ++mask) {
          s = VertexSet(q.size());
          for (std::size_t i = 0; i < real.size(); ++i)
            if (mask >> i & 1) s.insert(real[i]);
          cache.reset(s);
          auto g = global_dimension(cache, s, opts.budgets.max_steps);
          switch (g.kind) {
            case GlobalDimension::finite: ++res.histogram[g.value]; break;
            case GlobalDimension::infinite: ++res.infinite; break;
            case GlobalDimension::unknown: ++res.unknown; break;
          }
          if (opts.dump) res.codes.push_back(classify_code(g));
        }
        auto n = done_this_run.fetch_add(res.range.second - res.range.first) + (res.range.second - res.range.first);
        if (opts.stop_after && n >= *opts.stop_after) stop = true;
        if (opts.cancel && opts.cancel->load()) stop = true;
        {
          std::lock_guard lk(mu);
          ready.push_back(std::move(res));
        }
        cv.notify_one();
      }
    } catch (...) {
      std::lock_guard lk(mu);
      if (!failure) failure = std::current_exception();
      stop = true;
    }
    {
      std::lock_guard lk(mu);
      ++finished_workers;
    }
    cv.notify_one();
  };

  unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(chunks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);

  // single aggregator: owns the report, the dump and the checkpoint file
  std::map<std::size_t, detail::ChunkResult> held;  // dump rows waiting for earlier chunks
  std::size_t next_dump = 0;
  auto flush_dump = [&](bool all) {
    while (!held.empty() && (all || held.begin()->first == next_dump)) {
      auto& c = held.begin()->second;
      for (SubsetIndex m = c.range.first; m < c.range.second; ++m) {
        auto code = c.codes[m - c.range.first];
        dump << m << "," << detail::subset_labels(q, real, m) << ","
             << (code >= 0 ? std::to_string(code) : code == -1 ? "infinite" : "unknown") << "\n";
      }
      next_dump = held.begin()->first + 1;
      held.erase(held.begin());
    }
  };
  auto last_save = std::chrono::steady_clock::now();
  auto save = [&] {
    if (!opts.checkpoint) return;
    if (opts.dump) dump.flush();
    checkpoint_write(rep, *opts.checkpoint);
    last_save = std::chrono::steady_clock::now();
  };

  while (true) {
    std::deque<detail::ChunkResult> batch;
    bool all_done;
    {
      std::unique_lock lk(mu);
      cv.wait_for(lk, std::chrono::milliseconds(500),
                  [&] { return !ready.empty() || finished_workers == nthreads; });
      if (opts.cancel && opts.cancel->load()) stop = true;
      batch.swap(ready);
      all_done = finished_workers == nthreads;
    }
    if (!batch.empty()) {
      for (auto& c : batch) {
        for (auto& [d, n] : c.histogram) rep.histogram[d] += n;
        rep.infinite_count += c.infinite;
        rep.unknown_count += c.unknown;
        rep.completed_ranges.push_back(c.range);
        if (opts.dump) held.emplace(c.index, std::move(c));
      }
      rep.completed_ranges = merge_ranges(std::move(rep.completed_ranges));
      if (opts.dump) flush_dump(false);
      auto now = std::chrono::steady_clock::now();
      if (std::chrono::duration<double>(now - last_save).count() >= opts.checkpoint_seconds) save();
    }
    if (all_done && batch.empty()) break;
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  if (opts.dump) {
    flush_dump(true);
    dump.flush();
  }
  save();
  return rep;
}

inline std::set<std::size_t> spectrum_support(const SpectrumReport& r) {
  if (!r.complete())
    throw SpectrumError("spectrum support needs a complete report (" + std::to_string(r.completed()) + " of " +
                        std::to_string(r.total_subsets) + " subsets done)");
  if (r.unknown_count) throw SpectrumError(std::to_string(r.unknown_count) + " subsets are unknown (budget exhausted)");
  std::set<std::size_t> out;
  for (auto& [d, c] : r.histogram)
    if (c > 0) out.insert(d);
  return out;
}

// ---- report rendering ----

inline std::string report_csv(const SpectrumReport& r) {
  std::string s = "gldim,count\n";
  for (auto& [d, c] : r.histogram) s += std::to_string(d) + "," + std::to_string(c) + "\n";
  s += "infinite," + std::to_string(r.infinite_count) + "\n";
  s += "unknown," + std::to_string(r.unknown_count) + "\n";
  return s;
}

inline std::string report_json(const SpectrumReport& r, const std::string& name = "") {
  nlohmann::ordered_json j;
  if (!name.empty()) j["quiver"] = name;
  auto core = report_core_json(r);
  for (auto& [k, v] : core.items()) j[k] = v;
  j["complete"] = r.complete();
  if (r.complete() && r.unknown_count == 0) j["support"] = spectrum_support(r);
  return j.dump(2) + "\n";
}

inline std::string report_md(const SpectrumReport& r, const std::string& name = "") {
  std::string s;
  if (!name.empty()) s += "### " + name + "\n\n";
  s += "| gl.dim | count |\n|---|---|\n";
  for (auto& [d, c] : r.histogram) s += "| " + std::to_string(d) + " | " + std::to_string(c) + " |\n";
  s += "| infinite | " + std::to_string(r.infinite_count) + " |\n";
  s += "| unknown | " + std::to_string(r.unknown_count) + " |\n";
  s += "\n" + std::to_string(r.completed()) + " of " + std::to_string(r.total_subsets) + " subsets";
  if (r.complete() && r.unknown_count == 0) {
    s += "; support {";
    bool first = true;
    for (auto d : spectrum_support(r)) {
      s += (first ? "" : ",") + std::to_string(d);
      first = false;
    }
    s += "}";
  }
  return s + "\n";
}

}  // namespace mcm
