// mcm-spectra: ladders, resolutions, global dimensions and spectra from AR quivers.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcm/mcm.hpp"

namespace {

using namespace mcm;

constexpr int exit_ok = 0, exit_usage = 1, exit_unknown = 2, exit_interrupted = 130;

std::atomic<bool> interrupted{false};
extern "C" void on_sigint(int) { interrupted = true; }

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TranslationQuiver load_quiver(const std::string& src) {
  if (src.rfind("catalog:", 0) == 0) return catalog::from_key(src.substr(8));
  std::ifstream in(src);
  if (!in) throw UsageError("cannot open quiver file '" + src + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return normalize(parse_quiver(ss.str()));
  } catch (const ParseError& e) {
    throw ParseError(src + ": " + e.what());
  }
}

VertexSet parse_set(const TranslationQuiver& q, const std::string& csv) {
  VertexSet s(q.size());
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    VertexId v = q.at(item.substr(b, e - b + 1));
    if (!q.is_real(v)) throw UsageError("the formal zero vertex cannot be in --set");
    s.insert(v);
  }
  if (s.empty()) throw UsageError("--set is empty");
  return s;
}

std::string set_text(const TranslationQuiver& q, const VertexSet& s) {
  std::string out;
  for (auto v : s.members()) out += (out.empty() ? "" : ",") + q.label(v);
  return out;
}

nlohmann::ordered_json labels_json(const TranslationQuiver& q, const VertexSet& s) {
  auto j = nlohmann::ordered_json::array();
  for (auto v : s.members()) j.push_back(q.label(v));
  return j;
}

unsigned default_jobs() {
  const char* env = std::getenv("MCM_SPECTRA_JOBS");
  if (!env || !*env) return 1;
  std::string s(env);
  if (s.find_first_not_of("0123456789") != std::string::npos || std::stoul(s) == 0)
    throw UsageError("MCM_SPECTRA_JOBS must be a positive integer, got '" + s + "'");
  return static_cast<unsigned>(std::stoul(s));
}

struct Common {
  std::string quiver;
  std::string set;
  std::string format = "text";
  Budgets budgets;
};

void add_budgets(CLI::App* sc, Budgets& b) {
  sc->add_option("--max-levels", b.max_levels, "ladder level budget per knit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sc->add_option("--max-steps", b.max_steps, "resolution step budget per simple")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

int cmd_validate(const std::string& src) {
  auto q = load_quiver(src);
  auto problems = validate(q);
  if (problems.empty()) {
    std::cout << "ok: " << (q.name.empty() ? src : q.name) << ", " << q.real_vertices().size()
              << " vertices, dim " << q.dim << "\n";
    return exit_ok;
  }
  for (auto& p : problems) std::cout << p.code << ": " << p.message << "\n";
  return exit_usage;
}

int cmd_catalog_list() {
  for (auto& k : catalog::fixture_keys()) std::cout << k << "\n";
  std::cout << "a_even_curve_K\na_odd_curve_K\ncyclic_surface_N_Q\n";
  return exit_ok;
}

int cmd_knit(const Common& c, const std::string& target, std::size_t max_levels) {
  auto q = load_quiver(c.quiver);
  auto s = parse_set(q, c.set);
  VertexId t = q.at(target);
  Approximation a;
  bool exhausted = false;
  try {
    a = knit(q, t, s, max_levels);
  } catch (const KnitBudgetExhausted& e) {
    a = e.partial;
    exhausted = true;
  }
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["target"] = q.label(t);
    j["set"] = labels_json(q, s);
    j["status"] = exhausted ? "unknown" : "ok";
    j["middle"] = vector_to_json(q, a.middle);
    j["kernel"] = vector_to_json(q, a.kernel);
    j["levels_used"] = a.levels_used;
    std::cout << j.dump(2) << "\n";
  } else {
    if (exhausted) std::cout << "unknown: level budget " << max_levels << " exhausted (partial state below)\n";
    std::cout << "middle " << format_vector(q, a.middle) << "\n";
    std::cout << "kernel " << format_vector(q, a.kernel) << "\n";
    std::cout << "levels " << a.levels_used << "\n";
  }
  return exhausted ? exit_unknown : exit_ok;
}

int cmd_resolve(const Common& c, const std::string& simple) {
  auto q = load_quiver(c.quiver);
  auto s = parse_set(q, c.set);
  VertexId z = q.at(simple);
  if (!s.contains(z)) throw UsageError("--simple " + simple + " is not in --set " + set_text(q, s));
  auto r = resolve_simple(q, s, z, c.budgets);
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["simple"] = q.label(z);
    j["set"] = labels_json(q, s);
    j["status"] = std::string(to_string(r.status));
    j["terms"] = nlohmann::ordered_json::array();
    for (auto& t : r.terms) j["terms"].push_back(vector_to_json(q, t));
    if (r.status == ResolutionStatus::finite) j["pd"] = r.pd;
    if (r.status == ResolutionStatus::infinite) {
      j["period_detected_at"] = r.period_detected_at;
      j["period_matches"] = r.period_matches;
    }
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    std::cout << j.dump(2) << "\n";
  } else {
    std::string line;
    for (auto& t : r.terms) line += (line.empty() ? "" : " | ") + format_vector(q, t);
    std::cout << line << "\n";
    switch (r.status) {
      case ResolutionStatus::finite: std::cout << "pd " << r.pd << "\n"; break;
      case ResolutionStatus::infinite:
        std::cout << "pd infinite (non-S kernel support at step " << r.period_detected_at << " repeats step "
                  << r.period_matches << ")\n";
        break;
      case ResolutionStatus::budget_exhausted: std::cout << "pd unknown: " << r.diagnostic << "\n"; break;
    }
  }
  return r.status == ResolutionStatus::budget_exhausted ? exit_unknown : exit_ok;
}

int cmd_gldim(const Common& c) {
  auto q = load_quiver(c.quiver);
  auto s = parse_set(q, c.set);
  auto g = global_dimension(q, s, c.budgets);
  if (c.format == "json") {
    nlohmann::ordered_json j;
    j["set"] = labels_json(q, s);
    j["gldim"] = to_string(g);
    if (g.witness != no_vertex) j["witness"] = q.label(g.witness);
    if (!g.diagnostic.empty()) j["diagnostic"] = g.diagnostic;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(g) << "\n";
    if (g.kind == GlobalDimension::unknown) std::cerr << "unknown at simple " << q.label(g.witness) << ": " << g.diagnostic << "\n";
  }
  return g.kind == GlobalDimension::unknown ? exit_unknown : exit_ok;
}

int cmd_spectrum(const std::string& src, SpectrumOptions opts, const std::string& range, const std::string& format) {
  auto q = load_quiver(src);
  if (!range.empty()) opts.range = parse_range(range);
  opts.cancel = &interrupted;
  std::signal(SIGINT, on_sigint);
  auto r = enumerate_spectrum(q, opts);
  std::string name = src.rfind("catalog:", 0) == 0 ? src.substr(8) : q.name;
  if (format == "json") std::cout << report_json(r, name);
  else if (format == "md") std::cout << report_md(r, name);
  else std::cout << report_csv(r);
  if (interrupted && !r.complete()) {
    std::cerr << "interrupted after " << r.completed() << " of " << r.total_subsets << " subsets"
              << (opts.checkpoint ? "; resume with --checkpoint " + opts.checkpoint->string() + " --resume" : "")
              << "\n";
    return exit_interrupted;
  }
  return r.unknown_count ? exit_unknown : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ladders, projective resolutions, global dimensions and global spectra of endomorphism "
               "rings of MCM modules, computed on Auslander-Reiten quivers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mcm-spectra 1.0");
  auto quiver_help = "quiver JSON file, or catalog:<key>";

  std::string vsrc;
  auto* v = app.add_subcommand("validate", "check a quiver document");
  v->add_option("--quiver", vsrc, quiver_help)->required();

  auto* cat = app.add_subcommand("catalog", "built-in quivers");
  cat->require_subcommand(1);
  auto* list = cat->add_subcommand("list", "list catalog keys");
  std::string emit_key;
  auto* emit = cat->add_subcommand("emit", "print a catalog quiver as JSON");
  emit->add_option("key", emit_key, "catalog key")->required();

  Common kc;
  std::string target;
  auto* k = app.add_subcommand("knit", "minimal right add(S)-approximation of one vertex");
  k->add_option("--quiver", kc.quiver, quiver_help)->required();
  k->add_option("--set", kc.set, "comma-separated labels of S")->required();
  k->add_option("--target", target, "label of the vertex to approximate")->required();
  k->add_option("--max-levels", kc.budgets.max_levels, "ladder level budget")->check(CLI::PositiveNumber);
  k->add_option("--format", kc.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  Common rc;
  std::string simple;
  auto* r = app.add_subcommand("resolve", "minimal projective resolution of a simple of End(M)");
  r->add_option("--quiver", rc.quiver, quiver_help)->required();
  r->add_option("--set", rc.set, "comma-separated labels of S")->required();
  r->add_option("--simple", simple, "label of the simple's vertex (must be in S)")->required();
  add_budgets(r, rc.budgets);
  r->add_option("--format", rc.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  Common gc;
  auto* g = app.add_subcommand("gldim", "global dimension of End(M) for M = sum of S");
  g->add_option("--quiver", gc.quiver, quiver_help)->required();
  g->add_option("--set", gc.set, "comma-separated labels of S")->required();
  add_budgets(g, gc.budgets);
  g->add_option("--format", gc.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

  std::string ssrc, range, sformat = "csv", checkpoint, dump;
  SpectrumOptions so;
  auto* sp = app.add_subcommand("spectrum", "histogram of gl.dim over all nonempty subsets");
  sp->add_option("--quiver", ssrc, quiver_help)->required();
  auto* jobs_opt = sp->add_option("--jobs", so.jobs, "worker threads (default $MCM_SPECTRA_JOBS or 1)")
                       ->check(CLI::PositiveNumber);
  auto* ck = sp->add_option("--checkpoint", checkpoint, "checkpoint file, rewritten atomically");
  sp->add_flag("--resume", so.resume, "continue from --checkpoint")->needs(ck);
  sp->add_option("--range", range, "half-open subset-index range A..B within 1..2^n");
  sp->add_option("--dump-per-subset", dump, "CSV of mask,set,gldim for every subset");
  sp->add_option("--checkpoint-seconds", so.checkpoint_seconds, "seconds between checkpoint writes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_budgets(sp, so.budgets);
  sp->add_option("--format", sformat)->check(CLI::IsMember({"csv", "json", "md"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*v) return cmd_validate(vsrc);
    if (*list) return cmd_catalog_list();
    if (*emit) {
      std::cout << emit_quiver(catalog::from_key(emit_key));
      return exit_ok;
    }
    if (*k) return cmd_knit(kc, target, kc.budgets.max_levels);
    if (*r) return cmd_resolve(rc, simple);
    if (*g) return cmd_gldim(gc);
    if (*sp) {
      if (jobs_opt->count() == 0) so.jobs = default_jobs();
      if (!checkpoint.empty()) so.checkpoint = checkpoint;
      if (!dump.empty()) so.dump = dump;
      if (so.resume && !std::filesystem::exists(checkpoint))
        throw UsageError("--resume: checkpoint " + checkpoint + " does not exist");
      return cmd_spectrum(ssrc, so, range, sformat);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
