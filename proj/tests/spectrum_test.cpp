// Spectrum enumeration, checkpoints, report rendering.

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace mcm;
using namespace mcm::test;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "mcm_spectra_tests";
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

std::map<std::size_t, std::uint64_t> hist(std::initializer_list<std::pair<const std::size_t, std::uint64_t>> l) {
  return l;
}

}  // namespace

TEST_CASE("E6 spectrum", "[spectrum]") {
  auto r = enumerate_spectrum(fixture("e6_curve"));
  CHECK(r.histogram == hist({{1, 1}, {2, 13}, {3, 34}, {4, 4}}));
  CHECK(r.infinite_count == 75);
  CHECK(r.unknown_count == 0);
  CHECK(r.total_subsets == 127);
  CHECK(r.complete());
  CHECK(r.completed_ranges == std::vector<IndexRange>{{1, 128}});
  CHECK(spectrum_support(r) == std::set<std::size_t>{1, 2, 3, 4});
}

TEST_CASE("A2 spectrum", "[spectrum]") {
  auto r = enumerate_spectrum(catalog::a_even_curve(1));
  CHECK(r.histogram == hist({{1, 1}, {2, 1}}));
  CHECK(r.infinite_count == 1);
  CHECK(r.total_subsets == 3);
}

TEST_CASE("report is independent of job count", "[spectrum]") {
  for (auto key : {"d_curve_5", "e6_curve", "cyclic_surface_8_5", "d_curve_6"}) {
    const auto& q = fixture(key);
    SpectrumOptions one;
    auto base = report_json(enumerate_spectrum(q, one));
    for (unsigned jobs : {4u, 16u}) {
      SpectrumOptions o;
      o.jobs = jobs;
      INFO(key << " jobs=" << jobs);
      CHECK(report_json(enumerate_spectrum(q, o)) == base);
    }
  }
}

TEST_CASE("ranges partition the enumeration", "[spectrum]") {
  const auto& q = fixture("d_curve_5");
  auto whole = enumerate_spectrum(q);
  auto ck = scratch("ranges.json");
  for (auto r : {IndexRange{100, 256}, IndexRange{1, 37}, IndexRange{37, 100}}) {
    SpectrumOptions o;
    o.checkpoint = ck;
    o.resume = std::filesystem::exists(ck);
    o.range = r;
    o.jobs = 3;
    enumerate_spectrum(q, o);
  }
  auto merged = checkpoint_read(ck, quiver_id(q));
  merged.total_subsets = whole.total_subsets;
  CHECK(merged == whole);
  CHECK(report_json(merged) == report_json(whole));

  SpectrumOptions bad;
  bad.range = IndexRange{0, 5};
  CHECK_THROWS_AS(enumerate_spectrum(q, bad), SpectrumError);
  bad.range = IndexRange{1, 257};
  CHECK_THROWS_AS(enumerate_spectrum(q, bad), SpectrumError);
}

TEST_CASE("interrupted run resumes to the uninterrupted result", "[spectrum]") {
  const auto& q = fixture("d_curve_5");
  auto whole = enumerate_spectrum(q);
  auto ck = scratch("resume.json");

  SpectrumOptions first;
  first.checkpoint = ck;
  first.stop_after = 60;
  first.jobs = 2;
  auto partial = enumerate_spectrum(q, first);
  REQUIRE_FALSE(partial.complete());
  CHECK(partial.completed() >= 60);
  CHECK(partial.classified() == partial.completed());
  auto on_disk = checkpoint_read(ck, quiver_id(q));
  CHECK(on_disk == partial);

  SpectrumOptions second;
  second.checkpoint = ck;
  second.resume = true;
  second.jobs = 4;
  auto resumed = enumerate_spectrum(q, second);
  CHECK(resumed == whole);
  CHECK(report_json(resumed) == report_json(whole));
}

TEST_CASE("checkpoint round trip and rejection of bad files", "[spectrum]") {
  const auto& q = fixture("d_curve_5");
  auto ck = scratch("roundtrip.json");
  SpectrumOptions o;
  o.range = IndexRange{5, 77};
  o.checkpoint = ck;
  auto r = enumerate_spectrum(q, o);
  CHECK(checkpoint_read(ck) == r);
  CHECK_FALSE(std::filesystem::exists(ck.string() + ".tmp"));

  CHECK_THROWS_AS(checkpoint_read(ck, quiver_id(fixture("e6_curve"))), SpectrumError);
  SpectrumOptions wrong;
  wrong.checkpoint = ck;
  wrong.resume = true;
  CHECK_THROWS_AS(enumerate_spectrum(fixture("e6_curve"), wrong), SpectrumError);

  auto rewrite = [&](auto edit) {
    std::ifstream in(ck);
    auto j = nlohmann::json::parse(in);
    edit(j);
    auto bad = scratch("bad.json");
    std::ofstream(bad) << j.dump();
    return bad;
  };
  CHECK_THROWS_AS(checkpoint_read(rewrite([](auto& j) { j["version"] = 99; })), SpectrumError);
  CHECK_THROWS_AS(checkpoint_read(rewrite([](auto& j) { j["infinite_count"] = 0; })), SpectrumError);
  CHECK_THROWS_AS(checkpoint_read(rewrite([](auto& j) { j.erase("histogram"); })), SpectrumError);
  CHECK_THROWS_AS(checkpoint_read(rewrite([](auto& j) { j["completed_ranges"] = {{5, 50}, {40, 77}}; })),
                  SpectrumError);
  auto garbage = scratch("garbage.json");
  std::ofstream(garbage) << "{ not json";
  CHECK_THROWS_AS(checkpoint_read(garbage), SpectrumError);
  CHECK_THROWS_AS(checkpoint_read(scratch("missing.json")), SpectrumError);
}

TEST_CASE("per-subset dump lists every subset in mask order", "[spectrum]") {
  const auto& q = fixture("e6_curve");
  auto path = scratch("dump.csv");
  SpectrumOptions o;
  o.dump = path;
  o.jobs = 4;
  auto r = enumerate_spectrum(q, o);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "mask,set,gldim");
  SubsetIndex expect = 1;
  std::map<std::string, std::uint64_t> counts;
  while (std::getline(in, line)) {
    auto c1 = line.find(','), c2 = line.rfind(',');
    CHECK(std::stoull(line.substr(0, c1)) == expect);
    ++counts[line.substr(c2 + 1)];
    ++expect;
  }
  CHECK(expect == 128);
  CHECK(counts["infinite"] == r.infinite_count);
  CHECK(counts["3"] == r.histogram[3]);
  // the worked examples appear with their known values
  auto row_of = [&](const std::vector<std::string>& labels) {
    auto m = mask_of(q, labels);
    std::ifstream again(path);
    std::string l;
    while (std::getline(again, l))
      if (l.rfind(std::to_string(m) + ",", 0) == 0) return l.substr(l.rfind(',') + 1);
    return std::string();
  };
  CHECK(row_of({"R", "M1", "B"}) == "3");
  CHECK(row_of({"R", "B", "X"}) == "infinite");
}

TEST_CASE("support requires a complete report without unknowns", "[spectrum]") {
  const auto& q = fixture("e6_curve");
  SpectrumOptions o;
  o.range = IndexRange{1, 50};
  CHECK_THROWS_AS(spectrum_support(enumerate_spectrum(q, o)), SpectrumError);
  SpectrumOptions tight;
  tight.budgets.max_levels = 2;
  auto r = enumerate_spectrum(q, tight);
  CHECK(r.unknown_count > 0);
  CHECK(r.classified() == r.total_subsets);
  CHECK_THROWS_AS(spectrum_support(r), SpectrumError);
}

TEST_CASE("report renderings", "[spectrum]") {
  auto r = enumerate_spectrum(fixture("e6_curve"));
  CHECK(report_csv(r) == "gldim,count\n1,1\n2,13\n3,34\n4,4\ninfinite,75\nunknown,0\n");
  auto j = nlohmann::json::parse(report_json(r));
  CHECK(j["histogram"]["4"] == 4);
  CHECK(j["support"] == nlohmann::json::array({1, 2, 3, 4}));
  CHECK(j["complete"] == true);
  CHECK_THAT(report_md(r), Catch::Matchers::ContainsSubstring("| 3 | 34 |"));
}

TEST_CASE("range parsing", "[spectrum]") {
  CHECK(parse_range("1..128") == IndexRange{1, 128});
  CHECK_THROWS_AS(parse_range("5..5"), SpectrumError);
  CHECK_THROWS_AS(parse_range("1-4"), SpectrumError);
  CHECK_THROWS_AS(parse_range("a..4"), SpectrumError);
  CHECK(subtract_ranges({1, 100}, {{1, 10}, {20, 30}}) == std::vector<IndexRange>{{10, 20}, {30, 100}});
  CHECK(merge_ranges({{20, 30}, {1, 10}, {10, 15}}) == std::vector<IndexRange>{{1, 15}, {20, 30}});
}
