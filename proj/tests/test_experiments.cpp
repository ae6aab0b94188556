#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stripcgm/csvio.hpp"
#include "stripcgm/experiments.hpp"
#include "stripcgm/manifest.hpp"
#include "stripcgm/svgplot.hpp"

using namespace stripcgm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string tmpdir(const std::string& tag) {
  const std::string d = std::filesystem::temp_directory_path() / ("stripcgm_" + tag);
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = ExperimentConfig::parse(
      "# comment\n"
      "experiment = coalescence\n"
      "n = 8   # trailing comment\n"
      "m_list = 1, 2,4\n"
      "seed = 7\n");
  CHECK(cfg.get("experiment") == "coalescence");
  CHECK(cfg.get_int("n") == 8);
  CHECK(cfg.get_int_list("m_list") == std::vector<std::int64_t>{1, 2, 4});
  CHECK(cfg.get_num_or("eps", 0.25) == 0.25);
  CHECK_THROWS_AS(cfg.get("missing"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("novalue\n"), ConfigError);
  CHECK_THROWS_AS(cfg.get_int("experiment"), ConfigError);
}

TEST_CASE("unknown experiments are config errors") {
  ExperimentConfig cfg;
  cfg.set("experiment", "no-such-thing");
  cfg.set("seed", "1");
  CHECK_THROWS_AS(run(cfg, tmpdir("unknown")), ConfigError);
}

TEST_CASE("cap violations surface as CapExceeded") {
  ExperimentConfig cfg;
  cfg.set("experiment", "mixing-exact");
  cfg.set("seed", "1");
  cfg.set("n_list", "16");
  CHECK_THROWS_AS(run(cfg, tmpdir("cap")), CapExceeded);
}

TEST_CASE("runs are byte-deterministic and worker-count independent") {
  ExperimentConfig cfg;
  cfg.set("experiment", "coalescence");
  cfg.set("seed", "2024");
  cfg.set("replicas", "40");
  cfg.set("n", "6");
  cfg.set("m_list", "1,2");

  const std::string d1 = tmpdir("det1");
  const std::string d2 = tmpdir("det2");
  const std::string d8 = tmpdir("det8");
  cfg.set("workers", "1");
  run(cfg, d1);
  run(cfg, d2);
  cfg.set("workers", "8");
  run(cfg, d8);
  const std::string a = slurp(d1 + "/coalescence.csv");
  CHECK(a == slurp(d2 + "/coalescence.csv"));
  CHECK(a == slurp(d8 + "/coalescence.csv"));
}

TEST_CASE("manifest digests are recomputable") {
  ExperimentConfig cfg;
  cfg.set("experiment", "current");
  cfg.set("seed", "5");
  cfg.set("replicas", "20");
  cfg.set("n_list", "8");
  const std::string d = tmpdir("man");
  const RunManifest man = run(cfg, d);
  REQUIRE(man.outputs.size() == 1);
  CHECK(man.outputs[0].second == file_digest(man.outputs[0].first));
  CHECK(man.replica_seeds.size() == 20);
  const std::string text = slurp(d + "/current.manifest.txt");
  CHECK(text.find("config-hash fnv64:") != std::string::npos);
  CHECK(text.find("code-version strip-cgm") != std::string::npos);
}

TEST_CASE("scaling experiment emits a fit row") {
  ExperimentConfig cfg;
  cfg.set("experiment", "scaling");
  cfg.set("seed", "9");
  cfg.set("replicas", "100");
  cfg.set("n_list", "4,6,8");
  const std::string d = tmpdir("scal");
  run(cfg, d);
  const CsvTable t = read_csv(d + "/scaling.csv");
  REQUIRE(t.rows.size() == 4);
  CHECK(t.rows.back()[t.column_index("kind")] == "fit");
  const double slope = t.number(3, t.column_index("slope"));
  CHECK(slope > 0.5);
  CHECK(slope < 2.5);
}

TEST_CASE("csv writer/parser round trip") {
  CsvWriter w({"a", "b"});
  w.row({CsvWriter::num(1.5), "x"});
  w.row({CsvWriter::num(std::int64_t{-3}), "y"});
  const CsvTable t = parse_csv(w.text());
  CHECK(t.columns == std::vector<std::string>{"a", "b"});
  CHECK(t.number(0, 0) == 1.5);
  CHECK(t.rows[1][1] == "y");
  CHECK_THROWS(w.row({"only-one"}));
}

TEST_CASE("svg plots") {
  SUBCASE("empty data still renders a valid frame") {
    const CsvTable empty = parse_csv("n,t\n");
    const std::string svg = plot_svg(empty, "loglog");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("no data") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
  }
  SUBCASE("site maps render exactly one rect per site") {
    const CsvTable sites = parse_csv("x1,x2,value\n1,1,1\n2,1,-1\n2,2,1\n");
    const std::string svg = plot_svg(sites, "sitemap");
    std::size_t count = 0, at = 0;
    while ((at = svg.find("<rect", at)) != std::string::npos) {
      ++count;
      ++at;
    }
    CHECK(count == 3);
  }
  SUBCASE("golden fixture is byte-stable") {
    const CsvTable fix = parse_csv("n,t\n8,22.6\n16,64\n32,181\n64,512\n");
    const std::string svg = plot_svg(fix, "loglog");
    const std::string golden_path = std::string(STRIPCGM_TEST_DATA) + "/golden_loglog.svg";
    if (!std::filesystem::exists(golden_path)) {
      std::ofstream os(golden_path, std::ios::binary);
      os << svg;
    }
    CHECK(svg == slurp(golden_path));
    CHECK(plot_svg(fix, "loglog") == svg);
  }
  SUBCASE("histogram") {
    const CsvTable fix = parse_csv("v\n1\n2\n2\n3\n");
    const std::string svg = plot_svg(fix, "hist");
    CHECK(svg.find("<rect") != std::string::npos);
  }
  SUBCASE("unknown kind") {
    CHECK_THROWS(plot_svg(parse_csv("a\n1\n"), "pie"));
  }
}

TEST_CASE("every experiment runs end to end and emits its schema") {
  const std::string d = tmpdir("all");
  const auto go = [&](std::initializer_list<std::pair<const char*, const char*>> kv) {
    ExperimentConfig cfg;
    for (const auto& [k, v] : kv) cfg.set(k, v);
    cfg.set("seed", "12");
    const RunManifest man = run(cfg, d);
    const CsvTable t = read_csv(man.outputs[0].first);
    CHECK(!t.rows.empty());
    return t;
  };
  go({{"experiment", "mixing-exact"}, {"n_list", "2,3"}, {"eps", "0.25"}});
  go({{"experiment", "mixing-coupling"}, {"n_list", "4"}, {"replicas", "100"}});
  {
    const CsvTable t = go({{"experiment", "burke"},
                           {"n", "8"},
                           {"samples", "400"},
                           {"batches", "3"},
                           {"replicas", "1"}});
    CHECK(t.columns == std::vector<std::string>{"batch", "test", "statistic",
                                                "p_value", "samples", "seed"});
  }
  go({{"experiment", "reversal"}, {"n_list", "2,4"}, {"big_m", "16"}, {"replicas", "3"}});
  go({{"experiment", "crossing"}, {"n_strip", "6"}, {"replicas", "30"}});
  go({{"experiment", "shape"}, {"n_list", "32,64"}, {"replicas", "40"}});
  go({{"experiment", "current"}, {"n_list", "8,16"}, {"replicas", "50"}});
  go({{"experiment", "lower-bound"}, {"n_list", "16"}, {"replicas", "100"}});
  go({{"experiment", "tag-check"}, {"n", "4"}, {"replicas", "10"}});
}

TEST_CASE("parallel_replicas covers every index once") {
  std::vector<int> hits(500, 0);
  parallel_replicas(500, 8, [&](std::int64_t i) { hits[static_cast<std::size_t>(i)]++; });
  for (int h : hits) CHECK(h == 1);
}
