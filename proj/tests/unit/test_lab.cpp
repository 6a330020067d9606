#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kglab/errors.hpp"
#include "kglab/lab/checks.hpp"
#include "kglab/lab/config.hpp"
#include "kglab/lab/persist.hpp"
#include "kglab/lab/recipes.hpp"
#include "kglab/lab/svg_plot.hpp"

using namespace kglab;
using namespace kglab::lab;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kglab_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}
}  // namespace

TEST_SUITE("lab") {
  TEST_CASE("config parsing") {
    const LabConfig c = parse_config(
        "# comment\n"
        "model.alpha = 1.5\n"
        "model.n_points = 2001   # trailing\n"
        "shooting.continuation = false\n"
        "sweep.alphas = 1.25, 3\n"
        "experiment = shoot\n");
    CHECK(c.model.alpha == 1.5);
    CHECK(c.model.n_points == 2001);
    CHECK_FALSE(c.shooting.continuation);
    CHECK(c.sweep_alphas == std::vector<double>{1.25, 3.0});
    CHECK(c.experiment == "shoot");
    CHECK_NOTHROW(c.validate());

    CHECK_THROWS_AS(parse_config("model.beta = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model.alpha 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model.alpha = two\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("model.n_points = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = nope\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("perturbation.kind = odd\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("model.alpha = -1\n").validate(), ConfigError);
  }

  TEST_CASE("config render round trip") {
    LabConfig c;
    c.model.alpha = 2.7182818284590451;
    c.shooting.delta0 = 3e-4;
    c.lipschitz_deltas = {1e-2, 3.3e-3};
    c.perturbation.kind = "y_minus";
    const LabConfig d = parse_config(render(c));
    CHECK(snapshot(d) == snapshot(c));
    CHECK(d.model.alpha == c.model.alpha);
  }

  TEST_CASE("checked-in configs load") {
    for (const char* name : {"desk.cfg", "spectrum.cfg"}) {
      const LabConfig c = load_config(std::string(KGLAB_SOURCE_DIR) + "/configs/" + name);
      CHECK_NOTHROW(c.validate());
    }
    CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);
  }

  TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex(std::string(1000, 'a')).size() == 64);
  }

  TEST_CASE("csv writer") {
    const fs::path dir = scratch("csv");
    write_csv((dir / "a/b.csv").string(), {{"t", {0.0, 0.5}}, {"y", {1e-300, 0.1}}});
    CHECK(slurp(dir / "a/b.csv") == "t,y\n0,1e-300\n0.5,0.1\n");
    CHECK_THROWS_AS(write_csv((dir / "c.csv").string(), {{"t", {0.0}}, {"y", {1.0, 2.0}}}), IoError);
    CHECK(format_double(0.1) == "0.1");
    fs::remove_all(dir);
  }

  TEST_CASE("svg rendering") {
    const std::vector<Series> s{{"a", {0, 1, 2}, {1, 10, 100}}, {"b", {0, 2}, {5, 5}}};
    PlotStyle st;
    st.title = "demo";
    const std::string one = render_plot(s, st), two = render_plot(s, st);
    CHECK(one == two);
    CHECK(one.find("<svg") != std::string::npos);
    CHECK(one.find("demo") != std::string::npos);
    CHECK_THROWS_AS(render_plot({}, st), IoError);
    st.log_y = true;
    CHECK_THROWS_AS(render_plot({{"z", {0, 1}, {0, 0}}}, st), IoError);
    CHECK_THROWS_AS(render_plot({{"m", {0, 1}, {1}}}, st), IoError);
  }

  TEST_CASE("manifest hard and soft checks") {
    RunManifest m("unused");
    m.check("soft_fail", false, 1.0, false);
    m.check("hard_pass", true, 2.0);
    CHECK(m.all_passed());
    m.check("hard_fail", false, 3.0);
    CHECK_FALSE(m.all_passed());
    const json j = m.to_json({{"k", "v"}});
    CHECK(j["config"]["k"] == "v");
    CHECK(j["checks"].size() == 3);
    CHECK(j["checks"][0]["hard"] == false);
  }

  TEST_CASE("spectrum recipe writes checksummed artifacts") {
    const fs::path dir = scratch("spectrum");
    LabConfig c = load_config(std::string(KGLAB_SOURCE_DIR) + "/configs/spectrum.cfg");
    c.output_dir = dir.string();
    c.model.n_points = 2001;
    const RunManifest m = run_experiment(c);
    CHECK(m.all_passed());
    CHECK(m.artifacts().size() >= 4);
    for (const auto& a : m.artifacts()) CHECK(sha256_file(m.path(a.path)) == a.sha256);
    const json man = json::parse(slurp(dir / "spectrum/manifest.json"));
    CHECK(man["config"]["model.alpha"] == "2");
    fs::remove_all(dir);
  }

  TEST_CASE("zero perturbation shoot recipe") {
    const fs::path dir = scratch("shoot");
    LabConfig c;
    c.experiment = "shoot";
    c.output_dir = dir.string();
    c.model.n_points = 2001;
    c.shooting.t_max = 5.0;
    c.perturbation.kind = "zero";
    const RunManifest m = run_experiment(c);
    CHECK(m.all_passed());
    const json j = json::parse(slurp(dir / "shoot/shoot.json"));
    CHECK(j["runs"][0]["h"] == 0.0);
    fs::remove_all(dir);
  }

  TEST_CASE("check report bookkeeping") {
    CHECK(criterion_name(1) != criterion_name(2));
    CheckReport r;
    r.criteria.push_back({1, "a", true, json::object(), 1.5});
    r.criteria.push_back({2, "b", false, json::object(), 2.5});
    CHECK_FALSE(r.all_passed());
    CHECK(r.find(2)->name == "b");
    CHECK(r.find(3) == nullptr);
    const json j = r.to_json();
    CHECK(j["criteria"].size() == 2);
    CHECK(j["timings"].size() == 2);
    CHECK_FALSE(j["criteria"][0].contains("seconds"));
  }
}
