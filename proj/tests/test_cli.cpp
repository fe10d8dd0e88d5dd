#include "tropix/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "support.hpp"
#include "seeded.hpp"

using namespace tropix;
using namespace tropix::testing_support;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome tropix_cli(const std::string& args) {
  const std::string cmd = std::string(TROPIX_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, n);
  const int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tropix_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }
  static std::string read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

io::Json result_of(const Outcome& o) { return io::parse_text(o.out).at("result"); }

const char* kHyperbola = R"({"lifting": {"points": [[0,0],[0,1],[1,0],[1,1]], "values": ["0/1","0/1","0/1","0/1"]},
                             "coefficients": [-1, 1, 1, 1]})";

}  // namespace

TEST(Cli, InvariantsOfTheQuarticSurface) {
  auto o = tropix_cli("invariants 2 4");
  ASSERT_EQ(o.status, 0);
  auto r = result_of(o);
  EXPECT_EQ(r.at("p_g"), 1);
  EXPECT_EQ(r.at("chi"), 24);
  EXPECT_EQ(r.at("sigma"), -16);
  auto curve = result_of(tropix_cli("invariants 1 3"));
  EXPECT_EQ(curve.at("p_g"), 1);
  EXPECT_TRUE(curve.at("chi").is_null());
}

TEST(Cli, DecomposeCubicCurveGivesNinePieces) {
  auto o = tropix_cli("decompose 1 3");
  ASSERT_EQ(o.status, 0);
  auto r = result_of(o);
  EXPECT_EQ(r.at("pieces"), 9);
  EXPECT_EQ(r.at("normalized_volume"), 9);
  ASSERT_EQ(r.at("table").size(), 9u);
  for (const auto& row : r.at("table")) EXPECT_TRUE(row.at("verified").get<bool>());
}

TEST_F(Scratch, CheckBalanceFlagsTamperedComplex) {
  auto good = tropix_cli("tropicalize 1 3 --output " + path("c.json"));
  ASSERT_EQ(good.status, 0);
  EXPECT_EQ(tropix_cli("check-balance --input " + path("c.json")).status, 0);

  auto j = io::parse_text(read(path("c.json")));
  for (auto& cell : j["result"]["cells"])
    if (cell.contains("weight")) {
      cell["weight"] = 3;
      break;
    }
  write("bad.json", j.dump());
  auto bad = tropix_cli("check-balance --input " + path("bad.json"));
  EXPECT_NE(bad.status, 0);
  auto r = result_of(bad);
  EXPECT_FALSE(r.at("balanced").get<bool>());
  EXPECT_TRUE(r.contains("failing_cell"));
  EXPECT_TRUE(r.contains("residual"));
}

TEST_F(Scratch, MalformedInputReportsLineAndField) {
  auto o = tropix_cli("tropicalize --input " + write("broken.json", "{\n  \"points\": [[0,0],\n  [1,0]\n"));
  EXPECT_EQ(o.status, cli::kInputError);

  std::ostringstream out, err;
  cli::JobConfig c;
  c.command = "tropicalize";
  c.input = path("broken.json");
  EXPECT_EQ(cli::run(c, out, err), cli::kInputError);
  auto report = io::parse_text(err.str());
  EXPECT_EQ(report.at("line"), 4);

  c.input = write("field.json", R"({"points": [[0,0],[1,"x"]], "values": ["0/1","0/1"]})");
  err.str("");
  EXPECT_EQ(cli::run(c, out, err), cli::kInputError);
  EXPECT_EQ(io::parse_text(err.str()).at("field"), "lifting.points[1][1]");

  c.input = write("values.json", R"({"points": [[0,0],[1,0]], "values": ["0/1","1/0"]})");
  err.str("");
  EXPECT_EQ(cli::run(c, out, err), cli::kInputError);
  EXPECT_EQ(io::parse_text(err.str()).at("field"), "lifting.values[1]");
}

TEST_F(Scratch, DomainErrorsPropagateWithNonzeroExit) {
  std::ostringstream out, err;
  cli::JobConfig c;
  c.command = "decompose";
  c.input = write("fat.json", R"({"points": [[0,0],[1,0],[2,0],[0,1],[1,1],[0,2]], "values": ["0/1","0/1","0/1","0/1","0/1","0/1"]})");
  EXPECT_EQ(cli::run(c, out, err), cli::kDomainError);
  EXPECT_NE(err.str().find("requires maximal complex"), std::string::npos);
  c.command = "no-such-command";
  EXPECT_EQ(cli::run(c, out, err), cli::kUsage);
  EXPECT_NE(tropix_cli("frobnicate").status, 0);
  EXPECT_NE(tropix_cli("amoeba-sample --t 1").status, 0);
}

TEST_F(Scratch, EmittedJsonReemitsByteIdentically) {
  auto rng = seeded_rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto v = random_lifting(rng, 2 + trial % 2, 3, 8);
    const auto text = io::dump(io::to_json(v));
    EXPECT_EQ(io::dump(io::to_json(io::lifting_of(io::parse_text(text)))), text);
    auto cx = corner_locus(v);
    const auto ctext = io::dump(io::to_json(cx));
    EXPECT_EQ(io::dump(io::to_json(io::complex_of(io::parse_text(ctext)))), ctext);
    auto g = extract_region_graph(cx);
    const auto gtext = io::dump(io::to_json(g));
    EXPECT_EQ(io::dump(io::to_json(io::region_graph_of(io::parse_text(gtext)))), gtext);
  }
  // Through the binary: a file written by tropicalize reads back to the same bytes.
  ASSERT_EQ(tropix_cli("tropicalize 2 2 --seed 7 --output " + path("c.json")).status, 0);
  const auto text = read(path("c.json"));
  auto j = io::parse_text(text);
  EXPECT_EQ(j.at("seed"), 7);
  EXPECT_EQ(io::dump(io::envelope("tropicalize", 7, io::to_json(io::complex_of(j.at("result"))))), text);
}

TEST(Cli, RationalsAreCanonical) {
  auto v = io::lifting_of(io::parse_text(R"({"points": [[0],[1]], "values": ["2/4", "-6/-3"]})"));
  auto j = io::to_json(v);
  EXPECT_EQ(j.at("values")[0], "1/2");
  EXPECT_EQ(j.at("values")[1], "2/1");
  EXPECT_EQ(io::to_json(Rational(-3, 9)), "-1/3");
}

TEST_F(Scratch, ReconstructRoundTripsThroughFiles) {
  ASSERT_EQ(tropix_cli("tropicalize 1 3 --output " + path("c.json")).status, 0);
  auto o = tropix_cli("reconstruct --input " + path("c.json"));
  ASSERT_EQ(o.status, 0);
  auto rebuilt = io::lifting_of(result_of(o).at("lifting"));
  auto original = corner_locus(build_maximal_lifting(1, 3));
  auto again = corner_locus(rebuilt);
  // Same complex up to the lattice translation fixed by the reference region.
  EXPECT_EQ(again.cells.size(), original.cells.size());
  EXPECT_TRUE(check_balanced(again).balanced);
  write("graph.json", io::dump(result_of(o).at("region_graph")));
  auto o2 = tropix_cli("reconstruct --input " + path("graph.json"));
  ASSERT_EQ(o2.status, 0);
  EXPECT_EQ(result_of(o2).at("lifting"), result_of(o).at("lifting"));
}

TEST_F(Scratch, HomologyAndPatchwork) {
  auto h = result_of(tropix_cli("homology 2 4"));
  EXPECT_EQ(h.at("homology").at("betti"), io::Json({1, 0, 1}));
  EXPECT_EQ(h.at("interior_points"), 1);

  auto p = tropix_cli("patchwork 1 3 --vertex 1,1 --svg " + path("m.svg"));
  ASSERT_EQ(p.status, 0);
  auto r = result_of(p);
  EXPECT_TRUE(r.at("report").at("closed").get<bool>());
  EXPECT_EQ(r.at("report").at("euler"), 0);
  EXPECT_TRUE(r.at("base_class").at("is_cycle").get<bool>());
  const auto svg = read(path("m.svg"));
  EXPECT_NE(svg.find("class=\"membrane\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"minus\""), std::string::npos);

  auto edge = result_of(tropix_cli("patchwork 1 3 --vertex 0,0"));
  EXPECT_FALSE(edge.at("report").at("closed").get<bool>());
  EXPECT_TRUE(edge.at("base_class").is_null());
  EXPECT_NE(tropix_cli("patchwork 1 3 --vertex 7,7").status, 0);
}

TEST_F(Scratch, AmoebaSampleCsv) {
  auto o = tropix_cli("amoeba-sample --input " + write("hyp.json", kHyperbola) + " --grid 10x4 --t 10,100 --seed 9");
  ASSERT_EQ(o.status, 0);
  std::istringstream in(o.out);
  std::string header, columns, line;
  std::getline(in, header);
  std::getline(in, columns);
  EXPECT_NE(header.find("seed=9"), std::string::npos);
  EXPECT_EQ(columns, "t,log_t_z1,log_t_z2,in_tube");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(line.back(), '1');
  }
  EXPECT_EQ(rows, 2u * 2u * 10u * 4u);
  EXPECT_EQ(io::samples_of_csv(o.out).size(), rows);
}

TEST_F(Scratch, KapranovBreakpoints) {
  // (1 + t) + t^2 z + z^2: valuations (0, -2, 0), a single corner of weight 2 at x = 0.
  const char* f = R"({"terms": [
    {"exponent": [0], "coefficient": {"terms": [{"exp": "0/1", "re": 1, "im": 0}, {"exp": "1/1", "re": 1, "im": 0}], "trunc": "5/1"}},
    {"exponent": [1], "coefficient": {"terms": [{"exp": "2/1", "re": 1, "im": 0}], "trunc": "5/1"}},
    {"exponent": [2], "coefficient": {"terms": [{"exp": "0/1", "re": 1, "im": 0}], "trunc": "5/1"}}]})";
  auto o = tropix_cli("kapranov --input " + write("f.json", f));
  ASSERT_EQ(o.status, 0);
  const auto bps = result_of(o).at("breakpoints");
  ASSERT_EQ(bps.size(), 1u);
  EXPECT_EQ(bps[0].at("point"), "0/1");
  EXPECT_EQ(bps[0].at("weight"), 2);
}

TEST(RenderSvg, PrimitiveComplexHasThreeLines) {
  auto svg = render_complex_svg(corner_locus(sigma_lifting(1)));
  std::size_t lines = 0;
  for (std::size_t at = svg.find("<line"); at != std::string::npos; at = svg.find("<line", at + 1)) ++lines;
  EXPECT_EQ(lines, 3u);
  EXPECT_EQ(svg, render_complex_svg(corner_locus(sigma_lifting(1))));
}

TEST(RenderSvg, RaysAreClippedAndWeightsAnnotated) {
  // Two points at lattice distance 2 give one weight-2 line through the viewport.
  auto cx = corner_locus(make_lifting({{0, 0}, {2, 0}, {0, 1}}, {0, 0, 0}));
  auto svg = render_complex_svg(cx, Viewport{-3, -3, 3, 3});
  EXPECT_NE(svg.find("class=\"weight\""), std::string::npos);
  EXPECT_NE(svg.find(">2</text>"), std::string::npos);
  for (std::size_t at = svg.find("x1=\""); at != std::string::npos; at = svg.find("x1=\"", at + 1)) {
    double x = std::stod(svg.substr(at + 4));
    EXPECT_GE(x, -1e-6);
    EXPECT_LE(x, 600 + 1e-6);
  }
}

TEST(RenderSvg, HigherDimensionNeedsProjection) {
  auto cx = corner_locus(sigma_lifting(2));
  EXPECT_THROW(render_complex_svg(cx), std::invalid_argument);
  SvgLayers layers;
  layers.projection = Projection{{std::vector<double>{1, 0, -0.5}, std::vector<double>{0, 1, -0.5}}};
  auto svg = render_complex_svg(cx, Viewport{-3, -3, 3, 3}, layers);
  EXPECT_NE(svg.find("<line"), std::string::npos);
}

TEST_F(Scratch, HyperbolaSamplesOverComplex) {
  const auto curve = write("hyp.json", kHyperbola);
  ASSERT_EQ(tropix_cli("amoeba-sample --input " + curve + " --grid 20x8 --t 10 --output " + path("s.csv")).status, 0);
  auto o = tropix_cli("render-svg --input " + curve + " --samples " + path("s.csv") + " --viewport -4,-4,4,4");
  ASSERT_EQ(o.status, 0);
  EXPECT_NE(o.out.find("<g id=\"samples\">"), std::string::npos);
  EXPECT_NE(o.out.find("<g id=\"complex\">"), std::string::npos);
  EXPECT_NE(o.out.find("class=\"sample\""), std::string::npos);
}

TEST_F(Scratch, CubicCycleMatchesGolden) {
  auto first = tropix_cli("render-svg 1 3 --vertex 1,1 --output " + path("a.svg"));
  auto second = tropix_cli("render-svg 1 3 --vertex 1,1 --output " + path("b.svg"));
  ASSERT_EQ(first.status, 0);
  ASSERT_EQ(second.status, 0);
  const auto a = read(path("a.svg"));
  EXPECT_EQ(a, read(path("b.svg")));
  EXPECT_EQ(a, read(std::string(TROPIX_SOURCE_DIR) + "/tests/golden/cubic_cycle.svg"));
  std::size_t hot = 0;
  for (std::size_t at = a.find("class=\"cycle\""); at != std::string::npos; at = a.find("class=\"cycle\"", at + 1)) ++hot;
  auto cx = corner_locus(build_maximal_lifting(1, 3));
  const auto& s = *cx.subdivision;
  auto z = membrane_base_class(build_membrane(s, single_negative_signs(s, LatticePoint{1, 1})), cx);
  EXPECT_EQ(hot, z.chain.size());
}
