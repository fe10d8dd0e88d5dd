#pragma once

// Command-line front end: argument parsing into a JobConfig and one handler
// per subcommand. Handlers read JSON, call the library and write canonical
// JSON, CSV or SVG.

#include "tropix/io.hpp"
#include "tropix/svg.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace tropix::cli {

struct JobConfig {
  std::string command;
  std::string input;
  std::string output;
  std::vector<double> ts{10, 100, 1000};
  GridSpec grid;
  std::uint64_t seed = 0;
  std::optional<Viewport> viewport;
  /// Extra positional arguments, e.g. "n d" for invariants.
  std::vector<std::string> args;
  /// A lattice point "1,1" selecting the negative vertex or the highlighted cycle.
  std::string vertex;
  std::string samples;
  std::string svg;
  std::string projection;
};

/// Domain errors map to 1, malformed input to 2, usage errors to 64.
enum ExitCode : int { kOk = 0, kDomainError = 1, kInputError = 2, kUsage = 64 };

namespace detail {

inline std::vector<double> parse_ladder(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    double t = 0;
    try {
      t = std::stod(part);
    } catch (const std::exception&) {
      throw std::invalid_argument("--t expects comma-separated numbers");
    }
    check_semiring_parameter(t);
    out.push_back(t);
  }
  if (out.empty()) throw std::invalid_argument("--t expects at least one value");
  return out;
}

inline LatticePoint parse_point(const std::string& text) {
  LatticePoint p;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) p.coords.push_back(parse_integer(part));
  if (p.coords.empty()) throw std::invalid_argument("expected a lattice point like 1,1");
  return p;
}

inline Projection parse_projection(const std::string& text) {
  auto semi = text.find(';');
  if (semi == std::string::npos) throw std::invalid_argument("projection must look like a,b,c;d,e,f");
  Projection p;
  for (int r = 0; r < 2; ++r) {
    std::istringstream in(r == 0 ? text.substr(0, semi) : text.substr(semi + 1));
    std::string part;
    while (std::getline(in, part, ',')) p.rows[static_cast<std::size_t>(r)].push_back(std::stod(part));
  }
  return p;
}

inline std::string read_file(const std::string& path) {
  if (path.empty()) throw io::InputError("this subcommand needs --input", "--input");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::InputError("cannot open input file " + path, "--input");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

inline int positional_int(const JobConfig& c, std::size_t i, const char* name) {
  if (c.args.size() <= i) throw io::InputError(std::string("missing argument ") + name, name);
  try {
    return std::stoi(c.args[i]);
  } catch (const std::exception&) {
    throw io::InputError(std::string("argument ") + name + " must be an integer", name);
  }
}

/// A lifting from --input, or the maximal lifting of Δ_d from positional "n d".
inline LiftingFunction lifting_input(const JobConfig& c) {
  if (c.input.empty() && c.args.size() == 2) return build_maximal_lifting(positional_int(c, 0, "n"), positional_int(c, 1, "d"));
  const auto j = io::parse_text(read_file(c.input));
  const auto& body = io::payload(j);
  if (body.is_object() && body.contains("lifting") && !body.contains("points")) return io::lifting_of(body.at("lifting"));
  return io::lifting_of(body);
}

/// A complex from --input: a complex file, or a lifting whose corner locus is taken.
inline TropicalComplex complex_input(const JobConfig& c) {
  if (c.input.empty() && c.args.size() == 2) return corner_locus(lifting_input(c));
  const auto j = io::parse_text(read_file(c.input));
  const auto& body = io::payload(j);
  if (body.is_object() && body.contains("cells")) return io::complex_of(body);
  if (body.is_object() && body.contains("lifting") && !body.contains("points")) return corner_locus(io::lifting_of(body.at("lifting")));
  return corner_locus(io::lifting_of(body));
}

}  // namespace detail

/// Runs one job. Primary output goes to config.output (or `out`), diagnostics to `err`.
inline int run(const JobConfig& c, std::ostream& out, std::ostream& err) {
  try {
    auto emit = [&](io::Json result) { detail::write_text(c.output, io::dump(io::envelope(c.command, c.seed, std::move(result))), out); };
    const std::string& cmd = c.command;
    if (cmd == "tropicalize") {
      emit(io::to_json(corner_locus(detail::lifting_input(c))));
    } else if (cmd == "subdivide") {
      emit(io::to_json(lower_hull_subdivision(detail::lifting_input(c))));
    } else if (cmd == "check-balance") {
      auto report = check_balanced(detail::complex_input(c));
      emit(io::to_json(report));
      if (!report.balanced) {
        err << "not balanced at cell " << *report.failing_cell << "\n";
        return kDomainError;
      }
    } else if (cmd == "reconstruct") {
      const auto j = io::parse_text(detail::read_file(c.input));
      const auto& body = io::payload(j);
      RegionGraph g = body.is_object() && body.contains("walls") ? io::region_graph_of(body) : extract_region_graph(detail::complex_input(c));
      emit(io::Json{{"lifting", io::to_json(reconstruct_lifting(g))}, {"region_graph", io::to_json(g)}});
    } else if (cmd == "decompose") {
      auto cx = corner_locus(detail::lifting_input(c));
      emit(io::decomposition_json(cx));
    } else if (cmd == "homology") {
      auto v = detail::lifting_input(c);
      auto h = base_homology(stratify(v));
      emit(io::Json{{"homology", io::to_json(h)}, {"interior_points", interior_lattice_points(LatticePolytope(v.points)).size()}});
    } else if (cmd == "invariants") {
      emit(io::to_json(hypersurface_invariants(detail::positional_int(c, 0, "n"), detail::positional_int(c, 1, "d"))));
    } else if (cmd == "amoeba-sample") {
      const auto j = io::parse_text(detail::read_file(c.input));
      auto curve = io::curve_of(io::payload(j));
      std::vector<AmoebaSamples> runs;
      for (double t : c.ts) runs.push_back(sample_amoeba_curve(curve.lifting, curve.coefficients, t, c.grid));
      detail::write_text(c.output, io::samples_csv(runs, c.seed), out);
    } else if (cmd == "kapranov") {
      const auto j = io::parse_text(detail::read_file(c.input));
      emit(io::to_json(kapranov_tropicalize(io::puiseux_polynomial_of(io::payload(j)))));
    } else if (cmd == "patchwork") {
      if (c.vertex.empty()) throw io::InputError("patchwork needs --vertex", "--vertex");
      auto v = detail::lifting_input(c);
      auto cx = corner_locus(v);
      const auto& s = *cx.subdivision;
      auto mem = build_membrane(s, single_negative_signs(s, detail::parse_point(c.vertex)));
      io::Json result{{"membrane", io::to_json(mem)}, {"report", io::to_json(verify_sphere(mem))}, {"base_class", nullptr}};
      const auto j = std::find(mem.signs.signs.begin(), mem.signs.signs.end(), -1) - mem.signs.signs.begin();
      if (!s.faces()[*s.face_index({static_cast<std::size_t>(j)})].on_boundary) result["base_class"] = io::to_json(membrane_base_class(mem, cx));
      emit(std::move(result));
      if (!c.svg.empty()) detail::write_text(c.svg, render_membrane_svg(s, mem, c.viewport), out);
    } else if (cmd == "render-svg") {
      auto cx = detail::complex_input(c);
      SvgLayers layers;
      std::map<std::size_t, Integer> cycle;
      std::vector<AmoebaSample> samples;
      if (!c.vertex.empty()) {
        if (!cx.subdivision) throw io::InputError("highlighting a cycle needs the complex's lifting", "--vertex");
        const auto& s = *cx.subdivision;
        cycle = membrane_base_class(build_membrane(s, single_negative_signs(s, detail::parse_point(c.vertex))), cx).chain;
        layers.highlight = &cycle;
      }
      if (!c.samples.empty()) {
        samples = io::samples_of_csv(detail::read_file(c.samples));
        layers.samples = &samples;
      }
      if (!c.projection.empty()) layers.projection = detail::parse_projection(c.projection);
      detail::write_text(c.output, render_complex_svg(cx, c.viewport, layers), out);
    } else {
      err << "unknown subcommand '" << cmd << "'\n";
      return kUsage;
    }
    return kOk;
  } catch (const io::InputError& e) {
    io::Json report{{"error", e.what()}, {"field", e.field}};
    if (e.line) report["line"] = e.line;
    err << report.dump() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
}

/// Parses argv; returns the config, or an exit code when parsing ended the run (help, usage error).
inline std::variant<JobConfig, int> parse_args(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tropix: tropical hypersurfaces, pairs of pants and amoebas"};
  app.require_subcommand(1, 1);
  JobConfig c;
  std::string ts, grid, viewport;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", c.input, "input JSON file");
    sub->add_option("--output", c.output, "output file (default: stdout)");
    sub->add_option("--t", ts, "ladder of t values, e.g. 10,100,1000");
    sub->add_option("--grid", grid, "sampling grid RxA, e.g. 200x64");
    sub->add_option("--seed", c.seed, "seed recorded in the output header");
    sub->add_option("--viewport", viewport, "x0,y0,x1,y1");
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"tropicalize", "lifting -> corner locus JSON"},
      {"subdivide", "lifting -> regular subdivision JSON"},
      {"check-balance", "verify balancing of a complex"},
      {"reconstruct", "region graph (or complex) -> lifting"},
      {"decompose", "primitive pieces and their normalizations"},
      {"homology", "homology of the compactified base"},
      {"invariants", "p_g, chi, sigma of a degree d hypersurface: invariants n d"},
      {"amoeba-sample", "CSV samples of Log_t of a plane curve"},
      {"kapranov", "tropicalize a Puiseux polynomial"},
      {"patchwork", "sign membrane for one negative vertex"},
      {"render-svg", "draw a plane complex"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub);
    sub->add_option("args", c.args, "positional arguments (n d)");
    if (name == "patchwork" || name == "render-svg") sub->add_option("--vertex", c.vertex, "lattice point, e.g. 1,1");
    if (name == "patchwork") sub->add_option("--svg", c.svg, "also draw the membrane (plane case)");
    if (name == "render-svg") {
      sub->add_option("--samples", c.samples, "CSV from amoeba-sample to overlay");
      sub->add_option("--projection", c.projection, "2 x m projection a,b,c;d,e,f");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  try {
    if (!ts.empty()) c.ts = detail::parse_ladder(ts);
    if (!grid.empty()) c.grid = GridSpec::parse(grid);
    if (!viewport.empty()) c.viewport = Viewport::parse(viewport);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(kUsage);
  }
  return c;
}

}  // namespace tropix::cli
