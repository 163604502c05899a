// abtk: builds a causal diamond net, decorates it with a flat background
// potential, and emits validation / homotopy / holonomy / statistics /
// sector reports as JSON or CSV.
//
// Exit codes: 0 success, 1 validation failures (reports still written),
// 2 input errors.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abtk/io.hpp"

namespace fs = std::filesystem;
using namespace abtk;

namespace {

struct Job {
  std::string net;  // "line:5", "circle:6", "wedge:6,6"
  std::string complex_file;
  std::string cover_file;
  std::string potential_file;
  std::string character;  // comma-separated loop integrals per generator
  std::vector<std::string> analyses;
  std::string out_dir = ".";
  std::string format = "json";
  double tolerance = 1e-9;
};

CausalPoset build_poset(const Job& job) {
  if (!job.net.empty()) {
    const auto colon = job.net.find(':');
    if (colon == std::string::npos)
      throw IoError("--net", job.net, "expected kind:N or wedge:N1,N2");
    const std::string kind = job.net.substr(0, colon);
    const std::string params = job.net.substr(colon + 1);
    try {
      if (kind == "line") return build_net(NetKind::line, std::stoi(params));
      if (kind == "circle") return build_net(NetKind::circle, std::stoi(params));
      if (kind == "wedge") {
        const auto comma = params.find(',');
        if (comma == std::string::npos) throw IoError("--net", job.net, "wedge needs two sizes");
        return build_net(NetKind::wedge, std::stoi(params.substr(0, comma)),
                         std::stoi(params.substr(comma + 1)));
      }
    } catch (const IoError&) {
      throw;
    } catch (const Error& e) {
      throw IoError("--net", job.net, e.what());
    } catch (const std::exception&) {
      throw IoError("--net", job.net, "sizes must be integers");
    }
    throw IoError("--net", job.net, "unknown kind (line, circle, wedge)");
  }
  if (job.complex_file.empty() || job.cover_file.empty())
    throw IoError("--net", "-", "provide either --net or both --complex and --cover");
  return load_cover(job.cover_file, load_complex(job.complex_file));
}

std::vector<double> parse_character(const std::string& spec) {
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw IoError("--character", spec, "expected comma-separated reals");
    }
  }
  if (values.empty()) throw IoError("--character", spec, "empty character");
  return values;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

void write_csv(const fs::path& path, const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

/// One CSV row per leaf; array indices become part of the key.
std::vector<std::vector<std::string>> flatten_csv(const Json& j) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"key", "value"});
  std::function<void(const Json&, const std::string&)> walk = [&](const Json& node,
                                                                  const std::string& prefix) {
    if (node.is_object()) {
      for (auto it = node.begin(); it != node.end(); ++it)
        walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
    } else if (node.is_array()) {
      int k = 0;
      for (const auto& item : node) walk(item, prefix + "[" + std::to_string(k++) + "]");
    } else {
      rows.push_back({prefix, node.dump()});
    }
  };
  walk(j, "");
  return rows;
}

struct Pipeline {
  const Job& job;
  CausalPoset poset;
  std::optional<FlatPotential> potential;
  std::optional<Pi1Presentation> pres;

  explicit Pipeline(const Job& j) : job(j), poset(build_poset(j)) {}

  const Pi1Presentation& presentation() {
    if (!pres) pres.emplace(poset, 0);
    return *pres;
  }

  const FlatPotential& background() {
    if (!potential) {
      if (!job.potential_file.empty()) {
        potential.emplace(load_potential(job.potential_file, poset.base()));
      } else if (!job.character.empty()) {
        potential.emplace(
            potential_from_character(poset, presentation(), parse_character(job.character)));
      } else {
        potential.emplace(FlatPotential::zero(poset.base()));
      }
    }
    return *potential;
  }

  Twist twist() {
    return twist_from_potential(abelian_cocycle(poset, local_primitives(poset, background())));
  }
};

Json run_validate(Pipeline& ctx) { return validation_to_json(validate_net(ctx.poset)); }

Json run_pi1(Pipeline& ctx) {
  const auto& pres = ctx.presentation();
  Json j;
  j["base"] = pres.base();
  j["diamonds"] = ctx.poset.size();
  j["comparability_edges"] = pres.edges().size();
  j["generators"] = pres.generator_count();
  j["relators"] = pres.relators().size();
  j["h1_rank"] = pres.h1_rank();
  j["free"] = pres.reduces_to_free();
  return j;
}

Json run_holonomy(Pipeline& ctx) {
  const auto& pres = ctx.presentation();
  const Twist sigma = ctx.twist();
  const FieldCocycle z = twisted_transporter(ctx.poset, sigma);

  // basis loops oriented by the base geometry: the leading cotree-edge
  // crossing is made positive, so winding 1 means one forward turn
  std::vector<PosetPath> basis_loops;
  for (int gen : pres.basis()) {
    PosetPath loop = pres.generator_loop(gen);
    const auto windings = loop_windings(ctx.poset, loop);
    for (double w : windings) {
      if (std::abs(w) < 0.5) continue;
      if (w < 0) loop = reverse_path(loop);
      break;
    }
    basis_loops.push_back(std::move(loop));
  }

  Json j;
  Json gens = Json::array();
  bool trivial = true;
  for (std::size_t k = 0; k < basis_loops.size(); ++k) {
    const FieldWord w = z.evaluate(basis_loops[k]);
    const double phase = std::remainder(w.scalar.arg, 2.0 * M_PI);
    trivial = trivial && std::abs(phase) < ctx.job.tolerance;
    gens.push_back({{"gen", k}, {"phase", phase}});
  }
  j["generators"] = std::move(gens);
  j["topologically_trivial"] = trivial;

  Json loops = Json::array();
  for (std::size_t k = 0; k < basis_loops.size(); ++k) {
    const auto& base_loop = basis_loops[k];
    for (int w = -3; w <= 3; ++w) {
      PosetPath loop = PosetPath::trivial(ctx.poset, pres.base());
      for (int i = 0; i < std::abs(w); ++i)
        loop = compose_paths(w > 0 ? base_loop : reverse_path(base_loop), loop);
      const FieldWord val = z.evaluate(loop);
      const auto c = val.scalar.value();
      loops.push_back({{"gen", k},
                       {"winding", w},
                       {"phase", std::remainder(val.scalar.arg, 2.0 * M_PI)},
                       {"re", c.real()},
                       {"im", c.imag()}});
    }
  }
  j["loops"] = std::move(loops);
  return j;
}

Json run_statistics(Pipeline& ctx) {
  const FieldCocycle z = twisted_transporter(ctx.poset, ctx.twist());
  std::optional<PhaseScalar> eps;
  for (int a = 0; a < ctx.poset.size() && !eps; ++a) {
    try {
      eps = statistics_phase(z, a, ctx.poset);
    } catch (const Error&) {
    }
  }
  if (!eps) throw Error("insufficient causal disjointness", "statistics needs a larger net");
  Json j;
  j["charge"] = z.charge();
  j["kappa"] = eps->sign;
  return j;
}

Json run_sector(Pipeline& ctx) {
  const FieldCocycle z = twisted_transporter(ctx.poset, ctx.twist());
  return sector_report_to_json(analyze(z, ctx.poset, ctx.presentation()));
}

Json run_roundtrip(Pipeline& ctx) {
  const auto& pres = ctx.presentation();
  const Twist sigma = ctx.twist();
  const Twist back = sector_to_twist(twist_to_sector(ctx.poset, sigma));
  double pair_err = 0.0;
  for (const auto& d : ctx.poset.diamonds())
    for (DiamondId a : ctx.poset.comparables(d.id))
      pair_err = std::max(pair_err, std::abs(back.arg(d.id, a) - sigma.arg(d.id, a)));
  double loop_err = 0.0;
  for (int gen : pres.basis()) {
    const auto loop = pres.generator_loop(gen);
    loop_err = std::max(
        loop_err, std::abs(std::remainder(back.path_arg(loop) - sigma.path_arg(loop), 2.0 * M_PI)));
  }
  Json j;
  j["max_pair_error"] = pair_err;
  j["max_loop_error"] = loop_err;
  j["ok"] = pair_err <= 1e-12 && loop_err <= 1e-12;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superselection-sector toolkit for causal diamond nets"};
  Job job;
  std::string analyses_csv;
  app.add_option("--net", job.net, "fixture net: line:N, circle:N or wedge:N1,N2");
  app.add_option("--complex", job.complex_file, "base complex JSON file");
  app.add_option("--cover", job.cover_file, "diamond cover JSON file");
  app.add_option("--potential", job.potential_file, "flat potential JSON file");
  app.add_option("--character", job.character,
                 "comma-separated loop integrals, one per H1 generator");
  app.add_option("--analyses", analyses_csv,
                 "comma list of validate,pi1,holonomy,statistics,sector,roundtrip")
      ->required();
  app.add_option("--out", job.out_dir, "output directory (default .)");
  app.add_option("--format", job.format, "json or csv (default json)");
  app.add_option("--tolerance", job.tolerance, "numerical tolerance (default 1e-9)");
  CLI11_PARSE(app, argc, argv);

  std::stringstream ss(analyses_csv);
  std::string item;
  while (std::getline(ss, item, ',')) job.analyses.push_back(item);

  try {
    if (job.analyses.empty()) throw IoError("--analyses", "-", "at least one analysis required");
    if (job.format != "json" && job.format != "csv")
      throw IoError("--format", job.format, "expected json or csv");
    if (!job.potential_file.empty() && !job.character.empty())
      throw IoError("--potential", "-", "use either --potential or --character, not both");

    const std::vector<std::string> order{"validate",   "pi1",    "holonomy",
                                         "statistics", "sector", "roundtrip"};
    for (const auto& name : job.analyses)
      if (std::find(order.begin(), order.end(), name) == order.end())
        throw IoError("--analyses", name, "unknown analysis");

    fs::create_directories(job.out_dir);
    Pipeline ctx(job);
    bool validation_failed = false;

    for (const auto& name : order) {
      if (std::find(job.analyses.begin(), job.analyses.end(), name) == job.analyses.end())
        continue;
      Json report;
      if (name == "validate") {
        report = run_validate(ctx);
        validation_failed = !report.at("valid").get<bool>();
      } else if (name == "pi1") {
        report = run_pi1(ctx);
      } else if (name == "holonomy") {
        report = run_holonomy(ctx);
      } else if (name == "statistics") {
        report = run_statistics(ctx);
      } else if (name == "sector") {
        report = run_sector(ctx);
      } else if (name == "roundtrip") {
        report = run_roundtrip(ctx);
      }
      const fs::path out = fs::path(job.out_dir) / (name + "." + job.format);
      if (job.format == "json")
        write_json(out, report);
      else
        write_csv(out, flatten_csv(report));
    }
    return validation_failed ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
