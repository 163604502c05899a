#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "abtk/cocycle.hpp"
#include "abtk/fieldalg.hpp"
#include "abtk/flatpot.hpp"
#include "abtk/poset.hpp"
#include "abtk/sectors.hpp"

namespace abtk {

using Json = nlohmann::ordered_json;

/// Input-file problem: carries the file and the offending field so the CLI
/// can print a precise diagnostic.
class IoError : public Error {
public:
  IoError(const std::string& file, const std::string& field, const std::string& what)
      : Error("in " + file + ", field '" + field + "': " + what), file_(file), field_(field) {}
  const std::string& file() const { return file_; }
  const std::string& field() const { return field_; }

private:
  std::string file_;
  std::string field_;
};

namespace io_detail {

inline Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "-", "file does not exist or is unreadable");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path, "-", std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T field(const Json& j, const std::string& file, const std::string& name) {
  if (!j.contains(name)) throw IoError(file, name, "missing");
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(file, name, std::string("wrong type: ") + e.what());
  }
}

}  // namespace io_detail

// ---- complex.json ----------------------------------------------------------
// {"vertices":[ids],"edges":[[u,v],...],"faces":[[e1,e2,e3],...]}

inline BaseComplex load_complex(const std::string& path) {
  const Json j = io_detail::parse_file(path);
  auto vertices = io_detail::field<std::vector<VertexId>>(j, path, "vertices");
  auto raw_edges = io_detail::field<std::vector<std::vector<VertexId>>>(j, path, "edges");
  std::vector<std::array<VertexId, 2>> edges;
  for (const auto& e : raw_edges) {
    if (e.size() != 2) throw IoError(path, "edges", "each edge must be a pair");
    edges.push_back({e[0], e[1]});
  }
  std::vector<std::array<int, 3>> faces;
  if (j.contains("faces"))
    for (const auto& f : io_detail::field<std::vector<std::vector<int>>>(j, path, "faces")) {
      if (f.size() != 3) throw IoError(path, "faces", "each face must be an edge triple");
      faces.push_back({f[0], f[1], f[2]});
    }
  try {
    return BaseComplex(std::move(vertices), std::move(edges), std::move(faces));
  } catch (const Error& e) {
    throw IoError(path, "-", e.what());
  }
}

// ---- cover.json -------------------------------------------------------------
// {"diamonds":[{"id":k,"support":[ids]},...],"disjoint":[[i,j],...]}
// "disjoint" optional; derived from the buffer rule when absent.

inline CausalPoset load_cover(const std::string& path, BaseComplex base) {
  const Json j = io_detail::parse_file(path);
  if (!j.contains("diamonds")) throw IoError(path, "diamonds", "missing");
  std::vector<std::vector<VertexId>> supports;
  for (const auto& d : j.at("diamonds")) {
    if (!d.contains("support")) throw IoError(path, "diamonds.support", "missing");
    supports.push_back(d.at("support").get<std::vector<VertexId>>());
  }
  std::optional<std::vector<std::pair<DiamondId, DiamondId>>> declared;
  if (j.contains("disjoint")) {
    declared.emplace();
    for (const auto& pr : j.at("disjoint")) {
      if (!pr.is_array() || pr.size() != 2) throw IoError(path, "disjoint", "entries are pairs");
      declared->push_back({pr[0].get<int>(), pr[1].get<int>()});
    }
  }
  try {
    return CausalPoset::from_cover(std::move(base), std::move(supports), std::move(declared));
  } catch (const Error& e) {
    throw IoError(path, "diamonds", e.what());
  }
}

// ---- potential / gauge ------------------------------------------------------
// {"weights":[{"edge":[u,v],"w":real},...]} and {"chi":[{"v":id,"x":real},...]}

inline FlatPotential load_potential(const std::string& path, const BaseComplex& base) {
  const Json j = io_detail::parse_file(path);
  if (!j.contains("weights")) throw IoError(path, "weights", "missing");
  std::vector<double> weights(base.edges().size(), 0.0);
  for (const auto& entry : j.at("weights")) {
    if (!entry.contains("edge") || !entry.contains("w"))
      throw IoError(path, "weights", "entries need 'edge' and 'w'");
    const auto e = entry.at("edge").get<std::vector<VertexId>>();
    if (e.size() != 2) throw IoError(path, "weights.edge", "must be a pair");
    try {
      auto [idx, sign] = base.oriented_edge(e[0], e[1]);
      weights[idx] = sign * entry.at("w").get<double>();
    } catch (const Error& err) {
      throw IoError(path, "weights.edge", err.what());
    }
  }
  return FlatPotential(base, std::move(weights));
}

inline std::map<VertexId, double> load_gauge(const std::string& path) {
  const Json j = io_detail::parse_file(path);
  if (!j.contains("chi")) throw IoError(path, "chi", "missing");
  std::map<VertexId, double> chi;
  for (const auto& entry : j.at("chi")) {
    if (!entry.contains("v") || !entry.contains("x"))
      throw IoError(path, "chi", "entries need 'v' and 'x'");
    chi[entry.at("v").get<VertexId>()] = entry.at("x").get<double>();
  }
  return chi;
}

// ---- curve ------------------------------------------------------------------
// {"curve":[vertex ids],"closed":bool}

struct CurveSpec {
  std::vector<VertexId> vertices;
  bool closed = false;
};

inline CurveSpec load_curve(const std::string& path) {
  const Json j = io_detail::parse_file(path);
  CurveSpec c;
  c.vertices = io_detail::field<std::vector<VertexId>>(j, path, "curve");
  c.closed = io_detail::field<bool>(j, path, "closed");
  return c;
}

// ---- cocycle ----------------------------------------------------------------
// {"dim":n,"values":[{"pair":[b,a],"matrix":[[re,im],...]},...]}
// matrices are row-major lists of [re, im] pairs

inline Json cocycle_to_json(const UnitaryCocycle& z) {
  Json j;
  j["dim"] = z.dim();
  Json values = Json::array();
  const auto& p = z.poset();
  for (const auto& d : p.diamonds())
    for (DiamondId sub : p.comparables(d.id)) {
      if (!p.leq(sub, d.id)) continue;
      Json entry;
      entry["pair"] = {d.id, sub};
      Json m = Json::array();
      const Mat v = z.value(d.id, sub);
      for (int r = 0; r < v.rows(); ++r)
        for (int c = 0; c < v.cols(); ++c) m.push_back({v(r, c).real(), v(r, c).imag()});
      entry["matrix"] = std::move(m);
      values.push_back(std::move(entry));
    }
  j["values"] = std::move(values);
  return j;
}

inline UnitaryCocycle load_cocycle(const std::string& path, const CausalPoset& p) {
  const Json j = io_detail::parse_file(path);
  const int dim = io_detail::field<int>(j, path, "dim");
  if (dim < 1) throw IoError(path, "dim", "must be positive");
  UnitaryCocycle z(p, dim);
  if (!j.contains("values")) throw IoError(path, "values", "missing");
  for (const auto& entry : j.at("values")) {
    if (!entry.contains("pair") || !entry.contains("matrix"))
      throw IoError(path, "values", "entries need 'pair' and 'matrix'");
    const auto pair = entry.at("pair").get<std::vector<int>>();
    const auto flat = entry.at("matrix").get<std::vector<std::vector<double>>>();
    if (pair.size() != 2) throw IoError(path, "values.pair", "must be [b,a]");
    if (static_cast<int>(flat.size()) != dim * dim)
      throw IoError(path, "values.matrix", "needs dim*dim entries of [re,im]");
    Mat m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) {
        const auto& z2 = flat[r * dim + c];
        if (z2.size() != 2) throw IoError(path, "values.matrix", "entries are [re,im]");
        m(r, c) = Cplx(z2[0], z2[1]);
      }
    if (!p.contains(pair[0]) || !p.contains(pair[1]))
      throw IoError(path, "values.pair", "unknown diamond id");
    try {
      z.set(pair[0], pair[1], std::move(m));
    } catch (const Error& e) {
      throw IoError(path, "values.pair", e.what());
    }
  }
  return z;
}

// ---- field word -------------------------------------------------------------
// {"scalar":[re,im],"letters":[{"o":id,"dag":bool},...]}

inline Json word_to_json(const FieldWord& w) {
  Json j;
  const auto s = w.scalar.value();
  j["scalar"] = {s.real(), s.imag()};
  Json letters = Json::array();
  for (const auto& l : w.letters) letters.push_back({{"o", l.o}, {"dag", l.dag}});
  j["letters"] = std::move(letters);
  return j;
}

// ---- reports ----------------------------------------------------------------

inline Json validation_to_json(const ValidationReport& r) {
  Json j;
  j["valid"] = r.valid();
  Json v = Json::array();
  for (const auto& violation : r.violations)
    v.push_back({{"code", violation.code},
                 {"detail", violation.detail},
                 {"witnesses", violation.witnesses}});
  j["violations"] = std::move(v);
  return j;
}

inline Json sector_report_to_json(const SectorReport& r) {
  Json j;
  if (r.charge) j["charge"] = *r.charge;
  if (r.kappa) j["kappa"] = *r.kappa;
  if (r.d) j["d"] = *r.d;
  j["tau"] = r.tau;
  Json character = Json::array();
  for (const auto& [gen, phase] : r.character)
    character.push_back({{"gen", gen}, {"phase", phase}});
  j["character"] = std::move(character);
  j["trivial"] = r.trivial;
  j["periods"] = r.periods;
  return j;
}

}  // namespace abtk
