// JSON serialization: instance files (schema 1), MHS fragments, frame-spec
// fragments, and reports.  Matrices are arrays of rows of scalar strings
// "a/b+c/d*i*twist^k".  Hodge slice order inside a piece is meaningful, so
// everything uses order-preserving JSON objects.

#pragma once

#include "lmhs/frames.hpp"
#include "lmhs/mhs.hpp"
#include "lmhs/snc.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace lmhs {

using Json = nlohmann::ordered_json;

inline Json matrix_to_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(to_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  Json out;
  out["rows"] = m.rows;
  out["cols"] = m.cols;
  out["entries"] = std::move(rows);
  return out;
}

inline ExactMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    fail(Err::Schema, "matrix: expected {rows, cols, entries}");
  ExactMatrix m(j["rows"].get<std::size_t>(), j["cols"].get<std::size_t>());
  const Json& e = j["entries"];
  if (!e.is_array() || e.size() != m.rows) fail(Err::Schema, "matrix: bad row count");
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (!e[i].is_array() || e[i].size() != m.cols) fail(Err::Schema, "matrix: bad column count");
    for (std::size_t jx = 0; jx < m.cols; ++jx)
      m.at(i, jx) = parse_scalar(e[i][jx].get<std::string>());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Instance schema (versioned).

inline Json instance_to_json(const SncInstance& inst) {
  Json j;
  j["schema"] = 1;
  j["name"] = inst.name;
  j["fiber_dim"] = inst.fiber_dim;
  j["components"] = inst.num_components;
  Json strata = Json::array();
  for (auto& [depth, pieces] : inst.strata) {
    Json s;
    s["depth"] = depth;
    Json ps = Json::array();
    for (auto& piece : pieces) {
      Json p;
      p["id"] = piece.id;
      p["components"] = piece.components;
      Json coh;
      for (auto& [d, data] : piece.coh) {
        Json dd;
        dd["rank"] = data.rank;
        Json hodge;
        for (auto& sl : data.slices)
          hodge[std::to_string(sl.p) + "," + std::to_string(sl.q)] = sl.dim;
        dd["hodge"] = std::move(hodge);
        dd["conjugation"] = matrix_to_json(data.conj);
        dd["gram_into_top"] = matrix_to_json(data.gram);
        coh[std::to_string(d)] = std::move(dd);
      }
      p["cohomology"] = std::move(coh);
      ps.push_back(std::move(p));
    }
    s["pieces"] = std::move(ps);
    strata.push_back(std::move(s));
  }
  j["strata"] = std::move(strata);
  Json rs = Json::array();
  for (auto& [key, mat] : inst.restrictions) {
    Json r;
    r["from"] = std::get<0>(key);
    r["to"] = std::get<1>(key);
    r["degree"] = std::get<2>(key);
    r["matrix"] = matrix_to_json(mat);
    rs.push_back(std::move(r));
  }
  j["restrictions"] = std::move(rs);
  if (!inst.kahler.empty()) {
    Json k;
    for (auto& [id, v] : inst.kahler) k[id] = matrix_to_json(v);
    j["kahler"] = std::move(k);
  }
  if (inst.a0) j["a0"] = matrix_to_json(*inst.a0);
  return j;
}

inline SncInstance instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("schema")) fail(Err::Schema, "instance: missing schema");
  if (j["schema"].get<int>() != 1) fail(Err::Schema, "instance: unsupported schema version");
  for (const char* k : {"name", "fiber_dim", "strata", "restrictions"})
    if (!j.contains(k)) fail(Err::Schema, std::string("instance: missing field ") + k);
  SncInstance inst;
  inst.name = j["name"].get<std::string>();
  inst.fiber_dim = j["fiber_dim"].get<int>();
  inst.num_components = j.value("components", 0);
  for (const Json& s : j["strata"]) {
    int depth = s.at("depth").get<int>();
    for (const Json& p : s.at("pieces")) {
      Piece piece;
      piece.id = p.at("id").get<std::string>();
      piece.components = p.at("components").get<std::vector<int>>();
      if (static_cast<int>(piece.components.size()) != depth)
        fail(Err::Schema, "piece " + piece.id + ": component count != depth");
      piece.dim_c = inst.fiber_dim - depth + 1;
      for (auto it = p.at("cohomology").begin(); it != p.at("cohomology").end(); ++it) {
        int d = std::stoi(it.key());
        DegreeData data;
        data.rank = it.value().at("rank").get<std::size_t>();
        for (auto hit = it.value().at("hodge").begin(); hit != it.value().at("hodge").end();
             ++hit) {
          auto comma = hit.key().find(',');
          if (comma == std::string::npos) fail(Err::Schema, "bad hodge key " + hit.key());
          HodgeSlice sl;
          sl.p = std::stoi(hit.key().substr(0, comma));
          sl.q = std::stoi(hit.key().substr(comma + 1));
          sl.dim = hit.value().get<std::size_t>();
          data.slices.push_back(sl);
        }
        data.conj = matrix_from_json(it.value().at("conjugation"));
        data.gram = matrix_from_json(it.value().at("gram_into_top"));
        piece.coh[d] = std::move(data);
      }
      inst.strata[depth].push_back(std::move(piece));
    }
  }
  for (const Json& r : j["restrictions"]) {
    inst.restrictions[{r.at("from").get<std::string>(), r.at("to").get<std::string>(),
                       r.at("degree").get<int>()}] = matrix_from_json(r.at("matrix"));
  }
  if (j.contains("kahler"))
    for (auto it = j["kahler"].begin(); it != j["kahler"].end(); ++it)
      inst.kahler[it.key()] = matrix_from_json(it.value());
  if (j.contains("a0")) inst.a0 = matrix_from_json(j["a0"]);
  return inst;
}

inline SncInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::Parse, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Err::Parse, std::string("json parse error: ") + e.what());
  }
  return instance_from_json(j);
}

inline void save_instance(const SncInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Err::Parse, "cannot open " + path + " for writing");
  out << instance_to_json(inst).dump(1) << "\n";
}

// ---------------------------------------------------------------------------
// MHS fragment.

inline Json mhs_to_json(const MixedHodge& M) {
  Json j;
  j["dim"] = M.dim;
  j["conjugation"] = matrix_to_json(M.real.C);
  Json w, f;
  for (auto& [k, b] : M.W.steps) w[std::to_string(k)] = matrix_to_json(b);
  for (auto& [p, b] : M.F.steps) f[std::to_string(p)] = matrix_to_json(b);
  j["W"] = std::move(w);
  j["F"] = std::move(f);
  return j;
}

inline MixedHodge mhs_from_json(const Json& j) {
  MixedHodge M;
  M.dim = j.at("dim").get<std::size_t>();
  M.real = RealStructure{matrix_from_json(j.at("conjugation"))};
  M.W.ambient = M.dim;
  M.W.dir = Direction::Increasing;
  M.F.ambient = M.dim;
  M.F.dir = Direction::Decreasing;
  for (auto it = j.at("W").begin(); it != j.at("W").end(); ++it)
    M.W.steps[std::stoi(it.key())] = matrix_from_json(it.value());
  for (auto it = j.at("F").begin(); it != j.at("F").end(); ++it)
    M.F.steps[std::stoi(it.key())] = matrix_from_json(it.value());
  return M;
}

// ---------------------------------------------------------------------------
// Frame spec fragment.

inline Json frame_spec_to_json(const LimitFrameSpec& spec) {
  Json j;
  j["shape"] = spec.shape == FrameShape::HS ? "hs" : "clemens";
  j["h"] = spec.h;
  j["m"] = spec.m;
  j["has_30"] = spec.has_30;
  j["x"] = matrix_to_json(spec.x);
  j["b"] = matrix_to_json(spec.b);
  j["w"] = matrix_to_json(spec.w);
  j["y"] = matrix_to_json(spec.y);
  j["gram"] = matrix_to_json(spec.gram);
  j["N"] = matrix_to_json(spec.N);
  return j;
}

inline LimitFrameSpec frame_spec_from_json(const Json& j) {
  LimitFrameSpec spec;
  std::string shape = j.at("shape").get<std::string>();
  if (shape == "hs")
    spec.shape = FrameShape::HS;
  else if (shape == "clemens")
    spec.shape = FrameShape::Clemens;
  else
    fail(Err::Schema, "frame: unknown shape " + shape);
  spec.h = j.at("h").get<std::size_t>();
  spec.m = j.at("m").get<std::size_t>();
  spec.has_30 = j.value("has_30", false);
  spec.x = matrix_from_json(j.at("x"));
  spec.b = matrix_from_json(j.at("b"));
  spec.w = matrix_from_json(j.at("w"));
  spec.y = matrix_from_json(j.at("y"));
  spec.gram = matrix_from_json(j.at("gram"));
  spec.N = matrix_from_json(j.at("N"));
  spec.nbeta = 2 * spec.h + (spec.has_30 ? 2 : 0);
  spec.alpha_off = 0;
  spec.beta_off = spec.m;
  spec.gamma_off = spec.m + spec.nbeta;
  spec.dim = 2 * spec.m + spec.nbeta + (spec.shape == FrameShape::HS ? 4 : 0);
  spec.eps_off = 2 * spec.m + spec.nbeta;
  spec.basis = ExactMatrix::identity(spec.dim);
  if (spec.gram.rows != spec.dim || spec.N.rows != spec.dim)
    fail(Err::Schema, "frame: gram/N shape mismatch");
  return spec;
}

}  // namespace lmhs
