#include "magbloch/model_io.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "magbloch/errors.hpp"

namespace magbloch {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::parse, "model: " + what); }

std::int64_t as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where + " must be an integer");
  return j.get<std::int64_t>();
}

double as_real(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where + " must be a number");
  return j.get<double>();
}

const json& as_array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where + " must be a list");
  return j;
}

}  // namespace

Model parse_model(const json& doc) {
  if (!doc.is_object()) fail("top level must be an object");
  static const std::set<std::string> known{"vertices", "edges", "faces", "tau", "potential", "flux", "rank",
                                           "connected_cover"};
  for (const auto& [key, _] : doc.items())
    if (!known.contains(key)) fail(fmt::format("unknown key '{}'", key));
  if (!doc.contains("vertices")) fail("missing 'vertices'");

  Model model;
  Complex2& cx = model.complex;
  const std::int64_t nv = as_int(doc.at("vertices"), "vertices");
  if (nv < 0) fail("vertices must be >= 0");
  cx.vertex_count = static_cast<std::size_t>(nv);

  if (doc.contains("edges")) {
    for (const auto& e : as_array(doc.at("edges"), "edges")) {
      if (!e.is_array() || (e.size() != 2 && e.size() != 3)) fail("each edge must be [source, target] or [source, target, weight]");
      const std::int64_t s = as_int(e[0], "edge source");
      const std::int64_t t = as_int(e[1], "edge target");
      if (s < 1 || t < 1) fail("edge endpoints are 1-based");
      cx.edges.push_back({static_cast<std::size_t>(s - 1), static_cast<std::size_t>(t - 1),
                          e.size() == 3 ? as_real(e[2], "edge weight") : 1.0});
    }
  }

  if (doc.contains("faces")) {
    for (const auto& f : as_array(doc.at("faces"), "faces")) {
      FaceWord word;
      for (const auto& id : as_array(f, "face")) {
        const std::int64_t v = as_int(id, "face edge id");
        if (v == 0) fail("face edge ids are signed and 1-based; 0 is not allowed");
        word.push_back({static_cast<std::size_t>((v > 0 ? v : -v) - 1), v > 0 ? 1 : -1});
      }
      cx.faces.push_back(std::move(word));
    }
  }

  CoveringData& cov = model.covering;
  bool rank_known = false;
  if (doc.contains("rank")) {
    const std::int64_t r = as_int(doc.at("rank"), "rank");
    if (r < 0) fail("rank must be >= 0");
    cov.rank = static_cast<std::size_t>(r);
    rank_known = true;
  }
  if (doc.contains("tau")) {
    for (const auto& label : as_array(doc.at("tau"), "tau")) {
      IntVector v;
      for (const auto& x : as_array(label, "tau entry")) v.push_back(as_int(x, "tau component"));
      if (!rank_known) {
        cov.rank = v.size();
        rank_known = true;
      }
      cov.tau.push_back(std::move(v));
    }
  } else {
    cov.tau.assign(cx.edge_count(), IntVector(cov.rank, 0));
  }
  if (doc.contains("connected_cover")) {
    if (!doc.at("connected_cover").is_boolean()) fail("connected_cover must be true or false");
    cov.connected_cover = doc.at("connected_cover").get<bool>();
  }

  if (doc.contains("potential")) {
    for (const auto& x : as_array(doc.at("potential"), "potential")) cx.potential.push_back(as_real(x, "potential"));
  } else {
    cx.potential.assign(cx.vertex_count, 0.0);
  }

  if (doc.contains("flux")) {
    for (const auto& x : as_array(doc.at("flux"), "flux")) model.flux.flux.push_back(as_real(x, "flux"));
    if (model.flux.flux.size() != cx.face_count())
      fail(fmt::format("flux has {} entries but there are {} faces", model.flux.flux.size(), cx.face_count()));
  } else {
    model.flux.flux.assign(cx.face_count(), 0.0);
  }
  return model;
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse, "cannot open model file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& ex) {
    throw Error(ErrorKind::parse, fmt::format("{}: {}", path.string(), ex.what()));
  }
  return parse_model(doc);
}

json to_json(const Model& model) {
  const Complex2& cx = model.complex;
  json doc;
  doc["vertices"] = cx.vertex_count;
  doc["edges"] = json::array();
  for (const auto& e : cx.edges) doc["edges"].push_back({e.source + 1, e.target + 1, e.weight});
  doc["faces"] = json::array();
  for (const auto& word : cx.faces) {
    json f = json::array();
    for (const auto& s : word) f.push_back(s.sign * static_cast<std::int64_t>(s.edge + 1));
    doc["faces"].push_back(f);
  }
  doc["tau"] = model.covering.tau;
  doc["rank"] = model.covering.rank;
  doc["connected_cover"] = model.covering.connected_cover;
  doc["potential"] = cx.potential;
  doc["flux"] = model.flux.flux;
  return doc;
}

}  // namespace magbloch
