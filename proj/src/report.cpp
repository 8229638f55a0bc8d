#include "magbloch/report.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace magbloch {

using nlohmann::json;

json to_json(const ValidationReport& report) {
  json out;
  out["ok"] = report.ok();
  out["checks"] = json::array();
  for (const auto& c : report.checks)
    out["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"offending", c.offending}, {"message", c.message}});
  return out;
}

json to_json(const HomologySummary& summary) {
  json out;
  out["betti"] = summary.betti;
  out["torsion"] = {{"h0", summary.torsion[0]}, {"h1", summary.torsion[1]}, {"h2", summary.torsion[2]}};
  out["cells"] = {summary.vertex_count, summary.edge_count, summary.face_count};
  out["euler_characteristic"] = summary.euler_cells();
  out["h1_free_generators"] = summary.free_generators;
  json torsion = json::array();
  for (std::size_t i = 0; i < summary.torsion_generators.size(); ++i)
    torsion.push_back({{"order", summary.torsion[1][i]}, {"chain", summary.torsion_generators[i]}});
  out["h1_torsion_generators"] = torsion;
  out["two_cycles"] = summary.two_cycles;
  return out;
}

json to_json(const QuantizabilityCertificate& certificate) {
  return {{"pairings", certificate.pairings},
          {"residues", certificate.residues},
          {"verdict", certificate.verdict},
          {"tolerance", certificate.tolerance}};
}

json to_json(const Character& chi) {
  return {{"angles", chi.angles}, {"torsion_indices", chi.torsion_indices}, {"torsion_orders", chi.torsion_orders}};
}

json to_json(const CharacterGroup& group) {
  json out;
  out["free_rank"] = group.free_rank();
  out["torsion"] = group.torsion();
  out["components"] = group.component_count();
  json comps = json::array();
  for (const auto& chi : group.components()) comps.push_back(chi.torsion_indices);
  out["component_indices"] = comps;
  return out;
}

json to_json(const BlockDiagonalizationReport& report) {
  return {{"unitarity", report.unitarity},
          {"off_diagonal", report.off_diagonal},
          {"diagonal_deviation", report.diagonal_deviation},
          {"blocks", report.blocks},
          {"dimension", report.dimension}};
}

json to_json(const CharacterRelationResiduals& residuals) {
  return {{"over_characters", residuals.over_characters}, {"over_group", residuals.over_group}};
}

json to_json(const DecompositionReport& report) {
  return {{"max_deviation", report.max_deviation},
          {"norm", report.norm},
          {"supercell_eigenvalues", report.supercell_eigenvalues},
          {"fiber_eigenvalues", report.fiber_eigenvalues}};
}

json to_json(const Connection& connection) { return connection.values(); }

std::string band_csv(const BandData& bands) {
  std::string out;
  const std::size_t d = bands.momenta.empty() ? 0 : bands.momenta.front().size();
  const std::size_t n = bands.eigenvalues.empty() ? 0 : bands.eigenvalues.front().size();
  std::vector<std::string> header;
  for (std::size_t j = 1; j <= d; ++j) header.push_back(fmt::format("k{}", j));
  for (std::size_t j = 1; j <= n; ++j) header.push_back(fmt::format("e{}", j));
  out += fmt::format("{}\n", fmt::join(header, ","));
  for (std::size_t i = 0; i < bands.momenta.size(); ++i) {
    std::vector<std::string> row;
    for (double k : bands.momenta[i]) row.push_back(fmt::format("{}", k));
    for (double e : bands.eigenvalues[i]) row.push_back(fmt::format("{}", e));
    out += fmt::format("{}\n", fmt::join(row, ","));
  }
  return out;
}

std::string butterfly_csv(std::span<const ButterflyRow> rows) {
  std::string out = "p,q,interval_lo,interval_hi\n";
  for (const auto& row : rows) {
    if (!row.error.empty()) continue;
    for (const auto& iv : row.intervals) out += fmt::format("{},{},{},{}\n", row.flux.p, row.flux.q, iv.lo, iv.hi);
  }
  return out;
}

std::string butterfly_svg(std::span<const ButterflyRow> rows) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double fmin = 0.0, fmax = 1.0;
  for (const auto& row : rows) {
    if (!row.error.empty()) continue;
    fmin = std::min(fmin, row.flux.value());
    fmax = std::max(fmax, row.flux.value());
    for (const auto& iv : row.intervals) {
      lo = std::min(lo, iv.lo);
      hi = std::max(hi, iv.hi);
    }
  }
  if (!(hi > lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  constexpr double width = 640.0, height = 640.0, margin = 40.0;
  auto x = [&](double e) { return margin + (e - lo) / (hi - lo) * (width - 2 * margin); };
  auto y = [&](double f) { return height - margin - (f - fmin) / (fmax - fmin) * (height - 2 * margin); };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">energy</text>\n"
      "<text x=\"12\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 12 {})\" text-anchor=\"middle\">flux p/q</text>\n",
      width, height, width, height, width / 2, height - 10, height / 2, height / 2);
  for (const auto& row : rows) {
    if (!row.error.empty()) continue;
    const double yy = y(row.flux.value());
    for (const auto& iv : row.intervals) {
      const double x0 = x(iv.lo), x1 = std::max(x(iv.hi), x0 + 0.5);
      out += fmt::format("<line x1=\"{:.3f}\" y1=\"{:.3f}\" x2=\"{:.3f}\" y2=\"{:.3f}\" stroke=\"black\" stroke-width=\"1\"/>\n",
                         x0, yy, x1, yy);
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace magbloch
