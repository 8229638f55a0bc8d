// magbloch: command-line driver for the periodic magnetic Schroedinger toolkit.
//
// Exit codes: 0 ok, 1 not quantizable, 2 parse error, 3 invariant violated, 4 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "magbloch/bloch.hpp"
#include "magbloch/errors.hpp"
#include "magbloch/homology.hpp"
#include "magbloch/magnetic.hpp"
#include "magbloch/model_io.hpp"
#include "magbloch/report.hpp"

using namespace magbloch;
using nlohmann::json;

namespace {

enum ExitCode { ok = 0, not_quantizable = 1, parse_error = 2, invariant_error = 3, numeric_error = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return parse_error;
    case ErrorKind::invariant: return invariant_error;
    case ErrorKind::not_quantizable: return not_quantizable;
    case ErrorKind::numeric: return numeric_error;
  }
  return numeric_error;
}

struct RunConfig {
  std::string command;
  std::string model_path;
  std::string grid;
  std::string supercell;
  std::vector<std::string> fluxes;
  std::vector<std::string> momenta;
  std::vector<std::string> tolerance_overrides;
  std::string out_path;
  std::string svg_path;
  std::size_t axis = 0;
  bool json = false;

  std::map<std::string, double> tolerances{
      {"quantize", 1e-9}, {"block", 1e-10}, {"unitary", 1e-12}, {"relations", 1e-12}, {"spectrum", 1e-8}};

  void apply_overrides() {
    for (const auto& item : tolerance_overrides) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::parse, "--tol expects NAME=VALUE, got '" + item + "'");
      const std::string name = item.substr(0, eq);
      if (!tolerances.contains(name)) throw Error(ErrorKind::parse, "unknown tolerance '" + name + "'");
      double value = 0.0;
      try {
        value = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw Error(ErrorKind::parse, "bad tolerance value in '" + item + "'");
      }
      if (!(value > 0.0)) throw Error(ErrorKind::parse, "tolerances must be positive");
      tolerances[name] = value;
    }
  }
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text, std::size_t rank, std::size_t fallback) {
  if (text.empty()) return std::vector<std::size_t>(rank, fallback);
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) {
    long long v = 0;
    try {
      std::size_t used = 0;
      v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "cannot parse size list '" + text + "'");
    }
    if (v < 1) throw Error(ErrorKind::parse, "sizes must be >= 1");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.size() == 1 && rank > 1) out.assign(rank, out.front());
  if (out.size() != rank)
    throw Error(ErrorKind::parse, fmt::format("expected {} sizes for a rank-{} cover, got {}", rank, rank, out.size()));
  return out;
}

std::vector<double> parse_momentum(const std::string& text, std::size_t rank) {
  std::vector<double> k;
  for (const auto& item : split(text, ',')) {
    try {
      k.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "cannot parse momentum '" + text + "'");
    }
  }
  if (k.size() != rank) throw Error(ErrorKind::parse, fmt::format("momentum '{}' needs {} components", text, rank));
  return k;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out_path);
  if (!out) throw Error(ErrorKind::parse, "cannot write " + cfg.out_path);
  out << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

Model load_valid_model(const RunConfig& cfg) {
  Model model = load_model(cfg.model_path);
  const ValidationReport report = validate(model.complex, model.covering);
  if (!report.ok()) {
    for (const auto& c : report.checks)
      if (!c.passed) std::cerr << "invalid model: " << c.name << ": " << c.message << "\n";
    throw Error(ErrorKind::invariant, "model violates structural invariants (run 'validate' for details)");
  }
  return model;
}

Connection model_connection(const Model& model, const HomologySummary& summary, const RunConfig& cfg) {
  return synthesize_connection(model.complex, model.flux, summary, cfg.tolerances.at("quantize"));
}

int cmd_validate(const RunConfig& cfg) {
  const Model model = load_model(cfg.model_path);
  const ValidationReport report = validate(model.complex, model.covering);
  if (cfg.json) {
    emit(cfg, dump(to_json(report)));
  } else {
    std::string text;
    for (const auto& c : report.checks)
      text += fmt::format("{:<16} {}{}\n", c.name, c.passed ? "pass" : "FAIL", c.message.empty() ? "" : "  " + c.message);
    text += report.ok() ? "model is valid\n" : "model is invalid\n";
    emit(cfg, text);
  }
  return report.ok() ? ok : invariant_error;
}

int cmd_homology(const RunConfig& cfg) {
  const Model model = load_valid_model(cfg);
  const HomologySummary h = homology(model.complex);
  if (cfg.json) {
    emit(cfg, dump(to_json(h)));
  } else {
    std::string text = fmt::format("cells V={} E={} F={}  euler={}\n", h.vertex_count, h.edge_count, h.face_count,
                                   h.euler_cells());
    for (int k = 0; k < 3; ++k)
      text += fmt::format("H{}: rank {}  torsion [{}]\n", k, h.betti[k], fmt::join(h.torsion[k], ", "));
    emit(cfg, text);
  }
  return ok;
}

int cmd_quantizable(const RunConfig& cfg) {
  const Model model = load_valid_model(cfg);
  const HomologySummary h = homology(model.complex);
  const QuantizabilityCertificate cert = is_quantizable(model.complex, model.flux, h, cfg.tolerances.at("quantize"));
  if (cfg.json) {
    emit(cfg, dump(to_json(cert)));
  } else {
    std::string text;
    for (std::size_t i = 0; i < cert.pairings.size(); ++i)
      text += fmt::format("2-cycle {}: pairing {}  residue {}\n", i, cert.pairings[i], cert.residues[i]);
    text += fmt::format("verdict: {}\n", cert.verdict ? "quantizable" : "not quantizable");
    emit(cfg, text);
  }
  return cert.verdict ? ok : not_quantizable;
}

int cmd_classes(const RunConfig& cfg) {
  const Model model = load_valid_model(cfg);
  const CharacterGroup group = character_group(homology(model.complex));
  if (cfg.json) {
    emit(cfg, dump(to_json(group)));
  } else {
    std::string text = fmt::format("quantization classes: torus of dimension {} times {} component(s), torsion [{}]\n",
                                   group.free_rank(), group.component_count(), fmt::join(group.torsion(), ", "));
    for (const auto& chi : group.components())
      text += fmt::format("component [{}]\n", fmt::join(chi.torsion_indices, ", "));
    emit(cfg, text);
  }
  return ok;
}

int cmd_fibers(const RunConfig& cfg) {
  const Model model = load_valid_model(cfg);
  const HomologySummary h = homology(model.complex);
  const Connection conn = model_connection(model, h, cfg);
  BandData data;
  if (!cfg.momenta.empty()) {
    for (const auto& text : cfg.momenta) data.momenta.push_back(parse_momentum(text, model.covering.rank));
  } else {
    data.momenta = BlochBasis(parse_sizes(cfg.grid, model.covering.rank, 8)).momenta();
  }
  data.eigenvalues = fiber_sweep(model.complex, model.covering, conn, data.momenta);
  if (cfg.json)
    emit(cfg, dump({{"momenta", data.momenta}, {"eigenvalues", data.eigenvalues}}));
  else
    emit(cfg, band_csv(data));
  return ok;
}

int cmd_verify(const RunConfig& cfg) {
  const Model model = load_valid_model(cfg);
  const HomologySummary h = homology(model.complex);
  const Connection conn = model_connection(model, h, cfg);
  const auto sizes = parse_sizes(cfg.supercell, model.covering.rank, 2);

  const BlockDiagonalizationReport blocks = verify_block_diagonalization(model.complex, model.covering, conn, sizes);
  const CharacterRelationResiduals relations = character_relations_check(sizes);
  const DecompositionReport decomposition = compare_supercell_to_fibers(model.complex, model.covering, conn, sizes);

  const double spectral_tol = cfg.tolerances.at("spectrum") * std::max(decomposition.norm, 1.0);
  const bool unitary_ok = blocks.unitarity <= cfg.tolerances.at("unitary");
  const bool blocks_ok = blocks.off_diagonal <= cfg.tolerances.at("block") &&
                         blocks.diagonal_deviation <= cfg.tolerances.at("block");
  const bool relations_ok = relations.over_characters <= cfg.tolerances.at("relations") &&
                            relations.over_group <= cfg.tolerances.at("relations");
  const bool spectrum_ok = decomposition.max_deviation <= spectral_tol;
  const bool all_ok = unitary_ok && blocks_ok && relations_ok && spectrum_ok;
  const double max_residual = std::max({blocks.off_diagonal, blocks.diagonal_deviation, blocks.unitarity,
                                        relations.over_characters, relations.over_group});

  if (cfg.json) {
    json doc;
    doc["supercell"] = sizes;
    doc["block_diagonalization"] = to_json(blocks);
    doc["character_relations"] = to_json(relations);
    doc["decomposition"] = {{"max_deviation", decomposition.max_deviation},
                            {"norm", decomposition.norm},
                            {"tolerance", spectral_tol}};
    doc["max_residual"] = max_residual;
    doc["passed"] = all_ok;
    emit(cfg, dump(doc));
  } else {
    std::string text = fmt::format("supercell N=({})  dimension {}\n", fmt::join(sizes, ","), blocks.dimension);
    text += fmt::format("unitarity            {:.3e}  {}\n", blocks.unitarity, unitary_ok ? "pass" : "FAIL");
    text += fmt::format("off-diagonal blocks  {:.3e}  {}\n", blocks.off_diagonal, blocks_ok ? "pass" : "FAIL");
    text += fmt::format("fiber blocks         {:.3e}  {}\n", blocks.diagonal_deviation, blocks_ok ? "pass" : "FAIL");
    text += fmt::format("character relations  {:.3e}  {}\n", std::max(relations.over_characters, relations.over_group),
                        relations_ok ? "pass" : "FAIL");
    text += fmt::format("spectrum vs fibers   {:.3e}  {}\n", decomposition.max_deviation, spectrum_ok ? "pass" : "FAIL");
    text += fmt::format("max residual {:.3e}\n", max_residual);
    emit(cfg, text);
  }
  return all_ok ? ok : numeric_error;
}

int cmd_bands(const RunConfig& cfg) {
  const Model model = load_valid_model(cfg);
  const HomologySummary h = homology(model.complex);
  const Connection conn = model_connection(model, h, cfg);
  const BandData data =
      spectrum_union(model.complex, model.covering, conn, parse_sizes(cfg.grid, model.covering.rank, 16));
  if (cfg.json) {
    json intervals = json::array();
    for (const auto& iv : data.intervals) intervals.push_back({iv.lo, iv.hi});
    emit(cfg, dump({{"momenta", data.momenta}, {"eigenvalues", data.eigenvalues}, {"intervals", intervals}, {"edge_uncertainty", data.edge_uncertainty}}));
  } else {
    emit(cfg, band_csv(data));
  }
  return ok;
}

int cmd_butterfly(const RunConfig& cfg) {
  const Model model = load_valid_model(cfg);
  std::vector<Rational> fluxes;
  for (const auto& list : cfg.fluxes)
    for (const auto& item : split(list, ',')) fluxes.push_back(Rational::parse(item));
  if (fluxes.empty()) throw Error(ErrorKind::parse, "butterfly needs --flux p/q[,p/q...]");
  ButterflyOptions options;
  options.axis = cfg.axis;
  const auto rows = butterfly(model.complex, model.covering, model.flux, fluxes,
                              parse_sizes(cfg.grid, model.covering.rank, 16), options);
  for (const auto& row : rows)
    if (!row.error.empty()) std::cerr << fmt::format("flux {}/{}: {}\n", row.flux.p, row.flux.q, row.error);
  if (cfg.json) {
    json doc = json::array();
    for (const auto& row : rows) {
      json intervals = json::array();
      for (const auto& iv : row.intervals) intervals.push_back({iv.lo, iv.hi});
      doc.push_back({{"p", row.flux.p}, {"q", row.flux.q}, {"intervals", intervals}, {"error", row.error}});
    }
    emit(cfg, dump(doc));
  } else {
    emit(cfg, butterfly_csv(rows));
  }
  if (!cfg.svg_path.empty()) {
    std::ofstream svg(cfg.svg_path);
    if (!svg) throw Error(ErrorKind::parse, "cannot write " + cfg.svg_path);
    svg << butterfly_svg(rows);
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic magnetic Schroedinger operators on weighted 2-complexes: quantization and Bloch analysis"};
  app.require_subcommand(1, 1);
  RunConfig cfg;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const std::vector<Command> commands{
      {"validate", "check the model's structural invariants", cmd_validate},
      {"homology", "integer homology with generators", cmd_homology},
      {"quantizable", "flux integrality certificate", cmd_quantizable},
      {"classes", "group of quantization classes", cmd_classes},
      {"fibers", "fiber spectra at given momenta (CSV)", cmd_fibers},
      {"verify", "finite Bloch decomposition residuals", cmd_verify},
      {"bands", "band data over a momentum grid (CSV)", cmd_bands},
      {"butterfly", "band intervals for rational fluxes (CSV, optional SVG)", cmd_butterfly},
  };

  std::map<CLI::App*, const Command*> dispatch;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--model", cfg.model_path, "model JSON file")->required();
    sub->add_option("--grid", cfg.grid, "momentum grid sizes N[,N...]");
    sub->add_option("--supercell", cfg.supercell, "supercell sizes N[,N...]");
    sub->add_option("--flux", cfg.fluxes, "rational fluxes p/q[,p/q...]");
    sub->add_option("--k", cfg.momenta, "momentum k1[,k2...] in radians (repeatable)");
    sub->add_option("--axis", cfg.axis, "enlargement axis for rational flux");
    sub->add_option("--out", cfg.out_path, "write output here instead of stdout");
    sub->add_option("--svg", cfg.svg_path, "also write an SVG plot (butterfly)");
    sub->add_option("--tol", cfg.tolerance_overrides, "tolerance override NAME=VALUE (repeatable)");
    sub->add_flag("--json", cfg.json, "machine-readable JSON output");
    dispatch[sub] = &c;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parse_error;
  }

  try {
    cfg.apply_overrides();
    for (const auto& [sub, command] : dispatch)
      if (sub->parsed()) {
        cfg.command = command->name;
        return command->run(cfg);
      }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numeric_error;
  }
  return parse_error;
}
