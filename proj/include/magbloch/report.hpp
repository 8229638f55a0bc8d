#pragma once

// Machine-readable output: JSON reports, CSV tables and SVG butterfly plots.

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "magbloch/bloch.hpp"
#include "magbloch/complex.hpp"
#include "magbloch/homology.hpp"
#include "magbloch/magnetic.hpp"

namespace magbloch {

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const HomologySummary& summary);
nlohmann::json to_json(const QuantizabilityCertificate& certificate);
nlohmann::json to_json(const Character& chi);
nlohmann::json to_json(const CharacterGroup& group);
nlohmann::json to_json(const BlockDiagonalizationReport& report);
nlohmann::json to_json(const CharacterRelationResiduals& residuals);
nlohmann::json to_json(const DecompositionReport& report);
nlohmann::json to_json(const Connection& connection);

/// Header k1..kd,e1..en; one row per momentum.
std::string band_csv(const BandData& bands);
/// Header p,q,interval_lo,interval_hi; one row per interval of each successful entry.
std::string butterfly_csv(std::span<const ButterflyRow> rows);
/// Horizontal segments at height p/q covering each interval.
std::string butterfly_svg(std::span<const ButterflyRow> rows);

}  // namespace magbloch
