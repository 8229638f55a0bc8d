#pragma once

// JSON model files.
//
//   {
//     "vertices": 1,                          // vertex count
//     "edges": [[1, 1, 1.0], [1, 1, 1.0]],    // [source, target, weight], 1-based vertices
//     "faces": [[1, 2, -1, -2]],              // signed 1-based edge ids, sign = direction
//     "tau": [[1, 0], [0, 1]],                // Z^d label per edge
//     "potential": [0.0],                     // per vertex (default 0)
//     "flux": [0.0],                          // per face, radians (default 0)
//     "rank": 2,                              // optional; needed only when there are no edges
//     "connected_cover": true                 // optional; assert H_1 -> Z^d is onto (default true)
//   }
//
// Unknown keys are rejected.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "magbloch/complex.hpp"
#include "magbloch/magnetic.hpp"

namespace magbloch {

struct Model {
  Complex2 complex;
  CoveringData covering;
  FluxForm flux;
};

/// Throws Error(parse) on malformed documents.
Model parse_model(const nlohmann::json& doc);
Model load_model(const std::filesystem::path& path);
nlohmann::json to_json(const Model& model);

}  // namespace magbloch
