#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "flp/discrete_measure.hpp"
#include "flp/distribution.hpp"
#include "flp/experiments.hpp"
#include "flp/kfacility.hpp"
#include "flp/projection.hpp"

namespace flp {

/// Builds a distribution from a spec object such as
///   {"kind":"gaussian","mean":0,"std":1}
///   {"kind":"uniform","lo":0,"hi":1}
///   {"kind":"exponential","rate":1}
///   {"kind":"empirical","path":"values.csv"}   (one value per line)
///   {"kind":"affine","base":{...},"scale":s,"shift":m}
/// Relative empirical paths resolve against base_dir.
/// Throws std::invalid_argument on malformed specs.
DistPtr parse_distribution(const nlohmann::json& spec,
                           const std::string& base_dir = ".");

nlohmann::json to_json(const DiscreteMeasure& m);
nlohmann::json to_json(const Placement& p, double cost);
nlohmann::json to_json(const ProjectionResult& r);
nlohmann::json to_json(const RatioEstimate& r);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const RobustnessReport& r);

/// One CSV row per n: "n,ratio,deviation,se_ratio" with a header line.
std::string to_csv(const ConvergenceReport& r);

/// Profile files: one position per line.
std::vector<double> read_positions_csv(const std::string& path);
void write_positions_csv(const std::string& path,
                         const std::vector<double>& values);

}  // namespace flp
