#pragma once

#include "tsd/bounds.hpp"
#include "tsd/distance.hpp"
#include "tsd/model.hpp"
#include "tsd/sampling.hpp"
#include "tsd/stein.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsd {

using Json = nlohmann::ordered_json;

/// Bad user input: malformed JSON, unknown keys, out-of-range parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepted forms (no other keys allowed):
///   {"m1", "alpha1", "lambda1", "m2", "alpha2", "lambda2"}
///   {"family": "bgd", "m1", "lambda1", "m2", "lambda2"}
///   {"family": "vgd", "m", "lambda1", "lambda2"}
///   {"family": "svgd", "m", "lambda"}
TsdParams tsd_params_from_json(const Json& j);
/// {"m1", "m2", "alpha"}.
StableParams stable_params_from_json(const Json& j);

Json to_json(const TsdParams& p);
Json to_json(const StableParams& p);
Json to_json(const CumulantVector& c);
Json to_json(const DistanceEstimate& d);
Json to_json(const BoundReport& r);
Json to_json(const DerivativeBoundReport& r);

/// Parses text, mapping parse failures to ConfigError.
Json parse_json(const std::string& text);
Json read_json_file(const std::filesystem::path& path);

/// Serializes with every floating-point number at 17 significant digits; NaN and
/// infinities become null.
std::string dump(const Json& j, int indent = 2);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// `name` under $TSD_OUTPUT_DIR when that is set, otherwise `name` itself.
std::filesystem::path output_path(const std::string& name);

/// Header plus rows, comma-separated, LF line endings, 17 significant digits.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

}  // namespace tsd
