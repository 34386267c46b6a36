#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardy/lambda.hpp"
#include "hardy/verify.hpp"

namespace hardy {

using Json = nlohmann::ordered_json;

/// Shortest text with 17 significant digits ("%.17g").
std::string format_double(double x);

/// Comma-separated rows with a header line; values at 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// (node, value) rows.
void write_function_csv(const std::filesystem::path& path, const DiscreteFunction& u);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& value);

Json to_json(const GradedMesh& mesh);
Json to_json(const QuotientComponents& c);
Json to_json(const MinimizeResult& r);
Json to_json(const ConcentrationReport& r);
Json to_json(const JCurve& curve);
Json to_json(const LambdaStarEstimate& e);
Json to_json(const HardyCheckResult& r);
Json to_json(const EquivalenceReport& r);

}  // namespace hardy
