#pragma once

#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rpinch/curvature.hpp"

namespace rpinch {

enum class AlgebraKind { Nilpotent, RankOne, AbelianNilradical };

std::string to_string(AlgebraKind kind);
AlgebraKind kind_from_string(const std::string& name);

// On-disk algebra description.  Structure constants are sparse triples with
// 1-based indices; all numbers are stored as decimal strings so files render
// identically regardless of locale and round-trip exactly.
struct AlgebraFile {
  AlgebraKind kind = AlgebraKind::Nilpotent;
  int dim_n = 0;
  int dim_a = 0;
  std::vector<std::tuple<int, int, int, double>> bracket_triples;  // (i, j, k, value), 1-based
  std::vector<Matrix> operators;  // row-major in the file
  std::string label;
};

using AlgebraData = std::variant<LieBracket, RankOneData, AbelianNilData>;

double parse_decimal(const std::string& text);   // locale-independent
std::string format_decimal(double value);         // shortest round-trip form

AlgebraFile parse_algebra_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const AlgebraFile& file);

AlgebraFile load_algebra_file(const std::string& path);
void save_algebra_file(const AlgebraFile& file, const std::string& path);

// Builds and validates the in-memory data: antisymmetry (conflicting triples),
// Jacobi, nilpotency, derivation/commutativity checks as the kind requires.
AlgebraData ingest(const AlgebraFile& file);

AlgebraFile to_algebra_file(const LieBracket& bracket, const std::string& label = "");
AlgebraFile to_algebra_file(const RankOneData& data, const std::string& label = "");
AlgebraFile to_algebra_file(const AbelianNilData& data, const std::string& label = "");

}  // namespace rpinch
