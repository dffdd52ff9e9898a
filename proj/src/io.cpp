#include "rpinch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rpinch {

std::string to_string(AlgebraKind kind) {
  switch (kind) {
    case AlgebraKind::Nilpotent: return "nilpotent";
    case AlgebraKind::RankOne: return "rank-one";
    case AlgebraKind::AbelianNilradical: return "abelian-nilradical";
  }
  return "nilpotent";
}

AlgebraKind kind_from_string(const std::string& name) {
  if (name == "nilpotent") return AlgebraKind::Nilpotent;
  if (name == "rank-one") return AlgebraKind::RankOne;
  if (name == "abelian-nilradical") return AlgebraKind::AbelianNilradical;
  throw InputError("unknown algebra kind: '" + name + "'");
}

double parse_decimal(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw InputError("malformed decimal number: '" + text + "'");
  return value;
}

std::string format_decimal(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw InputError("format_decimal failed");
  return std::string(buffer, ptr);
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw InputError(std::string("missing field '") + name + "'");
  return *it;
}

double number_field(const nlohmann::json& j) {
  if (j.is_string()) return parse_decimal(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw InputError("expected a decimal string");
}

}  // namespace

AlgebraFile parse_algebra_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("algebra file: top level must be an object");
  AlgebraFile file;
  file.kind = kind_from_string(require_field(j, "kind").get<std::string>());
  file.dim_n = require_field(j, "dim_n").get<int>();
  if (file.dim_n <= 0) throw InputError("algebra file: dim_n must be positive");
  if (j.contains("dim_a")) file.dim_a = j.at("dim_a").get<int>();
  if (j.contains("label")) file.label = j.at("label").get<std::string>();

  if (j.contains("bracket")) {
    const auto& entries = j.at("bracket");
    if (!entries.is_array()) throw InputError("algebra file: 'bracket' must be an array");
    for (size_t idx = 0; idx < entries.size(); ++idx) {
      const auto& e = entries[idx];
      const int i = require_field(e, "i").get<int>();
      const int jj = require_field(e, "j").get<int>();
      const int k = require_field(e, "k").get<int>();
      if (i < 1 || jj < 1 || k < 1 || i > file.dim_n || jj > file.dim_n || k > file.dim_n)
        throw InputError("bracket entry " + std::to_string(idx) + ": index out of range 1.." +
                         std::to_string(file.dim_n));
      file.bracket_triples.emplace_back(i, jj, k, number_field(require_field(e, "value")));
    }
  }

  if (j.contains("operators")) {
    const auto& ops = j.at("operators");
    if (!ops.is_array()) throw InputError("algebra file: 'operators' must be an array");
    for (const auto& flat : ops) {
      if (!flat.is_array() ||
          flat.size() != static_cast<size_t>(file.dim_n) * static_cast<size_t>(file.dim_n))
        throw InputError("algebra file: operator must be a row-major array of dim_n^2 entries");
      Matrix m(file.dim_n, file.dim_n);
      for (int r = 0; r < file.dim_n; ++r)
        for (int c = 0; c < file.dim_n; ++c)
          m(r, c) = number_field(flat[static_cast<size_t>(r * file.dim_n + c)]);
      file.operators.push_back(m);
    }
  }

  switch (file.kind) {
    case AlgebraKind::Nilpotent:
      if (!file.operators.empty())
        throw InputError("nilpotent file must not carry operators");
      break;
    case AlgebraKind::RankOne:
      if (file.operators.size() != 1)
        throw InputError("rank-one file must carry exactly one operator");
      if (file.dim_a != 0 && file.dim_a != 1)
        throw InputError("rank-one file: dim_a must be 1");
      file.dim_a = 1;
      break;
    case AlgebraKind::AbelianNilradical:
      if (file.operators.empty())
        throw InputError("abelian-nilradical file must carry at least one operator");
      if (file.dim_a == 0) file.dim_a = static_cast<int>(file.operators.size());
      if (file.dim_a != static_cast<int>(file.operators.size()))
        throw InputError("abelian-nilradical file: dim_a must match the operator count");
      if (!file.bracket_triples.empty())
        throw InputError("abelian-nilradical file: the nilradical bracket must vanish");
      break;
  }
  return file;
}

nlohmann::ordered_json to_json(const AlgebraFile& file) {
  nlohmann::ordered_json j;
  j["schema"] = "rpinch/1";
  j["kind"] = to_string(file.kind);
  if (!file.label.empty()) j["label"] = file.label;
  j["dim_n"] = file.dim_n;
  if (file.kind != AlgebraKind::Nilpotent) j["dim_a"] = file.dim_a;
  j["bracket"] = nlohmann::ordered_json::array();
  for (const auto& [i, jj, k, value] : file.bracket_triples) {
    nlohmann::ordered_json entry;
    entry["i"] = i;
    entry["j"] = jj;
    entry["k"] = k;
    entry["value"] = format_decimal(value);
    j["bracket"].push_back(entry);
  }
  if (!file.operators.empty()) {
    j["operators"] = nlohmann::ordered_json::array();
    for (const Matrix& m : file.operators) {
      nlohmann::ordered_json flat = nlohmann::ordered_json::array();
      for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) flat.push_back(format_decimal(m(r, c)));
      j["operators"].push_back(flat);
    }
  }
  return j;
}

AlgebraFile load_algebra_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("parse error in '" + path + "': " + e.what());
  }
  return parse_algebra_json(j);
}

void save_algebra_file(const AlgebraFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << to_json(file).dump(2) << "\n";
}

namespace {

LieBracket build_bracket(const AlgebraFile& file) {
  LieBracket bracket(file.dim_n);
  for (size_t idx = 0; idx < file.bracket_triples.size(); ++idx) {
    const auto& [i1, j1, k1, value] = file.bracket_triples[idx];
    const int i = i1 - 1, j = j1 - 1, k = k1 - 1;
    if (i == j && value != 0.0)
      throw StructureError("antisymmetry check failed: entry " + std::to_string(idx) +
                           " sets [e_i, e_i] nonzero");
    const double existing = bracket.coeff(i, j, k);
    if (existing != 0.0 && existing != value)
      throw StructureError("antisymmetry check failed: c[" + std::to_string(i1) + "][" +
                           std::to_string(j1) + "][" + std::to_string(k1) +
                           "] conflicts with an earlier entry (" + format_decimal(value) +
                           " vs " + format_decimal(existing) + ")");
    if (i != j) bracket.set_coeff(i, j, k, value);
  }
  return bracket;
}

}  // namespace

AlgebraData ingest(const AlgebraFile& file) {
  switch (file.kind) {
    case AlgebraKind::Nilpotent: {
      LieBracket bracket = build_bracket(file);
      validate_lie_structure(bracket, /*require_nilpotent=*/true);
      return bracket;
    }
    case AlgebraKind::RankOne: {
      RankOneData data{file.operators.front(), build_bracket(file)};
      validate_rank_one(data);
      return data;
    }
    case AlgebraKind::AbelianNilradical: {
      AbelianNilData data;
      data.ops = file.operators;
      validate_abelian(data);
      return data;
    }
  }
  throw InputError("ingest: unreachable kind");
}

AlgebraFile to_algebra_file(const LieBracket& bracket, const std::string& label) {
  AlgebraFile file;
  file.kind = AlgebraKind::Nilpotent;
  file.dim_n = bracket.dim();
  file.label = label;
  for (int i = 0; i < bracket.dim(); ++i)
    for (int j = i + 1; j < bracket.dim(); ++j)
      for (int k = 0; k < bracket.dim(); ++k)
        if (bracket.coeff(i, j, k) != 0.0)
          file.bracket_triples.emplace_back(i + 1, j + 1, k + 1, bracket.coeff(i, j, k));
  return file;
}

AlgebraFile to_algebra_file(const RankOneData& data, const std::string& label) {
  AlgebraFile file = to_algebra_file(data.bracket, label);
  file.kind = AlgebraKind::RankOne;
  file.dim_a = 1;
  file.operators.push_back(data.A);
  return file;
}

AlgebraFile to_algebra_file(const AbelianNilData& data, const std::string& label) {
  AlgebraFile file;
  file.kind = AlgebraKind::AbelianNilradical;
  file.dim_n = data.dim_n();
  file.dim_a = data.dim_a();
  file.label = label;
  file.operators = data.ops;
  return file;
}

}  // namespace rpinch
