#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dilatrix/hardy.hpp"
#include "dilatrix/opcore.hpp"
#include "dilatrix/types.hpp"
#include "dilatrix/variety.hpp"

namespace dilatrix::io {

using json = nlohmann::json;

// Matrix file: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// Tuple file: {"dim": d, "matrices": [MatrixFile, ...]}
json tuple_to_json(const ContractionTuple& t);
ContractionTuple tuple_from_json(const json& j);

// Triple file: {"dimE": m, "U": [...], "P": [...]}
json triple_to_json(const BclTriple& t);
BclTriple triple_from_json(const json& j);

// Poly file: {"coeffs": {"1,0": [re, im], ...}}
json poly_to_json(const Polynomial& p);
Polynomial poly_from_json(const json& j);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

/// SHA-256 over the raw bytes of the named input files (name + contents),
/// lowercase hex.
std::string digest_files(const std::vector<std::string>& paths);

/// Machine-readable run report.
struct Report {
  std::string command;
  std::string inputs_digest;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;
  bool pass = false;
  std::map<std::string, double> parameters;

  void absorb(const Certificate& cert);
  json to_json() const;
};

}  // namespace dilatrix::io
