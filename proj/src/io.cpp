#include "dilatrix/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace dilatrix::io {

namespace {

double finite_number(const json& j, const char* what) {
  if (!j.is_number())
    throw Error(ErrorCode::parse_error, std::string(what) + ": not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw Error(ErrorCode::parse_error, std::string(what) + ": not finite");
  return v;
}

cplx cplx_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::parse_error,
                std::string(what) + ": expected [re, im]");
  return cplx(finite_number(j[0], what), finite_number(j[1], what));
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      data.push_back({m(i, j).real(), m(i, j).imag()});
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data"))
    throw Error(ErrorCode::parse_error, "matrix: missing rows/cols/data");
  const auto rows = j["rows"].get<std::int64_t>();
  const auto cols = j["cols"].get<std::int64_t>();
  if (rows < 0 || cols < 0)
    throw Error(ErrorCode::parse_error, "matrix: negative dimension");
  const auto& data = j["data"];
  if (!data.is_array() ||
      data.size() != static_cast<std::size_t>(rows * cols))
    throw Error(ErrorCode::parse_error, "matrix: data length != rows*cols");
  ComplexMatrix m(static_cast<std::size_t>(rows),
                  static_cast<std::size_t>(cols));
  std::size_t at = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < m.cols(); ++c)
      m(i, c) = cplx_from_json(data[at++], "matrix entry");
  return m;
}

json tuple_to_json(const ContractionTuple& t) {
  json mats = json::array();
  for (const auto& m : t.ops) mats.push_back(matrix_to_json(m));
  return json{{"dim", t.dim}, {"matrices", mats}};
}

ContractionTuple tuple_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("matrices"))
    throw Error(ErrorCode::parse_error, "tuple: missing dim/matrices");
  ContractionTuple t;
  const auto dim = j["dim"].get<std::int64_t>();
  if (dim <= 0) throw Error(ErrorCode::parse_error, "tuple: dim must be > 0");
  t.dim = static_cast<std::size_t>(dim);
  if (!j["matrices"].is_array() || j["matrices"].empty())
    throw Error(ErrorCode::parse_error, "tuple: matrices must be nonempty");
  for (const auto& mj : j["matrices"]) {
    ComplexMatrix m = matrix_from_json(mj);
    if (m.rows() != t.dim || m.cols() != t.dim)
      throw Error(ErrorCode::parse_error, "tuple: matrix size != dim");
    t.ops.push_back(std::move(m));
  }
  return t;
}

json triple_to_json(const BclTriple& t) {
  json us = json::array(), ps = json::array();
  for (const auto& u : t.unitaries) us.push_back(matrix_to_json(u));
  for (const auto& p : t.projections) ps.push_back(matrix_to_json(p));
  return json{{"dimE", t.dim_e}, {"U", us}, {"P", ps}};
}

BclTriple triple_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dimE") || !j.contains("U") ||
      !j.contains("P"))
    throw Error(ErrorCode::parse_error, "triple: missing dimE/U/P");
  BclTriple t;
  const auto dim = j["dimE"].get<std::int64_t>();
  if (dim <= 0) throw Error(ErrorCode::parse_error, "triple: dimE must be > 0");
  t.dim_e = static_cast<std::size_t>(dim);
  if (!j["U"].is_array() || !j["P"].is_array() ||
      j["U"].size() != j["P"].size() || j["U"].empty())
    throw Error(ErrorCode::parse_error, "triple: U/P must match and be nonempty");
  for (const auto& mj : j["U"]) t.unitaries.push_back(matrix_from_json(mj));
  for (const auto& mj : j["P"]) t.projections.push_back(matrix_from_json(mj));
  for (std::size_t i = 0; i < t.n(); ++i)
    if (t.unitaries[i].rows() != t.dim_e || !t.unitaries[i].is_square() ||
        t.projections[i].rows() != t.dim_e || !t.projections[i].is_square())
      throw Error(ErrorCode::parse_error, "triple: block size != dimE");
  return t;
}

json poly_to_json(const Polynomial& p) {
  json coeffs = json::object();
  for (const auto& [alpha, c] : p.coeffs) {
    std::ostringstream key;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (i) key << ",";
      key << alpha[i];
    }
    coeffs[key.str()] = {c.real(), c.imag()};
  }
  return json{{"coeffs", coeffs}};
}

Polynomial poly_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_object())
    throw Error(ErrorCode::parse_error, "poly: missing coeffs object");
  Polynomial p;
  for (const auto& [key, val] : j["coeffs"].items()) {
    std::vector<unsigned> alpha;
    std::istringstream in(key);
    std::string part;
    while (std::getline(in, part, ',')) {
      try {
        const long v = std::stol(part);
        if (v < 0) throw std::invalid_argument("negative");
        alpha.push_back(static_cast<unsigned>(v));
      } catch (const std::exception&) {
        throw Error(ErrorCode::parse_error, "poly: bad multi-index '" + key + "'");
      }
    }
    if (alpha.empty())
      throw Error(ErrorCode::parse_error, "poly: empty multi-index");
    if (p.nvars == 0) p.nvars = alpha.size();
    if (alpha.size() != p.nvars)
      throw Error(ErrorCode::parse_error, "poly: inconsistent multi-index arity");
    p.coeffs[alpha] = cplx_from_json(val, "poly coefficient");
  }
  if (p.coeffs.empty())
    throw Error(ErrorCode::parse_error, "poly: no coefficients");
  return p;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, path + ": " + e.what());
  }
}

void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::parse_error, "cannot write " + path);
  out << j.dump(2) << "\n";
}

std::string digest_files(const std::vector<std::string>& paths) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  require(ctx != nullptr, ErrorCode::numeric_failure, "digest: EVP context");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  for (const auto& p : paths) {
    EVP_DigestUpdate(ctx, p.data(), p.size());
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      EVP_MD_CTX_free(ctx);
      throw Error(ErrorCode::parse_error, "digest: cannot open " + p);
    }
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
      EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

void Report::absorb(const Certificate& cert) {
  for (const auto& e : cert.entries()) {
    residuals[e.name] = e.value;
    if (e.tolerance > 0.0) tolerances[e.name] = e.tolerance;
  }
}

json Report::to_json() const {
  return json{{"command", command},
              {"inputs_digest", inputs_digest},
              {"residuals", residuals},
              {"tolerances", tolerances},
              {"pass", pass},
              {"parameters", parameters}};
}

}  // namespace dilatrix::io
