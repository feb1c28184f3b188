// dilatrix command line: class membership checks, explicit isometric
// dilation, sharp von Neumann certificates, commutant lifting, and seeded
// generators, over JSON matrix files.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#include "dilatrix/dilation.hpp"
#include "dilatrix/gen.hpp"
#include "dilatrix/io.hpp"
#include "dilatrix/lifting.hpp"
#include "dilatrix/opcore.hpp"
#include "dilatrix/variety.hpp"

namespace {

using dilatrix::ComplexMatrix;
using dilatrix::ContractionTuple;
using dilatrix::Error;
using dilatrix::ErrorCode;
namespace io = dilatrix::io;
namespace fs = std::filesystem;

constexpr int kExitPass = 0;
constexpr int kExitMathFail = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
  double tol = 1e-8;
  std::size_t degree = 0;  // 0 = adaptive
  std::size_t grid = 257;
  std::string out;
  bool json_stdout = false;
};

void emit_report(const io::Report& report, const CommonOpts& opts) {
  const auto j = report.to_json();
  if (!opts.out.empty()) {
    fs::create_directories(opts.out);
    io::save_file((fs::path(opts.out) / "report.json").string(), j);
  }
  if (opts.json_stdout) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (report.pass ? "PASS" : "FAIL") << " " << report.command
              << "  digest=" << report.inputs_digest.substr(0, 12) << "\n";
    for (const auto& [name, value] : report.residuals) {
      const auto it = report.tolerances.find(name);
      if (it != report.tolerances.end() && value > it->second)
        std::cout << "  exceeded: " << name << " = " << value
                  << " (tol " << it->second << ")\n";
    }
  }
}

int cmd_check(const std::string& tuple_path, const CommonOpts& opts) {
  const ContractionTuple tuple =
      io::tuple_from_json(io::load_file(tuple_path));
  io::Report report;
  report.command = "check";
  report.inputs_digest = io::digest_files({tuple_path});
  report.parameters["tol"] = opts.tol;

  const auto validation = tuple.validate();
  report.absorb(validation);
  bool member = false;
  if (validation.passed()) {
    const auto cls = dilatrix::class_membership(tuple, opts.tol);
    for (const auto& pr : cls.pairwise_szego_residuals) {
      const std::string name = "szego[" + std::to_string(pr.i) + "][" +
                               std::to_string(pr.j) + "]";
      report.residuals[name] = pr.value;
      report.tolerances[name] = opts.tol;
    }
    report.residuals["product_spectral_radius"] = cls.product_spectral_radius;
    report.tolerances["product_spectral_radius"] = 1.0 - 1e-8;  // purity bound
    member = cls.is_member;
  }
  report.pass = member;
  emit_report(report, opts);
  return report.pass ? kExitPass : kExitMathFail;
}

int cmd_dilate(const std::string& tuple_path, const CommonOpts& opts) {
  const ContractionTuple tuple =
      io::tuple_from_json(io::load_file(tuple_path));
  io::Report report;
  report.command = "dilate";
  report.inputs_digest = io::digest_files({tuple_path});
  report.parameters["tol"] = opts.tol;

  const auto result = dilatrix::dilate(tuple, opts.degree, opts.tol);
  report.parameters["N"] = static_cast<double>(result.degree);
  report.absorb(result.certificate);
  report.pass = result.certificate.passed();

  if (!opts.out.empty()) {
    fs::create_directories(opts.out);
    io::save_file((fs::path(opts.out) / "triple.json").string(),
                  io::triple_to_json(result.triple));
    io::save_file((fs::path(opts.out) / "pi.json").string(),
                  io::matrix_to_json(result.pi));
  }
  emit_report(report, opts);
  return report.pass ? kExitPass : kExitMathFail;
}

int cmd_vn(const std::string& tuple_path, const std::string& poly_path,
           const CommonOpts& opts) {
  const ContractionTuple tuple =
      io::tuple_from_json(io::load_file(tuple_path));
  const dilatrix::Polynomial poly =
      io::poly_from_json(io::load_file(poly_path));
  if (opts.grid == 0)
    throw Error(ErrorCode::invalid_argument, "--grid must be >= 1");

  io::Report report;
  report.command = "vn";
  report.inputs_digest = io::digest_files({tuple_path, poly_path});
  report.parameters["M"] = static_cast<double>(opts.grid);
  report.parameters["tol"] = opts.tol;

  const auto cert = dilatrix::vn_check(tuple, poly, opts.grid, opts.tol);
  report.residuals["lhs_norm"] = cert.lhs;
  report.residuals["rhs_variety_sup"] = cert.rhs;
  report.residuals["rhs_torus_sup"] = cert.rhs_torus;
  report.residuals["margin"] = cert.margin;
  report.pass = cert.pass;
  emit_report(report, opts);
  return report.pass ? kExitPass : kExitMathFail;
}

int cmd_lift(const std::string& tuple_path, const std::string& x_path,
             const CommonOpts& opts) {
  const ContractionTuple tuple =
      io::tuple_from_json(io::load_file(tuple_path));
  const ComplexMatrix x = io::matrix_from_json(io::load_file(x_path));

  io::Report report;
  report.command = "lift";
  report.inputs_digest = io::digest_files({tuple_path, x_path});
  report.parameters["tol"] = opts.tol;

  if (!dilatrix::commutant_check(tuple, x, opts.tol))
    throw Error(ErrorCode::not_a_commutant,
                "lift: X is not a contraction commuting with the tuple");

  const auto dil = dilatrix::dilate(tuple, opts.degree);
  report.parameters["N"] = static_cast<double>(dil.degree);
  const auto dd = dilatrix::defect_decomposition(tuple, x, 1e-12);
  const auto lift = dilatrix::build_lift(tuple, x, dil, dd);
  const auto verify = dilatrix::verify_lift(dil, x, lift, 1e-6, opts.grid);
  report.absorb(dd.certificate);
  report.absorb(lift.certificate);
  report.absorb(verify);
  report.pass = dd.certificate.passed() && lift.certificate.passed() &&
                verify.passed();

  if (!opts.out.empty()) {
    fs::create_directories(opts.out);
    for (std::size_t j = 0; j < lift.theta_blocks.size(); ++j) {
      if (lift.theta_blocks[j].empty()) continue;
      io::json coeffs = io::json::array();
      for (const auto& c : lift.theta_blocks[j])
        coeffs.push_back(io::matrix_to_json(c));
      io::save_file((fs::path(opts.out) /
                     ("theta_block" + std::to_string(j) + ".json"))
                        .string(),
                    io::json{{"block", j}, {"coefficients", coeffs}});
    }
    io::json full = io::json::array();
    for (const auto& c : lift.theta) full.push_back(io::matrix_to_json(c));
    io::save_file((fs::path(opts.out) / "theta.json").string(),
                  io::json{{"coefficients", full}});
  }
  emit_report(report, opts);
  return report.pass ? kExitPass : kExitMathFail;
}

int cmd_gen(const std::string& kind, std::uint64_t seed,
            const std::vector<std::size_t>& dims, std::size_t n,
            const CommonOpts& opts) {
  dilatrix::GenSpec spec;
  spec.seed = seed;
  spec.dims = dims;
  spec.n = n == 0 ? std::max<std::size_t>(dims.size(), 2) : n;
  if (kind == "direct_sum")
    spec.kind = dilatrix::GenKind::direct_sum;
  else if (kind == "bcl_compression")
    spec.kind = dilatrix::GenKind::bcl_compression;
  else if (kind == "scalar")
    spec.kind = dilatrix::GenKind::scalar;
  else
    throw Error(ErrorCode::invalid_argument, "unknown --kind: " + kind);

  io::Report report;
  report.command = "gen";
  report.parameters["seed"] = static_cast<double>(seed);

  const std::string outdir = opts.out.empty() ? "." : opts.out;
  fs::create_directories(outdir);
  if (spec.kind == dilatrix::GenKind::bcl_compression) {
    dilatrix::GenSpec tspec = spec;
    tspec.seed = spec.seed * 0x100000001b3ull + 17;
    const auto triple = dilatrix::gen_bcl_triple(tspec);
    const auto result = dilatrix::gen_bn0_compression(triple, spec);
    io::save_file((fs::path(outdir) / "tuple.json").string(),
                  io::tuple_to_json(result.tuple));
    io::save_file((fs::path(outdir) / "triple.json").string(),
                  io::triple_to_json(result.triple));
  } else {
    const auto tuple = dilatrix::gen_b20_pair(spec);
    io::save_file((fs::path(outdir) / "tuple.json").string(),
                  io::tuple_to_json(tuple));
  }
  report.inputs_digest =
      io::digest_files({(fs::path(outdir) / "tuple.json").string()});
  report.pass = true;
  emit_report(report, opts);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dilatrix: dilation, von Neumann, and commutant-lifting "
               "workbench for commuting contractions"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string tuple_path, poly_path, x_path;
  std::string kind = "direct_sum";
  std::uint64_t seed = 1;
  std::vector<std::size_t> dims;
  std::size_t nslots = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", opts.tol, "residual tolerance");
    sub->add_option("--degree", opts.degree,
                    "Hardy truncation degree (0 = adaptive)");
    sub->add_option("--grid", opts.grid, "circle grid size M");
    sub->add_option("--out", opts.out, "output directory for artifacts");
    sub->add_flag("--json", opts.json_stdout, "print the report JSON");
  };

  auto* check = app.add_subcommand("check", "class membership test");
  check->add_option("tuple", tuple_path, "tuple JSON file")->required();
  add_common(check);

  auto* dilate = app.add_subcommand("dilate", "explicit isometric dilation");
  dilate->add_option("tuple", tuple_path, "tuple JSON file")->required();
  add_common(dilate);

  auto* vn = app.add_subcommand("vn", "sharp von Neumann certificate");
  vn->add_option("tuple", tuple_path, "tuple JSON file")->required();
  vn->add_option("poly", poly_path, "polynomial JSON file")->required();
  add_common(vn);

  auto* lift = app.add_subcommand("lift", "commutant lifting");
  lift->add_option("tuple", tuple_path, "tuple JSON file")->required();
  lift->add_option("X", x_path, "commutant matrix JSON file")->required();
  add_common(lift);

  auto* gen = app.add_subcommand("gen", "seeded class-member generators");
  gen->add_option("--kind", kind, "direct_sum | bcl_compression | scalar");
  gen->add_option("--seed", seed, "64-bit seed");
  gen->add_option("--dims", dims, "per-block dimensions");
  gen->add_option("--n", nslots, "tuple length (defaults to #dims)");
  add_common(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(tuple_path, opts);
    if (dilate->parsed()) return cmd_dilate(tuple_path, opts);
    if (vn->parsed()) return cmd_vn(tuple_path, poly_path, opts);
    if (lift->parsed()) return cmd_lift(tuple_path, x_path, opts);
    if (gen->parsed()) return cmd_gen(kind, seed, dims, nslots, opts);
  } catch (const Error& e) {
    std::cerr << dilatrix::error_code_name(e.code()) << ": " << e.what()
              << "\n";
    switch (e.code()) {
      case ErrorCode::parse_error:
      case ErrorCode::invalid_argument:
      case ErrorCode::shape_mismatch:
        return kExitUsage;
      default:
        return kExitMathFail;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
