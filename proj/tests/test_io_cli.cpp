#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "dilatrix/dilation.hpp"
#include "dilatrix/gen.hpp"
#include "dilatrix/io.hpp"
#include "dilatrix/variety.hpp"
#include "test_support.hpp"

using namespace dilatrix;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path p = fs::temp_directory_path() / "dilatrix_test_io";
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DILATRIX_CLI_PATH) + " " + args +
                          " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("matrix json round-trip is bit exact") {
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix m = random_matrix(rng, 3 + trial, 2 + trial);
    // through text, as the CLI does
    const std::string text = io::matrix_to_json(m).dump();
    const ComplexMatrix back =
        io::matrix_from_json(io::json::parse(text));
    CHECK(m == back);
  }
}

TEST_CASE("tuple and triple round-trips") {
  GenSpec spec;
  spec.seed = 3;
  spec.n = 2;
  spec.dims = {2, 1};
  const auto t = gen_b20_pair(spec);
  const auto t2 = io::tuple_from_json(
      io::json::parse(io::tuple_to_json(t).dump()));
  CHECK(t.dim == t2.dim);
  for (std::size_t i = 0; i < t.n(); ++i) CHECK(t.ops[i] == t2.ops[i]);

  const auto trip = gen_bcl_triple(spec);
  const auto trip2 = io::triple_from_json(
      io::json::parse(io::triple_to_json(trip).dump()));
  CHECK(trip.dim_e == trip2.dim_e);
  for (std::size_t i = 0; i < trip.n(); ++i) {
    CHECK(trip.unitaries[i] == trip2.unitaries[i]);
    CHECK(trip.projections[i] == trip2.projections[i]);
  }
}

TEST_CASE("polynomial parsing") {
  const auto j = io::json::parse(R"({"coeffs": {"1,0":[1,0], "0,2":[0,-1]}})");
  const Polynomial p = io::poly_from_json(j);
  CHECK(p.nvars == 2);
  CHECK(p.coeffs.at({1, 0}) == cplx(1.0, 0.0));
  CHECK(p.coeffs.at({0, 2}) == cplx(0.0, -1.0));

  CHECK_THROWS_AS((void)io::poly_from_json(
                      io::json::parse(R"({"coeffs": {"1,x":[1,0]}})")),
                  Error);
  CHECK_THROWS_AS((void)io::poly_from_json(
                      io::json::parse(R"({"coeffs": {"1,0":[1,0], "2":[1,0]}})")),
                  Error);
}

TEST_CASE("malformed inputs raise parse errors") {
  CHECK_THROWS_AS((void)io::matrix_from_json(io::json::parse(
                      R"({"rows":2,"cols":2,"data":[[1,0]]})")),
                  Error);
  CHECK_THROWS_AS((void)io::matrix_from_json(io::json::parse(
                      R"({"rows":1,"cols":1,"data":[["a",0]]})")),
                  Error);
  CHECK_THROWS_AS((void)io::tuple_from_json(io::json::parse(
                      R"({"dim":0,"matrices":[]})")),
                  Error);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = temp_dir();

  {
    std::ofstream out(dir / "member.json");
    out << R"({"dim":1,"matrices":[
      {"rows":1,"cols":1,"data":[[0,0]]},
      {"rows":1,"cols":1,"data":[[1,0]]}]})";
  }
  {
    std::ofstream out(dir / "nonmember.json");
    out << R"({"dim":1,"matrices":[
      {"rows":1,"cols":1,"data":[[0.5,0]]},
      {"rows":1,"cols":1,"data":[[0.5,0]]}]})";
  }
  {
    std::ofstream out(dir / "bad.json");
    out << "{nope";
  }
  {
    std::ofstream out(dir / "poly.json");
    out << R"({"coeffs":{"1,0":[1,0]}})";
  }

  CHECK(run_cli("check " + (dir / "member.json").string()) == 0);
  CHECK(run_cli("check " + (dir / "nonmember.json").string()) == 1);
  CHECK(run_cli("check " + (dir / "bad.json").string()) == 2);
  CHECK(run_cli("vn " + (dir / "member.json").string() + " " +
                (dir / "poly.json").string() + " --grid 16") == 0);
  CHECK(run_cli("vn " + (dir / "member.json").string() + " " +
                (dir / "poly.json").string() + " --grid 0") == 2);
  CHECK(run_cli("gen --kind bogus --out " + (dir / "g").string()) == 2);
  CHECK(run_cli("gen --kind scalar --seed 4 --out " + (dir / "g").string()) ==
        0);
  CHECK(run_cli("dilate " + (dir / "nonmember.json").string()) == 1);

  // truncation too small for the slowly decaying member
  {
    std::ofstream out(dir / "slow.json");
    out << R"({"dim":1,"matrices":[
      {"rows":1,"cols":1,"data":[[0.9,0]]},
      {"rows":1,"cols":1,"data":[[1,0]]}]})";
  }
  CHECK(run_cli("dilate " + (dir / "slow.json").string() + " --degree 3") ==
        1);

  // lift: a passing scalar case and a non-commutant rejection
  {
    std::ofstream out(dir / "third.json");
    out << R"({"rows":1,"cols":1,"data":[[0.33,0]]})";
  }
  CHECK(run_cli("lift " + (dir / "member.json").string() + " " +
                (dir / "third.json").string()) == 0);
  {
    std::ofstream out(dir / "pair22.json");
    out << R"({"dim":2,"matrices":[
      {"rows":2,"cols":2,"data":[[0.4,0],[0,0],[0,0],[0.2,0]]},
      {"rows":2,"cols":2,"data":[[0,1],[0,0],[0,0],[1,0]]}]})";
    std::ofstream out2(dir / "noncomm.json");
    out2 << R"({"rows":2,"cols":2,"data":[[0,0],[0.5,0],[0,0],[0,0]]})";
  }
  CHECK(run_cli("lift " + (dir / "pair22.json").string() + " " +
                (dir / "noncomm.json").string()) == 1);

  // dilate artifacts parse back into a valid class triple
  CHECK(run_cli("gen --kind direct_sum --seed 31 --dims 2 1 --out " +
                (dir / "m31").string()) == 0);
  CHECK(run_cli("dilate " + (dir / "m31" / "tuple.json").string() +
                " --out " + (dir / "d31").string()) == 0);
  {
    const auto triple = io::triple_from_json(
        io::load_file((dir / "d31" / "triple.json").string()));
    CHECK(bcl_in_class(validate_bcl(triple, 1e-8)));
    const auto pi = io::matrix_from_json(
        io::load_file((dir / "d31" / "pi.json").string()));
    CHECK(pi.cols() == 3);
    CHECK(pi.rows() % triple.dim_e == 0);
  }

  // determinism across runs: identical bytes
  CHECK(run_cli("gen --kind direct_sum --seed 12 --dims 2 2 --out " +
                (dir / "g1").string()) == 0);
  CHECK(run_cli("gen --kind direct_sum --seed 12 --dims 2 2 --out " +
                (dir / "g2").string()) == 0);
  std::ifstream f1(dir / "g1" / "tuple.json"), f2(dir / "g2" / "tuple.json");
  const std::string s1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string s2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  CHECK_FALSE(s1.empty());
}

TEST_CASE("grid sweeps are deterministic under the thread cap") {
  // Same variety points regardless of worker count; merging is by index.
  GenSpec spec;
  spec.seed = 77;
  spec.n = 2;
  spec.dims = {2, 1};
  const auto t = gen_b20_pair(spec);
  const auto triple = build_bcl_from_tuple(t).triple;

  setenv("DILATRIX_THREADS", "1", 1);
  const auto serial = variety_points(triple, 16);
  setenv("DILATRIX_THREADS", "3", 1);
  const auto pooled = variety_points(triple, 16);
  unsetenv("DILATRIX_THREADS");

  REQUIRE(serial.size() == pooled.size());
  for (std::size_t k = 0; k < serial.size(); ++k)
    for (std::size_t i = 0; i < serial[k].size(); ++i)
      CHECK(serial[k][i] == pooled[k][i]);
}

TEST_CASE("digest is stable and content sensitive") {
  const fs::path dir = temp_dir();
  {
    std::ofstream out(dir / "a.json");
    out << "{\"x\": 1}";
  }
  const auto d1 = io::digest_files({(dir / "a.json").string()});
  const auto d2 = io::digest_files({(dir / "a.json").string()});
  CHECK(d1 == d2);
  CHECK(d1.size() == 64);
  {
    std::ofstream out(dir / "a.json");
    out << "{\"x\": 2}";
  }
  CHECK(io::digest_files({(dir / "a.json").string()}) != d1);
}
