#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "incompat/matrix_io.hpp"

using namespace incompat;
using namespace incompat::io;
using linalg::ComplexMatrix;
using linalg::cplx;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

template <typename F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("documents round-trip exactly") {
  std::mt19937_64 rng(414u);
  std::normal_distribution<double> gauss;
  MatrixFile mf;
  mf.dimension = 3;
  for (const char* name : {"Q", "P", "odd name \"quoted\""}) {
    ComplexMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = cplx(gauss(rng) / 3.0, gauss(rng) * 1e-7);
    mf.matrices.emplace_back(name, m);
  }
  mf.matrices[0].second(0, 0) = cplx(1.0 / 3.0, -std::sqrt(2.0));
  mf.matrices[0].second(2, 1) = cplx(0.0, 1e-300);
  mf.metadata["label"] = "round trip";

  const MatrixFile back = parse_matrix_file(write_matrix_file(mf));
  REQUIRE(back.dimension == 3);
  REQUIRE(back.matrices.size() == 3);
  CHECK(back.metadata.at("label") == "round trip");
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(back.matrices[k].first == mf.matrices[k].first);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        CHECK(back.matrices[k].second(i, j).real() ==
              mf.matrices[k].second(i, j).real());
        CHECK(back.matrices[k].second(i, j).imag() ==
              mf.matrices[k].second(i, j).imag());
      }
  }
}

TEST_CASE("parsing accepts integer entries and preserves order") {
  const std::string text = R"({
    "dimension": 2,
    "matrices": {
      "Z": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
      "A": [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]
    }
  })";
  const MatrixFile mf = parse_matrix_file(text);
  REQUIRE(mf.matrices.size() == 2);
  CHECK(mf.matrices[0].first == "Z");
  CHECK(mf.matrices[1].first == "A");
  CHECK((*mf.find("Z"))(1, 1) == cplx(-1.0, 0.0));
  CHECK((*mf.find("A"))(1, 0) == cplx(0.0, 1.0));
  CHECK(mf.find("missing") == nullptr);
  CHECK(mf.metadata.empty());
}

TEST_CASE("syntax errors carry line and column") {
  const std::string msg =
      message_of([] { parse_matrix_file("{\n  \"dimension\": 2,\n  !\n}"); });
  CHECK(contains(msg, "syntax error"));
  CHECK(contains(msg, "line 3"));
}

TEST_CASE("shape and type problems name the offender") {
  const char* header = R"({"dimension": 2, "matrices": )";
  SUBCASE("string entry") {
    const std::string msg = message_of([&] {
      parse_matrix_file(std::string(header) +
                        R"({"Q": [[[1, 0], ["x", 0]], [[0, 0], [0, 0]]]}})");
    });
    CHECK(contains(msg, "matrix \"Q\""));
    CHECK(contains(msg, "row 1"));
    CHECK(contains(msg, "column 2"));
  }
  SUBCASE("entry not a pair") {
    const std::string msg = message_of([&] {
      parse_matrix_file(std::string(header) +
                        R"({"Q": [[[1, 0], [0, 0]], [[0, 0], [0, 0, 1]]]}})");
    });
    CHECK(contains(msg, "row 2"));
    CHECK(contains(msg, "column 2"));
    CHECK(contains(msg, "[re, im]"));
  }
  SUBCASE("short row") {
    const std::string msg = message_of([&] {
      parse_matrix_file(std::string(header) +
                        R"({"Q": [[[1, 0]], [[0, 0], [0, 0]]]}})");
    });
    CHECK(contains(msg, "row 1"));
    CHECK(contains(msg, "expected 2 entries"));
  }
  SUBCASE("wrong row count") {
    const std::string msg = message_of([&] {
      parse_matrix_file(std::string(header) + R"({"Q": [[[1, 0], [0, 0]]]}})");
    });
    CHECK(contains(msg, "array of 2 rows"));
  }
  SUBCASE("missing or bad top-level fields") {
    CHECK_THROWS_AS(parse_matrix_file("[1, 2]"), InvalidInputError);
    CHECK_THROWS_AS(parse_matrix_file(R"({"matrices": {}})"), InvalidInputError);
    CHECK_THROWS_AS(parse_matrix_file(R"({"dimension": 2.5, "matrices": {}})"),
                    InvalidInputError);
    CHECK_THROWS_AS(parse_matrix_file(R"({"dimension": 0, "matrices": {}})"),
                    InvalidInputError);
    CHECK_THROWS_AS(parse_matrix_file(R"({"dimension": 2})"), InvalidInputError);
    CHECK_THROWS_AS(
        parse_matrix_file(R"({"dimension": 2, "matrices": {}, "extra": 1})"),
        InvalidInputError);
    CHECK_THROWS_AS(
        parse_matrix_file(
            R"({"dimension": 2, "matrices": {}, "metadata": {"k": 1}})"),
        InvalidInputError);
  }
}

TEST_CASE("writer validates its input") {
  MatrixFile mf;
  mf.dimension = 2;
  mf.matrices.emplace_back("Q", ComplexMatrix::zero(3, 3));
  CHECK_THROWS_AS(write_matrix_file(mf), InvalidInputError);
  mf.matrices[0].second = ComplexMatrix::zero(2, 2);
  mf.matrices[0].second(0, 0) = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS(write_matrix_file(mf), InvalidInputError);
}

TEST_CASE("files load from disk with path diagnostics") {
  const std::string path = "test_matrix_io_tmp.json";
  {
    MatrixFile mf;
    mf.dimension = 1;
    mf.matrices.emplace_back("Q", ComplexMatrix::identity(1));
    std::ofstream out(path, std::ios::binary);
    out << write_matrix_file(mf);
  }
  const MatrixFile mf = load_matrix_file(path);
  CHECK(mf.dimension == 1);
  CHECK((*mf.find("Q"))(0, 0) == cplx(1.0, 0.0));
  std::remove(path.c_str());

  const std::string msg = message_of([] { load_matrix_file("no_such_file.json"); });
  CHECK(contains(msg, "no_such_file.json"));

  {
    std::ofstream out(path, std::ios::binary);
    out << "{ broken";
  }
  const std::string msg2 = message_of([&] { load_matrix_file(path); });
  CHECK(contains(msg2, path));
  CHECK(contains(msg2, "line 1"));
  std::remove(path.c_str());
}
