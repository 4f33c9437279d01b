#include "incompat/matrix_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace incompat::io {

using json = nlohmann::ordered_json;
using linalg::ComplexMatrix;
using linalg::cplx;

namespace {

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void bad_entry(const std::string& name, int row, int col,
                            const std::string& what) {
  throw InvalidInputError("matrix \"" + name + "\", row " +
                          std::to_string(row + 1) + ", column " +
                          std::to_string(col + 1) + ": " + what);
}

ComplexMatrix parse_matrix(const std::string& name, const json& rows, int d) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != d)
    throw InvalidInputError("matrix \"" + name + "\" must be an array of " +
                            std::to_string(d) + " rows");
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw InvalidInputError("matrix \"" + name + "\", row " +
                              std::to_string(i + 1) + ": expected " +
                              std::to_string(d) + " entries");
    for (int j = 0; j < d; ++j) {
      const json& entry = row[j];
      if (!entry.is_array() || entry.size() != 2)
        bad_entry(name, i, j, "entry must be a two-element [re, im] array");
      if (!entry[0].is_number() || !entry[1].is_number())
        bad_entry(name, i, j, "entry parts must be numbers");
      m(i, j) = cplx(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

// %.17g keeps every double distinguishable in decimal, so a written value
// parses back bit-for-bit.
std::string format_number(double v) {
  if (!std::isfinite(v))
    throw InvalidInputError("matrix entries must be finite to serialize");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) { return json(s).dump(); }

}  // namespace

const ComplexMatrix* MatrixFile::find(const std::string& name) const {
  for (const auto& [key, m] : matrices)
    if (key == name) return &m;
  return nullptr;
}

MatrixFile parse_matrix_file(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw InvalidInputError("syntax error at line " + std::to_string(line) +
                            ", column " + std::to_string(col));
  }
  if (!doc.is_object())
    throw InvalidInputError("the top-level value must be an object");
  for (const auto& [key, value] : doc.items())
    if (key != "dimension" && key != "matrices" && key != "metadata")
      throw InvalidInputError("unknown top-level key \"" + key + "\"");

  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    throw InvalidInputError("\"dimension\" must be present and an integer");
  const int d = doc["dimension"].get<int>();
  if (d < 1) throw InvalidInputError("\"dimension\" must be at least 1");

  if (!doc.contains("matrices") || !doc["matrices"].is_object())
    throw InvalidInputError("\"matrices\" must be present and an object");

  MatrixFile mf;
  mf.dimension = d;
  for (const auto& [name, rows] : doc["matrices"].items())
    mf.matrices.emplace_back(name, parse_matrix(name, rows, d));

  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object())
      throw InvalidInputError("\"metadata\" must be an object");
    for (const auto& [key, value] : doc["metadata"].items()) {
      if (!value.is_string())
        throw InvalidInputError("metadata value for \"" + key +
                                "\" must be a string");
      mf.metadata[key] = value.get<std::string>();
    }
  }
  return mf;
}

MatrixFile load_matrix_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return parse_matrix_file(text);
  } catch (const InvalidInputError& e) {
    throw InvalidInputError((path == "-" ? "<stdin>" : path) + (": " + std::string(e.what())));
  }
}

std::string write_matrix_file(const MatrixFile& mf) {
  if (mf.dimension < 1)
    throw InvalidInputError("\"dimension\" must be at least 1");
  const int d = mf.dimension;
  std::ostringstream out;
  out << "{\n  \"dimension\": " << d << ",\n  \"matrices\": {";
  bool first_matrix = true;
  for (const auto& [name, m] : mf.matrices) {
    if (m.rows() != d || m.cols() != d)
      throw InvalidInputError("matrix \"" + name +
                              "\" does not match the document dimension");
    out << (first_matrix ? "\n" : ",\n") << "    " << quote(name) << ": [\n";
    first_matrix = false;
    for (int i = 0; i < d; ++i) {
      out << "      [";
      for (int j = 0; j < d; ++j) {
        const cplx v = m(i, j);
        out << (j ? ", [" : "[") << format_number(v.real()) << ", "
            << format_number(v.imag()) << "]";
      }
      out << (i + 1 < d ? "],\n" : "]\n");
    }
    out << "    ]";
  }
  out << "\n  }";
  if (!mf.metadata.empty()) {
    out << ",\n  \"metadata\": {";
    bool first = true;
    for (const auto& [key, value] : mf.metadata) {
      out << (first ? "\n" : ",\n") << "    " << quote(key) << ": "
          << quote(value);
      first = false;
    }
    out << "\n  }";
  }
  out << "\n}\n";
  return out.str();
}

}  // namespace incompat::io
