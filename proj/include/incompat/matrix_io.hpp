#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "incompat/errors.hpp"
#include "incompat/linalg.hpp"

namespace incompat::io {

// One parsed document: a shared dimension, named square complex matrices in
// document order, and optional free-form string metadata.
struct MatrixFile {
  int dimension = 0;
  std::vector<std::pair<std::string, linalg::ComplexMatrix>> matrices;
  std::map<std::string, std::string> metadata;

  // Pointer into `matrices`, or nullptr when no matrix has that name.
  const linalg::ComplexMatrix* find(const std::string& name) const;
};

// Parses a JSON document of the form
//
//   {
//     "dimension": d,
//     "matrices": {"Q": [[[re, im], ...], ...], ...},
//     "metadata": {"label": "..."}          // optional
//   }
//
// Every matrix must be a d x d array of two-element [re, im] number pairs.
// Syntax errors report line and column; malformed entries report the matrix
// name with 1-based row and column indices.
MatrixFile parse_matrix_file(const std::string& text);

// Reads the file at `path` ("-" reads standard input) and parses it; error
// messages are prefixed with the path.
MatrixFile load_matrix_file(const std::string& path);

// Serializes in the shape above, one matrix row per line, numbers with 17
// significant digits so every value survives a round trip exactly.
std::string write_matrix_file(const MatrixFile& mf);

}  // namespace incompat::io
