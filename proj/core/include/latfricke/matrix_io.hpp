#pragma once

#include <iosfwd>
#include <string>

#include "latfricke/scaled.hpp"

namespace latfricke {

// Text format:
//   n N
//   n lines of n entries p/q (q omitted when 1)
//   optional line "scale k"      (global factor N^(k/n))
// Blank lines and text after '#' are ignored.
struct MatrixFile {
  long n = 0;
  long N = 1;
  ScaledRationalMatrix z;
};

MatrixFile parse_matrix(std::istream& in);
MatrixFile parse_matrix_string(const std::string& text);
MatrixFile read_matrix_file(const std::string& path);
std::string format_matrix(const ScaledRationalMatrix& z);

}  // namespace latfricke
