#include "latfricke/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace latfricke {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream is(body);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

}  // namespace

MatrixFile parse_matrix(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto t = tokens_of(line);
    if (!t.empty()) lines.push_back(std::move(t));
  }
  if (lines.empty() || lines[0].size() != 2) throw std::invalid_argument("matrix file: header must be 'n N'");
  MatrixFile f;
  f.n = to_long(parse_integer(lines[0][0]));
  f.N = to_long(parse_integer(lines[0][1]));
  if (f.n < 1) throw std::invalid_argument("matrix file: n must be positive");
  if (f.N < 1) throw std::invalid_argument("matrix file: N must be positive");
  const std::size_t n = static_cast<std::size_t>(f.n);
  if (lines.size() < n + 1) throw std::invalid_argument("matrix file: expected " + std::to_string(n) + " rows");
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (lines[i + 1].size() != n) throw std::invalid_argument("matrix file: row " + std::to_string(i + 1) + " must have n entries");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_rational(lines[i + 1][j]);
  }
  long k = 0;
  if (lines.size() > n + 1) {
    const auto& s = lines[n + 1];
    if (s.size() != 2 || s[0] != "scale") throw std::invalid_argument("matrix file: trailing line must be 'scale k'");
    k = to_long(parse_integer(s[1]));
    if (lines.size() > n + 2) throw std::invalid_argument("matrix file: unexpected trailing content");
  }
  f.z = ScaledRationalMatrix(std::move(m), k, f.N);
  return f;
}

MatrixFile parse_matrix_string(const std::string& text) {
  std::istringstream is(text);
  return parse_matrix(is);
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  return parse_matrix(in);
}

std::string format_matrix(const ScaledRationalMatrix& z) {
  std::ostringstream os;
  const auto& m = z.mantissa();
  os << m.rows() << " " << z.level() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << to_string(m(i, j));
    os << "\n";
  }
  if (z.k() != 0) os << "scale " << z.k() << "\n";
  return os.str();
}

}  // namespace latfricke
