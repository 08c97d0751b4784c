#include "sparsebound/matrix.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace sparsebound {

IntegerMatrix::IntegerMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("matrix dimensions must be at least 1x1");
  e_.assign(std::size_t(rows) * cols, Int(0));
}

IntegerMatrix IntegerMatrix::identity(int n) {
  IntegerMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<Vec>& rows) {
  if (rows.empty()) throw std::invalid_argument("from_rows: no rows");
  IntegerMatrix m(int(rows.size()), int(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i) {
    if (int(rows[i].size()) != m.cols())
      throw std::invalid_argument("from_rows: ragged rows");
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntegerMatrix IntegerMatrix::from_columns(const std::vector<Vec>& cols) {
  if (cols.empty()) throw std::invalid_argument("from_columns: no columns");
  IntegerMatrix m(int(cols[0].size()), int(cols.size()));
  for (int j = 0; j < m.cols(); ++j) {
    if (int(cols[j].size()) != m.rows())
      throw std::invalid_argument("from_columns: ragged columns");
    for (int i = 0; i < m.rows(); ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec IntegerMatrix::col(int j) const {
  Vec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vec IntegerMatrix::row(int i) const {
  Vec v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
  return v;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntegerMatrix IntegerMatrix::columns(const std::vector<int>& idx) const {
  if (idx.empty()) throw std::invalid_argument("columns: empty selection");
  IntegerMatrix m(rows_, int(idx.size()));
  for (int j = 0; j < int(idx.size()); ++j) {
    if (idx[j] < 0 || idx[j] >= cols_)
      throw std::invalid_argument("columns: index out of range");
    for (int i = 0; i < rows_; ++i) m(i, j) = (*this)(i, idx[j]);
  }
  return m;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  IntegerMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

Vec operator*(const IntegerMatrix& a, const Vec& v) {
  if (a.cols() != int(v.size()))
    throw std::invalid_argument("matrix-vector product: shape mismatch");
  Vec r(a.rows(), Int(0));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

Vec vec_add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector add: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector sub: size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

bool vec_is_zero(const Vec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

Int dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool LexLess::operator()(const Vec& a, const Vec& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

namespace {

// Strip a trailing comment and tokenize.
std::vector<std::string> tokens_of(const std::string& line) {
  std::string data = line;
  auto hash = data.find('#');
  if (hash != std::string::npos) data.erase(hash);
  std::istringstream ss(data);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

Int parse_int_token(const std::string& tok, long lineno) {
  try {
    return Int(tok);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("line " + std::to_string(lineno) +
                                ": invalid integer '" + tok + "'");
  }
}

}  // namespace

IntegerMatrix parse_matrix(std::istream& in) {
  std::string line;
  long lineno = 0;
  std::vector<std::string> header;
  long header_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    header = tokens_of(line);
    if (!header.empty()) {
      header_line = lineno;
      break;
    }
  }
  if (header.empty())
    throw std::invalid_argument("line " + std::to_string(lineno) +
                                ": missing 'm n' header");
  if (header.size() != 2)
    throw std::invalid_argument("line " + std::to_string(header_line) +
                                ": header must be exactly 'm n'");
  Int mz = parse_int_token(header[0], header_line);
  Int nz = parse_int_token(header[1], header_line);
  if (mz < 1 || nz < 1 || !mz.fits_sint_p() || !nz.fits_sint_p())
    throw std::invalid_argument("line " + std::to_string(header_line) +
                                ": invalid dimensions");
  int m = int(mz.get_si()), n = int(nz.get_si());

  IntegerMatrix a(m, n);
  int row = 0;
  while (row < m && std::getline(in, line)) {
    ++lineno;
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (int(toks.size()) != n)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(n) + " entries, got " +
                                  std::to_string(toks.size()));
    for (int j = 0; j < n; ++j) a(row, j) = parse_int_token(toks[j], lineno);
    ++row;
  }
  if (row < m)
    throw std::invalid_argument("line " + std::to_string(lineno) +
                                ": expected " + std::to_string(m) +
                                " data rows, got " + std::to_string(row));
  return a;
}

IntegerMatrix parse_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  return parse_matrix(in);
}

std::string format_matrix(const IntegerMatrix& m) {
  std::ostringstream out;
  out << m.rows() << ' ' << m.cols() << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j).get_str();
    }
    out << '\n';
  }
  return out.str();
}

std::string to_string(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += v[i].get_str();
  }
  return s;
}

}  // namespace sparsebound
