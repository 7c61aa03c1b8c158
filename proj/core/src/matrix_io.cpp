#include "gpprec/matrix_io.hpp"

#include "gpprec/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace gpprec {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_rows(std::ostream& out, const Matrix& a) {
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

void skip_comments(std::istream& in) {
  for (;;) {
    in >> std::ws;
    if (in.peek() != '#') return;
    std::string line;
    std::getline(in, line);
  }
}

Matrix read_rows(std::istream& in, Index rows, Index cols) {
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> a(i, j))) throw InvalidInput("matrix text ended early or holds a non-number");
    }
  }
  return a;
}

void write_matrix(std::ostream& out, const DenseSymMatrix& a) {
  out << a.dim() << '\n';
  write_rows(out, a.matrix());
}

DenseSymMatrix read_matrix(std::istream& in) {
  skip_comments(in);
  Index dim = 0;
  if (!(in >> dim) || dim < 1) throw InvalidInput("matrix header must be a positive dim");
  const Matrix a = read_rows(in, dim, dim);
  if (a != a.transpose()) throw InvalidInput("matrix text is not symmetric");
  return DenseSymMatrix(a);
}

void write_samples(std::ostream& out, const SampleMatrix& z) {
  out << z.n_samples() << ' ' << z.dim() << '\n';
  write_rows(out, z.rows());
}

SampleMatrix read_samples(std::istream& in) {
  skip_comments(in);
  Index n = 0, dim = 0;
  if (!(in >> n >> dim) || n < 1 || dim < 1) throw InvalidInput("sample header must be 'N dim'");
  return SampleMatrix(read_rows(in, n, dim));
}

void write_rect(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  write_rows(out, a);
}

Matrix read_rect(std::istream& in) {
  skip_comments(in);
  Index r = 0, c = 0;
  if (!(in >> r >> c) || r < 0 || c < 0) throw InvalidInput("matrix header must be 'rows cols'");
  return read_rows(in, r, c);
}

void save_matrix(const std::string& path, const DenseSymMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_matrix(out, a);
  if (!out) throw Error("write to " + path + " failed");
}

DenseSymMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_matrix(in);
}

}  // namespace gpprec
