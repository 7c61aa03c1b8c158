#pragma once

#include "gpprec/linalg.hpp"

#include <iosfwd>
#include <string>

namespace gpprec {

// Plain-text formats. Values are printed with 17 significant digits so a
// write/read round trip is exact.
//
//   symmetric matrix:  "dim" then dim rows
//   samples:           "N dim" then N rows
//   general matrix:    "rows cols" then rows

void write_matrix(std::ostream& out, const DenseSymMatrix& a);
DenseSymMatrix read_matrix(std::istream& in);

void write_samples(std::ostream& out, const SampleMatrix& z);
SampleMatrix read_samples(std::istream& in);

void write_rect(std::ostream& out, const Matrix& a);
Matrix read_rect(std::istream& in);

/// Row-major values of `a`, space separated, one row per line.
void write_rows(std::ostream& out, const Matrix& a);
Matrix read_rows(std::istream& in, Index rows, Index cols);

std::string format_double(double v);

/// Skips blank space and "#" comment lines. The readers above call it first.
void skip_comments(std::istream& in);

void save_matrix(const std::string& path, const DenseSymMatrix& a);
DenseSymMatrix load_matrix(const std::string& path);

}  // namespace gpprec
