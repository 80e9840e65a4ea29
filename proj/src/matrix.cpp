#include "k3lat/matrix.hpp"

#include <sstream>

namespace k3lat {

RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

bool is_integral(const RatMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j).get_den() != 1) return false;
  return true;
}

IntMatrix to_int(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw Error("matrix entry is not integral");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      r(a.rows() + i, a.cols() + j) = b(i, j);
  return r;
}

IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw Error("hstack row mismatch");
  IntMatrix r(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
  }
  return r;
}

IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw Error("vstack column mismatch");
  IntMatrix r(a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) r(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) r(a.rows() + i, j) = b(i, j);
  }
  return r;
}

Int dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw Error("dot length mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dot(const RatVector& a, const RatVector& b) {
  if (a.size() != b.size()) throw Error("dot length mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Int bilinear(const IntMatrix& g, const IntVector& a, const IntVector& b) {
  return dot(a, g * b);
}

Rat bilinear(const RatMatrix& g, const RatVector& a, const RatVector& b) {
  return dot(a, g * b);
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace k3lat
