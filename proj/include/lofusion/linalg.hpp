#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lofusion {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

/// Small dense row-major complex matrix.
struct CMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> data;

  CMatrix() = default;
  CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  cplx& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  CMatrix adjoint() const {
    CMatrix m(cols, rows);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
  }

  double frobenius_sq() const {
    double s = 0;
    for (const auto& v : data) s += std::norm(v);
    return s;
  }
};

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix shape mismatch");
  CMatrix m(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols; ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

inline CMatrix operator+(CMatrix a, const CMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
  return a;
}

inline CMatrix operator*(cplx s, CMatrix a) {
  for (auto& v : a.data) v *= s;
  return a;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return INFINITY;
  double d = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i) d = std::max(d, std::abs(a.data[i] - b.data[i]));
  return d;
}

/// Global phase aligning `b` to `a` (unit modulus), taken from the largest entry of `a`.
inline cplx phase_to_match(const CMatrix& a, const CMatrix& b) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    if (std::abs(a.data[i]) > std::abs(a.data[best])) best = i;
  if (best >= b.data.size() || std::abs(b.data[best]) < 1e-14) return 1.0;
  const cplx r = a.data[best] / b.data[best];
  return r / std::abs(r);
}

/// Elementwise distance after removing a global phase.
inline double diff_up_to_phase(const CMatrix& a, const CMatrix& b) {
  return max_abs_diff(a, phase_to_match(a, b) * b);
}

/// |<a|b>|^2 / (|a|^2 |b|^2).
inline double fidelity(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return 0.0;
  cplx ip = 0;
  double na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ip += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  if (na == 0 || nb == 0) return 0.0;
  return std::norm(ip) / (na * nb);
}

}  // namespace lofusion
