// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "medsumm/util.hpp"

namespace medsumm {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Everything in the fusion core runs in
/// 64-bit so gradient checks are tight.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  static Matrix zeros(std::size_t r, std::size_t c) { return Matrix(r, c); }

  static Matrix random_gaussian(std::size_t r, std::size_t c, double stddev,
                                Rng& rng) {
    Matrix m(r, c);
    for (auto& x : m.data) x = stddev * rng.gaussian();
    return m;
  }

  /// y = M x
  Vec matvec(const Vec& x) const {
    if (x.size() != cols) throw std::invalid_argument("matvec: size mismatch");
    Vec y(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = 0.0;
      const double* row = data.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
      y[r] = acc;
    }
    return y;
  }

  /// y = M^T x
  Vec matvec_t(const Vec& x) const {
    if (x.size() != rows) throw std::invalid_argument("matvec_t: size mismatch");
    Vec y(cols, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
      const double* row = data.data() + r * cols;
      const double xr = x[r];
      for (std::size_t c = 0; c < cols; ++c) y[c] += row[c] * xr;
    }
    return y;
  }

  /// M += scale * u v^T
  void add_outer(const Vec& u, const Vec& v, double scale = 1.0) {
    if (u.size() != rows || v.size() != cols) {
      throw std::invalid_argument("add_outer: size mismatch");
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double* row = data.data() + r * cols;
      const double ur = scale * u[r];
      for (std::size_t c = 0; c < cols; ++c) row[c] += ur * v[c];
    }
  }

  void add_scaled(const Matrix& other, double scale) {
    if (other.rows != rows || other.cols != cols) {
      throw std::invalid_argument("add_scaled: shape mismatch");
    }
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += scale * other.data[i];
  }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double a, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace medsumm
