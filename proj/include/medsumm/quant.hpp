// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Blockwise symmetric absmax int4 quantization. Values in a block map to
// integer codes in [-7, 7] with one scale = absmax/7 per block, so the
// elementwise roundtrip error is at most absmax/14. An all-zero block gets
// scale 0 and roundtrips exactly.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "medsumm/matrix.hpp"

namespace medsumm {

struct QuantizedTensor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t block = 32;
  std::vector<std::int8_t> codes;  // row-major, values in [-7, 7]
  std::vector<double> scales;      // one per block of `block` elements

  std::size_t size() const { return rows * cols; }

  double value_at(std::size_t flat_index) const {
    return static_cast<double>(codes[flat_index]) * scales[flat_index / block];
  }

  /// Byte serialization of shape, codes and scales; used to assert that the
  /// frozen base is bit-identical across training.
  std::string to_bytes() const {
    std::string out;
    auto append = [&out](const void* p, std::size_t n) {
      out.append(static_cast<const char*>(p), n);
    };
    std::uint64_t header[3] = {rows, cols, block};
    append(header, sizeof(header));
    append(codes.data(), codes.size());
    append(scales.data(), scales.size() * sizeof(double));
    return out;
  }
};

inline QuantizedTensor quantize(const Matrix& m, std::size_t block) {
  if (block < 1) throw std::invalid_argument("quantize: block must be >= 1");
  QuantizedTensor q;
  q.rows = m.rows;
  q.cols = m.cols;
  q.block = block;
  const std::size_t n = m.data.size();
  q.codes.resize(n);
  q.scales.resize((n + block - 1) / block, 0.0);
  for (std::size_t b = 0; b * block < n; ++b) {
    const std::size_t lo = b * block;
    const std::size_t hi = std::min(n, lo + block);
    double absmax = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      absmax = std::max(absmax, std::fabs(m.data[i]));
    }
    if (absmax == 0.0) {
      q.scales[b] = 0.0;
      for (std::size_t i = lo; i < hi; ++i) q.codes[i] = 0;
      continue;
    }
    const double scale = absmax / 7.0;
    q.scales[b] = scale;
    for (std::size_t i = lo; i < hi; ++i) {
      double code = std::round(m.data[i] / scale);
      if (code > 7.0) code = 7.0;
      if (code < -7.0) code = -7.0;
      q.codes[i] = static_cast<std::int8_t>(code);
    }
  }
  return q;
}

inline Matrix dequantize(const QuantizedTensor& q) {
  Matrix m(q.rows, q.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) m.data[i] = q.value_at(i);
  return m;
}

/// y = Q x without materializing the dequantized matrix.
inline Vec quant_matvec(const QuantizedTensor& q, const Vec& x) {
  if (x.size() != q.cols) throw std::invalid_argument("quant_matvec: size mismatch");
  Vec y(q.rows, 0.0);
  for (std::size_t r = 0; r < q.rows; ++r) {
    const std::size_t base = r * q.cols;
    double acc = 0.0;
    std::size_t c = 0;
    while (c < q.cols) {
      const std::size_t flat = base + c;
      const std::size_t block_end = (flat / q.block + 1) * q.block;
      const std::size_t run = std::min(q.cols - c, block_end - flat);
      double inner = 0.0;
      for (std::size_t k = 0; k < run; ++k) {
        inner += static_cast<double>(q.codes[flat + k]) * x[c + k];
      }
      acc += q.scales[flat / q.block] * inner;
      c += run;
    }
    y[r] = acc;
  }
  return y;
}

/// y = Q^T x
inline Vec quant_matvec_t(const QuantizedTensor& q, const Vec& x) {
  if (x.size() != q.rows) throw std::invalid_argument("quant_matvec_t: size mismatch");
  Vec y(q.cols, 0.0);
  for (std::size_t r = 0; r < q.rows; ++r) {
    const std::size_t base = r * q.cols;
    const double xr = x[r];
    for (std::size_t c = 0; c < q.cols; ++c) {
      const std::size_t flat = base + c;
      y[c] += q.scales[flat / q.block] * static_cast<double>(q.codes[flat]) * xr;
    }
  }
  return y;
}

/// One dequantized row (used for embedding-table lookups).
inline Vec quant_row(const QuantizedTensor& q, std::size_t row) {
  if (row >= q.rows) throw std::invalid_argument("quant_row: row out of range");
  Vec y(q.cols);
  const std::size_t base = row * q.cols;
  for (std::size_t c = 0; c < q.cols; ++c) y[c] = q.value_at(base + c);
  return y;
}

}  // namespace medsumm
