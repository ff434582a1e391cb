// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0

#include "medsumm/quant.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace medsumm {
namespace {

TEST(Quantize, AllZeroTensorRoundTripsExactly) {
  Matrix m(3, 5);
  QuantizedTensor q = quantize(m, 4);
  Matrix back = dequantize(q);
  for (double v : back.data) EXPECT_EQ(v, 0.0);
  for (double s : q.scales) EXPECT_EQ(s, 0.0);
}

TEST(Quantize, HandComputedBlock) {
  Matrix m(1, 3);
  m.data = {7.0, -7.0, 3.5};
  QuantizedTensor q = quantize(m, 3);
  ASSERT_EQ(q.codes.size(), 3u);
  EXPECT_EQ(q.codes[0], 7);
  EXPECT_EQ(q.codes[1], -7);
  EXPECT_EQ(q.codes[2], 4);  // round(3.5 / 1.0)
  EXPECT_DOUBLE_EQ(q.scales[0], 1.0);
  Matrix back = dequantize(q);
  EXPECT_DOUBLE_EQ(back.data[0], 7.0);
  EXPECT_DOUBLE_EQ(back.data[1], -7.0);
  EXPECT_DOUBLE_EQ(back.data[2], 4.0);
  EXPECT_LE(std::fabs(3.5 - back.data[2]), 0.5);
}

TEST(Quantize, ErrorBoundHoldsOnRandomTensors) {
  std::mt19937 gen(42);
  std::normal_distribution<double> dist(0.0, 3.0);
  std::uniform_int_distribution<std::size_t> block_dist(1, 9);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (int iter = 0; iter < 1000; ++iter) {
    Matrix m(dim(gen), dim(gen));
    for (auto& v : m.data) v = dist(gen);
    std::size_t block = block_dist(gen);
    QuantizedTensor q = quantize(m, block);
    const std::size_t n = m.data.size();
    for (std::size_t b = 0; b * block < n; ++b) {
      const std::size_t lo = b * block;
      const std::size_t hi = std::min(n, lo + block);
      double absmax = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        absmax = std::max(absmax, std::fabs(m.data[i]));
      }
      for (std::size_t i = lo; i < hi; ++i) {
        double err = std::fabs(m.data[i] - q.value_at(i));
        EXPECT_LE(err, absmax / 14.0 + 1e-12 * absmax);
        EXPECT_GE(q.codes[i], -7);
        EXPECT_LE(q.codes[i], 7);
      }
    }
  }
}

TEST(Quantize, CodesStayInSymmetricInt4Range) {
  Matrix m(1, 8);
  m.data = {1e9, -1e9, 1e-9, 0.0, 5.0, -5.0, 2.5, -2.5};
  QuantizedTensor q = quantize(m, 8);
  for (auto c : q.codes) {
    EXPECT_GE(c, -7);
    EXPECT_LE(c, 7);
  }
}

TEST(QuantMatvec, MatchesDequantizedMatvec) {
  std::mt19937 gen(7);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int iter = 0; iter < 50; ++iter) {
    std::uniform_int_distribution<std::size_t> dim(1, 20);
    Matrix m(dim(gen), dim(gen));
    for (auto& v : m.data) v = dist(gen);
    QuantizedTensor q = quantize(m, 5);
    Matrix deq = dequantize(q);
    Vec x(m.cols);
    for (auto& v : x) v = dist(gen);
    Vec direct = quant_matvec(q, x);
    Vec via = deq.matvec(x);
    ASSERT_EQ(direct.size(), via.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      EXPECT_NEAR(direct[i], via[i], 1e-12);
    }
    Vec y(m.rows);
    for (auto& v : y) v = dist(gen);
    Vec direct_t = quant_matvec_t(q, y);
    Vec via_t = deq.matvec_t(y);
    for (std::size_t i = 0; i < direct_t.size(); ++i) {
      EXPECT_NEAR(direct_t[i], via_t[i], 1e-12);
    }
  }
}

TEST(QuantRow, ExtractsDequantizedRow) {
  Matrix m(4, 6);
  std::mt19937 gen(9);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (auto& v : m.data) v = dist(gen);
  QuantizedTensor q = quantize(m, 4);
  Matrix deq = dequantize(q);
  for (std::size_t r = 0; r < m.rows; ++r) {
    Vec row = quant_row(q, r);
    for (std::size_t c = 0; c < m.cols; ++c) {
      EXPECT_EQ(row[c], deq(r, c));
    }
  }
}

TEST(QuantizedTensor, ByteSerializationDetectsChanges) {
  Matrix m(2, 8);
  std::mt19937 gen(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (auto& v : m.data) v = dist(gen);
  QuantizedTensor q = quantize(m, 4);
  std::string bytes = q.to_bytes();
  EXPECT_EQ(bytes, q.to_bytes());
  QuantizedTensor mutated = q;
  mutated.codes[3] = static_cast<std::int8_t>(mutated.codes[3] == 7 ? -7 : 7);
  EXPECT_NE(bytes, mutated.to_bytes());
}

TEST(Quantize, InvalidBlockThrows) {
  Matrix m(1, 1);
  EXPECT_THROW(quantize(m, 0), std::invalid_argument);
}

}  // namespace
}  // namespace medsumm
