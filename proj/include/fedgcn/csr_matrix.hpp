/*
 * Copyright 2026 The fedgcn-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fedgcn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

// Compressed sparse row matrix. Column indices are strictly increasing within
// each row.
class CsrMatrix {
 public:
  CsrMatrix() : row_offsets_(1, 0) {}
  CsrMatrix(std::size_t rows, std::size_t cols);

  // Duplicate (row, col) entries are summed.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                 std::vector<Triplet> triplets);
  // Keeps exact nonzeros only.
  static CsrMatrix from_dense(const Matrix& dense);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return col_indices_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::uint32_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> mutable_values() noexcept { return values_; }

  std::span<const std::uint32_t> row_cols(std::size_t r) const noexcept {
    return {col_indices_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
  }
  std::span<const double> row_values(std::size_t r) const noexcept {
    return {values_.data() + row_offsets_[r], row_offsets_[r + 1] - row_offsets_[r]};
  }

  double row_sum(std::size_t r) const noexcept;
  Matrix to_dense() const;
  CsrMatrix transpose() const;

  // this * dense
  Matrix multiply(const Matrix& dense) const;
  // this^T * dense, without materializing the transpose.
  Matrix transpose_multiply(const Matrix& dense) const;

  friend bool operator==(const CsrMatrix&, const CsrMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::uint32_t> col_indices_;
  std::vector<double> values_;

  friend class CsrBuilder;
};

// Row-by-row builder; rows must be appended in order with sorted columns.
class CsrBuilder {
 public:
  CsrBuilder(std::size_t rows, std::size_t cols);
  void push(std::uint32_t col, double value);
  void finish_row();
  CsrMatrix build() &&;

 private:
  CsrMatrix m_;
  std::size_t current_row_ = 0;
};

}  // namespace fedgcn
