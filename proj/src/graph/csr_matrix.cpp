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

#include "fedgcn/csr_matrix.hpp"

#include <algorithm>

#include "fedgcn/errors.hpp"

namespace fedgcn {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_offsets_(rows + 1, 0) {}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      throw ShapeError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                       ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m(rows, cols);
  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  for (std::size_t i = 0; i < triplets.size(); ++i) {
    const auto& t = triplets[i];
    if (!m.col_indices_.empty() && i > 0 && triplets[i - 1].row == t.row &&
        triplets[i - 1].col == t.col) {
      m.values_.back() += t.value;
      continue;
    }
    m.col_indices_.push_back(t.col);
    m.values_.push_back(t.value);
    ++m.row_offsets_[t.row + 1];
  }
  for (std::size_t r = 0; r < rows; ++r) m.row_offsets_[r + 1] += m.row_offsets_[r];
  return m;
}

CsrMatrix CsrMatrix::from_dense(const Matrix& dense) {
  CsrBuilder b(static_cast<std::size_t>(dense.rows()), static_cast<std::size_t>(dense.cols()));
  for (Eigen::Index r = 0; r < dense.rows(); ++r) {
    for (Eigen::Index c = 0; c < dense.cols(); ++c) {
      if (dense(r, c) != 0.0) b.push(static_cast<std::uint32_t>(c), dense(r, c));
    }
    b.finish_row();
  }
  return std::move(b).build();
}

double CsrMatrix::row_sum(std::size_t r) const noexcept {
  double s = 0.0;
  for (double v : row_values(r)) s += v;
  return s;
}

Matrix CsrMatrix::to_dense() const {
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      d(static_cast<Eigen::Index>(r), col_indices_[p]) = values_[p];
    }
  }
  return d;
}

CsrMatrix CsrMatrix::transpose() const {
  CsrMatrix t(cols_, rows_);
  t.col_indices_.resize(nnz());
  t.values_.resize(nnz());
  for (std::uint32_t c : col_indices_) ++t.row_offsets_[c + 1];
  for (std::size_t r = 0; r < cols_; ++r) t.row_offsets_[r + 1] += t.row_offsets_[r];
  std::vector<std::size_t> cursor(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      const std::size_t dst = cursor[col_indices_[p]]++;
      t.col_indices_[dst] = static_cast<std::uint32_t>(r);
      t.values_[dst] = values_[p];
    }
  }
  return t;
}

Matrix CsrMatrix::multiply(const Matrix& dense) const {
  if (static_cast<std::size_t>(dense.rows()) != cols_) {
    throw ShapeError("spmm: " + std::to_string(rows_) + "x" + std::to_string(cols_) + " times " +
                     std::to_string(dense.rows()) + "x" + std::to_string(dense.cols()));
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(rows_), dense.cols());
  for (std::size_t r = 0; r < rows_; ++r) {
    auto out_row = out.row(static_cast<Eigen::Index>(r));
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      out_row.noalias() += values_[p] * dense.row(col_indices_[p]);
    }
  }
  return out;
}

Matrix CsrMatrix::transpose_multiply(const Matrix& dense) const {
  if (static_cast<std::size_t>(dense.rows()) != rows_) {
    throw ShapeError("spmm^T: (" + std::to_string(rows_) + "x" + std::to_string(cols_) +
                     ")^T times " + std::to_string(dense.rows()) + "x" +
                     std::to_string(dense.cols()));
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(cols_), dense.cols());
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto in_row = dense.row(static_cast<Eigen::Index>(r));
    for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
      out.row(col_indices_[p]).noalias() += values_[p] * in_row;
    }
  }
  return out;
}

CsrBuilder::CsrBuilder(std::size_t rows, std::size_t cols) : m_(rows, cols) {}

void CsrBuilder::push(std::uint32_t col, double value) {
  if (col >= m_.cols_) throw ShapeError("CsrBuilder: column out of range");
  const std::size_t begin = m_.row_offsets_[current_row_];
  if (m_.col_indices_.size() > begin && m_.col_indices_.back() >= col) {
    throw ShapeError("CsrBuilder: columns must be strictly increasing within a row");
  }
  m_.col_indices_.push_back(col);
  m_.values_.push_back(value);
}

void CsrBuilder::finish_row() {
  if (current_row_ >= m_.rows_) throw ShapeError("CsrBuilder: too many rows");
  ++current_row_;
  m_.row_offsets_[current_row_] = m_.col_indices_.size();
}

CsrMatrix CsrBuilder::build() && {
  while (current_row_ < m_.rows_) finish_row();
  return std::move(m_);
}

}  // namespace fedgcn
