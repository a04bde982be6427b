#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nagata/field.hpp"
#include "nagata/unipoly.hpp"

namespace nagata {

class Matrix {
 public:
  Matrix(Field f, std::size_t rows, std::size_t cols);
  static Matrix identity(const Field& f, std::size_t n);
  static Matrix from_rows(const Field& f, const std::vector<std::vector<Elem>>& rows);

  const Field& field() const { return f_; }
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Elem& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Elem& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  std::vector<Elem> row(std::size_t i) const;
  std::vector<Elem> col(std::size_t j) const;

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scale(const Elem& c) const;
  std::vector<Elem> apply(const std::vector<Elem>& v) const;
  Matrix transpose() const;
  Matrix select_columns(const std::vector<std::size_t>& idx) const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  bool is_zero() const;
  bool operator==(const Matrix& o) const;

  // in-place reduced row echelon form; returns pivot columns
  std::vector<std::size_t> rref_inplace();
  Matrix rref() const;
  std::size_t rank() const;
  // rows form a basis of the right kernel, in reduced echelon form
  Matrix kernel() const;
  Elem det() const;
  std::optional<Matrix> inverse() const;
  std::optional<std::vector<Elem>> solve(const std::vector<Elem>& rhs) const;

  std::string to_string() const;

 private:
  Field f_;
  std::size_t r_, c_;
  std::vector<Elem> a_;
};

UniPoly charpoly(const Matrix& m, const Field& f);
Matrix eval_poly(const UniPoly& p, const Matrix& m);

// Dense rank over F_p for p < 2^31; data is row-major and destroyed.
std::size_t fp_rank(std::vector<std::uint32_t>& data, std::size_t rows, std::size_t cols, std::uint32_t p);

}  // namespace nagata
