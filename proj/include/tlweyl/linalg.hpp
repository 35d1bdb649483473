#pragma once

// Dense exact linear algebra over Q(v): matrices of RatFun with product,
// rank, linear solving and inversion by fraction-full Gaussian elimination.
// Sizes in this project stay in the low hundreds, so dense is fine.

#include "tlweyl/ratfun.hpp"

#include <vector>

namespace tlweyl {

class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * cols, RatFun::zero()) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    RatFun &at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    const RatFun &at(int r, int c) const {
        return a_[static_cast<std::size_t>(r) * cols_ + c];
    }

    Matrix operator*(const Matrix &o) const;
    Matrix operator+(const Matrix &o) const;
    Matrix operator-(const Matrix &o) const;
    Matrix scaled(const RatFun &c) const;

    bool operator==(const Matrix &o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Matrix &o) const { return !(*this == o); }

    bool is_zero() const;
    bool is_identity() const;

    /// Rank by Gaussian elimination on a copy.
    int rank() const;

  private:
    int rows_, cols_;
    std::vector<RatFun> a_;
};

/// Horizontal / vertical stacking and block extraction.
Matrix hstack(const Matrix &l, const Matrix &r);
Matrix submatrix(const Matrix &m, int r0, int r1, int c0, int c1);

/// Solve A X = B exactly; returns false when inconsistent.  A need not be
/// square; when underdetermined the free variables are set to zero.
bool solve(const Matrix &A, const Matrix &B, Matrix &X);

/// Inverse of a square matrix; returns false when singular.
bool inverse(const Matrix &A, Matrix &Inv);

/// Basis of the right null space (columns of the result).
Matrix kernel(const Matrix &A);

} // namespace tlweyl
