#include "tlweyl/linalg.hpp"

#include <cassert>
#include <utility>

namespace tlweyl {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        m.at(i, i) = RatFun::one();
    return m;
}

Matrix Matrix::operator*(const Matrix &o) const {
    assert(cols_ == o.rows_);
    Matrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const RatFun &x = at(i, k);
            if (x.is_zero())
                continue;
            for (int j = 0; j < o.cols_; ++j) {
                const RatFun &y = o.at(k, j);
                if (!y.is_zero())
                    r.at(i, j) = r.at(i, j) + x * y;
            }
        }
    return r;
}

Matrix Matrix::operator+(const Matrix &o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i)
        r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix &o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i)
        r.a_[i] = a_[i] - o.a_[i];
    return r;
}

Matrix Matrix::scaled(const RatFun &c) const {
    Matrix r(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i)
        r.a_[i] = a_[i] * c;
    return r;
}

bool Matrix::is_zero() const {
    for (const auto &x : a_)
        if (!x.is_zero())
            return false;
    return true;
}

bool Matrix::is_identity() const {
    if (rows_ != cols_)
        return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (at(i, j) != (i == j ? RatFun::one() : RatFun::zero()))
                return false;
    return true;
}

namespace {

// Row-echelon elimination in place; returns pivot (row, col) pairs.
std::vector<std::pair<int, int>> echelon(Matrix &m) {
    std::vector<std::pair<int, int>> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int p = -1;
        for (int r = row; r < m.rows(); ++r)
            if (!m.at(r, col).is_zero()) {
                p = r;
                break;
            }
        if (p < 0)
            continue;
        if (p != row)
            for (int c = 0; c < m.cols(); ++c)
                std::swap(m.at(p, c), m.at(row, c));
        RatFun inv = m.at(row, col).inv();
        for (int c = col; c < m.cols(); ++c)
            if (!m.at(row, c).is_zero())
                m.at(row, c) = m.at(row, c) * inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row)
                continue;
            RatFun f = m.at(r, col);
            if (f.is_zero())
                continue;
            for (int c = col; c < m.cols(); ++c)
                if (!m.at(row, c).is_zero())
                    m.at(r, c) = m.at(r, c) - f * m.at(row, c);
        }
        pivots.emplace_back(row, col);
        ++row;
    }
    return pivots;
}

} // namespace

int Matrix::rank() const {
    Matrix m = *this;
    return static_cast<int>(echelon(m).size());
}

Matrix hstack(const Matrix &l, const Matrix &r) {
    assert(l.rows() == r.rows());
    Matrix m(l.rows(), l.cols() + r.cols());
    for (int i = 0; i < l.rows(); ++i) {
        for (int j = 0; j < l.cols(); ++j)
            m.at(i, j) = l.at(i, j);
        for (int j = 0; j < r.cols(); ++j)
            m.at(i, l.cols() + j) = r.at(i, j);
    }
    return m;
}

Matrix submatrix(const Matrix &m, int r0, int r1, int c0, int c1) {
    Matrix s(r1 - r0, c1 - c0);
    for (int i = r0; i < r1; ++i)
        for (int j = c0; j < c1; ++j)
            s.at(i - r0, j - c0) = m.at(i, j);
    return s;
}

bool solve(const Matrix &A, const Matrix &B, Matrix &X) {
    assert(A.rows() == B.rows());
    Matrix aug = hstack(A, B);
    auto pivots = echelon(aug);
    // Inconsistent iff some pivot lands in the B block.
    for (auto [r, c] : pivots)
        if (c >= A.cols())
            return false;
    X = Matrix(A.cols(), B.cols());
    for (auto [r, c] : pivots)
        for (int j = 0; j < B.cols(); ++j)
            X.at(c, j) = aug.at(r, A.cols() + j);
    return true;
}

bool inverse(const Matrix &A, Matrix &Inv) {
    assert(A.rows() == A.cols());
    if (!solve(A, Matrix::identity(A.rows()), Inv))
        return false;
    // solve() succeeds for any consistent system; demand full rank.
    return (A * Inv).is_identity();
}

Matrix kernel(const Matrix &A) {
    Matrix m = A;
    auto pivots = echelon(m);
    std::vector<int> pivot_col(A.cols(), -1);
    for (auto [r, c] : pivots)
        pivot_col[c] = r;
    int nullity = A.cols() - static_cast<int>(pivots.size());
    Matrix K(A.cols(), nullity);
    int k = 0;
    for (int c = 0; c < A.cols(); ++c) {
        if (pivot_col[c] >= 0)
            continue;
        K.at(c, k) = RatFun::one();
        for (auto [r, pc] : pivots)
            K.at(pc, k) = -m.at(r, c);
        ++k;
    }
    return K;
}

} // namespace tlweyl
