#pragma once

#include <cassert>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "spanmack/rational.hpp"

namespace spanmack {

/// Dense matrix over exact rationals. Row-major; rows() x cols().
/// Elimination is plain exact Gaussian over Q, which is fraction-free in
/// effect (no rounding ever happens); sizes here stay well under 10^3.
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static Mat zero(std::size_t r, std::size_t c) { return Mat(r, c); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const {
        return a_[i * cols_ + j];
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        if (x.cols_ != y.rows_) throw std::invalid_argument("Mat: shape mismatch in *");
        Mat z(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < y.cols_; ++j)
                    z(i, j) += x(i, k) * y(k, j);
            }
        return z;
    }
    friend Mat operator+(const Mat& x, const Mat& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw std::invalid_argument("Mat: shape mismatch in +");
        Mat z = x;
        for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] += y.a_[i];
        return z;
    }
    friend Mat operator-(const Mat& x, const Mat& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
            throw std::invalid_argument("Mat: shape mismatch in -");
        Mat z = x;
        for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] -= y.a_[i];
        return z;
    }
    friend Mat operator*(const Rational& c, const Mat& x) {
        Mat z = x;
        for (auto& v : z.a_) v *= c;
        return z;
    }
    friend bool operator==(const Mat& x, const Mat& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }
    friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!v.is_zero()) return false;
        return true;
    }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Mat: apply size");
        std::vector<Rational> w(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!(*this)(i, j).is_zero()) w[i] += (*this)(i, j) * v[j];
        return w;
    }

    /// Row echelon form in place; returns rank. Optionally records the pivot
    /// column of each pivot row.
    std::size_t echelonize(std::vector<std::size_t>* pivot_cols = nullptr) {
        std::size_t rank = 0;
        for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
            std::size_t piv = rank;
            while (piv < rows_ && (*this)(piv, col).is_zero()) ++piv;
            if (piv == rows_) continue;
            swap_rows(piv, rank);
            Rational inv = Rational(1) / (*this)(rank, col);
            for (std::size_t j = col; j < cols_; ++j) (*this)(rank, j) *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == rank || (*this)(i, col).is_zero()) continue;
                Rational f = (*this)(i, col);
                for (std::size_t j = col; j < cols_; ++j)
                    (*this)(i, j) -= f * (*this)(rank, j);
            }
            if (pivot_cols) pivot_cols->push_back(col);
            ++rank;
        }
        return rank;
    }

    std::size_t rank() const {
        Mat tmp = *this;
        return tmp.echelonize();
    }

    Mat inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("Mat: inverse of non-square");
        Mat aug(rows_, 2 * cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_ + i) = 1;
        }
        if (aug.echelonize() != rows_) throw std::domain_error("Mat: singular");
        Mat inv(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
        return inv;
    }

    /// Basis of the right null space, as columns of the returned matrix.
    Mat kernel() const {
        Mat tmp = *this;
        std::vector<std::size_t> piv;
        std::size_t rank = tmp.echelonize(&piv);
        std::vector<bool> is_piv(cols_, false);
        for (auto c : piv) is_piv[c] = true;
        Mat ker(cols_, cols_ - rank);
        std::size_t k = 0;
        for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
            if (is_piv[free_col]) continue;
            ker(free_col, k) = 1;
            for (std::size_t r = 0; r < rank; ++r)
                ker(piv[r], k) = -tmp(r, free_col);
            ++k;
        }
        return ker;
    }

    /// Solve (*this) * x = b; returns false if inconsistent.
    bool solve(const std::vector<Rational>& b, std::vector<Rational>& x) const {
        if (b.size() != rows_) throw std::invalid_argument("Mat: solve size");
        Mat aug(rows_, cols_ + 1);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
            aug(i, cols_) = b[i];
        }
        std::vector<std::size_t> piv;
        std::size_t rank = aug.echelonize(&piv);
        for (std::size_t r = 0; r < rank; ++r)
            if (piv[r] == cols_) return false;
        x.assign(cols_, Rational(0));
        for (std::size_t r = 0; r < rank; ++r) x[piv[r]] = aug(r, cols_);
        return true;
    }

    friend std::ostream& operator<<(std::ostream& os, const Mat& m) {
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i == 0 ? "[" : " ");
            for (std::size_t j = 0; j < m.cols_; ++j)
                os << (j ? " " : "") << m(i, j);
            os << (i + 1 == m.rows_ ? "]" : "\n");
        }
        return os;
    }

private:
    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<Rational> a_;
};

} // namespace spanmack
