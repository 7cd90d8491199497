#ifndef TRIP_MATRIX_HPP
#define TRIP_MATRIX_HPP

#include <functional>
#include <vector>

#include "trip/error.hpp"
#include "trip/ratfn.hpp"

namespace trip {

// dense matrix over an exact coefficient type (Rational, SuperPoly, RationalFn)
template <class T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identityLike(size_t n, const T& one, const T& zero) {
        Matrix m(n, n, zero);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = one;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    T& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const T& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    Matrix operator+(const Matrix& o) const {
        Matrix out(rows_, cols_, data_.empty() ? T{} : data_[0]);
        for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + o.data_[k];
        return out;
    }

    Matrix operator-(const Matrix& o) const {
        Matrix out(rows_, cols_, data_.empty() ? T{} : data_[0]);
        for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - o.data_[k];
        return out;
    }

    // entry products taken in row-factor-then-column-factor order, which is
    // the contraction order used everywhere for graded entries
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw Error("ShapeMismatch", "matrix product shape mismatch");
        Matrix out(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < o.cols_; ++j) {
                T acc{};
                bool firstTerm = true;
                for (size_t k = 0; k < cols_; ++k) {
                    T prod = at(i, k) * o.at(k, j);
                    acc = firstTerm ? prod : acc + prod;
                    firstTerm = false;
                }
                out.at(i, j) = acc;
            }
        return out;
    }

    Matrix map(const std::function<T(const T&)>& f) const {
        Matrix out = *this;
        for (auto& x : out.data_) x = f(x);
        return out;
    }

    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
        return out;
    }

  private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using RatMatrix = Matrix<Rational>;
using PolyMatrix = Matrix<SuperPoly>;
using FnMatrix = Matrix<RationalFn>;

PolyMatrix zeroPolyMatrix(size_t rows, size_t cols, const TablePtr& table);
PolyMatrix identityPolyMatrix(size_t n, const TablePtr& table);
FnMatrix toFnMatrix(const PolyMatrix& m);
// convert entrywise; throws NotPolynomial when an entry has a true denominator
PolyMatrix toPolyMatrix(const FnMatrix& m);

bool isZeroMatrix(const PolyMatrix& m);
bool equalsFn(const FnMatrix& a, const FnMatrix& b);
bool isIdentityFn(const FnMatrix& m);

// Gauss-Jordan over the rational-function field. Pivots must be even
// form-degree-0 nonzero entries; verified postcondition M M^-1 = M^-1 M = Id.
// Throws NotInvertible / OddPivot.
FnMatrix invertMatrix(const FnMatrix& m);

// determinant and rank of a numeric matrix over Q
Rational determinant(RatMatrix m);
int rank(RatMatrix m);
RatMatrix invertRatMatrix(const RatMatrix& m);

RatMatrix evaluateBody(const PolyMatrix& m, const std::map<VarId, Rational>& point);

}  // namespace trip

#endif
