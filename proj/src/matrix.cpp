#include "trip/matrix.hpp"

namespace trip {

PolyMatrix zeroPolyMatrix(size_t rows, size_t cols, const TablePtr& table) {
    return PolyMatrix(rows, cols, SuperPoly(table));
}

PolyMatrix identityPolyMatrix(size_t n, const TablePtr& table) {
    return PolyMatrix::identityLike(n, SuperPoly::constant(table, Rational(1)),
                                    SuperPoly(table));
}

FnMatrix toFnMatrix(const PolyMatrix& m) {
    FnMatrix out(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) out.at(i, j) = RationalFn(m.at(i, j));
    return out;
}

PolyMatrix toPolyMatrix(const FnMatrix& m) {
    PolyMatrix out(m.rows(), m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            auto p = m.at(i, j).tryToPoly();
            if (!p)
                throw Error("NotPolynomial",
                            "matrix entry is not a polynomial: " + m.at(i, j).str());
            out.at(i, j) = *p;
        }
    return out;
}

bool isZeroMatrix(const PolyMatrix& m) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).isZero()) return false;
    return true;
}

bool equalsFn(const FnMatrix& a, const FnMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a.at(i, j).equals(b.at(i, j))) return false;
    return true;
}

bool isIdentityFn(const FnMatrix& m) {
    if (m.rows() != m.cols()) return false;
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) {
            const RationalFn& e = m.at(i, j);
            RationalFn want = RationalFn::constant(e.table(), Rational(i == j ? 1 : 0));
            if (!e.equals(want)) return false;
        }
    return true;
}

namespace {

bool entryIsEvenCentral(const RationalFn& f) {
    auto gp = f.num().grassmannParity();
    auto fp = f.num().formParity();
    return gp && *gp == 0 && fp && *fp == 0;
}

}  // namespace

FnMatrix invertMatrix(const FnMatrix& m) {
    if (m.rows() != m.cols()) throw Error("ShapeMismatch", "only square matrices invert");
    size_t n = m.rows();
    if (n == 0) return m;
    TablePtr table = m.at(0, 0).table();
    RationalFn zero = RationalFn::constant(table, Rational(0));
    RationalFn one = RationalFn::constant(table, Rational(1));

    FnMatrix a = m;
    FnMatrix inv = FnMatrix::identityLike(n, one, zero);

    for (size_t col = 0; col < n; ++col) {
        // pick an even, form-degree-0, nonzero pivot in this column
        size_t pivot = n;
        bool sawNonzero = false;
        for (size_t r = col; r < n; ++r) {
            if (a.at(r, col).isZero()) continue;
            sawNonzero = true;
            if (entryIsEvenCentral(a.at(r, col))) {
                pivot = r;
                break;
            }
        }
        if (pivot == n) {
            if (sawNonzero)
                throw Error("OddPivot", "no even-parity pivot available in column " +
                                            std::to_string(col));
            throw Error("NotInvertible", "matrix is singular (zero column during elimination)");
        }
        if (pivot != col)
            for (size_t j = 0; j < n; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        RationalFn scale = a.at(col, col).reciprocal();
        for (size_t j = 0; j < n; ++j) {
            a.at(col, j) = scale * a.at(col, j);
            inv.at(col, j) = scale * inv.at(col, j);
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a.at(r, col).isZero()) continue;
            RationalFn factor = a.at(r, col);
            for (size_t j = 0; j < n; ++j) {
                a.at(r, j) = a.at(r, j) - factor * a.at(col, j);
                inv.at(r, j) = inv.at(r, j) - factor * inv.at(col, j);
            }
        }
    }

    if (!isIdentityFn(m * inv) || !isIdentityFn(inv * m))
        throw Error("NotInvertible", "inverse verification failed");
    return inv;
}

Rational determinant(RatMatrix m) {
    if (m.rows() != m.cols()) throw Error("ShapeMismatch", "determinant of non-square matrix");
    size_t n = m.rows();
    Rational det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = n;
        for (size_t r = col; r < n; ++r)
            if (m.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot == n) return Rational(0);
        if (pivot != col) {
            for (size_t j = 0; j < n; ++j) std::swap(m.at(pivot, j), m.at(col, j));
            det = -det;
        }
        det *= m.at(col, col);
        Rational inv = 1 / m.at(col, col);
        for (size_t r = col + 1; r < n; ++r) {
            if (m.at(r, col) == 0) continue;
            Rational f = m.at(r, col) * inv;
            for (size_t j = col; j < n; ++j) m.at(r, j) -= f * m.at(col, j);
        }
    }
    return det;
}

int rank(RatMatrix m) {
    size_t rows = m.rows(), cols = m.cols();
    int rk = 0;
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t pivot = rows;
        for (size_t r = row; r < rows; ++r)
            if (m.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot == rows) continue;
        if (pivot != row)
            for (size_t j = 0; j < cols; ++j) std::swap(m.at(pivot, j), m.at(row, j));
        Rational inv = 1 / m.at(row, col);
        for (size_t r = row + 1; r < rows; ++r) {
            if (m.at(r, col) == 0) continue;
            Rational f = m.at(r, col) * inv;
            for (size_t j = col; j < cols; ++j) m.at(r, j) -= f * m.at(row, j);
        }
        ++rk;
        ++row;
    }
    return rk;
}

RatMatrix invertRatMatrix(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw Error("ShapeMismatch", "only square matrices invert");
    size_t n = m.rows();
    RatMatrix a = m;
    RatMatrix inv = RatMatrix::identityLike(n, Rational(1), Rational(0));
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = n;
        for (size_t r = col; r < n; ++r)
            if (a.at(r, col) != 0) {
                pivot = r;
                break;
            }
        if (pivot == n) throw Error("SingularGroupElement", "matrix is singular");
        if (pivot != col)
            for (size_t j = 0; j < n; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        Rational s = 1 / a.at(col, col);
        for (size_t j = 0; j < n; ++j) {
            a.at(col, j) *= s;
            inv.at(col, j) *= s;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a.at(r, col) == 0) continue;
            Rational f = a.at(r, col);
            for (size_t j = 0; j < n; ++j) {
                a.at(r, j) -= f * a.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

RatMatrix evaluateBody(const PolyMatrix& m, const std::map<VarId, Rational>& point) {
    RatMatrix out(m.rows(), m.cols(), Rational(0));
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j).evaluateBody(point);
    return out;
}

}  // namespace trip
