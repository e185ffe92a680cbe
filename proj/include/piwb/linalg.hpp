#pragma once

#include "piwb/rational.hpp"

#include <Eigen/Dense>

#include <vector>

namespace Eigen {

template <> struct NumTraits<piwb::Rat> : GenericNumTraits<piwb::Rat> {
    typedef piwb::Rat Real;
    typedef piwb::Rat NonInteger;
    typedef piwb::Rat Nested;
    static inline Real epsilon() { return piwb::Rat(0); }
    static inline Real dummy_precision() { return piwb::Rat(0); }
    static inline int digits10() { return 0; }
    enum {
        IsInteger = 0,
        IsSigned = 1,
        IsComplex = 0,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 150,
        MulCost = 100
    };
};

} // namespace Eigen

namespace piwb {

template <typename Scalar>
using MatT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VecT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = MatT<Rat>;
using Vec = VecT<Rat>;

/// Rank over an exact field scalar. Threshold 0 keeps only exact zero pivots.
template <typename Scalar> long rank(const MatT<Scalar> &m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::FullPivLU<MatT<Scalar>> lu(m);
    lu.setThreshold(Scalar(0));
    return lu.rank();
}

/// Basis of the right kernel {x : m x = 0}, as columns.
template <typename Scalar> MatT<Scalar> kernel(const MatT<Scalar> &m) {
    Eigen::FullPivLU<MatT<Scalar>> lu(m);
    lu.setThreshold(Scalar(0));
    if (lu.rank() == m.cols()) return MatT<Scalar>(m.cols(), 0);
    return lu.kernel();
}

/// Does `v` lie in the column span of `basis`?
template <typename Scalar>
bool in_span(const MatT<Scalar> &basis, const VecT<Scalar> &v) {
    if (v.isZero(Scalar(0))) return true;
    if (basis.cols() == 0) return false;
    MatT<Scalar> ext(basis.rows(), basis.cols() + 1);
    ext.leftCols(basis.cols()) = basis;
    ext.col(basis.cols()) = v;
    return rank<Scalar>(ext) == rank<Scalar>(basis);
}

/// Incremental row-space accumulator: keeps an independent subset of the
/// vectors fed to it, in feed order.
template <typename Scalar> class SpanBuilder {
  public:
    explicit SpanBuilder(long dim) : dim_(dim), basis_(dim, 0) {}

    /// Returns true when v enlarged the span.
    bool add(const VecT<Scalar> &v) {
        if (in_span<Scalar>(basis_, v)) return false;
        MatT<Scalar> next(dim_, basis_.cols() + 1);
        next.leftCols(basis_.cols()) = basis_;
        next.col(basis_.cols()) = v;
        basis_ = std::move(next);
        return true;
    }

    long dim() const { return basis_.cols(); }
    const MatT<Scalar> &basis() const { return basis_; }
    bool contains(const VecT<Scalar> &v) const { return in_span<Scalar>(basis_, v); }

  private:
    long dim_;
    MatT<Scalar> basis_;
};

template <typename Scalar>
MatT<Scalar> columns(const std::vector<VecT<Scalar>> &cols, long dim) {
    MatT<Scalar> m(dim, static_cast<long>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) m.col(static_cast<long>(j)) = cols[j];
    return m;
}

/// Characteristic polynomial coefficients of a square matrix by the
/// Faddeev-LeVerrier recurrence (exact over a field of characteristic zero).
/// Returns c so that det(tI - M) = t^d + c[d-1] t^{d-1} + ... + c[0].
template <typename Scalar>
std::vector<Scalar> charpoly(const MatT<Scalar> &m) {
    long d = m.rows();
    std::vector<Scalar> c(static_cast<size_t>(d));
    MatT<Scalar> acc = MatT<Scalar>::Identity(d, d);
    Scalar ck;
    for (long k = 1; k <= d; ++k) {
        acc = m * acc;
        ck = -acc.trace() / Scalar(k);
        c[static_cast<size_t>(d - k)] = ck;
        for (long i = 0; i < d; ++i) acc(i, i) += ck;
    }
    return c;
}

} // namespace piwb
