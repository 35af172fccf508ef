#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parhodge/poly.hpp"
#include "parhodge/series.hpp"

namespace parhodge {

// Constant matrix over F_{p^m}.  Rectangular shapes appear only inside the
// linear algebra helpers; domain objects are square.
class ConstMat {
public:
    ConstMat() = default;
    ConstMat(FieldCtxPtr ctx, std::size_t rows, std::size_t cols);

    static ConstMat identity(FieldCtxPtr ctx, std::size_t n);
    static ConstMat basis(FieldCtxPtr ctx, std::size_t n, std::size_t i, std::size_t j); // E_ij

    const FieldCtxPtr& ctx() const { return ctx_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    FieldElement at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const FieldElement& v);
    const std::uint32_t* block(std::size_t i, std::size_t j) const {
        return d_.data() + (i * cols_ + j) * ctx_->m;
    }
    std::uint32_t* block(std::size_t i, std::size_t j) {
        return d_.data() + (i * cols_ + j) * ctx_->m;
    }

    ConstMat operator+(const ConstMat& o) const;
    ConstMat operator-(const ConstMat& o) const;
    ConstMat operator*(const ConstMat& o) const;
    ConstMat operator-() const;
    ConstMat scaled(const FieldElement& c) const;
    ConstMat scaled_int(std::int64_t k) const;

    bool is_zero() const;
    bool is_diagonal() const;
    bool operator==(const ConstMat& o) const;
    bool operator!=(const ConstMat& o) const { return !(*this == o); }

    ConstMat mapped(const Embedding& emb) const;  // entrywise embedding
    ConstMat sectioned(const Embedding& emb) const;

    std::string str() const;

private:
    FieldCtxPtr ctx_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint32_t> d_;
};

// exact linear algebra
ConstMat mat_inverse(const ConstMat& a);                  // fails(singular_gauge) if singular
FieldElement mat_det(const ConstMat& a);
std::vector<ConstMat> mat_kernel_basis(const ConstMat& a); // column vectors
// column-echelon basis of the column span, deterministic
std::vector<ConstMat> mat_column_span_basis(const std::vector<ConstMat>& cols);
ConstMat mat_pow(const ConstMat& a, std::uint64_t e);

// characteristic polynomial det(xI - a), coefficients low-to-high
FPoly char_poly(const ConstMat& a);

// n x n matrix of Laurent series sharing one context
class MatSeries {
public:
    MatSeries() = default;
    MatSeries(FieldCtxPtr ctx, std::size_t n, std::vector<LaurentSeries> entries);

    static MatSeries zeros(FieldCtxPtr ctx, std::size_t n, std::int64_t prec);
    static MatSeries identity(FieldCtxPtr ctx, std::size_t n, std::int64_t prec);
    static MatSeries from_constant(const ConstMat& a, std::int64_t prec);

    const FieldCtxPtr& ctx() const { return ctx_; }
    std::size_t n() const { return n_; }
    const LaurentSeries& at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    LaurentSeries& at(std::size_t i, std::size_t j) { return e_[i * n_ + j]; }

    std::int64_t min_prec() const;
    // smallest exponent with a known nonzero entry; min_prec() when all zero
    std::int64_t min_val() const;
    bool is_zero() const;

    MatSeries operator+(const MatSeries& o) const;
    MatSeries operator-(const MatSeries& o) const;
    MatSeries operator*(const MatSeries& o) const;
    MatSeries operator-() const;
    MatSeries scaled(const FieldElement& c) const;
    MatSeries scaled_int(std::int64_t k) const;
    MatSeries zderiv() const;
    MatSeries shifted(std::int64_t delta) const;
    MatSeries truncated(std::int64_t prec) const;
    MatSeries substitute_power(std::int64_t d) const;
    MatSeries descend_support(std::int64_t d) const;
    MatSeries mapped(const Embedding& emb) const;
    // inverse of mapped; fails(support_violation) when an entry leaves the
    // embedded subfield
    MatSeries sectioned(const Embedding& emb) const;

    ConstMat coeff_at(std::int64_t e) const;
    // series inverse; requires entry valuations >= 0 and invertible constant term
    MatSeries inv() const;
    // Laurent inverse via adjugate / determinant
    MatSeries inv_laurent() const;
    // Ad(z^v): entry (i,j) shifted by v_i - v_j
    MatSeries conj_by_zpow(const std::vector<std::int64_t>& v) const;
    ConstMat conj_const(const ConstMat& c) const = delete;

    bool operator==(const MatSeries& o) const;
    bool operator!=(const MatSeries& o) const { return !(*this == o); }

    std::string str() const;

private:
    FieldCtxPtr ctx_;
    std::size_t n_ = 0;
    std::vector<LaurentSeries> e_;
};

MatSeries operator*(const ConstMat& a, const MatSeries& b);
MatSeries operator*(const MatSeries& a, const ConstMat& b);
bool equal_on_common_window(const MatSeries& a, const MatSeries& b);

// determinant of the submatrix on the given index lists (division-free)
LaurentSeries series_minor(const MatSeries& M, const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols);

} // namespace parhodge
