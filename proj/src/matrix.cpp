#include "parhodge/matrix.hpp"

#include <algorithm>

namespace parhodge {

ConstMat::ConstMat(FieldCtxPtr ctx, std::size_t rows, std::size_t cols)
    : ctx_(std::move(ctx)), rows_(rows), cols_(cols), d_(rows * cols * ctx_->m, 0) {}

ConstMat ConstMat::identity(FieldCtxPtr ctx, std::size_t n) {
    ConstMat a(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i)
        a.set(i, i, FieldElement::one(ctx));
    return a;
}

ConstMat ConstMat::basis(FieldCtxPtr ctx, std::size_t n, std::size_t i, std::size_t j) {
    ConstMat a(ctx, n, n);
    a.set(i, j, FieldElement::one(ctx));
    return a;
}

FieldElement ConstMat::at(std::size_t i, std::size_t j) const {
    const std::uint32_t* b = block(i, j);
    return FieldElement(ctx_, std::vector<std::uint32_t>(b, b + ctx_->m));
}

void ConstMat::set(std::size_t i, std::size_t j, const FieldElement& v) {
    require_same_ctx(ctx_, v.ctx());
    std::copy(v.coords().begin(), v.coords().end(), block(i, j));
}

ConstMat ConstMat::operator+(const ConstMat& o) const {
    require_same_ctx(ctx_, o.ctx_);
    ConstMat r(ctx_, rows_, cols_);
    for (std::size_t k = 0; k < d_.size(); k += ctx_->m)
        ctx_->el_add(r.d_.data() + k, d_.data() + k, o.d_.data() + k);
    return r;
}

ConstMat ConstMat::operator-(const ConstMat& o) const {
    require_same_ctx(ctx_, o.ctx_);
    ConstMat r(ctx_, rows_, cols_);
    for (std::size_t k = 0; k < d_.size(); k += ctx_->m)
        ctx_->el_sub(r.d_.data() + k, d_.data() + k, o.d_.data() + k);
    return r;
}

ConstMat ConstMat::operator*(const ConstMat& o) const {
    require_same_ctx(ctx_, o.ctx_);
    if (cols_ != o.rows_)
        fail(errc::invalid_argument, "matrix shape mismatch");
    ConstMat r(ctx_, rows_, o.cols_);
    std::vector<std::uint32_t> prod(ctx_->m);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const std::uint32_t* aik = block(i, k);
            if (ctx_->el_is_zero(aik))
                continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                ctx_->el_mul(prod.data(), aik, o.block(k, j));
                ctx_->el_add(r.block(i, j), r.block(i, j), prod.data());
            }
        }
    return r;
}

ConstMat ConstMat::operator-() const {
    ConstMat r(ctx_, rows_, cols_);
    for (std::size_t k = 0; k < d_.size(); k += ctx_->m)
        ctx_->el_neg(r.d_.data() + k, d_.data() + k);
    return r;
}

ConstMat ConstMat::scaled(const FieldElement& c) const {
    require_same_ctx(ctx_, c.ctx());
    ConstMat r(ctx_, rows_, cols_);
    for (std::size_t k = 0; k < d_.size(); k += ctx_->m)
        ctx_->el_mul(r.d_.data() + k, d_.data() + k, c.coords().data());
    return r;
}

ConstMat ConstMat::scaled_int(std::int64_t k) const {
    return scaled(FieldElement::from_int(ctx_, k));
}

bool ConstMat::is_zero() const {
    for (auto v : d_)
        if (v)
            return false;
    return true;
}

bool ConstMat::is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (i != j && !ctx_->el_is_zero(block(i, j)))
                return false;
    return true;
}

bool ConstMat::operator==(const ConstMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && ctx_->same(*o.ctx_) && d_ == o.d_;
}

ConstMat ConstMat::mapped(const Embedding& emb) const {
    if (emb.is_identity())
        return *this;
    ConstMat r(emb.to(), rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            r.set(i, j, emb.apply(at(i, j)));
    return r;
}

ConstMat ConstMat::sectioned(const Embedding& emb) const {
    if (emb.is_identity())
        return *this;
    ConstMat r(emb.from(), rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            r.set(i, j, emb.section(at(i, j)));
    return r;
}

std::string ConstMat::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        s += i ? "; " : "";
        for (std::size_t j = 0; j < cols_; ++j)
            s += (j ? " " : "") + at(i, j).str();
    }
    return s + "]";
}

namespace {

// Gauss-Jordan on [a | rhs]; returns rank and leaves pivots normalized.
struct Echelon {
    ConstMat m;
    std::vector<std::size_t> pivot_cols;
};

Echelon rref(ConstMat a) {
    const auto ctx = a.ctx();
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
        std::size_t pr = rank;
        while (pr < a.rows() && ctx->el_is_zero(a.block(pr, c)))
            ++pr;
        if (pr == a.rows())
            continue;
        if (pr != rank)
            for (std::size_t k = 0; k < a.cols(); ++k) {
                FieldElement t = a.at(rank, k);
                a.set(rank, k, a.at(pr, k));
                a.set(pr, k, t);
            }
        FieldElement inv = a.at(rank, c).inv();
        for (std::size_t k = 0; k < a.cols(); ++k)
            a.set(rank, k, a.at(rank, k) * inv);
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == rank)
                continue;
            FieldElement f = a.at(r, c);
            if (f.is_zero())
                continue;
            for (std::size_t k = 0; k < a.cols(); ++k)
                a.set(r, k, a.at(r, k) - f * a.at(rank, k));
        }
        pivots.push_back(c);
        ++rank;
    }
    return {std::move(a), std::move(pivots)};
}

} // namespace

ConstMat mat_inverse(const ConstMat& a) {
    if (a.rows() != a.cols())
        fail(errc::invalid_argument, "inverse of a non-square matrix");
    std::size_t n = a.rows();
    ConstMat aug(a.ctx(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug.set(i, j, a.at(i, j));
        aug.set(i, n + i, FieldElement::one(a.ctx()));
    }
    Echelon e = rref(std::move(aug));
    if (e.pivot_cols.size() != n || e.pivot_cols.back() != n - 1)
        fail(errc::singular_gauge, "matrix is singular");
    ConstMat r(a.ctx(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            r.set(i, j, e.m.at(i, n + j));
    return r;
}

FieldElement mat_det(const ConstMat& a) {
    if (a.rows() != a.cols())
        fail(errc::invalid_argument, "determinant of a non-square matrix");
    ConstMat w = a;
    const auto ctx = a.ctx();
    std::size_t n = w.rows();
    FieldElement det = FieldElement::one(ctx);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pr = c;
        while (pr < n && ctx->el_is_zero(w.block(pr, c)))
            ++pr;
        if (pr == n)
            return FieldElement::zero(ctx);
        if (pr != c) {
            for (std::size_t k = 0; k < n; ++k) {
                FieldElement t = w.at(c, k);
                w.set(c, k, w.at(pr, k));
                w.set(pr, k, t);
            }
            det = -det;
        }
        FieldElement piv = w.at(c, c);
        det = det * piv;
        FieldElement inv = piv.inv();
        for (std::size_t r = c + 1; r < n; ++r) {
            FieldElement f = w.at(r, c) * inv;
            if (f.is_zero())
                continue;
            for (std::size_t k = c; k < n; ++k)
                w.set(r, k, w.at(r, k) - f * w.at(c, k));
        }
    }
    return det;
}

std::vector<ConstMat> mat_kernel_basis(const ConstMat& a) {
    Echelon e = rref(a);
    const auto ctx = a.ctx();
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : e.pivot_cols)
        is_pivot[c] = true;
    std::vector<ConstMat> basis;
    for (std::size_t fc = 0; fc < a.cols(); ++fc) {
        if (is_pivot[fc])
            continue;
        ConstMat v(ctx, a.cols(), 1);
        v.set(fc, 0, FieldElement::one(ctx));
        for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
            v.set(e.pivot_cols[r], 0, -e.m.at(r, fc));
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<ConstMat> mat_column_span_basis(const std::vector<ConstMat>& cols) {
    if (cols.empty())
        return {};
    const auto ctx = cols[0].ctx();
    std::size_t dim = cols[0].rows();
    ConstMat stacked(ctx, dim, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i)
            stacked.set(i, j, cols[j].at(i, 0));
    Echelon e = rref(stacked);
    std::vector<ConstMat> basis;
    for (auto c : e.pivot_cols)
        basis.push_back(cols[c]);
    return basis;
}

ConstMat mat_pow(const ConstMat& a, std::uint64_t e) {
    ConstMat r = ConstMat::identity(a.ctx(), a.rows());
    ConstMat base = a;
    while (e) {
        if (e & 1)
            r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

FPoly char_poly(const ConstMat& a) {
    // det(xI - a) by cofactor expansion over F_q[x]; ranks here are small
    std::size_t n = a.rows();
    const auto ctx = a.ctx();
    std::vector<FPoly> entries(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<FieldElement> c{-a.at(i, j)};
            if (i == j)
                c.push_back(FieldElement::one(ctx));
            entries[i * n + j] = FPoly(ctx, std::move(c));
        }
    std::vector<std::size_t> cols(n);
    for (std::size_t j = 0; j < n; ++j)
        cols[j] = j;
    // recursive expansion along the first remaining row
    auto det = [&](auto&& self, std::size_t row, std::vector<std::size_t> use) -> FPoly {
        if (use.empty())
            return FPoly::constant(FieldElement::one(ctx));
        FPoly acc(ctx);
        for (std::size_t k = 0; k < use.size(); ++k) {
            const FPoly& piv = entries[row * n + use[k]];
            if (piv.is_zero())
                continue;
            std::vector<std::size_t> rest;
            for (std::size_t t = 0; t < use.size(); ++t)
                if (t != k)
                    rest.push_back(use[t]);
            FPoly sub = self(self, row + 1, std::move(rest));
            FPoly term = piv * sub;
            acc = (k % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };
    return det(det, 0, cols);
}

MatSeries::MatSeries(FieldCtxPtr ctx, std::size_t n, std::vector<LaurentSeries> entries)
    : ctx_(std::move(ctx)), n_(n), e_(std::move(entries)) {
    if (e_.size() != n_ * n_)
        fail(errc::invalid_argument, "matrix series needs n^2 entries");
    for (const auto& s : e_)
        require_same_ctx(ctx_, s.ctx());
}

MatSeries MatSeries::zeros(FieldCtxPtr ctx, std::size_t n, std::int64_t prec) {
    std::vector<LaurentSeries> e(n * n, LaurentSeries::zero(ctx, prec));
    return MatSeries(std::move(ctx), n, std::move(e));
}

MatSeries MatSeries::identity(FieldCtxPtr ctx, std::size_t n, std::int64_t prec) {
    MatSeries a = zeros(ctx, n, prec);
    for (std::size_t i = 0; i < n; ++i)
        a.at(i, i) = LaurentSeries::constant(FieldElement::one(ctx), prec);
    return a;
}

MatSeries MatSeries::from_constant(const ConstMat& c, std::int64_t prec) {
    MatSeries a = zeros(c.ctx(), c.rows(), prec);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            a.at(i, j) = LaurentSeries::constant(c.at(i, j), prec);
    return a;
}

std::int64_t MatSeries::min_prec() const {
    std::int64_t p = INT64_MAX;
    for (const auto& s : e_)
        p = std::min(p, s.prec());
    return p;
}

std::int64_t MatSeries::min_val() const {
    std::int64_t v = INT64_MAX;
    for (const auto& s : e_)
        v = std::min(v, s.val());
    return v;
}

bool MatSeries::is_zero() const {
    for (const auto& s : e_)
        if (!s.is_zero())
            return false;
    return true;
}

MatSeries MatSeries::operator+(const MatSeries& o) const {
    require_same_ctx(ctx_, o.ctx_);
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (std::size_t k = 0; k < e_.size(); ++k)
        e.push_back(e_[k] + o.e_[k]);
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::operator-(const MatSeries& o) const {
    require_same_ctx(ctx_, o.ctx_);
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (std::size_t k = 0; k < e_.size(); ++k)
        e.push_back(e_[k] - o.e_[k]);
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::operator*(const MatSeries& o) const {
    require_same_ctx(ctx_, o.ctx_);
    if (n_ != o.n_)
        fail(errc::invalid_argument, "matrix series shape mismatch");
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            LaurentSeries acc = at(i, 0) * o.at(0, j);
            for (std::size_t k = 1; k < n_; ++k)
                acc = acc + at(i, k) * o.at(k, j);
            e.push_back(std::move(acc));
        }
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::operator-() const {
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_)
        e.push_back(-s);
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::scaled(const FieldElement& c) const {
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_)
        e.push_back(s.scaled(c));
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::scaled_int(std::int64_t k) const {
    return scaled(FieldElement::from_int(ctx_, k));
}

MatSeries MatSeries::zderiv() const {
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_)
        e.push_back(s.zderiv());
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::shifted(std::int64_t delta) const {
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_)
        e.push_back(s.shifted(delta));
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::truncated(std::int64_t prec) const {
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_)
        e.push_back(s.truncated(prec));
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::substitute_power(std::int64_t d) const {
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_)
        e.push_back(s.substitute_power(d));
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::descend_support(std::int64_t d) const {
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_)
        e.push_back(s.descend_support(d));
    return MatSeries(ctx_, n_, std::move(e));
}

MatSeries MatSeries::mapped(const Embedding& emb) const {
    if (emb.is_identity())
        return *this;
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_) {
        std::vector<FieldElement> coeffs;
        for (std::int64_t x = s.val(); x < s.prec(); ++x)
            coeffs.push_back(emb.apply(s.coeff_at(x)));
        e.push_back(LaurentSeries::from_coeffs(emb.to(), s.val(), coeffs, s.prec()));
    }
    return MatSeries(emb.to(), n_, std::move(e));
}

MatSeries MatSeries::sectioned(const Embedding& emb) const {
    if (emb.is_identity())
        return *this;
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (const auto& s : e_) {
        std::vector<FieldElement> coeffs;
        for (std::int64_t x = s.val(); x < s.prec(); ++x)
            coeffs.push_back(emb.section(s.coeff_at(x)));
        e.push_back(LaurentSeries::from_coeffs(emb.from(), s.val(), coeffs, s.prec()));
    }
    return MatSeries(emb.from(), n_, std::move(e));
}

ConstMat MatSeries::coeff_at(std::int64_t x) const {
    ConstMat c(ctx_, n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            c.set(i, j, at(i, j).coeff_at(x));
    return c;
}

MatSeries MatSeries::inv() const {
    std::int64_t prec = min_prec();
    if (prec <= 0)
        fail(errc::precision_exhausted, "series inverse needs positive precision");
    for (const auto& s : e_)
        if (!s.is_zero() && s.val() < 0)
            fail(errc::singular_gauge, "series inverse requires nonnegative valuations");
    ConstMat g0 = coeff_at(0);
    ConstMat h0 = mat_inverse(g0); // fails(singular_gauge) when not invertible
    // H_k = -H_0 * sum_{i=1..k} G_i H_{k-i}
    std::vector<ConstMat> G, H;
    G.push_back(g0);
    for (std::int64_t x = 1; x < prec; ++x)
        G.push_back(coeff_at(x));
    H.push_back(h0);
    for (std::int64_t k = 1; k < prec; ++k) {
        ConstMat sum(ctx_, n_, n_);
        for (std::int64_t i = 1; i <= k; ++i)
            sum = sum + G[static_cast<std::size_t>(i)] * H[static_cast<std::size_t>(k - i)];
        H.push_back(-(h0 * sum));
    }
    std::vector<LaurentSeries> e;
    e.reserve(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            std::vector<FieldElement> coeffs;
            coeffs.reserve(static_cast<std::size_t>(prec));
            for (std::int64_t k = 0; k < prec; ++k)
                coeffs.push_back(H[static_cast<std::size_t>(k)].at(i, j));
            e.push_back(LaurentSeries::from_coeffs(ctx_, 0, coeffs, prec));
        }
    return MatSeries(ctx_, n_, std::move(e));
}

LaurentSeries series_minor(const MatSeries& M, const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols) {
    if (rows.empty())
        return LaurentSeries::constant(FieldElement::one(M.ctx()), M.min_prec());
    if (rows.size() == 1)
        return M.at(rows[0], cols[0]);
    LaurentSeries acc = LaurentSeries::zero(M.ctx(), M.min_prec());
    std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const LaurentSeries& piv = M.at(rows[0], cols[k]);
        if (piv.is_zero())
            continue;
        std::vector<std::size_t> sub_cols;
        for (std::size_t t = 0; t < cols.size(); ++t)
            if (t != k)
                sub_cols.push_back(cols[t]);
        LaurentSeries term = piv * series_minor(M, sub_rows, sub_cols);
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

MatSeries MatSeries::inv_laurent() const {
    std::vector<std::size_t> all(n_);
    for (std::size_t i = 0; i < n_; ++i)
        all[i] = i;
    LaurentSeries det = series_minor(*this, all, all);
    if (det.is_zero())
        fail(errc::singular_gauge, "Laurent matrix has vanishing determinant");
    LaurentSeries det_inv = det.inv();
    MatSeries adj = zeros(ctx_, n_, min_prec());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            std::vector<std::size_t> rr, cc;
            for (std::size_t k = 0; k < n_; ++k) {
                if (k != j)
                    rr.push_back(k);
                if (k != i)
                    cc.push_back(k);
            }
            LaurentSeries m = n_ == 1 ? LaurentSeries::constant(FieldElement::one(ctx_), min_prec())
                                      : series_minor(*this, rr, cc);
            adj.at(i, j) = ((i + j) % 2 == 0) ? m : -m;
        }
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            adj.at(i, j) = adj.at(i, j) * det_inv;
    return adj;
}

MatSeries MatSeries::conj_by_zpow(const std::vector<std::int64_t>& v) const {
    if (v.size() != n_)
        fail(errc::invalid_argument, "conjugation exponent vector has wrong length");
    std::vector<LaurentSeries> e;
    e.reserve(e_.size());
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            e.push_back(at(i, j).shifted(v[i] - v[j]));
    return MatSeries(ctx_, n_, std::move(e));
}

bool MatSeries::operator==(const MatSeries& o) const {
    if (n_ != o.n_ || !ctx_->same(*o.ctx_))
        return false;
    for (std::size_t k = 0; k < e_.size(); ++k)
        if (!(e_[k] == o.e_[k]))
            return false;
    return true;
}

std::string MatSeries::str() const {
    std::string s;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            if (at(i, j).is_zero())
                continue;
            s += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " +
                 at(i, j).str() + "\n";
        }
    return s.empty() ? "0\n" : s;
}

MatSeries operator*(const ConstMat& a, const MatSeries& b) {
    return MatSeries::from_constant(a, b.min_prec()) * b;
}

MatSeries operator*(const MatSeries& a, const ConstMat& b) {
    return a * MatSeries::from_constant(b, a.min_prec());
}

bool equal_on_common_window(const MatSeries& a, const MatSeries& b) {
    if (a.n() != b.n())
        return false;
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t j = 0; j < a.n(); ++j)
            if (!equal_on_common_window(a.at(i, j), b.at(i, j)))
                return false;
    return true;
}

} // namespace parhodge
