#include "parhodge/series.hpp"

#include <algorithm>

#include "parhodge/kernels.hpp"

namespace parhodge {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0)))
        --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

} // namespace

void LaurentSeries::normalize() {
    const std::uint32_t m = ctx_->m;
    std::size_t lead = 0, blocks = c_.size() / m;
    while (lead < blocks && ctx_->el_is_zero(c_.data() + lead * m))
        ++lead;
    if (lead == blocks) {
        c_.clear();
        val_ = prec_;
        return;
    }
    if (lead) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead * m));
        val_ += static_cast<std::int64_t>(lead);
    }
}

LaurentSeries LaurentSeries::zero(FieldCtxPtr ctx, std::int64_t prec) {
    LaurentSeries s;
    s.ctx_ = std::move(ctx);
    s.val_ = prec;
    s.prec_ = prec;
    return s;
}

LaurentSeries LaurentSeries::constant(const FieldElement& c, std::int64_t prec) {
    return monomial(c, 0, prec);
}

LaurentSeries LaurentSeries::monomial(const FieldElement& c, std::int64_t exp, std::int64_t prec) {
    if (exp >= prec)
        fail(errc::precision_exhausted, "monomial exponent at or beyond precision");
    LaurentSeries s;
    s.ctx_ = c.ctx();
    s.val_ = exp;
    s.prec_ = prec;
    s.c_.assign(static_cast<std::size_t>(prec - exp) * s.ctx_->m, 0);
    std::copy(c.coords().begin(), c.coords().end(), s.c_.begin());
    s.normalize();
    return s;
}

LaurentSeries LaurentSeries::from_coeffs(FieldCtxPtr ctx, std::int64_t val,
                                         const std::vector<FieldElement>& coeffs,
                                         std::int64_t prec) {
    if (prec == INT64_MIN)
        prec = val + static_cast<std::int64_t>(coeffs.size());
    if (prec < val + static_cast<std::int64_t>(coeffs.size()))
        fail(errc::invalid_argument, "more coefficients than the precision window holds");
    LaurentSeries s;
    s.ctx_ = std::move(ctx);
    s.val_ = val;
    s.prec_ = prec;
    s.c_.assign(static_cast<std::size_t>(prec - val) * s.ctx_->m, 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        require_same_ctx(s.ctx_, coeffs[i].ctx());
        std::copy(coeffs[i].coords().begin(), coeffs[i].coords().end(),
                  s.c_.begin() + static_cast<std::ptrdiff_t>(i * s.ctx_->m));
    }
    s.normalize();
    return s;
}

FieldElement LaurentSeries::coeff_at(std::int64_t e) const {
    if (e >= prec_)
        fail(errc::precision_exhausted,
             "coefficient of z^" + std::to_string(e) + " beyond precision " + std::to_string(prec_));
    const std::uint32_t* b = block_at(e);
    if (!b)
        return FieldElement::zero(ctx_);
    return FieldElement(ctx_, std::vector<std::uint32_t>(b, b + ctx_->m));
}

const std::uint32_t* LaurentSeries::block_at(std::int64_t e) const {
    if (c_.empty() || e < val_ || e >= prec_)
        return nullptr;
    return c_.data() + static_cast<std::size_t>(e - val_) * ctx_->m;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    require_same_ctx(ctx_, o.ctx_);
    const std::uint32_t m = ctx_->m;
    std::int64_t prec = std::min(prec_, o.prec_);
    std::int64_t lo = std::min(std::min(val_, o.val_), prec);
    if (lo >= prec)
        return zero(ctx_, prec);
    LaurentSeries r;
    r.ctx_ = ctx_;
    r.val_ = lo;
    r.prec_ = prec;
    r.c_.assign(static_cast<std::size_t>(prec - lo) * m, 0);
    auto blit = [&](const LaurentSeries& s, bool second) {
        if (s.c_.empty())
            return;
        std::int64_t from = s.val_, to = std::min(s.prec_, prec);
        if (from >= to)
            return;
        const std::uint32_t* src = s.c_.data();
        std::uint32_t* dst = r.c_.data() + static_cast<std::size_t>(from - lo) * m;
        std::size_t len = static_cast<std::size_t>(to - from) * m;
        if (!second)
            std::copy(src, src + len, dst);
        else
            kernels::active().add_mod(dst, dst, src, len, ctx_->p);
    };
    blit(*this, false);
    blit(o, true);
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries r = *this;
    const std::uint32_t p = ctx_->p;
    for (auto& x : r.c_)
        x = x ? p - x : 0;
    return r;
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const { return *this + (-o); }

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    require_same_ctx(ctx_, o.ctx_);
    const std::uint32_t m = ctx_->m;
    const std::uint32_t p = ctx_->p;
    std::int64_t prec = std::min(val_ + o.prec_, o.val_ + prec_);
    if (c_.empty() || o.c_.empty())
        return zero(ctx_, prec);
    std::int64_t lo = val_ + o.val_;
    std::int64_t lout = prec - lo;
    if (lout <= 0)
        fail(errc::precision_exhausted, "product precision window is empty");
    const std::int64_t la = prec_ - val_, lb = o.prec_ - o.val_;
    const auto& K = kernels::active();
    LaurentSeries r;
    r.ctx_ = ctx_;
    r.val_ = lo;
    r.prec_ = prec;
    r.c_.assign(static_cast<std::size_t>(lout) * m, 0);
    // chunked accumulation keeps the unreduced sums below 2^32 (slots carry at
    // most p-1 after each reduction)
    std::uint64_t per = static_cast<std::uint64_t>(p - 1) * (p - 1);
    std::size_t chunk = per ? static_cast<std::size_t>((0xFFFFFFFFull - p) / per) : SIZE_MAX;
    if (m == 1) {
        std::vector<std::uint32_t> acc(static_cast<std::size_t>(lout), 0);
        std::size_t since = 0;
        for (std::int64_t i = 0; i < std::min(la, lout); ++i) {
            if (c_[static_cast<std::size_t>(i)])
                K.axpy_acc(acc.data() + i, o.c_.data(), c_[static_cast<std::size_t>(i)],
                           static_cast<std::size_t>(std::min(lb, lout - i)));
            if (++since >= chunk) {
                K.reduce_mod(acc.data(), acc.size(), p);
                since = 0;
            }
        }
        K.reduce_mod(acc.data(), acc.size(), p);
        r.c_ = std::move(acc);
    } else {
        // pad each m-block to stride 2m-1 so z- and u-convolutions do not mix
        const std::uint32_t s = 2 * m - 1;
        auto pad = [&](const std::vector<std::uint32_t>& src, std::int64_t blocks) {
            std::vector<std::uint32_t> out(static_cast<std::size_t>(blocks) * s, 0);
            for (std::int64_t b = 0; b < blocks; ++b)
                std::copy(src.begin() + static_cast<std::ptrdiff_t>(b * m),
                          src.begin() + static_cast<std::ptrdiff_t>(b * m + m),
                          out.begin() + static_cast<std::ptrdiff_t>(b * s));
            return out;
        };
        std::vector<std::uint32_t> ap = pad(c_, la), bp = pad(o.c_, lb);
        std::size_t fout = static_cast<std::size_t>(lout - 1) * s + (2 * m - 1);
        std::vector<std::uint32_t> acc(fout, 0);
        std::size_t since = 0;
        for (std::size_t u = 0; u < ap.size() && u < fout; ++u) {
            if (ap[u])
                K.axpy_acc(acc.data() + u, bp.data(), ap[u], std::min(bp.size(), fout - u));
            if (++since >= chunk) {
                K.reduce_mod(acc.data(), acc.size(), p);
                since = 0;
            }
        }
        K.reduce_mod(acc.data(), acc.size(), p);
        for (std::int64_t b = 0; b < lout; ++b)
            ctx_->el_reduce_wide(r.c_.data() + static_cast<std::size_t>(b) * m,
                                 acc.data() + static_cast<std::size_t>(b) * s);
    }
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::inv() const {
    if (c_.empty())
        fail(errc::division_by_zero, "inverse of a series with no known nonzero term");
    const std::uint32_t m = ctx_->m;
    const std::int64_t L = prec_ - val_;
    LaurentSeries r;
    r.ctx_ = ctx_;
    r.val_ = -val_;
    r.prec_ = -val_ + L;
    r.c_.assign(static_cast<std::size_t>(L) * m, 0);
    std::vector<std::uint32_t> lead_inv(m);
    ctx_->el_inv(lead_inv.data(), c_.data());
    std::copy(lead_inv.begin(), lead_inv.end(), r.c_.begin());
    std::vector<std::uint32_t> t(m), sum(m), prod(m);
    for (std::int64_t k = 1; k < L; ++k) {
        std::fill(sum.begin(), sum.end(), 0u);
        for (std::int64_t i = 1; i <= k; ++i) {
            const std::uint32_t* ui = c_.data() + static_cast<std::size_t>(i) * m;
            if (ctx_->el_is_zero(ui))
                continue;
            ctx_->el_mul(prod.data(), ui, r.c_.data() + static_cast<std::size_t>(k - i) * m);
            ctx_->el_add(sum.data(), sum.data(), prod.data());
        }
        ctx_->el_mul(t.data(), lead_inv.data(), sum.data());
        ctx_->el_neg(r.c_.data() + static_cast<std::size_t>(k) * m, t.data());
    }
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::scaled(const FieldElement& c) const {
    require_same_ctx(ctx_, c.ctx());
    if (c_.empty() || c.is_zero())
        return zero(ctx_, prec_);
    LaurentSeries r;
    r.ctx_ = ctx_;
    r.val_ = val_;
    r.prec_ = prec_;
    r.c_.assign(c_.size(), 0);
    const std::uint32_t m = ctx_->m;
    for (std::size_t b = 0; b * m < c_.size(); ++b)
        ctx_->el_mul(r.c_.data() + b * m, c_.data() + b * m, c.coords().data());
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::scaled_int(std::int64_t k) const {
    return scaled(FieldElement::from_int(ctx_, k));
}

LaurentSeries LaurentSeries::shifted(std::int64_t delta) const {
    LaurentSeries r = *this;
    r.val_ += delta;
    r.prec_ += delta;
    return r;
}

LaurentSeries LaurentSeries::truncated(std::int64_t new_prec) const {
    if (new_prec > prec_)
        fail(errc::precision_exhausted, "cannot extend precision by truncation");
    LaurentSeries r;
    r.ctx_ = ctx_;
    r.prec_ = new_prec;
    if (c_.empty() || val_ >= new_prec) {
        r.val_ = new_prec;
        return r;
    }
    r.val_ = val_;
    r.c_.assign(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(
                                static_cast<std::size_t>(new_prec - val_) * ctx_->m));
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::zderiv() const {
    LaurentSeries r = *this;
    const std::uint32_t m = ctx_->m;
    for (std::int64_t b = 0; b * m < static_cast<std::int64_t>(c_.size()); ++b) {
        std::int64_t e = val_ + b;
        std::int64_t red = e % static_cast<std::int64_t>(ctx_->p);
        if (red < 0)
            red += ctx_->p;
        ctx_->el_scale(r.c_.data() + static_cast<std::size_t>(b) * m,
                       c_.data() + static_cast<std::size_t>(b) * m,
                       static_cast<std::uint32_t>(red));
    }
    r.normalize();
    return r;
}

LaurentSeries LaurentSeries::substitute_power(std::int64_t d) const {
    if (d < 1)
        fail(errc::invalid_argument, "substitution degree must be positive");
    if (d == 1)
        return *this;
    const std::uint32_t m = ctx_->m;
    LaurentSeries r;
    r.ctx_ = ctx_;
    r.prec_ = d * (prec_ - 1) + 1;
    if (c_.empty()) {
        r.val_ = r.prec_;
        return r;
    }
    r.val_ = d * val_;
    std::int64_t blocks = prec_ - val_;
    r.c_.assign(static_cast<std::size_t>(d * (blocks - 1) + 1) * m, 0);
    for (std::int64_t b = 0; b < blocks; ++b)
        std::copy(c_.begin() + static_cast<std::ptrdiff_t>(b * m),
                  c_.begin() + static_cast<std::ptrdiff_t>(b * m + m),
                  r.c_.begin() + static_cast<std::ptrdiff_t>(d * b * m));
    r.normalize();
    return r;
}

bool LaurentSeries::supported_on_lattice(std::int64_t d, std::int64_t* offending) const {
    const std::uint32_t m = ctx_->m;
    for (std::int64_t b = 0; b * m < static_cast<std::int64_t>(c_.size()); ++b) {
        std::int64_t e = val_ + b;
        if (e % d != 0 && !ctx_->el_is_zero(c_.data() + static_cast<std::size_t>(b) * m)) {
            if (offending)
                *offending = e;
            return false;
        }
    }
    return true;
}

LaurentSeries LaurentSeries::descend_support(std::int64_t d) const {
    if (d < 1)
        fail(errc::invalid_argument, "descent degree must be positive");
    if (d == 1)
        return *this;
    std::int64_t bad;
    if (!supported_on_lattice(d, &bad))
        fail(errc::support_violation, "nonzero coefficient at exponent " + std::to_string(bad) +
                                          " not on the " + std::to_string(d) + "-lattice");
    const std::uint32_t m = ctx_->m;
    LaurentSeries r;
    r.ctx_ = ctx_;
    r.prec_ = ceil_div(prec_, d);
    if (c_.empty()) {
        r.val_ = r.prec_;
        return r;
    }
    std::int64_t lo = ceil_div(val_, d); // first lattice point in window
    std::int64_t cnt = r.prec_ - lo;
    r.val_ = lo;
    if (cnt <= 0) {
        r.val_ = r.prec_;
        return r;
    }
    r.c_.assign(static_cast<std::size_t>(cnt) * m, 0);
    for (std::int64_t k = 0; k < cnt; ++k) {
        std::int64_t e = (lo + k) * d;
        const std::uint32_t* b = block_at(e);
        if (b)
            std::copy(b, b + m, r.c_.begin() + static_cast<std::ptrdiff_t>(k * m));
    }
    r.normalize();
    return r;
}

bool LaurentSeries::operator==(const LaurentSeries& o) const {
    if (!ctx_ || !o.ctx_)
        return ctx_.get() == o.ctx_.get();
    require_same_ctx(ctx_, o.ctx_);
    return val_ == o.val_ && prec_ == o.prec_ && c_ == o.c_;
}

bool equal_on_common_window(const LaurentSeries& a, const LaurentSeries& b) {
    std::int64_t prec = std::min(a.prec(), b.prec());
    return a.truncated(prec) == b.truncated(prec);
}

std::string LaurentSeries::str() const {
    if (c_.empty())
        return "O(z^" + std::to_string(prec_) + ")";
    std::string s;
    const std::uint32_t m = ctx_->m;
    for (std::int64_t b = 0; b * m < static_cast<std::int64_t>(c_.size()); ++b) {
        const std::uint32_t* blk = c_.data() + static_cast<std::size_t>(b) * m;
        if (ctx_->el_is_zero(blk))
            continue;
        if (!s.empty())
            s += " + ";
        s += FieldElement(ctx_, std::vector<std::uint32_t>(blk, blk + m)).str();
        s += "*z^" + std::to_string(val_ + b);
    }
    return s + " + O(z^" + std::to_string(prec_) + ")";
}

} // namespace parhodge
