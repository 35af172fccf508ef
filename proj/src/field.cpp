#include "parhodge/field.hpp"

#include <algorithm>

#include "parhodge/kernels.hpp"

namespace parhodge {

bool is_prime_u32(std::uint32_t v) {
    if (v < 2)
        return false;
    for (std::uint32_t d = 2; d * d <= v; ++d)
        if (v % d == 0)
            return false;
    return true;
}

void require_same_ctx(const FieldCtxPtr& a, const FieldCtxPtr& b) {
    if (a.get() == b.get())
        return;
    if (!a || !b || !a->same(*b))
        fail(errc::ctx_mismatch, "operands from different field contexts");
}

namespace {

// dense polynomial arithmetic over F_p on coefficient vectors, used only for
// context validation (irreducibility of the modulus)
using PolyP = std::vector<std::uint32_t>;

void trim(PolyP& f) {
    while (!f.empty() && f.back() == 0)
        f.pop_back();
}

PolyP mul_mod_f(const PolyP& a, const PolyP& b, const PolyP& f, std::uint32_t p) {
    if (a.empty() || b.empty())
        return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>(
                (r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
    // f monic
    std::size_t deg_f = f.size() - 1;
    for (std::size_t k = r.size(); k-- > deg_f;) {
        std::uint32_t c = r[k];
        if (!c)
            continue;
        r[k] = 0;
        for (std::size_t i = 0; i < deg_f; ++i)
            r[k - deg_f + i] = static_cast<std::uint32_t>(
                (r[k - deg_f + i] + static_cast<std::uint64_t>(c) * (p - f[i] % p)) % p);
    }
    r.resize(deg_f);
    trim(r);
    return r;
}

PolyP pow_mod_f(PolyP base, std::uint64_t e, const PolyP& f, std::uint32_t p) {
    PolyP r{1};
    while (e) {
        if (e & 1)
            r = mul_mod_f(r, base, f, p);
        base = mul_mod_f(base, base, f, p);
        e >>= 1;
    }
    return r;
}

PolyP gcd_poly(PolyP a, PolyP b, std::uint32_t p) {
    trim(a);
    trim(b);
    auto inv_p = [p](std::uint32_t x) {
        std::uint32_t r = 1;
        std::uint32_t e = p - 2;
        std::uint64_t base = x;
        while (e) {
            if (e & 1)
                r = static_cast<std::uint32_t>(r * base % p);
            base = base * base % p;
            e >>= 1;
        }
        return r;
    };
    while (!b.empty()) {
        // a mod b
        std::uint32_t lead_inv = inv_p(b.back());
        while (a.size() >= b.size() && !a.empty()) {
            std::uint32_t c = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(a.back()) * lead_inv % p);
            std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[shift + i] = static_cast<std::uint32_t>(
                    (a[shift + i] + static_cast<std::uint64_t>(c) * (p - b[i]) % p) % p);
            trim(a);
            if (a.empty())
                break;
        }
        std::swap(a, b);
    }
    return a;
}

// Rabin test: x^{p^m} = x mod f and gcd(x^{p^{m/l}} - x, f) = 1 for prime l | m
bool irreducible_over_fp(const PolyP& f, std::uint32_t p) {
    std::size_t m = f.size() - 1;
    if (m == 0)
        return false;
    if (m == 1)
        return true;
    PolyP x{0, 1};
    PolyP r = x;
    std::vector<PolyP> frob(m + 1); // frob[k] = x^{p^k} mod f
    frob[0] = x;
    for (std::size_t k = 1; k <= m; ++k) {
        r = pow_mod_f(r, p, f, p);
        frob[k] = r;
    }
    // x^{p^m} == x
    if (frob[m] != x)
        return false;
    for (std::size_t l = 2; l <= m; ++l) {
        if (m % l != 0)
            continue;
        bool l_prime = true;
        for (std::size_t d = 2; d * d <= l; ++d)
            if (l % d == 0)
                l_prime = false;
        if (!l_prime)
            continue;
        PolyP diff = frob[m / l];
        // diff - x
        if (diff.size() < 2)
            diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        PolyP g = gcd_poly(diff, f, p);
        if (!(g.size() == 1))
            return false;
    }
    return true;
}

} // namespace

FieldCtxPtr FieldCtx::make(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus) {
    if (!is_prime_u32(p))
        fail(errc::invalid_argument, "p = " + std::to_string(p) + " is not prime");
    if (p >= (1u << 15))
        fail(errc::invalid_argument, "p too large for the kernel layer (p < 2^15)");
    if (m < 1)
        fail(errc::invalid_argument, "extension degree must be >= 1");
    if (m > 32)
        fail(errc::extension_cap_exceeded, "extension degree " + std::to_string(m) + " exceeds engine limit 32");
    // p^m must stay below 2^63 so multiplicative orders fit in u64
    long double approx = 1.0L;
    for (std::uint32_t i = 0; i < m; ++i)
        approx *= p;
    if (approx >= 9.2e18L)
        fail(errc::extension_cap_exceeded, "field order p^m overflows the engine's exponent range");
    if (modulus.size() != m + 1)
        fail(errc::invalid_argument, "modulus must have degree m");
    for (auto& c : modulus)
        c %= p;
    if (modulus[m] != 1)
        fail(errc::invalid_argument, "modulus must be monic");
    if (!irreducible_over_fp(modulus, p))
        fail(errc::not_irreducible, "modulus is reducible over F_p");
    return FieldCtxPtr(new FieldCtx(p, m, std::move(modulus)));
}

FieldCtxPtr FieldCtx::prime_field(std::uint32_t p) { return make(p, 1, {0, 1}); }

std::uint64_t FieldCtx::order() const {
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < m; ++i)
        q *= p;
    return q;
}

void FieldCtx::el_add(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b) const {
    kernels::active().add_mod(dst, a, b, m, p);
}

void FieldCtx::el_sub(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b) const {
    kernels::active().sub_mod(dst, a, b, m, p);
}

void FieldCtx::el_neg(std::uint32_t* dst, const std::uint32_t* a) const {
    for (std::uint32_t i = 0; i < m; ++i)
        dst[i] = a[i] ? p - a[i] : 0;
}

void FieldCtx::el_scale(std::uint32_t* dst, const std::uint32_t* a, std::uint32_t c) const {
    kernels::active().scale_mod(dst, a, c, m, p);
}

bool FieldCtx::el_is_zero(const std::uint32_t* a) const {
    for (std::uint32_t i = 0; i < m; ++i)
        if (a[i])
            return false;
    return true;
}

void FieldCtx::el_reduce_wide(std::uint32_t* dst, const std::uint32_t* wide) const {
    if (m == 1) {
        dst[0] = wide[0] % p;
        return;
    }
    std::uint32_t buf[64];
    std::uint32_t len = 2 * m - 1;
    for (std::uint32_t i = 0; i < len; ++i)
        buf[i] = wide[i] % p;
    for (std::uint32_t k = len; k-- > m;) {
        std::uint32_t c = buf[k];
        if (!c)
            continue;
        buf[k] = 0;
        for (std::uint32_t i = 0; i < m; ++i)
            buf[k - m + i] = static_cast<std::uint32_t>(
                (buf[k - m + i] + static_cast<std::uint64_t>(c) * (p - modulus[i] % p)) % p);
    }
    for (std::uint32_t i = 0; i < m; ++i)
        dst[i] = buf[i];
}

void FieldCtx::el_mul(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b) const {
    if (m == 1) {
        dst[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[0]) * b[0] % p);
        return;
    }
    std::uint64_t acc[64] = {0};
    for (std::uint32_t i = 0; i < m; ++i) {
        if (!a[i])
            continue;
        for (std::uint32_t j = 0; j < m; ++j)
            acc[i + j] += static_cast<std::uint64_t>(a[i]) * b[j];
    }
    std::uint32_t wide[64];
    for (std::uint32_t i = 0; i < 2 * m - 1; ++i)
        wide[i] = static_cast<std::uint32_t>(acc[i] % p);
    el_reduce_wide(dst, wide);
}

void FieldCtx::el_inv(std::uint32_t* dst, const std::uint32_t* a) const {
    if (el_is_zero(a))
        fail(errc::division_by_zero, "inverse of zero field element");
    if (m == 1) {
        // Fermat
        std::uint64_t r = 1, base = a[0], e = p - 2;
        while (e) {
            if (e & 1)
                r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        dst[0] = static_cast<std::uint32_t>(r);
        return;
    }
    // extended Euclid in F_p[x] against the modulus
    PolyP r0(modulus.begin(), modulus.end());
    PolyP r1(a, a + m);
    trim(r1);
    PolyP s0{}; // coefficients of "a" track: r = s * a mod modulus
    PolyP s1{1};
    auto inv_p = [this](std::uint32_t x) {
        std::uint64_t r = 1, base = x, e = p - 2;
        while (e) {
            if (e & 1)
                r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return static_cast<std::uint32_t>(r);
    };
    auto sub_scaled = [this](PolyP& f, const PolyP& g, std::uint32_t c, std::size_t shift) {
        if (f.size() < g.size() + shift)
            f.resize(g.size() + shift, 0);
        for (std::size_t i = 0; i < g.size(); ++i)
            f[i + shift] = static_cast<std::uint32_t>(
                (f[i + shift] + static_cast<std::uint64_t>(c) * (p - g[i]) % p) % p);
        trim(f);
    };
    while (!r1.empty() && r1.size() > 1) {
        std::uint32_t lead_inv = inv_p(r1.back());
        while (r0.size() >= r1.size() && !r0.empty()) {
            std::uint32_t c = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(r0.back()) * lead_inv % p);
            std::size_t shift = r0.size() - r1.size();
            sub_scaled(r0, r1, c, shift);
            // s0 -= c * x^shift * s1
            PolyP shifted(shift, 0);
            shifted.insert(shifted.end(), s1.begin(), s1.end());
            sub_scaled(s0, shifted, c, 0);
            if (r0.empty())
                break;
        }
        std::swap(r0, r1);
        std::swap(s0, s1);
    }
    if (r1.empty())
        fail(errc::internal, "element not invertible; modulus not irreducible?");
    std::uint32_t scale = inv_p(r1[0]);
    std::fill(dst, dst + m, 0u);
    for (std::size_t i = 0; i < s1.size() && i < m; ++i)
        dst[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(s1[i]) * scale % p);
}

FieldElement::FieldElement(FieldCtxPtr ctx, std::vector<std::uint32_t> coords)
    : ctx_(std::move(ctx)), c_(std::move(coords)) {
    if (c_.size() != ctx_->m)
        fail(errc::invalid_argument, "coordinate vector has wrong length");
    for (auto& x : c_)
        x %= ctx_->p;
}

FieldElement FieldElement::zero(const FieldCtxPtr& ctx) {
    return FieldElement(ctx, std::vector<std::uint32_t>(ctx->m, 0));
}

FieldElement FieldElement::one(const FieldCtxPtr& ctx) {
    std::vector<std::uint32_t> c(ctx->m, 0);
    c[0] = 1 % ctx->p;
    return FieldElement(ctx, std::move(c));
}

FieldElement FieldElement::generator_u(const FieldCtxPtr& ctx) {
    if (ctx->m < 2)
        fail(errc::invalid_argument, "prime field has no power-basis generator");
    std::vector<std::uint32_t> c(ctx->m, 0);
    c[1] = 1;
    return FieldElement(ctx, std::move(c));
}

FieldElement FieldElement::from_int(const FieldCtxPtr& ctx, std::int64_t v) {
    std::int64_t r = v % static_cast<std::int64_t>(ctx->p);
    if (r < 0)
        r += ctx->p;
    std::vector<std::uint32_t> c(ctx->m, 0);
    c[0] = static_cast<std::uint32_t>(r);
    return FieldElement(ctx, std::move(c));
}

bool FieldElement::is_zero() const { return ctx_->el_is_zero(c_.data()); }

bool FieldElement::in_prime_field() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i])
            return false;
    return true;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    require_same_ctx(ctx_, o.ctx_);
    FieldElement r = *this;
    ctx_->el_add(r.c_.data(), c_.data(), o.c_.data());
    return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    require_same_ctx(ctx_, o.ctx_);
    FieldElement r = *this;
    ctx_->el_sub(r.c_.data(), c_.data(), o.c_.data());
    return r;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    require_same_ctx(ctx_, o.ctx_);
    FieldElement r = *this;
    ctx_->el_mul(r.c_.data(), c_.data(), o.c_.data());
    return r;
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    ctx_->el_neg(r.c_.data(), c_.data());
    return r;
}

FieldElement FieldElement::inv() const {
    FieldElement r = *this;
    ctx_->el_inv(r.c_.data(), c_.data());
    return r;
}

FieldElement FieldElement::pow(std::uint64_t e) const {
    FieldElement r = one(ctx_);
    FieldElement base = *this;
    while (e) {
        if (e & 1)
            r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

bool FieldElement::operator==(const FieldElement& o) const {
    require_same_ctx(ctx_, o.ctx_);
    return c_ == o.c_;
}

bool FieldElement::operator<(const FieldElement& o) const {
    require_same_ctx(ctx_, o.ctx_);
    return c_ < o.c_;
}

std::string FieldElement::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(c_[i]);
    }
    return s + "]";
}

} // namespace parhodge
