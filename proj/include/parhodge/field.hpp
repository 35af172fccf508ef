#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "parhodge/errors.hpp"

namespace parhodge {

struct FieldCtx;
using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

// F_{p^m} in the power basis 1, u, ..., u^{m-1} with u a root of `modulus`
// (monic irreducible over F_p, coefficients low-to-high, length m+1).
// Elements are coordinate vectors in [0, p)^m.  Immutable once built.
struct FieldCtx {
    std::uint32_t p;
    std::uint32_t m;
    std::vector<std::uint32_t> modulus;

    static FieldCtxPtr make(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus);
    static FieldCtxPtr prime_field(std::uint32_t p); // modulus x

    bool same(const FieldCtx& o) const { return p == o.p && m == o.m && modulus == o.modulus; }

    std::uint64_t order() const; // p^m

    // raw span ops; all spans have length m, residues in [0, p)
    void el_add(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b) const;
    void el_sub(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b) const;
    void el_neg(std::uint32_t* dst, const std::uint32_t* a) const;
    void el_mul(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b) const;
    void el_inv(std::uint32_t* dst, const std::uint32_t* a) const;
    void el_scale(std::uint32_t* dst, const std::uint32_t* a, std::uint32_t c) const; // c in [0,p)
    bool el_is_zero(const std::uint32_t* a) const;
    // reduces a u-polynomial of degree < 2m-1 (span length 2m-1, entries already
    // mod p) by the modulus into dst
    void el_reduce_wide(std::uint32_t* dst, const std::uint32_t* wide) const;

private:
    FieldCtx(std::uint32_t p_, std::uint32_t m_, std::vector<std::uint32_t> mod)
        : p(p_), m(m_), modulus(std::move(mod)) {}
};

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(FieldCtxPtr ctx, std::vector<std::uint32_t> coords);

    static FieldElement zero(const FieldCtxPtr& ctx);
    static FieldElement one(const FieldCtxPtr& ctx);
    static FieldElement generator_u(const FieldCtxPtr& ctx); // the power-basis generator
    // integer reduced mod p as a scalar (handles negatives)
    static FieldElement from_int(const FieldCtxPtr& ctx, std::int64_t v);

    const FieldCtxPtr& ctx() const { return ctx_; }
    const std::vector<std::uint32_t>& coords() const { return c_; }
    bool is_zero() const;
    bool in_prime_field() const; // coords vanish outside the 1-component
    std::uint32_t coord(std::size_t i) const { return c_[i]; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inv() const;
    FieldElement pow(std::uint64_t e) const;
    FieldElement frobenius() const { return pow(ctx_->p); } // a^p

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    // fixed total order on coordinates, most significant first; used wherever
    // a deterministic choice among field elements is needed
    bool operator<(const FieldElement& o) const;

    std::string str() const;

private:
    FieldCtxPtr ctx_;
    std::vector<std::uint32_t> c_;
};

void require_same_ctx(const FieldCtxPtr& a, const FieldCtxPtr& b);
bool is_prime_u32(std::uint32_t v);

} // namespace parhodge
