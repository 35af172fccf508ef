#pragma once

#include <cstdint>
#include <vector>

#include "parhodge/field.hpp"

namespace parhodge {

// Univariate polynomials over F_{p^m}, dense, normalized (no leading zeros).
// Just enough machinery for what the residue decomposition needs: gcd,
// modular powers, radicals, root extraction in a splitting field.
class FPoly {
public:
    FPoly() = default;
    explicit FPoly(FieldCtxPtr ctx) : ctx_(std::move(ctx)) {}
    FPoly(FieldCtxPtr ctx, std::vector<FieldElement> coeffs);

    static FPoly x(const FieldCtxPtr& ctx);
    static FPoly constant(const FieldElement& c);

    const FieldCtxPtr& ctx() const { return ctx_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    const FieldElement& coeff(std::size_t i) const { return c_[i]; }
    const std::vector<FieldElement>& coeffs() const { return c_; }
    FieldElement lead() const { return c_.back(); }

    FPoly operator+(const FPoly& o) const;
    FPoly operator-(const FPoly& o) const;
    FPoly operator*(const FPoly& o) const;
    FPoly scaled(const FieldElement& c) const;
    FPoly monic() const;
    FPoly derivative() const;
    FieldElement eval(const FieldElement& at) const;

    // division with remainder (o nonzero)
    std::pair<FPoly, FPoly> divrem(const FPoly& o) const;
    FPoly operator%(const FPoly& o) const { return divrem(o).second; }
    FPoly operator/(const FPoly& o) const { return divrem(o).first; }

    bool operator==(const FPoly& o) const;

    void normalize();

private:
    FieldCtxPtr ctx_;
    std::vector<FieldElement> c_;
};

FPoly poly_gcd(FPoly a, FPoly b);             // monic gcd
FPoly poly_powmod(FPoly base, std::uint64_t e, const FPoly& mod);
FPoly poly_radical(const FPoly& f);           // squarefree polynomial with the same roots

// smallest e >= 1 such that every root of f lies in F_{q^e}, q = |ctx|;
// returns 0 if e would exceed `cap_e`
std::uint32_t splitting_extension_degree(const FPoly& f, std::uint32_t cap_e);

// all roots of f in its own coefficient field, sorted by the coordinate
// order, with multiplicities; f must split completely (checked)
struct RootList {
    std::vector<FieldElement> roots;
    std::vector<std::uint32_t> multiplicities;
};
RootList roots_in_field(const FPoly& f);

// deterministic search for a monic irreducible of degree M over F_p
std::vector<std::uint32_t> find_irreducible_fp(std::uint32_t p, std::uint32_t M);

// F_{p^m} -> F_{p^M} along the lexicographically least root of the source
// modulus; identity when the contexts coincide
class Embedding {
public:
    Embedding() = default;
    static Embedding identity(const FieldCtxPtr& ctx);
    static Embedding make(const FieldCtxPtr& from, const FieldCtxPtr& to);

    const FieldCtxPtr& from() const { return from_; }
    const FieldCtxPtr& to() const { return to_; }
    bool is_identity() const { return from_.get() == to_.get(); }

    FieldElement apply(const FieldElement& a) const;
    // inverse image; fails(support) if a is outside the embedded subfield
    FieldElement section(const FieldElement& a) const;

private:
    FieldCtxPtr from_, to_;
    std::vector<FieldElement> pow_root_; // images of 1, u, ..., u^{m-1}
};

// field with order p^M, built on the canonical modulus from find_irreducible_fp
FieldCtxPtr make_extension_field(std::uint32_t p, std::uint32_t M);

// multiplicative generator of ctx*, deterministic
FieldElement primitive_element(const FieldCtxPtr& ctx);

} // namespace parhodge
