#pragma once

#include <doctest.h>

#include "parhodge/connection.hpp"
#include "parhodge/matrix.hpp"
#include "parhodge/rng.hpp"

namespace pht {

using namespace parhodge;

inline FieldCtxPtr f_p(std::uint32_t p) { return FieldCtx::prime_field(p); }

// F_9 with modulus x^2 + 2x + 2, the field pinned by the worked examples
inline FieldCtxPtr f9() { return FieldCtx::make(3, 2, {2, 2, 1}); }

inline FieldElement fe(const FieldCtxPtr& ctx, std::int64_t v) {
    return FieldElement::from_int(ctx, v);
}

inline FieldElement gen_u(const FieldCtxPtr& ctx) { return FieldElement::generator_u(ctx); }

inline LaurentSeries mono(const FieldCtxPtr& ctx, std::int64_t c, std::int64_t e,
                          std::int64_t prec) {
    return LaurentSeries::monomial(fe(ctx, c), e, prec);
}

inline FieldElement random_element(Rng& rng, const FieldCtxPtr& ctx) {
    std::vector<std::uint32_t> co(ctx->m);
    for (auto& x : co)
        x = static_cast<std::uint32_t>(rng.below(ctx->p));
    return FieldElement(ctx, std::move(co));
}

inline LaurentSeries random_series(Rng& rng, const FieldCtxPtr& ctx, std::int64_t val_lo,
                                   std::int64_t prec) {
    std::vector<FieldElement> coeffs;
    for (std::int64_t e = val_lo; e < prec; ++e)
        coeffs.push_back(random_element(rng, ctx));
    return LaurentSeries::from_coeffs(ctx, val_lo, coeffs, prec);
}

inline ConstMat random_const(Rng& rng, const FieldCtxPtr& ctx, std::size_t n) {
    ConstMat a(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a.set(i, j, random_element(rng, ctx));
    return a;
}

inline ConstMat random_invertible(Rng& rng, const FieldCtxPtr& ctx, std::size_t n) {
    for (;;) {
        ConstMat a = random_const(rng, ctx, n);
        if (!mat_det(a).is_zero())
            return a;
    }
}

inline MatSeries random_mat_series(Rng& rng, const FieldCtxPtr& ctx, std::size_t n,
                                   std::int64_t val_lo, std::int64_t prec) {
    std::vector<LaurentSeries> e;
    for (std::size_t k = 0; k < n * n; ++k)
        e.push_back(random_series(rng, ctx, val_lo, prec));
    return MatSeries(ctx, n, std::move(e));
}

inline TameConnection random_connection(Rng& rng, const FieldCtxPtr& ctx, std::size_t n,
                                        std::int64_t prec) {
    return TameConnection::make(random_mat_series(rng, ctx, n, 0, prec));
}

// random element of G(O): invertible constant times I + (positive-valuation)
inline GaugeElement random_gauge(Rng& rng, const FieldCtxPtr& ctx, std::size_t n,
                                 std::int64_t prec) {
    MatSeries g = MatSeries::from_constant(random_invertible(rng, ctx, n), prec);
    MatSeries tail = random_mat_series(rng, ctx, n, 1, prec);
    return GaugeElement::o_valued(g + tail);
}

} // namespace pht
