#include "parhodge/connection.hpp"

#include <algorithm>

namespace parhodge {

TameConnection TameConnection::make(MatSeries a) {
    if (a.min_prec() < 1)
        fail(errc::precision_exhausted, "connection needs the residue inside the window");
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t j = 0; j < a.n(); ++j)
            if (a.at(i, j).val() < 0)
                fail(errc::pole_escape, "connection matrix has a pole at entry (" +
                                            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    return TameConnection{std::move(a)};
}

GaugeElement GaugeElement::o_valued(MatSeries g) {
    if (g.min_prec() < 1)
        fail(errc::precision_exhausted, "gauge needs its constant term inside the window");
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (g.at(i, j).val() < 0)
                fail(errc::singular_gauge, "gauge not O-valued and not marked K-valued");
    if (mat_det(g.coeff_at(0)).is_zero())
        fail(errc::singular_gauge, "gauge constant term is singular");
    GaugeElement e;
    e.g_ = std::move(g);
    return e;
}

GaugeElement GaugeElement::z_power(FieldCtxPtr ctx, std::vector<std::int64_t> exps,
                                   std::int64_t prec) {
    GaugeElement e;
    std::size_t n = exps.size();
    e.g_ = MatSeries::zeros(ctx, n, prec);
    for (std::size_t i = 0; i < n; ++i) {
        // the action only reads the exponents; keep the display matrix valid
        // even when an exponent sits at or beyond the working precision
        std::int64_t entry_prec = std::max(prec, exps[i] + 1);
        e.g_.at(i, i) = LaurentSeries::monomial(FieldElement::one(ctx), exps[i], entry_prec);
    }
    e.k_valued_ = true;
    e.exps_ = std::move(exps);
    return e;
}

GaugeElement GaugeElement::k_valued_general(MatSeries g) {
    GaugeElement e;
    e.g_ = std::move(g);
    e.k_valued_ = true;
    return e;
}

GaugeElement GaugeElement::inverse() const {
    if (is_z_power()) {
        std::vector<std::int64_t> neg;
        for (auto v : exps_)
            neg.push_back(-v);
        return z_power(g_.ctx(), std::move(neg), g_.min_prec());
    }
    if (k_valued_)
        return k_valued_general(g_.inv_laurent());
    GaugeElement e;
    e.g_ = g_.inv();
    return e;
}

GaugeElement GaugeElement::compose(const GaugeElement& other) const {
    if (k_valued_ || other.k_valued_)
        fail(errc::invalid_argument, "composition is defined for O-valued gauges");
    GaugeElement e;
    e.g_ = g_ * other.g_;
    return e;
}

GaugeActResult gauge_act(const GaugeElement& g, const MatSeries& A) {
    MatSeries B = [&] {
        if (g.is_z_power()) {
            // diag(z^v) * A = diag(v mod p) + Ad(z^v) A
            MatSeries conj = A.conj_by_zpow(g.exponents());
            for (std::size_t i = 0; i < conj.n(); ++i) {
                const LaurentSeries& di = conj.at(i, i);
                conj.at(i, i) =
                    di + LaurentSeries::constant(
                             FieldElement::from_int(A.ctx(), g.exponents()[i]), di.prec());
            }
            return conj;
        }
        MatSeries ginv = g.k_valued() ? g.mat().inv_laurent() : g.mat().inv();
        return g.mat().zderiv() * ginv + g.mat() * A * ginv;
    }();
    bool regular = true;
    for (std::size_t i = 0; i < B.n() && regular; ++i)
        for (std::size_t j = 0; j < B.n() && regular; ++j)
            if (B.at(i, j).val() < 0)
                regular = false;
    return {std::move(B), regular};
}

TameConnection gauge_act(const GaugeElement& g, const TameConnection& A) {
    GaugeActResult r = gauge_act(g, A.A);
    if (!r.regular)
        fail(errc::pole_escape, "gauge action left the first-order-pole class");
    return TameConnection{std::move(r.B)};
}

MatSeries adjoint_act(const GaugeElement& g, const MatSeries& phi) {
    if (g.is_z_power())
        return phi.conj_by_zpow(g.exponents());
    if (g.k_valued())
        return g.mat() * phi * g.mat().inv_laurent();
    return g.mat() * phi * g.mat().inv();
}

HiggsField adjoint_act(const GaugeElement& g, const HiggsField& phi) {
    return HiggsField{adjoint_act(g, phi.phi), phi.tag};
}

ConstMat residue(const TameConnection& A) { return A.A.coeff_at(0); }

PCurvature p_curvature(const TameConnection& A) {
    const std::uint32_t p = A.ctx()->p;
    if (A.A.min_prec() < static_cast<std::int64_t>(p))
        fail(errc::precision_exhausted, "p-curvature needs precision >= p");
    // right-module recursion: the orientation compatible with the gauge
    // action B = z g' g^{-1} + Ad(g) A (flatness is constant on gauge orbits
    // and psi transforms by Ad(g))
    MatSeries B = A.A;
    for (std::uint32_t k = 1; k < p; ++k)
        B = B.zderiv() + B * A.A;
    return PCurvature{B - A.A};
}

bool is_horizontal(const MatSeries& psi, const MatSeries& A) {
    MatSeries h = psi.zderiv() + psi * A - A * psi;
    return h.is_zero();
}

HitchinInvariants hitchin_invariants(const MatSeries& M) {
    std::size_t n = M.n();
    HitchinInvariants out;
    out.coefficients.assign(n, LaurentSeries::zero(M.ctx(), M.min_prec()));
    // c_k = sum of principal k x k minors
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ull << i))
                idx.push_back(i);
        LaurentSeries d = series_minor(M, idx, idx);
        auto& c = out.coefficients[idx.size() - 1];
        c = c + d;
    }
    return out;
}

ConstMat artin_schreier(const ConstMat& s) {
    if (s.rows() != s.cols() || !s.is_diagonal())
        fail(errc::non_diagonal_input, "Artin-Schreier map expects a diagonal matrix");
    ConstMat r(s.ctx(), s.rows(), s.cols());
    for (std::size_t i = 0; i < s.rows(); ++i) {
        FieldElement x = s.at(i, i);
        r.set(i, i, x.frobenius() - x);
    }
    return r;
}

} // namespace parhodge
