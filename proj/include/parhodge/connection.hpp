#pragma once

#include "parhodge/matrix.hpp"
#include "parhodge/rootdata.hpp"

namespace parhodge {

// d + A dz/z with A of nonnegative valuation (first-order pole only).
struct TameConnection {
    MatSeries A;

    static TameConnection make(MatSeries a); // validates the valuation
    std::size_t n() const { return A.n(); }
    const FieldCtxPtr& ctx() const { return A.ctx(); }
};

enum class TwistTag { disc, frobenius_twist };

// A dz/z as a Higgs field, either on the disc or (after descent) on the
// Frobenius twist with coordinate z' = z^p.
struct HiggsField {
    MatSeries phi;
    TwistTag tag = TwistTag::disc;
};

// Element of G(O) (constant term invertible), or an explicitly flagged
// K-valued diagonal z-power conjugator.  Ordinary pipelines reject K-valued
// gauges; the twist steps construct them deliberately.
class GaugeElement {
public:
    static GaugeElement o_valued(MatSeries g); // checks val >= 0 and g(0) invertible
    static GaugeElement z_power(FieldCtxPtr ctx, std::vector<std::int64_t> exps,
                                std::int64_t prec);
    // arbitrary invertible K-valued matrix (descended parahoric gauges)
    static GaugeElement k_valued_general(MatSeries g);

    bool k_valued() const { return k_valued_; }
    bool is_z_power() const { return k_valued_ && !exps_.empty(); }
    const MatSeries& mat() const { return g_; }
    const std::vector<std::int64_t>& exponents() const { return exps_; }
    std::size_t n() const { return g_.n(); }

    GaugeElement inverse() const;
    // composition (this after other), O-valued only
    GaugeElement compose(const GaugeElement& other) const;

private:
    GaugeElement() = default;
    MatSeries g_;
    bool k_valued_ = false;
    std::vector<std::int64_t> exps_; // set for z-power gauges
};

// g * A = dg g^{-1} + Ad(g) A, computed as zderiv(g) g^{-1} + g A g^{-1}.
// K-valued z-power gauges act by exponent shifts plus the diagonal derivative
// term; if the result acquires a pole it is returned with regular = false
// rather than silently.
struct GaugeActResult {
    MatSeries B;
    bool regular; // true when val >= 0 entrywise
};
GaugeActResult gauge_act(const GaugeElement& g, const MatSeries& A);
TameConnection gauge_act(const GaugeElement& g, const TameConnection& A);

// Ad(g) phi, no derivative term
HiggsField adjoint_act(const GaugeElement& g, const HiggsField& phi);
MatSeries adjoint_act(const GaugeElement& g, const MatSeries& phi);

// coefficient of z^0
ConstMat residue(const TameConnection& A);

struct PCurvature {
    MatSeries psi;
};

// psi = B_p - A from the linear recursion B_1 = A, B_{k+1} = z B_k' + B_k A;
// requires precision >= p.  psi(g * A) = Ad(g) psi(A) and psi vanishes on the
// whole gauge orbit of a flat connection.
PCurvature p_curvature(const TameConnection& A);

// horizontality z d(psi) + [psi, A] = 0, checked exactly on the known window
bool is_horizontal(const MatSeries& psi, const MatSeries& A);

// characteristic-polynomial coefficients c_1..c_n as series (c_k = sum of
// principal k x k minors)
struct HitchinInvariants {
    std::vector<LaurentSeries> coefficients;
};
HitchinInvariants hitchin_invariants(const MatSeries& M);

// entrywise x -> x^p - x on a diagonal constant matrix
ConstMat artin_schreier(const ConstMat& s);

} // namespace parhodge
