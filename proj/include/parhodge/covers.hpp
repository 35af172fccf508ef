#pragma once

#include "parhodge/connection.hpp"
#include "parhodge/poly.hpp"
#include "parhodge/rootdata.hpp"

namespace parhodge {

// Cyclic tame cover w^d = z attached to a tame weight: the root of unity, the
// equivariance type rho = zeta^{d theta}, and the field extension needed to
// host zeta.
struct CoverCtx {
    TameWeight theta;
    std::int64_t d = 1;
    FieldCtxPtr base_ctx;   // field the downstairs objects live in
    FieldCtxPtr ctx;        // extension containing zeta (== base_ctx when d | p^m - 1)
    Embedding emb;          // base_ctx -> ctx
    FieldElement zeta;      // primitive d-th root of unity, minimal in the coordinate order
    ConstMat rho;           // diag(zeta^{d theta_i})
    std::vector<std::int64_t> dtheta; // d * theta, integral
};

CoverCtx make_cover(const TameWeight& theta, const FieldCtxPtr& ctx);

// B(w) = d(theta + Ad(w^{d theta}) A(w^d)) dw/w; input in p_theta(O_z)
MatSeries lift_connection(const MatSeries& A, const CoverCtx& cov);

// inverse of lift_connection on Gamma-equivariant inputs
MatSeries descend_connection(const MatSeries& B, const CoverCtx& cov);

// Higgs fields move by bare conjugation and substitution (no derivative term,
// no theta shift)
MatSeries lift_higgs(const MatSeries& phi, const CoverCtx& cov);
MatSeries descend_higgs(const MatSeries& phi_w, const CoverCtx& cov);

struct EquivarianceReport {
    bool ok = true;
    std::size_t i = 0, j = 0;
    std::int64_t exponent = 0; // first failing monomial
};

// coefficient at w^e of entry (i,j) may be nonzero only when
// e = d(theta_i - theta_j) mod d
EquivarianceReport check_gamma_equivariance(const MatSeries& B, const CoverCtx& cov);

struct GroupMembershipReport {
    bool member = true;
    std::vector<LieViolation> violations; // valuation-bound failures
    bool levi_invertible = true;
};

// two provably equivalent tests, cross-checked in the test suite:
// entrywise valuation bounds with invertible graded-zero part, and the
// conjugation criterion h = w^{d theta} g(w^d) w^{-d theta} in G(O_w)
GroupMembershipReport parahoric_group_check(const MatSeries& g, const TameWeight& theta);
GroupMembershipReport parahoric_group_check_conjugation(const MatSeries& g,
                                                        const TameWeight& theta);

// (theta + theta_tau)/p with theta_tau the canonical integral lift of tau
TameWeight combined_weight(const TameWeight& theta, const ConstMat& tau, std::uint32_t p);

} // namespace parhodge
