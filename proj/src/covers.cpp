#include "parhodge/covers.hpp"

#include <numeric>

#include "parhodge/normalform.hpp"

namespace parhodge {

namespace {

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

void require_membership(const MatSeries& A, const TameWeight& theta) {
    LieMembershipReport rep = parahoric_lie_check(A, theta);
    if (!rep.member) {
        const auto& v = rep.violations.front();
        fail(errc::membership_violation,
             "entry (" + std::to_string(v.i + 1) + "," + std::to_string(v.j + 1) +
                 ") has valuation " + std::to_string(v.val) + " < " + std::to_string(v.bound));
    }
}

} // namespace

CoverCtx make_cover(const TameWeight& theta, const FieldCtxPtr& ctx) {
    CoverCtx cov;
    cov.theta = theta;
    cov.d = theta.denominator();
    cov.base_ctx = ctx;
    const std::uint32_t p = ctx->p;
    if (cov.d % p == 0)
        fail(errc::wild_ramification, "cover degree " + std::to_string(cov.d) +
                                          " is divisible by p = " + std::to_string(p));
    for (const auto& e : theta.entries)
        cov.dtheta.push_back(e.num * (cov.d / e.den));
    // smallest extension with d | p^e - 1, joined with the base degree
    std::uint32_t ord = 1;
    if (cov.d > 1) {
        std::uint64_t pw = p % cov.d;
        ord = 1;
        while (pw != 1 % cov.d) {
            pw = pw * p % cov.d;
            ++ord;
        }
    }
    std::uint32_t m_needed = std::lcm(ctx->m, ord);
    if (m_needed == ctx->m) {
        cov.ctx = ctx;
        cov.emb = Embedding::identity(ctx);
    } else {
        cov.ctx = make_extension_field(p, m_needed);
        cov.emb = Embedding::make(ctx, cov.ctx);
    }
    if (cov.d == 1) {
        cov.zeta = FieldElement::one(cov.ctx);
    } else {
        std::uint64_t q = cov.ctx->order();
        FieldElement base = primitive_element(cov.ctx).pow((q - 1) / static_cast<std::uint64_t>(cov.d));
        // minimal primitive d-th root under the coordinate order
        FieldElement best = base;
        for (std::int64_t j = 2; j < cov.d; ++j) {
            if (std::gcd(j, cov.d) != 1)
                continue;
            FieldElement cand = base.pow(static_cast<std::uint64_t>(j));
            if (cand < best)
                best = cand;
        }
        cov.zeta = best;
    }
    std::size_t n = theta.n();
    cov.rho = ConstMat(cov.ctx, n, n);
    for (std::size_t i = 0; i < n; ++i)
        cov.rho.set(i, i, cov.zeta.pow(static_cast<std::uint64_t>(mod_pos(cov.dtheta[i], cov.d))));
    return cov;
}

MatSeries lift_connection(const MatSeries& A, const CoverCtx& cov) {
    require_membership(A, cov.theta);
    MatSeries base = A.ctx()->same(*cov.ctx) ? A : A.mapped(cov.emb);
    MatSeries up = base.substitute_power(cov.d).conj_by_zpow(cov.dtheta);
    MatSeries B = up.scaled_int(cov.d);
    for (std::size_t i = 0; i < B.n(); ++i) {
        const LaurentSeries& di = B.at(i, i);
        B.at(i, i) = di + LaurentSeries::constant(
                              FieldElement::from_int(cov.ctx, cov.dtheta[i]), di.prec());
    }
    for (std::size_t i = 0; i < B.n(); ++i)
        for (std::size_t j = 0; j < B.n(); ++j)
            if (B.at(i, j).val() < 0)
                fail(errc::pole_escape, "lift produced a pole; membership check is inconsistent");
    return B;
}

MatSeries descend_connection(const MatSeries& B, const CoverCtx& cov) {
    EquivarianceReport eq = check_gamma_equivariance(B, cov);
    if (!eq.ok)
        fail(errc::equivariance_violation,
             "entry (" + std::to_string(eq.i + 1) + "," + std::to_string(eq.j + 1) +
                 ") has a non-equivariant monomial at w^" + std::to_string(eq.exponent));
    MatSeries W = B.ctx()->same(*cov.ctx) ? B : B.mapped(cov.emb);
    for (std::size_t i = 0; i < W.n(); ++i) {
        const LaurentSeries& di = W.at(i, i);
        W.at(i, i) = di - LaurentSeries::constant(
                              FieldElement::from_int(cov.ctx, cov.dtheta[i]), di.prec());
    }
    std::int64_t dinv = 1;
    if (cov.d > 1) {
        const std::uint32_t p = cov.ctx->p;
        std::int64_t dm = mod_pos(cov.d, p);
        while (dinv * dm % p != 1)
            ++dinv;
    }
    std::vector<std::int64_t> neg;
    for (auto v : cov.dtheta)
        neg.push_back(-v);
    MatSeries A = W.scaled_int(dinv).conj_by_zpow(neg).descend_support(cov.d);
    require_membership(A, cov.theta);
    // entries of a descended object usually live in the base field; fall back
    // to the cover field when they genuinely involve zeta
    try {
        return A.sectioned(cov.emb);
    } catch (const Error&) {
        return A;
    }
}

MatSeries lift_higgs(const MatSeries& phi, const CoverCtx& cov) {
    require_membership(phi, cov.theta);
    MatSeries base = phi.ctx()->same(*cov.ctx) ? phi : phi.mapped(cov.emb);
    return base.substitute_power(cov.d).conj_by_zpow(cov.dtheta);
}

MatSeries descend_higgs(const MatSeries& phi_w, const CoverCtx& cov) {
    EquivarianceReport eq = check_gamma_equivariance(phi_w, cov);
    if (!eq.ok)
        fail(errc::equivariance_violation,
             "entry (" + std::to_string(eq.i + 1) + "," + std::to_string(eq.j + 1) +
                 ") has a non-equivariant monomial at w^" + std::to_string(eq.exponent));
    std::vector<std::int64_t> neg;
    for (auto v : cov.dtheta)
        neg.push_back(-v);
    MatSeries up = phi_w.ctx()->same(*cov.ctx) ? phi_w : phi_w.mapped(cov.emb);
    MatSeries phi = up.conj_by_zpow(neg).descend_support(cov.d);
    try {
        return phi.sectioned(cov.emb);
    } catch (const Error&) {
        return phi;
    }
}

EquivarianceReport check_gamma_equivariance(const MatSeries& B, const CoverCtx& cov) {
    EquivarianceReport rep;
    if (cov.d == 1)
        return rep;
    for (std::size_t i = 0; i < B.n(); ++i)
        for (std::size_t j = 0; j < B.n(); ++j) {
            const LaurentSeries& s = B.at(i, j);
            std::int64_t want = mod_pos(cov.dtheta[i] - cov.dtheta[j], cov.d);
            for (std::int64_t e = s.val(); e < s.prec(); ++e) {
                if (mod_pos(e, cov.d) == want)
                    continue;
                if (!s.coeff_at(e).is_zero()) {
                    rep.ok = false;
                    rep.i = i;
                    rep.j = j;
                    rep.exponent = e;
                    return rep;
                }
            }
        }
    return rep;
}

GroupMembershipReport parahoric_group_check(const MatSeries& g, const TameWeight& theta) {
    GroupMembershipReport rep;
    std::size_t n = g.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t bound = (theta.entries[j] - theta.entries[i]).ceil();
            std::int64_t v = g.at(i, j).val();
            if (v < bound) {
                rep.member = false;
                rep.violations.push_back({i, j, v, bound});
            }
        }
    // graded-zero part: entry (i,j) contributes only when theta_j - theta_i is
    // an integer exponent
    ConstMat levi(g.ctx(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational e = theta.entries[j] - theta.entries[i];
            if (!e.is_integer())
                continue;
            const LaurentSeries& s = g.at(i, j);
            if (e.num < s.prec())
                levi.set(i, j, e.num < s.val() ? FieldElement::zero(g.ctx()) : s.coeff_at(e.num));
        }
    rep.levi_invertible = !mat_det(levi).is_zero();
    if (!rep.levi_invertible)
        rep.member = false;
    return rep;
}

GroupMembershipReport parahoric_group_check_conjugation(const MatSeries& g,
                                                        const TameWeight& theta) {
    GroupMembershipReport rep;
    std::int64_t d = theta.denominator();
    std::vector<std::int64_t> dtheta;
    for (const auto& e : theta.entries)
        dtheta.push_back(e.num * (d / e.den));
    MatSeries h = g.substitute_power(d).conj_by_zpow(dtheta);
    std::size_t n = g.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::int64_t v = h.at(i, j).val();
            if (v < 0) {
                rep.member = false;
                // report in downstairs terms
                rep.violations.push_back({i, j, g.at(i, j).val(),
                                          (theta.entries[j] - theta.entries[i]).ceil()});
            }
        }
    if (h.min_prec() < 1)
        fail(errc::precision_exhausted, "conjugation test needs the constant term");
    ConstMat h0(g.ctx(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const LaurentSeries& s = h.at(i, j);
            h0.set(i, j, s.val() > 0 ? FieldElement::zero(g.ctx()) : s.coeff_at(0));
        }
    rep.levi_invertible = !mat_det(h0).is_zero();
    if (!rep.levi_invertible)
        rep.member = false;
    return rep;
}

TameWeight combined_weight(const TameWeight& theta, const ConstMat& tau, std::uint32_t p) {
    if (!theta.is_tame(p))
        fail(errc::invalid_argument, "weight denominator not coprime to p");
    TameWeight theta_tau = choose_theta_tau(tau);
    return (theta + theta_tau).scaled(Rational(1, static_cast<std::int64_t>(p)));
}

} // namespace parhodge
