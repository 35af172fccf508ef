#include "parhodge/selftest.hpp"

#include <algorithm>
#include <ostream>

#include "parhodge/io.hpp"
#include "parhodge/nahc.hpp"
#include "parhodge/rng.hpp"

namespace parhodge {

namespace {

FieldElement random_element(Rng& rng, const FieldCtxPtr& ctx) {
    std::vector<std::uint32_t> co(ctx->m);
    for (auto& x : co)
        x = static_cast<std::uint32_t>(rng.below(ctx->p));
    return FieldElement(ctx, std::move(co));
}

LaurentSeries random_series(Rng& rng, const FieldCtxPtr& ctx, std::int64_t lo, std::int64_t prec) {
    std::vector<FieldElement> c;
    for (std::int64_t e = lo; e < prec; ++e)
        c.push_back(random_element(rng, ctx));
    return LaurentSeries::from_coeffs(ctx, lo, c, prec);
}

MatSeries random_mat(Rng& rng, const FieldCtxPtr& ctx, std::size_t n, std::int64_t lo,
                     std::int64_t prec) {
    std::vector<LaurentSeries> e;
    for (std::size_t k = 0; k < n * n; ++k)
        e.push_back(random_series(rng, ctx, lo, prec));
    return MatSeries(ctx, n, std::move(e));
}

ConstMat random_invertible(Rng& rng, const FieldCtxPtr& ctx, std::size_t n) {
    for (;;) {
        ConstMat a(ctx, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a.set(i, j, random_element(rng, ctx));
        if (!mat_det(a).is_zero())
            return a;
    }
}

GaugeElement random_gauge(Rng& rng, const FieldCtxPtr& ctx, std::size_t n, std::int64_t prec) {
    return GaugeElement::o_valued(MatSeries::from_constant(random_invertible(rng, ctx, n), prec) +
                                  random_mat(rng, ctx, n, 1, prec));
}

FieldCtxPtr pick_ctx(Rng& rng) {
    switch (rng.below(4)) {
    case 0: return FieldCtx::prime_field(2);
    case 1: return FieldCtx::prime_field(3);
    case 2: return FieldCtx::prime_field(5);
    default: return FieldCtx::prime_field(7);
    }
}

std::string serialize_case(const MatSeries& m) {
    Problem p;
    p.ctx = m.ctx();
    p.n = m.n();
    p.precision = m.min_prec();
    p.kind = ObjectKind::connection;
    p.matrix = m;
    return emit_problem(p);
}

struct Recorder {
    SuiteResult r;
    explicit Recorder(std::string name) { r.name = std::move(name); }
    void pass() {
        ++r.cases;
    }
    void check(bool ok, const MatSeries& witness) {
        ++r.cases;
        if (!ok) {
            ++r.failures;
            if (r.first_failure.empty())
                r.first_failure = serialize_case(witness);
        }
    }
};

// the operator oracle: rows of psi are L^p(e_i) - L(e_i) with L(t) = z t' + t A
MatSeries oracle_pcurv(const MatSeries& A) {
    const auto& ctx = A.ctx();
    std::size_t n = A.n();
    const std::uint32_t p = ctx->p;
    std::int64_t N = A.min_prec();
    auto apply_L = [&](const std::vector<LaurentSeries>& t) {
        std::vector<LaurentSeries> out;
        for (std::size_t j = 0; j < n; ++j) {
            LaurentSeries acc = t[j].zderiv();
            for (std::size_t k = 0; k < n; ++k)
                acc = acc + t[k] * A.at(k, j);
            out.push_back(std::move(acc));
        }
        return out;
    };
    MatSeries psi = MatSeries::zeros(ctx, n, N);
    for (std::size_t row = 0; row < n; ++row) {
        std::vector<LaurentSeries> t(n, LaurentSeries::zero(ctx, N));
        t[row] = LaurentSeries::constant(FieldElement::one(ctx), N);
        std::vector<LaurentSeries> once = apply_L(t);
        std::vector<LaurentSeries> cur = once;
        for (std::uint32_t k = 1; k < p; ++k)
            cur = apply_L(cur);
        for (std::size_t j = 0; j < n; ++j)
            psi.at(row, j) = cur[j] - once[j];
    }
    return psi;
}

SuiteResult suite_gauge_group_law(std::uint64_t seed, int cases) {
    Recorder rec("gauge-group-law");
    Rng rng(seed ^ 0x11ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = pick_ctx(rng);
        std::size_t n = 2 + rng.below(2);
        std::int64_t N = 8;
        MatSeries A = random_mat(rng, ctx, n, 0, N);
        GaugeElement g = random_gauge(rng, ctx, n, N);
        GaugeElement h = random_gauge(rng, ctx, n, N);
        MatSeries lhs = gauge_act(g.compose(h), A).B;
        MatSeries rhs = gauge_act(g, gauge_act(h, A).B).B;
        rec.check(equal_on_common_window(lhs, rhs), A);
    }
    return rec.r;
}

SuiteResult suite_pcurv_equivariance(std::uint64_t seed, int cases) {
    Recorder rec("pcurv-equivariance-horizontality");
    Rng rng(seed ^ 0x22ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = pick_ctx(rng);
        std::int64_t N = static_cast<std::int64_t>(ctx->p) + 5;
        TameConnection A = TameConnection::make(random_mat(rng, ctx, 2, 0, N));
        MatSeries psi = p_curvature(A).psi;
        bool ok = is_horizontal(psi, A.A);
        GaugeElement g = random_gauge(rng, ctx, 2, N);
        MatSeries lhs = p_curvature(gauge_act(g, A)).psi;
        ok = ok && equal_on_common_window(lhs, adjoint_act(g, psi));
        rec.check(ok, A.A);
    }
    return rec.r;
}

SuiteResult suite_standard_form(std::uint64_t seed, int cases) {
    Recorder rec("standard-form-certificates");
    Rng rng(seed ^ 0x33ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = pick_ctx(rng);
        std::size_t n = 2 + rng.below(2);
        TameConnection A = TameConnection::make(random_mat(rng, ctx, n, 0, 8));
        StandardFormResult r = standard_form(A);
        bool ok = gauge_act(r.g, A).A == r.B.A;
        ok = ok && eigenspace_certificate(r.B.A);
        ok = ok && r.B.A.coeff_at(0) == A.A.coeff_at(0);
        rec.check(ok, A.A);
    }
    return rec.r;
}

SuiteResult suite_round_trips(std::uint64_t seed, int cases) {
    Recorder rec("round-trips");
    Rng rng(seed ^ 0x44ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = pick_ctx(rng);
        if (t % 2 == 0) {
            // nahc-inv after nahc reproduces the certificate fold
            TameConnection A = TameConnection::make(random_mat(rng, ctx, 2, 0, 10));
            NahcResult r = locsys_to_higgs_tau(A);
            bool ok = replay_certificate(A.A, r);
            TameConnection back = higgs_tau_to_locsys(r.tau, r.phi);
            MatSeries expect = A.A;
            for (const auto& step : r.steps)
                if (step.label == "standard-form" || step.label == "diagonalize-residue")
                    expect = apply_step(expect, step, r.theta);
            ok = ok && equal_on_common_window(back.A, expect);
            rec.check(ok, A.A);
        } else {
            // lift/descend round trip for d in {2,3,4}
            std::int64_t d = 2 + static_cast<std::int64_t>(rng.below(3));
            if (d % ctx->p == 0)
                d = (d == ctx->p) ? d + 1 : d; // keep tame
            if (d % ctx->p == 0) {
                rec.pass();
                continue;
            }
            std::size_t n = 2;
            std::vector<Rational> entries;
            for (std::size_t i = 0; i < n; ++i)
                entries.emplace_back(rng.range(-3, 3), d);
            TameWeight theta = TameWeight::of(entries);
            CoverCtx cov = make_cover(theta, ctx);
            std::vector<LaurentSeries> e;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    std::int64_t bound = (theta.entries[j] - theta.entries[i]).ceil();
                    e.push_back(random_series(rng, ctx, bound, 8));
                }
            MatSeries a(ctx, n, std::move(e));
            MatSeries lifted = lift_connection(a, cov);
            MatSeries back = descend_connection(lifted, cov);
            rec.check(equal_on_common_window(back, a), a);
        }
    }
    return rec.r;
}

SuiteResult suite_membership_dual(std::uint64_t seed, int cases) {
    Recorder rec("membership-dual");
    Rng rng(seed ^ 0x55ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = pick_ctx(rng);
        std::int64_t d = 1 + static_cast<std::int64_t>(rng.below(4));
        while (d % ctx->p == 0)
            ++d;
        std::vector<Rational> entries{Rational(rng.range(-d, d), d), Rational(rng.range(-d, d), d)};
        TameWeight theta = TameWeight::of(entries);
        MatSeries g(ctx, 2, std::vector<LaurentSeries>(4, LaurentSeries::zero(ctx, 6)));
        if (t % 2 == 0) {
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) {
                    std::int64_t bound = (theta.entries[j] - theta.entries[i]).ceil();
                    g.at(i, j) = random_series(rng, ctx, bound, 6);
                }
            g = g + MatSeries::identity(ctx, 2, 6);
        } else {
            g = random_mat(rng, ctx, 2, rng.range(-2, 0), 6);
        }
        GroupMembershipReport a = parahoric_group_check(g, theta);
        GroupMembershipReport b = parahoric_group_check_conjugation(g, theta);
        rec.check(a.member == b.member && a.levi_invertible == b.levi_invertible, g);
    }
    return rec.r;
}

SuiteResult suite_gamma_equivariance(std::uint64_t seed, int cases) {
    Recorder rec("gamma-equivariance");
    Rng rng(seed ^ 0x66ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = pick_ctx(rng);
        std::int64_t d = 2 + static_cast<std::int64_t>(rng.below(3));
        while (d % ctx->p == 0)
            ++d;
        std::vector<Rational> entries{Rational(rng.range(-2, 2), d), Rational(rng.range(-2, 2), d)};
        TameWeight theta = TameWeight::of(entries);
        CoverCtx cov = make_cover(theta, ctx);
        std::vector<LaurentSeries> e;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                std::int64_t bound = (theta.entries[j] - theta.entries[i]).ceil();
                e.push_back(random_series(rng, ctx, bound, 7));
            }
        MatSeries a(ctx, 2, std::move(e));
        rec.check(check_gamma_equivariance(lift_connection(a, cov), cov).ok, a);
    }
    return rec.r;
}

SuiteResult suite_twist_support(std::uint64_t seed, int cases) {
    Recorder rec("twist-support");
    Rng rng(seed ^ 0x77ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = pick_ctx(rng);
        std::int64_t N = static_cast<std::int64_t>(ctx->p) + 6;
        TameConnection A = TameConnection::make(random_mat(rng, ctx, 2, 0, N));
        MatSeries psi = p_curvature(A).psi;
        HitchinInvariants inv = hitchin_invariants(psi);
        bool ok = true;
        for (const auto& c : inv.coefficients)
            ok = ok && c.supported_on_lattice(ctx->p);
        rec.check(ok, A.A);
    }
    return rec.r;
}

SuiteResult suite_pcurv_biconditional(std::uint64_t seed, int cases) {
    Recorder rec("pcurv-zero-biconditional");
    Rng rng(seed ^ 0x88ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = pick_ctx(rng);
        std::int64_t N = static_cast<std::int64_t>(ctx->p) + 4;
        if (t % 2 == 0) {
            ConstMat tau(ctx, 2, 2);
            tau.set(0, 0, FieldElement::from_int(ctx, rng.range(0, ctx->p - 1)));
            tau.set(1, 1, FieldElement::from_int(ctx, rng.range(0, ctx->p - 1)));
            GaugeElement h = random_gauge(rng, ctx, 2, N);
            TameConnection A = gauge_act(h, TameConnection::make(MatSeries::from_constant(tau, N)));
            bool ok = p_curvature(A).psi.is_zero();
            FlatClassification fc = pcurv_zero_classify(A);
            ok = ok && fc.flat;
            ok = ok && equal_on_common_window(gauge_act(fc.g, A.A).B,
                                              MatSeries::from_constant(fc.tau, N));
            ok = ok && locsys_to_higgs_tau(A).phi.phi.is_zero();
            rec.check(ok, A.A);
        } else {
            ConstMat a0(ctx, 2, 2);
            FieldElement c = FieldElement::from_int(ctx, rng.range(0, ctx->p - 1));
            a0.set(0, 0, c);
            a0.set(1, 1, c);
            a0.set(0, 1, FieldElement::one(ctx)); // nilpotent residue component
            GaugeElement h = random_gauge(rng, ctx, 2, N);
            TameConnection A = gauge_act(h, TameConnection::make(MatSeries::from_constant(a0, N)));
            bool ok = !p_curvature(A).psi.is_zero();
            ok = ok && !locsys_to_higgs_tau(A).phi.phi.is_zero();
            rec.check(ok, A.A);
        }
    }
    return rec.r;
}

SuiteResult suite_exhaustive_f2_oracle(std::uint64_t seed, int cases) {
    Recorder rec("exhaustive-f2-oracle");
    auto k2 = FieldCtx::prime_field(2);
    std::int64_t N = 6;
    // all 16 constant 2x2 matrices over F_2
    for (std::uint32_t code = 0; code < 16; ++code) {
        ConstMat a(k2, 2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                a.set(i, j, FieldElement::from_int(k2, (code >> (2 * i + j)) & 1));
        MatSeries m = MatSeries::from_constant(a, N);
        rec.check(p_curvature(TameConnection::make(m)).psi == oracle_pcurv(m), m);
    }
    // random series inputs over F_3 and F_5
    Rng rng(seed ^ 0x99ull);
    for (int t = 0; t < cases; ++t) {
        auto ctx = FieldCtx::prime_field(t % 2 ? 3 : 5);
        std::int64_t NN = static_cast<std::int64_t>(ctx->p) + 5;
        MatSeries m = random_mat(rng, ctx, 2, 0, NN);
        rec.check(p_curvature(TameConnection::make(m)).psi == oracle_pcurv(m), m);
    }
    return rec.r;
}

} // namespace

std::vector<SuiteResult> run_selftest_suites(std::uint64_t seed, int cases) {
    return {
        suite_gauge_group_law(seed, cases),
        suite_pcurv_equivariance(seed, cases),
        suite_standard_form(seed, cases),
        suite_round_trips(seed, cases),
        suite_membership_dual(seed, cases),
        suite_gamma_equivariance(seed, cases),
        suite_twist_support(seed, cases),
        suite_pcurv_biconditional(seed, cases),
        suite_exhaustive_f2_oracle(seed, cases),
    };
}

bool run_selftest(std::uint64_t seed, int cases, std::ostream& out) {
    out << "parhodge selftest seed=" << seed << " cases=" << cases << "\n";
    std::vector<SuiteResult> results = run_selftest_suites(seed, cases);
    bool ok = true;
    for (const auto& r : results) {
        out << (r.failures ? "[fail] " : "[ok]   ") << r.name;
        for (std::size_t pad = r.name.size(); pad < 36; ++pad)
            out << ' ';
        out << " cases=" << r.cases << " failures=" << r.failures << "\n";
        if (r.failures) {
            ok = false;
            out << "first failing case:\n" << r.first_failure;
        }
    }
    out << (ok ? "RESULT: PASS" : "RESULT: FAIL") << " (" << results.size() << " suites)\n";
    return ok;
}

} // namespace parhodge
