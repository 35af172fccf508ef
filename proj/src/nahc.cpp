#include "parhodge/nahc.hpp"

#include <algorithm>

namespace parhodge {

namespace {

GaugeElement constant_gauge(const ConstMat& c, std::int64_t prec) {
    return GaugeElement::o_valued(MatSeries::from_constant(c, prec));
}

MatSeries into_ctx(const MatSeries& x, const FieldCtxPtr& target) {
    if (x.ctx()->same(*target))
        return x;
    return x.mapped(Embedding::make(x.ctx(), target));
}

void check_output_membership(const MatSeries& phi, const TameWeight& target) {
    LieMembershipReport rep = parahoric_lie_check(phi, target);
    if (!rep.member)
        fail(errc::internal, "pipeline output failed the target-weight membership check");
}

} // namespace

MatSeries apply_step(const MatSeries& x, const PipelineStep& step, const TameWeight& theta) {
    switch (step.kind) {
    case PipelineStep::Kind::cover_lift:
        return lift_connection(x, make_cover(theta, x.ctx()));
    case PipelineStep::Kind::gauge: {
        MatSeries in = into_ctx(x, step.g.mat().ctx());
        return gauge_act(step.g, in).B;
    }
    case PipelineStep::Kind::descend:
        return x.descend_support(step.k);
    }
    fail(errc::internal, "unknown pipeline step");
}

MatSeries replay_steps(const MatSeries& input, const NahcResult& res) {
    MatSeries x = input;
    for (const auto& step : res.steps)
        x = apply_step(x, step, res.theta);
    return x;
}

bool replay_certificate(const MatSeries& input, const NahcResult& res) {
    return replay_steps(input, res) == res.phi.phi;
}

MatSeries invert_certificate(const NahcResult& res) {
    MatSeries x = res.phi.phi;
    for (auto it = res.steps.rbegin(); it != res.steps.rend(); ++it) {
        switch (it->kind) {
        case PipelineStep::Kind::descend:
            x = x.substitute_power(it->k);
            break;
        case PipelineStep::Kind::gauge: {
            GaugeElement gi = it->g.inverse();
            if (!gi.is_z_power() && !x.ctx()->same(*gi.mat().ctx())) {
                // the frame field can be larger than the step's field
                MatSeries up = gi.mat().mapped(Embedding::make(gi.mat().ctx(), x.ctx()));
                gi = gi.k_valued() ? GaugeElement::k_valued_general(std::move(up))
                                   : GaugeElement::o_valued(std::move(up));
            }
            x = gauge_act(gi, x).B;
            break;
        }
        case PipelineStep::Kind::cover_lift: {
            // undo B = d(theta + Ad(w^{d theta}) A(w^d)) over whatever field x
            // carries; support violations surface from the descent
            std::int64_t d = it->k;
            std::vector<std::int64_t> dtheta, neg;
            for (const auto& e : res.theta.entries) {
                dtheta.push_back(e.num * (d / e.den));
                neg.push_back(-dtheta.back());
            }
            for (std::size_t i = 0; i < x.n(); ++i) {
                const LaurentSeries& di = x.at(i, i);
                x.at(i, i) = di - LaurentSeries::constant(
                                      FieldElement::from_int(x.ctx(), dtheta[i]), di.prec());
            }
            std::int64_t dinv = 1;
            const std::uint32_t p = x.ctx()->p;
            while ((dinv * (d % p)) % p != 1)
                ++dinv;
            x = x.scaled_int(dinv).conj_by_zpow(neg).descend_support(d);
            break;
        }
        }
    }
    return x;
}

HiggsField locsys_to_higgs_irr(const TameConnection& A, const DecomposeOptions& opts) {
    StandardFormResult sf = standard_form_irrational(A, opts);
    return HiggsField{sf.B.A.descend_support(A.ctx()->p), TwistTag::frobenius_twist};
}

NahcResult locsys_to_higgs_tau(const TameConnection& A, const DecomposeOptions& opts) {
    const std::uint32_t p = A.ctx()->p;
    StandardFormResult sf = standard_form(A, opts);
    const ResidueDecomposition& rd = sf.decomposition;

    NahcResult res;
    res.ctx = rd.ctx;
    res.theta = TameWeight::zero(A.n());
    res.tau = rd.tau;
    res.theta_tau = choose_theta_tau(rd.tau);
    res.target_weight = res.theta_tau.scaled(Rational(1, p));
    res.d = 1;
    res.zeta = FieldElement::one(rd.ctx);

    res.steps.push_back({PipelineStep::Kind::gauge, "standard-form", sf.g, 1});
    res.steps.push_back({PipelineStep::Kind::gauge, "diagonalize-residue",
                         constant_gauge(rd.conj_inv, sf.B.A.min_prec()), 1});
    std::vector<std::int64_t> neg;
    for (const auto& e : res.theta_tau.entries)
        neg.push_back(-e.num);
    res.steps.push_back({PipelineStep::Kind::gauge, "twist-out-rational",
                         GaugeElement::z_power(rd.ctx, neg, sf.B.A.min_prec()), 1});
    res.steps.push_back(
        {PipelineStep::Kind::descend, "frobenius-descend", res.steps[0].g, static_cast<std::int64_t>(p)});

    // the fold is the pipeline
    MatSeries phi = A.A;
    for (const auto& step : res.steps)
        phi = apply_step(phi, step, res.theta);
    res.phi = HiggsField{std::move(phi), TwistTag::frobenius_twist};
    check_output_membership(res.phi.phi, res.target_weight);
    return res;
}

TameConnection higgs_tau_to_locsys(const ConstMat& tau, const HiggsField& phi,
                                   const DecomposeOptions& opts) {
    if (phi.tag != TwistTag::frobenius_twist)
        fail(errc::invalid_argument, "inverse pipeline expects a Higgs field on the twist");
    require_same_ctx(tau.ctx(), phi.phi.ctx());
    const std::uint32_t p = phi.phi.ctx()->p;
    TameWeight theta_tau = choose_theta_tau(tau);
    TameWeight target = theta_tau.scaled(Rational(1, p));
    LieMembershipReport rep = parahoric_lie_check(phi.phi, target);
    if (!rep.member) {
        const auto& v = rep.violations.front();
        fail(errc::membership_violation,
             "phi entry (" + std::to_string(v.i + 1) + "," + std::to_string(v.j + 1) +
                 ") has valuation " + std::to_string(v.val) + " < " + std::to_string(v.bound));
    }
    if (phi.phi.min_prec() >= 1 && !phi.phi.is_zero()) {
        ResidueDecomposition rd = decompose_residue(phi.phi.coeff_at(0), opts);
        if (!rd.tau.is_zero())
            fail(errc::rational_residue_in_higgs,
                 "Higgs residue has rational part " + rd.tau.str());
    }
    std::vector<std::int64_t> pos;
    for (const auto& e : theta_tau.entries)
        pos.push_back(e.num);
    MatSeries up = phi.phi.substitute_power(p).conj_by_zpow(pos);
    for (std::size_t i = 0; i < up.n(); ++i) {
        const LaurentSeries& di = up.at(i, i);
        up.at(i, i) = di + LaurentSeries::constant(tau.at(i, i), di.prec());
    }
    return TameConnection::make(std::move(up));
}

FlatClassification pcurv_zero_classify(const TameConnection& A, const DecomposeOptions& opts) {
    PCurvature psi = p_curvature(A);
    if (!psi.psi.is_zero())
        return FlatClassification{false, ConstMat(), GaugeElement::z_power(A.ctx(), {}, 1),
                                  std::move(psi.psi)};
    StandardFormResult sf = standard_form(A, opts);
    const ResidueDecomposition& rd = sf.decomposition;
    GaugeElement conj_gauge = constant_gauge(rd.conj_inv, sf.B.A.min_prec());
    MatSeries B2 = gauge_act(conj_gauge, into_ctx(sf.B.A, rd.ctx)).B;
    MatSeries tau_series = MatSeries::from_constant(rd.tau, B2.min_prec());
    if (!(B2 - tau_series).is_zero())
        fail(errc::internal, "flat connection did not reduce to its rational residue");
    GaugeElement g = rd.emb.is_identity()
                         ? conj_gauge.compose(sf.g)
                         : conj_gauge.compose(GaugeElement::o_valued(into_ctx(sf.g.mat(), rd.ctx)));
    return FlatClassification{true, rd.tau, std::move(g), std::move(psi.psi)};
}

NahcResult parahoric_nahc(const MatSeries& A, const TameWeight& theta,
                          const DecomposeOptions& opts) {
    const std::uint32_t p = A.ctx()->p;
    if (!theta.is_tame(p))
        fail(errc::wild_ramification, "weight denominator shares a factor with p");
    if (theta.is_zero())
        return locsys_to_higgs_tau(TameConnection::make(A), opts);

    LieMembershipReport rep = parahoric_lie_check(A, theta);
    if (!rep.member) {
        const auto& v = rep.violations.front();
        fail(errc::membership_violation,
             "entry (" + std::to_string(v.i + 1) + "," + std::to_string(v.j + 1) +
                 ") has valuation " + std::to_string(v.val) + " < " + std::to_string(v.bound));
    }

    CoverCtx cov = make_cover(theta, A.ctx());
    const std::int64_t d = cov.d;

    NahcResult res;
    res.theta = theta;
    res.d = d;
    res.zeta = cov.zeta;

    res.steps.push_back({PipelineStep::Kind::cover_lift, "cover-lift",
                         GaugeElement::z_power(A.ctx(), {}, 1), d});
    MatSeries lifted = apply_step(A, res.steps.back(), theta);

    SolverOutput so = standard_form_solver(lifted);
    res.steps.push_back({PipelineStep::Kind::gauge, "standard-form", so.g, 1});

    EquivarianceReport eq = check_gamma_equivariance(so.B, cov);
    if (!eq.ok)
        fail(errc::equivariance_violation, "standard form lost equivariance at w^" +
                                               std::to_string(eq.exponent));

    DecomposeOptions cover_opts = opts;
    cover_opts.rho = &cov.rho;
    ResidueDecomposition rd = decompose_residue(so.B.coeff_at(0), cover_opts);
    res.ctx = rd.ctx;
    res.steps.push_back({PipelineStep::Kind::gauge, "diagonalize-residue",
                         constant_gauge(rd.conj_inv, so.B.min_prec()), 1});

    // per-column class c and rational part taut determine the integral twist
    // vector v in [0, dp) with v = c (mod d) and v = taut (mod p)
    std::size_t n = A.n();
    ConstMat rho_frame = rd.conj_inv * cov.rho.mapped(rd.emb) * rd.conj;
    if (!rho_frame.is_diagonal())
        fail(errc::internal, "frame lost the diagonal equivariance type");
    FieldElement zeta_big = rd.emb.apply(cov.zeta);
    std::vector<std::int64_t> v(n), cls(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t c = -1;
        FieldElement acc = FieldElement::one(rd.ctx);
        for (std::int64_t t = 0; t < d; ++t) {
            if (acc == rho_frame.at(i, i)) {
                c = t;
                break;
            }
            acc = acc * zeta_big;
        }
        if (c < 0)
            fail(errc::internal, "frame class is not a power of zeta");
        cls[i] = c;
        std::int64_t taut = rd.tau.at(i, i).coord(0);
        std::int64_t vi = c;
        while (vi % static_cast<std::int64_t>(p) != taut)
            vi += d;
        v[i] = vi;
    }
    res.tau = ConstMat(rd.ctx, n, n);
    std::vector<Rational> theta_tau_e, target_e;
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t tt = (v[i] - cls[i]) / d;
        res.tau.set(i, i, FieldElement::from_int(rd.ctx, tt));
        theta_tau_e.emplace_back(tt);
        target_e.push_back(Rational(v[i], d * static_cast<std::int64_t>(p)));
    }
    res.theta_tau = TameWeight::of(std::move(theta_tau_e));
    res.target_weight = TameWeight::of(std::move(target_e));

    std::vector<std::int64_t> neg;
    for (auto x : v)
        neg.push_back(-x);
    res.steps.push_back({PipelineStep::Kind::gauge, "twist-out-rational",
                         GaugeElement::z_power(rd.ctx, neg, so.B.min_prec()), 1});
    res.steps.push_back({PipelineStep::Kind::descend, "cover-descend", res.steps[0].g, d});
    res.steps.push_back({PipelineStep::Kind::descend, "frobenius-descend", res.steps[0].g,
                         static_cast<std::int64_t>(p)});

    MatSeries phi = A;
    for (std::size_t si = 0; si + 2 < res.steps.size(); ++si)
        phi = apply_step(phi, res.steps[si], theta);
    // support check before the two descents, naming the stage
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const LaurentSeries& s = phi.at(i, j);
            std::int64_t bad;
            if (s.val() < 0 || !s.supported_on_lattice(d * static_cast<std::int64_t>(p), &bad))
                fail(errc::support_violation,
                     "twist stage left entry (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + ") off the dp-lattice");
        }
    phi = apply_step(phi, res.steps[res.steps.size() - 2], theta);
    phi = apply_step(phi, res.steps.back(), theta);
    res.phi = HiggsField{std::move(phi), TwistTag::frobenius_twist};
    check_output_membership(res.phi.phi, res.target_weight);
    return res;
}

} // namespace parhodge
