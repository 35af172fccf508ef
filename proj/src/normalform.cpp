#include "parhodge/normalform.hpp"

#include <algorithm>
#include <cstdlib>

#include "parhodge/covers.hpp"

namespace parhodge {

std::uint32_t default_max_extension_degree() {
    static std::uint32_t cap = [] {
        if (const char* env = std::getenv("PARHODGE_MAX_M")) {
            long v = std::strtol(env, nullptr, 10);
            if (v >= 1 && v <= 32)
                return static_cast<std::uint32_t>(v);
        }
        return 12u;
    }();
    return cap;
}

namespace {

// kernel vectors of pw confined to the coordinate set `coords`
std::vector<ConstMat> kernel_in_coords(const ConstMat& pw, const std::vector<std::size_t>& coords) {
    const auto& ctx = pw.ctx();
    std::size_t n = pw.rows();
    ConstMat sub(ctx, n, coords.size());
    for (std::size_t c = 0; c < coords.size(); ++c)
        for (std::size_t r = 0; r < n; ++r)
            sub.set(r, c, pw.at(r, coords[c]));
    std::vector<ConstMat> small = mat_kernel_basis(sub);
    std::vector<ConstMat> out;
    for (const auto& v : small) {
        ConstMat full(ctx, n, 1);
        for (std::size_t c = 0; c < coords.size(); ++c)
            full.set(coords[c], 0, v.at(c, 0));
        out.push_back(std::move(full));
    }
    return out;
}

} // namespace

JordanDecomposition jordan_decompose(const ConstMat& a, const DecomposeOptions& opts) {
    if (a.rows() != a.cols())
        fail(errc::invalid_argument, "Jordan decomposition of a non-square matrix");
    const auto ctx0 = a.ctx();
    std::size_t n = a.rows();
    FPoly chi = char_poly(a);
    std::uint32_t cap_e = opts.max_abs_degree / ctx0->m;
    if (cap_e == 0)
        fail(errc::extension_cap_exceeded,
             "base field degree already exceeds the extension cap " +
                 std::to_string(opts.max_abs_degree));
    std::uint32_t e = splitting_extension_degree(chi, cap_e);
    if (e == 0)
        fail(errc::extension_cap_exceeded,
             "splitting field would exceed absolute degree " + std::to_string(opts.max_abs_degree));

    JordanDecomposition jd;
    if (e == 1) {
        jd.ctx = ctx0;
        jd.emb = Embedding::identity(ctx0);
    } else {
        jd.ctx = make_extension_field(ctx0->p, ctx0->m * e);
        jd.emb = Embedding::make(ctx0, jd.ctx);
    }
    jd.a = a.mapped(jd.emb);
    RootList rl = roots_in_field(char_poly(jd.a));

    std::optional<ConstMat> rho;
    if (opts.rho) {
        if (!opts.rho->is_diagonal())
            fail(errc::non_diagonal_input, "rho constraint must be diagonal");
        rho = opts.rho->ctx()->same(*jd.ctx) ? *opts.rho : opts.rho->mapped(jd.emb);
    }

    std::vector<ConstMat> columns;
    jd.eigenvalues.clear();
    for (std::size_t ei = 0; ei < rl.roots.size(); ++ei) {
        const FieldElement& lam = rl.roots[ei];
        ConstMat shifted = jd.a;
        for (std::size_t i = 0; i < n; ++i)
            shifted.set(i, i, shifted.at(i, i) - lam);
        ConstMat pw = mat_pow(shifted, n);
        std::vector<ConstMat> basis;
        if (rho) {
            // one batch of columns per rho-eigenvalue, in coordinate order of
            // the eigenvalue; keeps the conjugated equivariance type diagonal
            std::vector<FieldElement> classes;
            for (std::size_t i = 0; i < n; ++i) {
                FieldElement v = rho->at(i, i);
                if (std::find(classes.begin(), classes.end(), v) == classes.end())
                    classes.push_back(v);
            }
            std::sort(classes.begin(), classes.end());
            for (const auto& cl : classes) {
                std::vector<std::size_t> coords;
                for (std::size_t i = 0; i < n; ++i)
                    if (rho->at(i, i) == cl)
                        coords.push_back(i);
                for (auto& v : kernel_in_coords(pw, coords))
                    basis.push_back(std::move(v));
            }
        } else {
            basis = mat_kernel_basis(pw);
        }
        if (basis.size() != rl.multiplicities[ei])
            fail(errc::internal, "generalized eigenspace dimension mismatch");
        for (auto& v : basis) {
            columns.push_back(std::move(v));
            jd.eigenvalues.push_back(lam);
        }
    }
    if (columns.size() != n)
        fail(errc::internal, "eigenbasis does not span");
    jd.conj = ConstMat(jd.ctx, n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
            jd.conj.set(r, c, columns[c].at(r, 0));
    jd.conj_inv = mat_inverse(jd.conj);

    ConstMat lam_diag(jd.ctx, n, n);
    for (std::size_t c = 0; c < n; ++c)
        lam_diag.set(c, c, jd.eigenvalues[c]);
    jd.s = jd.conj * lam_diag * jd.conj_inv;
    jd.nil = jd.a - jd.s;
    if (!(jd.s * jd.nil == jd.nil * jd.s) || !mat_pow(jd.nil, n).is_zero())
        fail(errc::internal, "Jordan decomposition certificate failed");
    return jd;
}

RationalSplit rational_split(const JordanDecomposition& jd) {
    std::size_t n = jd.eigenvalues.size();
    RationalSplit rs{ConstMat(jd.ctx, n, n), ConstMat(jd.ctx, n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        const FieldElement& lam = jd.eigenvalues[i];
        FieldElement tau = FieldElement::from_int(jd.ctx, lam.coord(0));
        rs.tau.set(i, i, tau);
        rs.sigma.set(i, i, lam - tau);
    }
    return rs;
}

ResidueDecomposition decompose_residue(const ConstMat& a0, const DecomposeOptions& opts) {
    JordanDecomposition jd = jordan_decompose(a0, opts);
    RationalSplit rs = rational_split(jd);
    ResidueDecomposition rd;
    rd.ctx = jd.ctx;
    rd.emb = jd.emb;
    rd.tau = rs.tau;
    rd.sigma = rs.sigma;
    rd.nil = jd.conj_inv * jd.nil * jd.conj;
    rd.conj = jd.conj;
    rd.conj_inv = jd.conj_inv;
    rd.eigenvalues = jd.eigenvalues;
    ConstMat frame = rd.conj_inv * jd.a * rd.conj;
    if (!(frame == rd.tau + rd.sigma + rd.nil))
        fail(errc::internal, "residue decomposition does not reassemble");
    return rd;
}

GaugeElement build_gauge_step(const MatSeries& X, const Rational& k, const TameWeight& theta) {
    if (k <= Rational(0))
        fail(errc::depth_violation, "gauge step needs positive depth");
    if (filtration_depth(X, theta) < k)
        fail(errc::depth_violation, "X is shallower than the requested level");
    return GaugeElement::o_valued(MatSeries::identity(X.ctx(), X.n(), X.min_prec()) + X);
}

namespace {

// ad(b0) as an n^2 x n^2 matrix acting on row-major vectorized matrices
ConstMat ad_operator(const ConstMat& b0) {
    const auto& ctx = b0.ctx();
    std::size_t n = b0.rows();
    ConstMat ad(ctx, n * n, n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t col = r * n + c;
            // b0 E_rc: column r of b0 placed in column c
            for (std::size_t i = 0; i < n; ++i) {
                FieldElement v = b0.at(i, r);
                if (!v.is_zero())
                    ad.set(i * n + c, col, ad.at(i * n + c, col) + v);
            }
            // -E_rc b0: row c of b0 negated in row r
            for (std::size_t j = 0; j < n; ++j) {
                FieldElement v = b0.at(c, j);
                if (!v.is_zero())
                    ad.set(r * n + j, col, ad.at(r * n + j, col) - v);
            }
        }
    return ad;
}

std::vector<FieldElement> vectorize(const ConstMat& x) {
    std::vector<FieldElement> v;
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            v.push_back(x.at(i, j));
    return v;
}

ConstMat devectorize(const FieldCtxPtr& ctx, std::size_t n, const std::vector<FieldElement>& v) {
    ConstMat x(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            x.set(i, j, v[i * n + j]);
    return x;
}

// per residue class: T = c id - ad(b0), its Fitting kernel, and a solve table
// for [V | T] x = rhs (free variables zero, so inputs already in V give x = 0)
struct ClassSolver {
    ConstMat T;
    ConstMat Tk;                  // (ad(b0) - c)^{n^2}, same kernel as T^{n^2}
    std::vector<ConstMat> vbasis; // kernel columns
    ConstMat row_ops;             // E with rref([V|T]) = E [V|T]
    std::vector<std::size_t> pivots;

    bool in_kernel(const std::vector<FieldElement>& vec) const {
        std::size_t dim = vec.size();
        for (std::size_t i = 0; i < dim; ++i) {
            FieldElement acc = FieldElement::zero(Tk.ctx());
            for (std::size_t j = 0; j < dim; ++j)
                acc = acc + Tk.at(i, j) * vec[j];
            if (!acc.is_zero())
                return false;
        }
        return true;
    }

    // y with T y = rhs mod span(V); rhs must be solvable (always is)
    std::vector<FieldElement> solve_y(const std::vector<FieldElement>& rhs) const {
        std::size_t dim = rhs.size();
        std::size_t dv = vbasis.size();
        std::vector<FieldElement> b(dim, FieldElement::zero(Tk.ctx()));
        for (std::size_t i = 0; i < dim; ++i) {
            FieldElement acc = FieldElement::zero(Tk.ctx());
            for (std::size_t j = 0; j < dim; ++j)
                acc = acc + row_ops.at(i, j) * rhs[j];
            b[i] = acc;
        }
        std::vector<FieldElement> y(dim, FieldElement::zero(Tk.ctx()));
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (pivots[r] >= dv)
                y[pivots[r] - dv] = b[r];
        return y;
    }
};

ClassSolver build_class_solver(const ConstMat& ad, std::uint32_t cls) {
    const auto& ctx = ad.ctx();
    std::size_t dim = ad.rows();
    ClassSolver cs;
    // T = cls*id - ad
    cs.T = -ad;
    FieldElement c = FieldElement::from_int(ctx, cls);
    for (std::size_t i = 0; i < dim; ++i)
        cs.T.set(i, i, cs.T.at(i, i) + c);
    ConstMat shifted = ad;
    for (std::size_t i = 0; i < dim; ++i)
        shifted.set(i, i, shifted.at(i, i) - c);
    cs.Tk = mat_pow(shifted, static_cast<std::uint64_t>(dim));
    cs.vbasis = mat_kernel_basis(cs.Tk);
    std::size_t dv = cs.vbasis.size();
    // rref of [V | T | I] records the row operations
    ConstMat aug(ctx, dim, dv + dim + dim);
    for (std::size_t j = 0; j < dv; ++j)
        for (std::size_t i = 0; i < dim; ++i)
            aug.set(i, j, cs.vbasis[j].at(i, 0));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            aug.set(i, dv + j, cs.T.at(i, j));
    for (std::size_t i = 0; i < dim; ++i)
        aug.set(i, dv + dim + i, FieldElement::one(ctx));
    // Gauss-Jordan restricted to the first dv+dim columns
    std::size_t rank = 0;
    for (std::size_t ccol = 0; ccol < dv + dim && rank < dim; ++ccol) {
        std::size_t pr = rank;
        while (pr < dim && aug.at(pr, ccol).is_zero())
            ++pr;
        if (pr == dim)
            continue;
        if (pr != rank)
            for (std::size_t k = 0; k < aug.cols(); ++k) {
                FieldElement t = aug.at(rank, k);
                aug.set(rank, k, aug.at(pr, k));
                aug.set(pr, k, t);
            }
        FieldElement inv = aug.at(rank, ccol).inv();
        for (std::size_t k = 0; k < aug.cols(); ++k)
            aug.set(rank, k, aug.at(rank, k) * inv);
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == rank)
                continue;
            FieldElement f = aug.at(r, ccol);
            if (f.is_zero())
                continue;
            for (std::size_t k = 0; k < aug.cols(); ++k)
                aug.set(r, k, aug.at(r, k) - f * aug.at(rank, k));
        }
        cs.pivots.push_back(ccol);
        ++rank;
    }
    if (rank != dim)
        fail(errc::internal, "normal-form solve table is rank deficient");
    cs.row_ops = ConstMat(ctx, dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            cs.row_ops.set(i, j, aug.at(i, dv + dim + j));
    return cs;
}

} // namespace

SolverOutput standard_form_solver(const MatSeries& A) {
    const auto& ctx = A.ctx();
    std::size_t n = A.n();
    std::int64_t N = A.min_prec();
    if (N < 1)
        fail(errc::precision_exhausted, "standard form needs at least the residue");
    const std::uint32_t p = ctx->p;

    MatSeries cur = A;
    GaugeElement g = GaugeElement::o_valued(MatSeries::identity(ctx, n, N));
    ConstMat ad = ad_operator(cur.coeff_at(0));
    std::vector<std::optional<ClassSolver>> solvers(p);
    std::size_t steps = 0;

    for (std::int64_t kappa = 1; kappa < N; ++kappa) {
        ConstMat ak = cur.coeff_at(kappa);
        if (ak.is_zero())
            continue;
        std::uint32_t cls = static_cast<std::uint32_t>(kappa % p);
        if (!solvers[cls])
            solvers[cls] = build_class_solver(ad, cls);
        const ClassSolver& cs = *solvers[cls];
        std::vector<FieldElement> vec = vectorize(ak);
        if (cs.in_kernel(vec))
            continue;
        // new a_kappa = a_kappa + T y; choose T y = -a_kappa mod V
        for (auto& e : vec)
            e = -e;
        std::vector<FieldElement> y = cs.solve_y(vec);
        ConstMat ymat = devectorize(ctx, n, y);
        MatSeries step = MatSeries::identity(ctx, n, N);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                FieldElement v = ymat.at(i, j);
                if (!v.is_zero())
                    step.at(i, j) = step.at(i, j) + LaurentSeries::monomial(v, kappa, N);
            }
        GaugeElement gs = GaugeElement::o_valued(std::move(step));
        cur = gauge_act(gs, cur).B;
        g = gs.compose(g);
        ++steps;
    }
    return {std::move(cur), std::move(g), steps};
}

StandardFormResult standard_form(const TameConnection& A, const DecomposeOptions& opts) {
    SolverOutput so = standard_form_solver(A.A);
    ResidueDecomposition rd = decompose_residue(so.B.coeff_at(0), opts);
    return {TameConnection{std::move(so.B)}, std::move(so.g), std::move(rd)};
}

bool eigenspace_certificate(const MatSeries& B) {
    const auto& ctx = B.ctx();
    std::size_t n = B.n();
    std::int64_t N = B.min_prec();
    const std::uint32_t p = ctx->p;
    ConstMat ad = ad_operator(B.coeff_at(0));
    std::vector<std::optional<ConstMat>> powers(p);
    for (std::int64_t i = 0; i < N; ++i) {
        ConstMat bi = B.coeff_at(i);
        if (bi.is_zero())
            continue;
        std::uint32_t cls = static_cast<std::uint32_t>(i % p);
        if (!powers[cls]) {
            ConstMat shifted = ad;
            FieldElement c = FieldElement::from_int(ctx, cls);
            for (std::size_t k = 0; k < n * n; ++k)
                shifted.set(k, k, shifted.at(k, k) - c);
            powers[cls] = mat_pow(shifted, static_cast<std::uint64_t>(n * n));
        }
        std::vector<FieldElement> vec = vectorize(bi);
        for (std::size_t r = 0; r < n * n; ++r) {
            FieldElement acc = FieldElement::zero(ctx);
            for (std::size_t c2 = 0; c2 < n * n; ++c2)
                acc = acc + powers[cls]->at(r, c2) * vec[c2];
            if (!acc.is_zero())
                return false;
        }
    }
    return true;
}

StandardFormResult standard_form_irrational(const TameConnection& A,
                                            const DecomposeOptions& opts) {
    StandardFormResult r = standard_form(A, opts);
    if (!r.decomposition.tau.is_zero())
        fail(errc::non_trivial_rational_part,
             "residue has rational part tau = " + r.decomposition.tau.str());
    for (std::size_t i = 0; i < r.B.n(); ++i)
        for (std::size_t j = 0; j < r.B.n(); ++j) {
            std::int64_t bad;
            if (!r.B.A.at(i, j).supported_on_lattice(A.ctx()->p, &bad))
                fail(errc::internal, "irrational standard form missed the p-lattice at z^" +
                                         std::to_string(bad));
        }
    return r;
}

TameWeight choose_theta_tau(const ConstMat& tau) {
    if (tau.rows() != tau.cols() || !tau.is_diagonal())
        fail(errc::non_rational_input, "theta_tau needs a diagonal matrix");
    std::vector<Rational> entries;
    for (std::size_t i = 0; i < tau.rows(); ++i) {
        FieldElement t = tau.at(i, i);
        if (!t.in_prime_field())
            fail(errc::non_rational_input, "diagonal entry " + t.str() + " is not in F_p");
        entries.emplace_back(static_cast<std::int64_t>(t.coord(0)));
    }
    return TameWeight::of(std::move(entries));
}

MatSeries twist_out_rational(const TameConnection& B, const ConstMat& tau) {
    TameWeight theta_tau = choose_theta_tau(tau);
    std::size_t n = B.n();
    MatSeries M = B.A;
    for (std::size_t i = 0; i < n; ++i) {
        const LaurentSeries& di = M.at(i, i);
        M.at(i, i) = di - LaurentSeries::constant(tau.at(i, i), di.prec());
    }
    std::vector<std::int64_t> neg;
    for (const auto& e : theta_tau.entries)
        neg.push_back(-e.num);
    MatSeries C = M.conj_by_zpow(neg);
    const std::uint32_t p = B.ctx()->p;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const LaurentSeries& s = C.at(i, j);
            std::int64_t bad;
            if (s.val() < 0)
                fail(errc::support_violation,
                     "twist produced a pole at entry (" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + "); input was not in standard form");
            if (!s.supported_on_lattice(p, &bad))
                fail(errc::support_violation,
                     "twist left exponent " + std::to_string(bad) + " off the p-lattice at entry (" +
                         std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         "); input was not in standard form");
        }
    return C;
}

ParahoricFormResult standard_form_parahoric(const MatSeries& A, const TameWeight& theta,
                                            const DecomposeOptions& opts) {
    LieMembershipReport rep = parahoric_lie_check(A, theta);
    if (!rep.member) {
        const auto& v = rep.violations.front();
        fail(errc::membership_violation,
             "entry (" + std::to_string(v.i + 1) + "," + std::to_string(v.j + 1) + ") has valuation " +
                 std::to_string(v.val) + " < " + std::to_string(v.bound));
    }
    if (theta.is_zero()) {
        StandardFormResult sf = standard_form(TameConnection::make(A), opts);
        return {sf.B.A, sf.g, sf.decomposition, sf.decomposition.tau};
    }
    CoverCtx cov = make_cover(theta, A.ctx());
    MatSeries lifted = lift_connection(A, cov);
    SolverOutput so = standard_form_solver(lifted);
    EquivarianceReport eq = check_gamma_equivariance(so.B, cov);
    if (!eq.ok)
        fail(errc::internal, "cover standard form lost equivariance at w^" +
                                 std::to_string(eq.exponent));
    MatSeries B = descend_connection(so.B, cov);
    // the P_theta(O) gauge downstairs: descend Delta^{-1} g Delta
    std::vector<std::int64_t> neg_dtheta;
    for (auto v : cov.dtheta)
        neg_dtheta.push_back(-v);
    MatSeries varsigma = so.g.mat().conj_by_zpow(neg_dtheta);
    MatSeries g_z = varsigma.descend_support(cov.d);
    try {
        g_z = g_z.sectioned(cov.emb);
    } catch (const Error&) {
    }
    if (!B.ctx()->same(*g_z.ctx())) {
        // keep the certificate pair over one field
        if (B.ctx()->same(*cov.base_ctx))
            B = B.mapped(cov.emb);
        else
            g_z = g_z.mapped(cov.emb);
    }
    GroupMembershipReport gm = parahoric_group_check(g_z, theta);
    if (!gm.member)
        fail(errc::internal, "descended gauge left the parahoric group");
    DecomposeOptions cover_opts = opts;
    cover_opts.rho = &cov.rho;
    ResidueDecomposition rd = decompose_residue(so.B.coeff_at(0), cover_opts);
    // downstairs rational class via the column classes: v = d(theta + theta_tau)
    // entrywise, tau = (v - c)/d mod p with c the small class representative
    std::size_t n = A.n();
    ConstMat tau(rd.ctx, n, n);
    std::int64_t d = cov.d;
    const std::uint32_t p = A.ctx()->p;
    ConstMat rho_frame = rd.conj_inv * cov.rho.mapped(rd.emb) * rd.conj;
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t cls = -1;
        FieldElement re = rho_frame.at(i, i);
        FieldElement zeta_big = rd.emb.apply(cov.zeta);
        FieldElement acc = FieldElement::one(rd.ctx);
        for (std::int64_t c = 0; c < d; ++c) {
            if (acc == re) {
                cls = c;
                break;
            }
            acc = acc * zeta_big;
        }
        if (cls < 0)
            fail(errc::internal, "frame lost the diagonal equivariance type");
        std::int64_t taut = rd.tau.at(i, i).coord(0);
        // v = cls (mod d), v = taut (mod p), v in [0, dp)
        std::int64_t v = cls;
        while (v % static_cast<std::int64_t>(p) != taut)
            v += d;
        tau.set(i, i, FieldElement::from_int(rd.ctx, (v - cls) / d));
    }
    bool k_needed = false;
    for (std::size_t i = 0; i < n && !k_needed; ++i)
        for (std::size_t j = 0; j < n && !k_needed; ++j)
            if (g_z.at(i, j).val() < 0)
                k_needed = true;
    GaugeElement g =
        k_needed ? GaugeElement::k_valued_general(std::move(g_z)) : GaugeElement::o_valued(std::move(g_z));
    return {std::move(B), std::move(g), std::move(rd), std::move(tau)};
}

} // namespace parhodge
