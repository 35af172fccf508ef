#include "parhodge/poly.hpp"

#include <algorithm>
#include <numeric>

#include "parhodge/rng.hpp"

namespace parhodge {

FPoly::FPoly(FieldCtxPtr ctx, std::vector<FieldElement> coeffs)
    : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    for (const auto& e : c_)
        require_same_ctx(ctx_, e.ctx());
    normalize();
}

void FPoly::normalize() {
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
}

FPoly FPoly::x(const FieldCtxPtr& ctx) {
    return FPoly(ctx, {FieldElement::zero(ctx), FieldElement::one(ctx)});
}

FPoly FPoly::constant(const FieldElement& c) { return FPoly(c.ctx(), {c}); }

FPoly FPoly::operator+(const FPoly& o) const {
    require_same_ctx(ctx_, o.ctx_);
    std::vector<FieldElement> r(std::max(c_.size(), o.c_.size()), FieldElement::zero(ctx_));
    for (std::size_t i = 0; i < c_.size(); ++i)
        r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        r[i] = r[i] + o.c_[i];
    return FPoly(ctx_, std::move(r));
}

FPoly FPoly::operator-(const FPoly& o) const {
    require_same_ctx(ctx_, o.ctx_);
    std::vector<FieldElement> r(std::max(c_.size(), o.c_.size()), FieldElement::zero(ctx_));
    for (std::size_t i = 0; i < c_.size(); ++i)
        r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        r[i] = r[i] - o.c_[i];
    return FPoly(ctx_, std::move(r));
}

FPoly FPoly::operator*(const FPoly& o) const {
    require_same_ctx(ctx_, o.ctx_);
    if (is_zero() || o.is_zero())
        return FPoly(ctx_);
    std::vector<FieldElement> r(c_.size() + o.c_.size() - 1, FieldElement::zero(ctx_));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero())
            continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] = r[i + j] + c_[i] * o.c_[j];
    }
    return FPoly(ctx_, std::move(r));
}

FPoly FPoly::scaled(const FieldElement& c) const {
    std::vector<FieldElement> r = c_;
    for (auto& e : r)
        e = e * c;
    return FPoly(ctx_, std::move(r));
}

FPoly FPoly::monic() const {
    if (is_zero())
        return *this;
    return scaled(lead().inv());
}

FPoly FPoly::derivative() const {
    if (c_.size() <= 1)
        return FPoly(ctx_);
    std::vector<FieldElement> r;
    r.reserve(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        r.push_back(c_[i] * FieldElement::from_int(ctx_, static_cast<std::int64_t>(i)));
    return FPoly(ctx_, std::move(r));
}

FieldElement FPoly::eval(const FieldElement& at) const {
    FieldElement acc = FieldElement::zero(ctx_);
    for (std::size_t i = c_.size(); i-- > 0;)
        acc = acc * at + c_[i];
    return acc;
}

std::pair<FPoly, FPoly> FPoly::divrem(const FPoly& o) const {
    require_same_ctx(ctx_, o.ctx_);
    if (o.is_zero())
        fail(errc::division_by_zero, "polynomial division by zero");
    FPoly rem = *this;
    if (rem.degree() < o.degree())
        return {FPoly(ctx_), rem};
    std::vector<FieldElement> q(rem.c_.size() - o.c_.size() + 1, FieldElement::zero(ctx_));
    FieldElement lead_inv = o.lead().inv();
    while (!rem.is_zero() && rem.degree() >= o.degree()) {
        std::size_t shift = rem.c_.size() - o.c_.size();
        FieldElement c = rem.lead() * lead_inv;
        q[shift] = c;
        for (std::size_t i = 0; i < o.c_.size(); ++i)
            rem.c_[shift + i] = rem.c_[shift + i] - c * o.c_[i];
        rem.normalize();
    }
    return {FPoly(ctx_, std::move(q)), rem};
}

bool FPoly::operator==(const FPoly& o) const {
    if (c_.size() != o.c_.size())
        return false;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!(c_[i] == o.c_[i]))
            return false;
    return true;
}

FPoly poly_gcd(FPoly a, FPoly b) {
    while (!b.is_zero()) {
        FPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

FPoly poly_powmod(FPoly base, std::uint64_t e, const FPoly& mod) {
    FPoly r = FPoly::constant(FieldElement::one(base.ctx()));
    base = base % mod;
    while (e) {
        if (e & 1)
            r = (r * base) % mod;
        base = (base * base) % mod;
        e >>= 1;
    }
    return r;
}

namespace {

// f with f' = 0 is g(x^p); over a perfect field g(x^p) = h(x)^p with
// h_i = (f_{pi})^{p^{m-1}}
FPoly pth_root_recompose(const FPoly& f) {
    const auto& ctx = f.ctx();
    std::uint64_t inv_frob = 1;
    for (std::uint32_t i = 0; i + 1 < ctx->m; ++i)
        inv_frob *= ctx->p;
    std::vector<FieldElement> h;
    for (int i = 0; i <= f.degree(); i += static_cast<int>(ctx->p))
        h.push_back(f.coeff(static_cast<std::size_t>(i)).pow(inv_frob));
    return FPoly(ctx, std::move(h));
}

} // namespace

FPoly poly_radical(const FPoly& f) {
    if (f.degree() <= 1)
        return f.monic();
    FPoly fd = f.derivative();
    if (fd.is_zero())
        return poly_radical(pth_root_recompose(f));
    FPoly g = poly_gcd(f, fd);
    if (g.degree() == 0)
        return f.monic();
    FPoly a = poly_radical(f / g);
    FPoly b = poly_radical(g);
    return (a * (b / poly_gcd(a, b))).monic();
}

std::uint32_t splitting_extension_degree(const FPoly& f, std::uint32_t cap_e) {
    FPoly g = poly_radical(f);
    if (g.degree() <= 0)
        return 1;
    const FPoly x = FPoly::x(f.ctx()) % g;
    FPoly r = x;
    std::uint64_t q = f.ctx()->order();
    for (std::uint32_t e = 1; e <= cap_e; ++e) {
        r = poly_powmod(r, q, g);
        if (r == x)
            return e;
    }
    return 0;
}

namespace {

void split_roots(const FPoly& g, Rng& rng, std::vector<FieldElement>& out) {
    if (g.degree() <= 0)
        return;
    const auto& ctx = g.ctx();
    if (g.degree() == 1) {
        out.push_back(-(g.coeff(0) * g.coeff(1).inv()));
        return;
    }
    const FPoly x = FPoly::x(ctx);
    std::uint64_t q = ctx->order();
    for (int attempt = 0; attempt < 256; ++attempt) {
        FPoly h(ctx);
        if (ctx->p == 2) {
            // trace map of beta*x splits in characteristic 2
            std::vector<std::uint32_t> co(ctx->m);
            for (auto& v : co)
                v = static_cast<std::uint32_t>(rng.below(ctx->p));
            FPoly t = (x.scaled(FieldElement(ctx, co))) % g;
            FPoly acc = t;
            for (std::uint32_t i = 1; i < ctx->m; ++i) {
                t = (t * t) % g;
                acc = acc + t;
            }
            h = acc;
        } else {
            std::vector<std::uint32_t> co(ctx->m);
            for (auto& v : co)
                v = static_cast<std::uint32_t>(rng.below(ctx->p));
            FPoly shifted = x + FPoly::constant(FieldElement(ctx, co));
            h = poly_powmod(shifted, (q - 1) / 2, g) - FPoly::constant(FieldElement::one(ctx));
        }
        FPoly d = poly_gcd(h, g);
        if (d.degree() > 0 && d.degree() < g.degree()) {
            split_roots(d, rng, out);
            split_roots(g / d, rng, out);
            return;
        }
    }
    fail(errc::internal, "root splitting did not converge");
}

} // namespace

RootList roots_in_field(const FPoly& f) {
    if (f.degree() < 1)
        fail(errc::invalid_argument, "root extraction needs positive degree");
    FPoly g = poly_radical(f);
    // confirm g splits: g | x^q - x
    FPoly frob = poly_powmod(FPoly::x(f.ctx()), f.ctx()->order(), g);
    if (!(frob == FPoly::x(f.ctx()) % g))
        fail(errc::internal, "polynomial does not split over the given field");
    Rng rng(0x7A11C0DE5EEDULL);
    std::vector<FieldElement> roots;
    split_roots(g, rng, roots);
    std::sort(roots.begin(), roots.end());
    RootList rl;
    rl.roots = std::move(roots);
    for (const auto& r : rl.roots) {
        FPoly lin = FPoly::x(f.ctx()) - FPoly::constant(r);
        FPoly work = f;
        std::uint32_t mult = 0;
        while (true) {
            auto [quo, rem] = work.divrem(lin);
            if (!rem.is_zero())
                break;
            ++mult;
            work = quo;
        }
        rl.multiplicities.push_back(mult);
    }
    std::uint32_t total = std::accumulate(rl.multiplicities.begin(), rl.multiplicities.end(), 0u);
    if (total != static_cast<std::uint32_t>(f.degree()))
        fail(errc::internal, "root multiplicities do not sum to the degree");
    return rl;
}

namespace {

bool rabin_irreducible(const FPoly& f) {
    int M = f.degree();
    if (M < 1)
        return false;
    if (M == 1)
        return true;
    std::uint64_t q = f.ctx()->order();
    const FPoly x = FPoly::x(f.ctx()) % f;
    std::vector<FPoly> frob(static_cast<std::size_t>(M) + 1);
    frob[0] = x;
    for (int k = 1; k <= M; ++k)
        frob[static_cast<std::size_t>(k)] =
            poly_powmod(frob[static_cast<std::size_t>(k - 1)], q, f);
    if (!(frob[static_cast<std::size_t>(M)] == x))
        return false;
    for (int l = 2; l <= M; ++l) {
        if (M % l)
            continue;
        bool prime = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0)
                prime = false;
        if (!prime)
            continue;
        FPoly diff = frob[static_cast<std::size_t>(M / l)] - x;
        if (poly_gcd(diff, f).degree() != 0)
            return false;
    }
    return true;
}

} // namespace

std::vector<std::uint32_t> find_irreducible_fp(std::uint32_t p, std::uint32_t M) {
    FieldCtxPtr fp = FieldCtx::prime_field(p);
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < M; ++i)
        count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<std::uint32_t> mod(M + 1, 0);
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < M; ++i) {
            mod[i] = static_cast<std::uint32_t>(c % p);
            c /= p;
        }
        mod[M] = 1;
        std::vector<FieldElement> fc;
        for (auto v : mod)
            fc.push_back(FieldElement::from_int(fp, v));
        if (rabin_irreducible(FPoly(fp, std::move(fc))))
            return mod;
    }
    fail(errc::internal, "no irreducible polynomial found"); // unreachable
}

FieldCtxPtr make_extension_field(std::uint32_t p, std::uint32_t M) {
    return FieldCtx::make(p, M, find_irreducible_fp(p, M));
}

Embedding Embedding::identity(const FieldCtxPtr& ctx) {
    Embedding e;
    e.from_ = ctx;
    e.to_ = ctx;
    return e;
}

Embedding Embedding::make(const FieldCtxPtr& from, const FieldCtxPtr& to) {
    if (from.get() == to.get() || from->same(*to))
        return identity(from);
    if (from->p != to->p || to->m % from->m != 0)
        fail(errc::invalid_argument, "no embedding between these fields");
    std::vector<FieldElement> mod_in_to;
    for (auto v : from->modulus)
        mod_in_to.push_back(FieldElement::from_int(to, v));
    RootList rl = roots_in_field(FPoly(to, std::move(mod_in_to)));
    const FieldElement& root = rl.roots.front(); // lexicographically least
    Embedding e;
    e.from_ = from;
    e.to_ = to;
    e.pow_root_.reserve(from->m);
    FieldElement acc = FieldElement::one(to);
    for (std::uint32_t i = 0; i < from->m; ++i) {
        e.pow_root_.push_back(acc);
        acc = acc * root;
    }
    return e;
}

FieldElement Embedding::apply(const FieldElement& a) const {
    if (is_identity())
        return a;
    require_same_ctx(a.ctx(), from_);
    FieldElement r = FieldElement::zero(to_);
    for (std::uint32_t i = 0; i < from_->m; ++i) {
        if (a.coord(i))
            r = r + FieldElement(to_, [&] {
                    std::vector<std::uint32_t> s(to_->m);
                    to_->el_scale(s.data(), pow_root_[i].coords().data(), a.coord(i));
                    return s;
                }());
    }
    return r;
}

FieldElement Embedding::section(const FieldElement& a) const {
    if (is_identity())
        return a;
    require_same_ctx(a.ctx(), to_);
    // solve a = sum c_i * pow_root_[i] over F_p by elimination on the M x m
    // coordinate matrix
    std::uint32_t p = to_->p;
    std::uint32_t rows = to_->m, cols = from_->m;
    std::vector<std::uint32_t> A(rows * (cols + 1), 0);
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c)
            A[r * (cols + 1) + c] = pow_root_[c].coord(r);
        A[r * (cols + 1) + cols] = a.coord(r);
    }
    auto inv_p = [p](std::uint32_t x) {
        std::uint64_t r = 1, base = x, e = p - 2;
        while (e) {
            if (e & 1)
                r = r * base % p;
            base = base * base % p;
            e >>= 1;
        }
        return static_cast<std::uint32_t>(r);
    };
    std::uint32_t rank = 0;
    std::vector<std::uint32_t> pivot_col(rows, 0);
    for (std::uint32_t c = 0; c < cols && rank < rows; ++c) {
        std::uint32_t pr = rank;
        while (pr < rows && A[pr * (cols + 1) + c] == 0)
            ++pr;
        if (pr == rows)
            continue;
        for (std::uint32_t k = 0; k <= cols; ++k)
            std::swap(A[rank * (cols + 1) + k], A[pr * (cols + 1) + k]);
        std::uint32_t piv_inv = inv_p(A[rank * (cols + 1) + c]);
        for (std::uint32_t k = 0; k <= cols; ++k)
            A[rank * (cols + 1) + k] = static_cast<std::uint32_t>(
                static_cast<std::uint64_t>(A[rank * (cols + 1) + k]) * piv_inv % p);
        for (std::uint32_t r = 0; r < rows; ++r) {
            if (r == rank)
                continue;
            std::uint32_t f = A[r * (cols + 1) + c];
            if (!f)
                continue;
            for (std::uint32_t k = 0; k <= cols; ++k)
                A[r * (cols + 1) + k] = static_cast<std::uint32_t>(
                    (A[r * (cols + 1) + k] +
                     static_cast<std::uint64_t>(f) * (p - A[rank * (cols + 1) + k]) % p) %
                    p);
        }
        pivot_col[rank] = c;
        ++rank;
    }
    std::vector<std::uint32_t> sol(cols, 0);
    for (std::uint32_t r = 0; r < rank; ++r)
        sol[pivot_col[r]] = A[r * (cols + 1) + cols];
    for (std::uint32_t r = rank; r < rows; ++r)
        if (A[r * (cols + 1) + cols] != 0)
            fail(errc::support_violation, "element lies outside the embedded subfield");
    // verify (rank-deficient pivots cannot happen: the powers are independent)
    FieldElement check = apply(FieldElement(from_, sol));
    if (!(check == a))
        fail(errc::support_violation, "element lies outside the embedded subfield");
    return FieldElement(from_, std::move(sol));
}

FieldElement primitive_element(const FieldCtxPtr& ctx) {
    std::uint64_t q = ctx->order();
    std::uint64_t n = q - 1;
    std::vector<std::uint64_t> primes;
    std::uint64_t t = n;
    for (std::uint64_t d = 2; d * d <= t; ++d) {
        if (t % d == 0) {
            primes.push_back(d);
            while (t % d == 0)
                t /= d;
        }
    }
    if (t > 1)
        primes.push_back(t);
    for (std::uint64_t code = 1; code < q; ++code) {
        std::vector<std::uint32_t> co(ctx->m);
        std::uint64_t c = code;
        for (std::uint32_t i = 0; i < ctx->m; ++i) {
            co[i] = static_cast<std::uint32_t>(c % ctx->p);
            c /= ctx->p;
        }
        FieldElement g(ctx, std::move(co));
        bool ok = true;
        for (auto pr : primes)
            if (g.pow(n / pr) == FieldElement::one(ctx)) {
                ok = false;
                break;
            }
        if (ok)
            return g;
    }
    fail(errc::internal, "no primitive element found"); // unreachable
}

} // namespace parhodge
