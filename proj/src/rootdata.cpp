#include "parhodge/rootdata.hpp"

#include <numeric>

namespace parhodge {

std::uint32_t Rational::mod_p(std::uint32_t p) const {
    if (den % p == 0)
        fail(errc::invalid_argument, "denominator not coprime to p");
    std::int64_t n = num % static_cast<std::int64_t>(p);
    if (n < 0)
        n += p;
    std::int64_t d = den % static_cast<std::int64_t>(p);
    std::uint64_t dinv = 1, base = static_cast<std::uint64_t>(d), e = p - 2;
    while (e) {
        if (e & 1)
            dinv = dinv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(n) * dinv % p);
}

Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        fail(errc::parse_error, "bad rational literal '" + s + "'");
    }
}

std::int64_t TameWeight::denominator() const {
    std::int64_t d = 1;
    for (const auto& e : entries)
        d = std::lcm(d, e.den);
    return d;
}

bool TameWeight::is_tame(std::uint32_t p) const {
    return std::gcd(denominator(), static_cast<std::int64_t>(p)) == 1;
}

bool TameWeight::is_zero() const {
    for (const auto& e : entries)
        if (!e.is_zero())
            return false;
    return true;
}

TameWeight TameWeight::operator+(const TameWeight& o) const {
    if (n() != o.n())
        fail(errc::invalid_argument, "weight rank mismatch");
    std::vector<Rational> e;
    for (std::size_t i = 0; i < n(); ++i)
        e.push_back(entries[i] + o.entries[i]);
    return of(std::move(e));
}

TameWeight TameWeight::scaled(const Rational& r) const {
    std::vector<Rational> e;
    for (const auto& x : entries)
        e.push_back(x * r);
    return of(std::move(e));
}

std::string TameWeight::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries.size(); ++i)
        s += (i ? "," : "") + entries[i].str();
    return s + ")";
}

Rational pairing(const TameWeight& theta, const Root& alpha) {
    if (alpha.i >= theta.n() || alpha.j >= theta.n() || alpha.i == alpha.j)
        fail(errc::invalid_argument, "root outside rank");
    return theta.entries[alpha.i] - theta.entries[alpha.j];
}

std::int64_t m_alpha(const TameWeight& theta, const Root& alpha) {
    return (-pairing(theta, alpha)).ceil();
}

GradedPieces grading_decompose(const ConstMat& x, const TameWeight& theta) {
    if (x.rows() != theta.n() || x.cols() != theta.n())
        fail(errc::invalid_argument, "matrix rank does not match the weight");
    GradedPieces out;
    std::size_t n = x.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            FieldElement v = x.at(i, j);
            if (v.is_zero())
                continue;
            Rational level = theta.entries[i] - theta.entries[j];
            auto it = out.find(level);
            if (it == out.end())
                it = out.emplace(level, ConstMat(x.ctx(), n, n)).first;
            it->second.set(i, j, v);
        }
    return out;
}

LieMembershipReport parahoric_lie_check(const MatSeries& x, const TameWeight& theta) {
    if (x.n() != theta.n())
        fail(errc::invalid_argument, "matrix rank does not match the weight");
    LieMembershipReport rep;
    for (std::size_t i = 0; i < x.n(); ++i)
        for (std::size_t j = 0; j < x.n(); ++j) {
            std::int64_t bound = (theta.entries[j] - theta.entries[i]).ceil();
            std::int64_t v = x.at(i, j).val();
            if (v < bound) {
                rep.member = false;
                rep.violations.push_back({i, j, v, bound});
            }
        }
    return rep;
}

Rational filtration_depth(const MatSeries& x, const TameWeight& theta) {
    bool seen = false;
    Rational best;
    for (std::size_t i = 0; i < x.n(); ++i)
        for (std::size_t j = 0; j < x.n(); ++j) {
            const LaurentSeries& s = x.at(i, j);
            if (s.is_zero())
                continue;
            Rational depth = Rational(s.val()) + theta.entries[i] - theta.entries[j];
            if (!seen || depth < best) {
                best = depth;
                seen = true;
            }
        }
    if (!seen)
        fail(errc::zero_input, "filtration depth of the zero matrix");
    return best;
}

} // namespace parhodge
