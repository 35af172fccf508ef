#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "parhodge/matrix.hpp"
#include "parhodge/rational.hpp"

namespace parhodge {

// Rational weight theta = (theta_1, ..., theta_n) for GL_n.  Tameness
// (denominator coprime to p) is a property checked where pipelines require
// it; derived weights on the Frobenius twist legitimately carry p in the
// denominator.
struct TameWeight {
    std::vector<Rational> entries;

    static TameWeight zero(std::size_t n) { return {std::vector<Rational>(n, Rational(0))}; }
    static TameWeight of(std::vector<Rational> e) { return {std::move(e)}; }

    std::size_t n() const { return entries.size(); }
    std::int64_t denominator() const; // lcm of entry denominators
    bool is_tame(std::uint32_t p) const;
    bool is_integral() const { return denominator() == 1; }
    bool is_zero() const;

    TameWeight operator+(const TameWeight& o) const;
    TameWeight scaled(const Rational& r) const;
    bool operator==(const TameWeight& o) const { return entries == o.entries; }

    std::string str() const;
};

// alpha with alpha(diag t) = t_i - t_j and root space E_ij; indices 0-based
struct Root {
    std::size_t i, j;
};

Rational pairing(const TameWeight& theta, const Root& alpha);
// m_alpha(theta) = ceil(-alpha(theta))
std::int64_t m_alpha(const TameWeight& theta, const Root& alpha);

// constant matrix split along the weight grading; keys are the levels
// theta_i - theta_j (diagonal at 0), components sum back to the input
using GradedPieces = std::map<Rational, ConstMat>;
GradedPieces grading_decompose(const ConstMat& x, const TameWeight& theta);

struct LieViolation {
    std::size_t i, j;
    std::int64_t val;
    std::int64_t bound;
};

struct LieMembershipReport {
    bool member = true;
    std::vector<LieViolation> violations;
};

// entrywise valuation test against ceil(theta_j - theta_i); a report, not an
// error
LieMembershipReport parahoric_lie_check(const MatSeries& x, const TameWeight& theta);

// largest k with x in Lg_{>=k}: min over known nonzero terms z^v E_ij of
// v + theta_i - theta_j
Rational filtration_depth(const MatSeries& x, const TameWeight& theta);

} // namespace parhodge
