#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parhodge/field.hpp"

namespace parhodge {

// Truncated Laurent series over F_{p^m}.  The window [val, prec) of exponents
// is exactly represented; nothing is claimed at prec or beyond.  Storage is
// dense over the window, one m-block of coordinates per exponent, normalized
// so the block at val is nonzero.  The zero-as-far-as-known series is the
// empty window with val == prec.
class LaurentSeries {
public:
    LaurentSeries() = default;

    static LaurentSeries zero(FieldCtxPtr ctx, std::int64_t prec);
    static LaurentSeries constant(const FieldElement& c, std::int64_t prec);
    static LaurentSeries monomial(const FieldElement& c, std::int64_t exp, std::int64_t prec);
    // coefficients of z^val, z^{val+1}, ...; precision defaults to val + #coeffs
    static LaurentSeries from_coeffs(FieldCtxPtr ctx, std::int64_t val,
                                     const std::vector<FieldElement>& coeffs,
                                     std::int64_t prec = INT64_MIN);

    const FieldCtxPtr& ctx() const { return ctx_; }
    std::int64_t prec() const { return prec_; }
    bool is_zero() const { return c_.empty(); }          // zero as far as known
    // valuation; the zero series reports its precision bound
    std::int64_t val() const { return val_; }
    std::int64_t terms() const { return val_ == prec_ ? 0 : prec_ - val_; }

    FieldElement coeff_at(std::int64_t e) const; // e < prec required
    const std::uint32_t* block_at(std::int64_t e) const; // nullptr when outside window

    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries operator-() const;
    LaurentSeries inv() const;

    LaurentSeries scaled(const FieldElement& c) const;
    LaurentSeries scaled_int(std::int64_t k) const;      // k mod p as a scalar
    LaurentSeries shifted(std::int64_t delta) const;     // multiply by z^delta
    LaurentSeries truncated(std::int64_t new_prec) const;

    // z d/dz: sum a_e z^e -> sum (e mod p) a_e z^e
    LaurentSeries zderiv() const;
    // f(z) -> f(w^d)
    LaurentSeries substitute_power(std::int64_t d) const;
    // inverse of substitute_power on series supported on the d-lattice
    LaurentSeries descend_support(std::int64_t d) const;
    bool supported_on_lattice(std::int64_t d, std::int64_t* offending = nullptr) const;

    bool operator==(const LaurentSeries& o) const;
    bool operator!=(const LaurentSeries& o) const { return !(*this == o); }

    std::string str() const;

private:
    void normalize();

    FieldCtxPtr ctx_;
    std::int64_t val_ = 0;
    std::int64_t prec_ = 0;
    std::vector<std::uint32_t> c_;
};

// exact agreement on the shared known window
bool equal_on_common_window(const LaurentSeries& a, const LaurentSeries& b);

} // namespace parhodge
