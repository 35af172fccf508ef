#include "parhodge/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace parhodge::kernels {
namespace {

// x in [0, 2p) -> x mod p.  Values stay well under 2^31 so signed compares
// are safe (FieldCtx caps p below 2^15).
inline __m256i condsub(__m256i x, __m256i p) {
    __m256i keep = _mm256_cmpgt_epi32(p, x);
    return _mm256_sub_epi32(x, _mm256_andnot_si256(keep, p));
}

// Per-lane high 32 bits of a u32 x u32 product.
inline __m256i mulhi_epu32(__m256i x, __m256i m) {
    __m256i even = _mm256_mul_epu32(x, m);
    __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), _mm256_srli_epi64(m, 32));
    even = _mm256_srli_epi64(even, 32);
    odd = _mm256_and_si256(odd, _mm256_set1_epi64x(static_cast<long long>(0xFFFFFFFF00000000ULL)));
    return _mm256_or_si256(even, odd);
}

// Barrett: with M = floor(2^32/p), q = hi32(x*M) is floor(x/p) or one less,
// so one conditional subtract finishes the reduction.
inline __m256i barrett(__m256i x, __m256i m, __m256i p) {
    __m256i q = mulhi_epu32(x, m);
    __m256i r = _mm256_sub_epi32(x, _mm256_mullo_epi32(q, p));
    return condsub(r, p);
}

inline std::uint32_t magic(std::uint32_t p) {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(1) << 32) / p);
}

void add_mod(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t len, std::uint32_t p) {
    const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256i s = _mm256_add_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)),
                                     _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), condsub(s, vp));
    }
    for (; i < len; ++i) {
        std::uint32_t s = a[i] + b[i];
        dst[i] = s >= p ? s - p : s;
    }
}

void sub_mod(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t len, std::uint32_t p) {
    const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256i s = _mm256_sub_epi32(_mm256_add_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)), vp),
                                     _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), condsub(s, vp));
    }
    for (; i < len; ++i) {
        std::uint32_t s = a[i] + p - b[i];
        dst[i] = s >= p ? s - p : s;
    }
}

void scale_mod(std::uint32_t* dst, const std::uint32_t* a, std::uint32_t c,
               std::size_t len, std::uint32_t p) {
    const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
    const __m256i vm = _mm256_set1_epi32(static_cast<int>(magic(p)));
    const __m256i vc = _mm256_set1_epi32(static_cast<int>(c));
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256i t = _mm256_mullo_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)), vc);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), barrett(t, vm, vp));
    }
    for (; i < len; ++i)
        dst[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(a[i]) * c) % p);
}

void axpy_acc(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t c, std::size_t len) {
    const __m256i vc = _mm256_set1_epi32(static_cast<int>(c));
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256i t = _mm256_mullo_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)), vc);
        __m256i s = _mm256_add_epi32(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i)), t);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), s);
    }
    for (; i < len; ++i)
        acc[i] += c * a[i];
}

void reduce_mod(std::uint32_t* dst, std::size_t len, std::uint32_t p) {
    const __m256i vp = _mm256_set1_epi32(static_cast<int>(p));
    const __m256i vm = _mm256_set1_epi32(static_cast<int>(magic(p)));
    std::size_t i = 0;
    for (; i + 8 <= len; i += 8) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), barrett(x, vm, vp));
    }
    for (; i < len; ++i)
        dst[i] %= p;
}

} // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops{"avx2", add_mod, sub_mod, scale_mod, axpy_acc, reduce_mod};
    return &ops;
}

} // namespace parhodge::kernels

#else

namespace parhodge::kernels {
const Ops* avx2_ops_impl() { return nullptr; }
} // namespace parhodge::kernels

#endif
