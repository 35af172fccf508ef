#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

// Low-level kernels for arrays of residues mod a small prime p.  Everything
// above (field elements, truncated series, matrices of series) reduces its
// inner loops to these five operations, so they exist in a scalar reference
// form and in SIMD variants selected once at startup.  Inputs to add/sub/
// scale are canonical residues in [0, p); reduce accepts arbitrary uint32
// values.  axpy_acc accumulates without reduction; callers are responsible
// for the overflow bound (see series.cpp).
namespace parhodge::kernels {

struct Ops {
    const char* name;
    // dst[i] = a[i] + b[i] mod p
    void (*add_mod)(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b,
                    std::size_t len, std::uint32_t p);
    // dst[i] = a[i] - b[i] mod p
    void (*sub_mod)(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b,
                    std::size_t len, std::uint32_t p);
    // dst[i] = c * a[i] mod p, c in [0, p)
    void (*scale_mod)(std::uint32_t* dst, const std::uint32_t* a, std::uint32_t c,
                      std::size_t len, std::uint32_t p);
    // acc[i] += c * a[i], no reduction
    void (*axpy_acc)(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t c,
                     std::size_t len);
    // dst[i] %= p
    void (*reduce_mod)(std::uint32_t* dst, std::size_t len, std::uint32_t p);
};

const Ops& scalar_ops();

// The variant picked at startup: best SIMD the CPU supports, overridable with
// PARHODGE_KERNEL=scalar|avx2.
const Ops& active();

// Every variant usable on this machine (always contains scalar).
std::vector<const Ops*> available();

// Test hook; pass nullptr to restore automatic selection.
void force(const Ops* ops);

} // namespace parhodge::kernels
