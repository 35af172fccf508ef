#include "parhodge/kernels.hpp"

namespace parhodge::kernels {
namespace {

void add_mod(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t len, std::uint32_t p) {
    for (std::size_t i = 0; i < len; ++i) {
        std::uint32_t s = a[i] + b[i];
        dst[i] = s >= p ? s - p : s;
    }
}

void sub_mod(std::uint32_t* dst, const std::uint32_t* a, const std::uint32_t* b,
             std::size_t len, std::uint32_t p) {
    for (std::size_t i = 0; i < len; ++i) {
        std::uint32_t s = a[i] + p - b[i];
        dst[i] = s >= p ? s - p : s;
    }
}

void scale_mod(std::uint32_t* dst, const std::uint32_t* a, std::uint32_t c,
               std::size_t len, std::uint32_t p) {
    for (std::size_t i = 0; i < len; ++i)
        dst[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(a[i]) * c) % p);
}

void axpy_acc(std::uint32_t* acc, const std::uint32_t* a, std::uint32_t c, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i)
        acc[i] += c * a[i];
}

void reduce_mod(std::uint32_t* dst, std::size_t len, std::uint32_t p) {
    for (std::size_t i = 0; i < len; ++i)
        dst[i] %= p;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", add_mod, sub_mod, scale_mod, axpy_acc, reduce_mod};
    return ops;
}

} // namespace parhodge::kernels
