#include <doctest.h>

#include "parhodge/kernels.hpp"
#include "parhodge/rng.hpp"

using namespace parhodge;

// every SIMD variant must agree with the scalar reference bit for bit
TEST_CASE("kernel variants agree with the scalar reference") {
    Rng rng(42);
    const auto& ref = kernels::scalar_ops();
    auto variants = kernels::available();
    CHECK(variants.size() >= 1);
    for (const auto* ops : variants) {
        INFO("variant: ", ops->name);
        for (std::uint32_t p : {2u, 3u, 5u, 7u, 251u, 32749u}) {
            for (std::size_t len : {0ull, 1ull, 7ull, 8ull, 9ull, 64ull, 1000ull}) {
                std::vector<std::uint32_t> a(len), b(len);
                for (auto& x : a)
                    x = static_cast<std::uint32_t>(rng.below(p));
                for (auto& x : b)
                    x = static_cast<std::uint32_t>(rng.below(p));
                std::vector<std::uint32_t> r1(len), r2(len);
                ref.add_mod(r1.data(), a.data(), b.data(), len, p);
                ops->add_mod(r2.data(), a.data(), b.data(), len, p);
                CHECK(r1 == r2);
                ref.sub_mod(r1.data(), a.data(), b.data(), len, p);
                ops->sub_mod(r2.data(), a.data(), b.data(), len, p);
                CHECK(r1 == r2);
                std::uint32_t c = static_cast<std::uint32_t>(rng.below(p));
                ref.scale_mod(r1.data(), a.data(), c, len, p);
                ops->scale_mod(r2.data(), a.data(), c, len, p);
                CHECK(r1 == r2);
                // accumulate then reduce
                std::vector<std::uint32_t> acc1(len, 123456u), acc2(len, 123456u);
                ref.axpy_acc(acc1.data(), a.data(), c, len);
                ops->axpy_acc(acc2.data(), a.data(), c, len);
                CHECK(acc1 == acc2);
                // arbitrary u32 inputs for the reduction
                std::vector<std::uint32_t> x1(len), x2(len);
                for (std::size_t i = 0; i < len; ++i)
                    x1[i] = x2[i] = static_cast<std::uint32_t>(rng.next());
                ref.reduce_mod(x1.data(), len, p);
                ops->reduce_mod(x2.data(), len, p);
                CHECK(x1 == x2);
            }
        }
    }
}
