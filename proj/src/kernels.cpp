#include "parhodge/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace parhodge::kernels {

const Ops* avx2_ops_impl(); // kernels_avx2.cpp; nullptr when not compiled in

namespace {

const Ops* detect() {
    const char* want = std::getenv("PARHODGE_KERNEL");
    const Ops* avx2 = avx2_ops_impl();
#if defined(__x86_64__) || defined(__i386__)
    if (avx2 && !__builtin_cpu_supports("avx2"))
        avx2 = nullptr;
#endif
    if (want) {
        if (std::strcmp(want, "scalar") == 0)
            return &scalar_ops();
        if (std::strcmp(want, "avx2") == 0 && avx2)
            return avx2;
    }
    return avx2 ? avx2 : &scalar_ops();
}

std::atomic<const Ops*> forced{nullptr};

} // namespace

const Ops& active() {
    const Ops* f = forced.load(std::memory_order_acquire);
    if (f)
        return *f;
    static const Ops* picked = detect();
    return *picked;
}

std::vector<const Ops*> available() {
    std::vector<const Ops*> out{&scalar_ops()};
    const Ops* avx2 = avx2_ops_impl();
#if defined(__x86_64__) || defined(__i386__)
    if (avx2 && !__builtin_cpu_supports("avx2"))
        avx2 = nullptr;
#endif
    if (avx2)
        out.push_back(avx2);
    return out;
}

void force(const Ops* ops) { forced.store(ops, std::memory_order_release); }

} // namespace parhodge::kernels
