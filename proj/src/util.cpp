#include "penrose/util.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace penrose {

namespace {

int g_workers = 0;  // 0 = not yet resolved

int resolve_workers() {
    if (const char* env = std::getenv("PENROSE_LAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 1;
}

}  // namespace

int worker_count() {
    if (g_workers == 0) g_workers = resolve_workers();
    return g_workers;
}

void set_worker_count(int workers) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    g_workers = workers;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::size_t>(workers, count));
    pool.reserve(spawn);
    for (int t = 0; t < spawn - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double sphere_area(int k) {
    if (k < 0) throw std::invalid_argument("sphere_area: k must be >= 0");
    const double half = 0.5 * (k + 1);
    return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

}  // namespace penrose
