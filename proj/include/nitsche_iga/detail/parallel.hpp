#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace niga {

template <class Fn>
void Discretization::parallel_for(std::size_t n, Fn&& fn) const {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads_, 1)), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace niga
