#pragma once

// Reproducible parallel Monte Carlo. Samples are cut into fixed blocks; block b
// draws from its own engine seeded by (seed, stream, b) and the per-block moments
// are merged in block order, so results do not depend on the worker count.

#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "carnot/error.hpp"

namespace carnot {

struct SamplingOptions {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
    int workers = 1;
};

inline constexpr std::uint64_t kBlockSize = 4096;

/// Running mean and co-moment matrix of vector-valued samples (Welford, merged by Chan's rule).
class Moments {
public:
    Moments() = default;
    explicit Moments(std::size_t dim) : dim_(dim), mean_(dim, 0.0), m2_(dim * dim, 0.0), delta_(dim, 0.0) {}

    std::size_t dim() const { return dim_; }
    std::uint64_t count() const { return n_; }

    void add(const double* x) {
        ++n_;
        const double inv = 1.0 / static_cast<double>(n_);
        for (std::size_t a = 0; a < dim_; ++a) {
            delta_[a] = x[a] - mean_[a];
            mean_[a] += delta_[a] * inv;
        }
        for (std::size_t a = 0; a < dim_; ++a) {
            const double da = delta_[a];
            if (da == 0.0) continue;
            double* row = &m2_[a * dim_];
            for (std::size_t b = a; b < dim_; ++b) row[b] += da * (x[b] - mean_[b]);
        }
    }

    void merge(const Moments& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(o.n_);
        const double n = na + nb;
        for (std::size_t a = 0; a < dim_; ++a) delta_[a] = o.mean_[a] - mean_[a];
        for (std::size_t a = 0; a < dim_; ++a) {
            for (std::size_t b = a; b < dim_; ++b) {
                m2_[a * dim_ + b] += o.m2_[a * dim_ + b] + delta_[a] * delta_[b] * na * nb / n;
            }
        }
        for (std::size_t a = 0; a < dim_; ++a) mean_[a] += delta_[a] * nb / n;
        n_ += o.n_;
        proposals += o.proposals;
        accepted += o.accepted;
    }

    double mean(std::size_t a) const { return mean_.at(a); }

    /// Covariance of the sample means of components a and b.
    double mean_covariance(std::size_t a, std::size_t b) const {
        if (n_ < 2) return 0.0;
        if (a > b) std::swap(a, b);
        const double n = static_cast<double>(n_);
        return m2_[a * dim_ + b] / ((n - 1.0) * n);
    }

    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;

private:
    std::size_t dim_ = 0;
    std::uint64_t n_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;  // upper triangle used
    std::vector<double> delta_;
};

inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(block), hi(block)};
    return std::mt19937_64(seq);
}

inline int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(engine, moments, count) for every block and merges the block moments in order.
template <class Body>
Moments run_blocks(const SamplingOptions& opts, std::uint64_t stream, std::size_t dim, Body body) {
    if (opts.samples == 0) fail(ErrorKind::InvalidInput, "sample count must be positive");
    const std::uint64_t blocks = (opts.samples + kBlockSize - 1) / kBlockSize;
    std::vector<Moments> results(blocks, Moments(dim));
    auto work = [&](std::uint64_t first, std::uint64_t step) {
        for (std::uint64_t b = first; b < blocks; b += step) {
            const std::uint64_t count = std::min(kBlockSize, opts.samples - b * kBlockSize);
            auto engine = block_engine(opts.seed, stream, b);
            body(engine, results[b], count);
        }
    };
    const int workers = std::min<std::uint64_t>(resolve_workers(opts.workers), blocks);
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, static_cast<std::uint64_t>(w), static_cast<std::uint64_t>(workers));
    }
    Moments total(dim);
    for (const auto& r : results) total.merge(r);
    return total;
}

}  // namespace carnot
