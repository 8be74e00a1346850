/*
   Copyright 2026 The rkpair Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef RKPAIR_PRIMES_HPP
#define RKPAIR_PRIMES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rkpair {

/// Neumaier (improved Kahan) summation.
class CompensatedSum {
   public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    CompensatedSum& operator+=(const CompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.comp_);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// All primes p <= limit, ascending.
inline std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
    std::vector<std::uint32_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) noexcept {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime_u64(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

/// Smallest prime strictly greater than n.
inline std::uint64_t next_prime_u64(std::uint64_t n) {
    if (n < 2) return 2;
    std::uint64_t c = n + 1;
    if (c > 2 && (c & 1) == 0) ++c;
    while (!is_prime_u64(c)) c += 2;
    return c;
}

/// Residue-class filter used by the prime products of the sieve bounds.
struct PrimeClass {
    enum class Kind { All, NotOfForm, OfForm };
    Kind kind = Kind::All;
    std::uint64_t modulus = 1;  // primes of the form modulus*j + 1

    static PrimeClass all() { return {}; }
    static PrimeClass of_form(std::uint64_t m) { return {Kind::OfForm, m}; }
    static PrimeClass not_of_form(std::uint64_t m) { return {Kind::NotOfForm, m}; }

    bool accepts(std::uint64_t p) const noexcept {
        switch (kind) {
            case Kind::All:
                return true;
            case Kind::OfForm:
                return p % modulus == 1 % modulus;
            case Kind::NotOfForm:
                return p % modulus != 1 % modulus;
        }
        return true;
    }
};

/// Consecutive primes >= start, produced block by block with a segmented sieve.
/// Each stream owns its state; streams are cheap to create.
class PrimeStream {
   public:
    explicit PrimeStream(std::uint64_t start = 2, PrimeClass filter = PrimeClass::all(),
                         std::uint64_t block = 1u << 16)
        : lo_(start < 2 ? 2 : start), block_(block), filter_(filter) {}

    std::uint64_t next() {
        while (pos_ >= buf_.size()) refill();
        return buf_[pos_++];
    }

   private:
    void refill() {
        buf_.clear();
        pos_ = 0;
        const std::uint64_t hi = lo_ + block_;  // [lo_, hi)
        const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
        if (base_limit_ < root) {
            base_limit_ = std::max<std::uint64_t>(root * 2, 1024);
            base_ = primes_up_to(static_cast<std::uint32_t>(base_limit_));
        }
        std::vector<bool> composite(block_, false);
        for (std::uint32_t p : base_) {
            const std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
            if (pp >= hi) break;
            std::uint64_t first = std::max(pp, (lo_ + p - 1) / p * p);
            for (std::uint64_t j = first; j < hi; j += p) composite[j - lo_] = true;
        }
        for (std::uint64_t i = 0; i < block_; ++i) {
            const std::uint64_t v = lo_ + i;
            if (v >= 2 && !composite[i] && filter_.accepts(v)) buf_.push_back(v);
        }
        lo_ = hi;
    }

    std::uint64_t lo_;
    std::uint64_t block_;
    PrimeClass filter_;
    std::uint64_t base_limit_ = 0;
    std::vector<std::uint32_t> base_;
    std::vector<std::uint64_t> buf_;
    std::size_t pos_ = 0;
};

/// Count and reciprocal sum of the primes p with lo < p < hi.
struct PrimeCensus {
    std::uint64_t count = 0;
    double inverse_sum = 0.0;
};

/// Odd-only segmented sieve over (lo, hi). Segments are independent and merged
/// in ascending order, so the result does not depend on `threads`.
inline PrimeCensus prime_census(std::uint64_t lo, std::uint64_t hi, unsigned threads = 1,
                                std::uint64_t segment = 1u << 20) {
    PrimeCensus out;
    if (hi <= lo + 1) return out;
    const std::uint64_t first = lo + 1;  // inclusive
    const std::uint64_t last = hi - 1;   // inclusive
    if (first <= 2 && 2 <= last) {
        out.count = 1;
    }
    const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<long double>(last))) + 1;
    const std::vector<std::uint32_t> base = primes_up_to(root);

    // Segment k covers odd numbers in [start_k, start_k + 2*segment).
    std::uint64_t odd_begin = std::max<std::uint64_t>(first, 3);
    if ((odd_begin & 1) == 0) ++odd_begin;
    if (odd_begin > last) {
        out.inverse_sum = out.count ? 0.5 : 0.0;
        return out;
    }
    const std::uint64_t span = 2 * segment;
    const std::uint64_t nseg = (last - odd_begin) / span + 1;

    struct Partial {
        std::uint64_t count = 0;
        CompensatedSum sum;
    };
    std::vector<Partial> parts(nseg);

    auto work = [&](std::uint64_t seg) {
        const std::uint64_t s0 = odd_begin + seg * span;
        const std::uint64_t s1 = std::min(last + 1, s0 + span);  // exclusive
        const std::uint64_t len = (s1 - s0 + 1) / 2;             // odd slots
        std::vector<char> composite(len, 0);
        for (std::size_t bi = 1; bi < base.size(); ++bi) {  // skip 2
            const std::uint64_t p = base[bi];
            const std::uint64_t pp = p * p;
            if (pp >= s1) break;
            std::uint64_t m = std::max(pp, (s0 + p - 1) / p * p);
            if ((m & 1) == 0) m += p;
            for (; m < s1; m += 2 * p) composite[(m - s0) / 2] = 1;
        }
        Partial& part = parts[seg];
        for (std::uint64_t i = 0; i < len; ++i) {
            const std::uint64_t v = s0 + 2 * i;
            if (v == 1 || composite[i]) continue;
            ++part.count;
            part.sum += 1.0 / static_cast<double>(v);
        }
    };

    threads = std::max(1u, threads);
    if (threads == 1 || nseg == 1) {
        for (std::uint64_t s = 0; s < nseg; ++s) work(s);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::uint64_t s = t; s < nseg; s += threads) work(s);
            });
        }
        for (auto& th : pool) th.join();
    }

    CompensatedSum total;
    if (out.count == 1) total += 0.5;
    for (const auto& part : parts) {
        out.count += part.count;
        total += part.sum;
    }
    out.inverse_sum = total.value();
    return out;
}

/// Calls fn(q) for every prime power 2 <= q < limit in increasing order.
inline void for_each_prime_power_below(std::uint64_t limit, const std::function<void(std::uint64_t)>& fn) {
    if (limit <= 2) return;
    std::vector<std::uint64_t> higher;  // p^k with k >= 2
    const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<long double>(limit))) + 1;
    for (std::uint32_t p : primes_up_to(root)) {
        unsigned __int128 v = static_cast<unsigned __int128>(p) * p;
        while (v < limit) {
            higher.push_back(static_cast<std::uint64_t>(v));
            v *= p;
        }
    }
    std::sort(higher.begin(), higher.end());
    std::size_t hi = 0;
    PrimeStream primes(2, PrimeClass::all(), 1u << 18);
    for (;;) {
        const std::uint64_t p = primes.next();
        if (p >= limit) break;
        while (hi < higher.size() && higher[hi] < p) fn(higher[hi++]);
        fn(p);
    }
    while (hi < higher.size()) fn(higher[hi++]);
}

/// Prime powers q < limit, ascending.
inline std::vector<std::uint64_t> prime_powers_below(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    for_each_prime_power_below(limit, [&](std::uint64_t q) { out.push_back(q); });
    return out;
}

/// If q = p^m with p prime, returns {p, m}; otherwise {0, 0}.
inline std::pair<std::uint64_t, unsigned> prime_power_decompose(std::uint64_t q) {
    if (q < 2) return {0, 0};
    if (is_prime_u64(q)) return {q, 1};
    for (unsigned m = 2; m < 64; ++m) {
        auto r = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<long double>(q), 1.0L / m)));
        for (std::uint64_t c = (r > 2 ? r - 1 : 2); c <= r + 1; ++c) {
            unsigned __int128 v = 1;
            for (unsigned i = 0; i < m && v <= q; ++i) v *= c;
            if (v == q && is_prime_u64(c)) return {c, m};
        }
        if (r < 2) break;
    }
    return {0, 0};
}

}  // namespace rkpair

#endif  // RKPAIR_PRIMES_HPP
