#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace jobrec {

// Deterministic PRNG with hand-rolled distributions.  The standard
// <random> distributions are implementation-defined, so every draw here
// is spelled out explicitly; the same seed produces the same stream on
// any platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    // splitmix64 step
    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [0, n); n must be > 0
    uint64_t below(uint64_t n) { return next_u64() % n; }

    // standard normal via Box-Muller; consumes exactly two uniforms
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 1.0 / 9007199254740992.0;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Poisson via inversion by sequential search; fine for small lambda
    int poisson(double lambda) {
        double p = std::exp(-lambda);
        double cum = p;
        double u = uniform();
        int k = 0;
        while (u > cum && k < 1000) {
            ++k;
            p *= lambda / k;
            cum += p;
        }
        return k;
    }

    // Fisher-Yates
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // index draw from unnormalized non-negative weights (linear scan over
    // the cumulative sum); weights must not be all zero
    size_t weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform() * total;
        double cum = 0.0;
        for (size_t i = 0; i < weights.size(); ++i) {
            cum += weights[i];
            if (u < cum) return i;
        }
        return weights.size() - 1;
    }

private:
    uint64_t state_;
};

// FNV-1a, used for config hashing and seed derivation
inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// derives an independent stream seed from a master seed and a label
inline uint64_t derive_seed(uint64_t master, std::string_view label) {
    uint64_t h = fnv1a(label);
    // splitmix-style finalizer over the combination
    uint64_t z = master ^ (h + 0x9e3779b97f4a7c15ull + (master << 6) + (master >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace jobrec
