#ifndef QUADLAB_RNG_HPP
#define QUADLAB_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace quadlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic RNG wrapper. Bounded draws and shuffles are implemented here
// rather than with std::uniform_int_distribution / std::shuffle, whose output
// is not pinned by the standard; replica streams must be reproducible across
// toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        engine_.seed(splitmix64(s));
    }

    // Derives an independent stream for replica `id` of a master seed.
    static Rng for_replica(std::uint64_t master_seed, std::uint64_t id) {
        std::uint64_t s = master_seed;
        std::uint64_t a = splitmix64(s);
        s = master_seed ^ (0x9e3779b97f4a7c15ULL + id);
        std::uint64_t b = splitmix64(s);
        return Rng(a ^ (b + id * 0xda942042e4dd58b5ULL));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound), bound >= 1; rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    int uniform_int(int lo, int hi) {  // inclusive range
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool fair_bit() { return (engine_() >> 63) != 0; }

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {  // Fisher-Yates
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace quadlab

#endif
