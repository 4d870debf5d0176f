#pragma once

#include <cstdint>
#include <string_view>

namespace mothedge::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// labeled sub-seed derivation so every module draws from an independent
// deterministic stream of the single run seed
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    h ^= index + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    std::uint64_t s = h;
    return splitmix64(s);
}

double inverse_normal_cdf(double p);  // Wichura AS241, full double precision

class Stream {
  public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform on (0,1), never exactly 0 or 1
    double uniform() {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return u == 0.0 ? 0x1.0p-54 : u;
    }

    double normal() { return inverse_normal_cdf(uniform()); }

    // inversion by sequential search; fine for the small means used here
    int poisson(double mean);

  private:
    std::uint64_t state_;
};

}  // namespace mothedge::rng
