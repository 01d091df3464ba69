#ifndef FTB_CORE_SEED_HPP
#define FTB_CORE_SEED_HPP

#include <cstdint>

namespace ftb {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Decorrelated child seed for stream `which` of a master seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t which) {
    return splitmix64(master ^ (0x9e3779b97f4a7c15ULL * which));
}

}  // namespace ftb

#endif
