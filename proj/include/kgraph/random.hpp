#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace kgraph {

/**
 * Seeded generator with a portable output sequence.
 *
 * The engine is std::mt19937_64, whose output is fixed by the C++ standard.
 * Distributions are implemented here (the std:: ones are not portable):
 *  - uniform01: top 53 bits scaled by 2^-53, in [0, 1).
 *  - below(n): rejection sampling on the full 64-bit word.
 */
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {
  }

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n)
  {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Fisher-Yates shuffle, swapping from the back.
  template<typename T>
  void shuffle(std::vector<T>& v)
  {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

  std::vector<std::uint32_t> permutation(std::uint32_t n)
  {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    shuffle(p);
    return p;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace kgraph
