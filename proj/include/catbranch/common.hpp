#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace catbranch {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bad arguments or malformed input. CLI maps it to exit code 2.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Live-population cap exceeded. CLI maps it to exit code 3.
struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of replica `index` under master seed `seed`; streams never overlap in practice.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return boost::random::uniform_01<double>()(eng_); }
  // Uniform on (0,1], safe for log().
  double uniform_pos() { return 1.0 - uniform(); }
  double normal() { return normal_(eng_); }
  double exp1() { return exp_(eng_); }
  bool coin() { return (eng_() >> 63) != 0; }
  std::size_t index(std::size_t n) {
    return boost::random::uniform_int_distribution<std::size_t>(0, n - 1)(eng_);
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  boost::random::normal_distribution<double> normal_;
  boost::random::exponential_distribution<double> exp_;
};

}  // namespace catbranch
