#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace npcspec {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Hash a master seed together with a list of stream identifiers
/// (scenario, replicate, order, ...) into a 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids) noexcept;

/// Random source used by every stochastic routine in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniform and gamma variates are produced by code in this class and
/// normals by boost's ziggurat, so a given seed yields the same stream on every
/// platform (unlike the std:: distributions, whose algorithms are unspecified).
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Log of a Gamma(shape, 1) variate; stays finite for tiny shapes.
  double log_gamma(double shape);
  /// Inverse-gamma(shape, rate) variate, i.e. rate / Gamma(shape, 1).
  double inverse_gamma(double shape, double rate);
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
};

}  // namespace npcspec
