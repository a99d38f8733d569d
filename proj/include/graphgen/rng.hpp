#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace graphgen {

/// Seeded random source with a stable output stream.
///
/// All randomness in the library flows through this class so that runs are
/// replayable from a seed alone. Bounded draws and shuffles are implemented
/// here (rather than via std distributions) to keep the stream independent
/// of the standard library version.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  int uniform_int(int lo, int hi);

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01();

  /// Draw from N(mean, sd^2) via Box-Muller (no cached spare).
  double normal(double mean = 0.0, double sd = 1.0);

  /// Uniform in [lo, hi).
  double uniform_real(double lo, double hi);

  bool bernoulli(double p);

  /// Categorical draw over unnormalized nonnegative weights.
  int categorical(const std::vector<double>& weights);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(
          uniform_int(0, static_cast<int>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Derive an independent stream without disturbing this one.
  Rng fork(std::uint64_t stream) const;

  std::string save_state() const;
  void load_state(const std::string& state);

 private:
  std::uint64_t bounded(std::uint64_t n);

  std::uint64_t s_[4];
};

}  // namespace graphgen
