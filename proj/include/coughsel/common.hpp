#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace coughsel {

/// Base error carrying the process exit code the CLI maps it to.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// Malformed input, violated precondition, or validation failure (exit 2).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what, 2) {}
};

/// Result exists only because a degenerate case was hit (exit 3).
class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what) : Error(what, 3) {}
};

/// Seeded generator whose draws do not depend on the standard library's
/// distribution implementations, so results are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1].
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740991.0);
  }

  /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::size_t index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Rng::index: empty range");
    const std::uint64_t range = n;
    std::uint64_t x = engine_();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        x = engine_();
        m = static_cast<unsigned __int128>(x) * range;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::size_t>(m >> 64);
  }

  template <typename Container>
  void shuffle(Container& c) {
    for (std::size_t i = c.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(c[i - 1], c[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

}  // namespace coughsel
