#pragma once

#include "confcov/grid_field.hpp"
#include "confcov/multipoly.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace confcov {

// Seeded generator for library-side random inputs. Streams are split by a
// salt so each check draws the same values no matter which others ran.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}
  Sampler(std::uint64_t seed, std::string_view salt) : eng_(derive(seed, salt)) {}

  static std::uint64_t derive(std::uint64_t seed, std::string_view salt);

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  // p/q with |p| <= 5, 1 <= q <= 4.
  Rational small_rational();

  // Total degree exactly deg in nvars variables; never constant for deg >= 1.
  MultiPoly poly(int nvars, int deg, int terms, int coeff = 3);

  // offset + sum of `terms` random modes with |frequency| <= band per axis,
  // coefficients uniform in [-amp, amp].
  GridField trig(const TorusGridPtr& grid, int band, int terms, double amp, double offset = 0.0);

 private:
  std::mt19937_64 eng_;
};

}  // namespace confcov
