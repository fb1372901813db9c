#pragma once

#include "confcov/rational.hpp"

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace confcov {

// Uniform grid on the unit-period torus over the active axes, row-major
// with the last axis fastest.
struct TorusGrid {
  std::vector<int> resolution;
  std::size_t points = 0;

  static std::shared_ptr<const TorusGrid> make(std::vector<int> resolution);
  int axes() const { return static_cast<int>(resolution.size()); }
  std::vector<double> coordinates(std::size_t index) const;
};

using TorusGridPtr = std::shared_ptr<const TorusGrid>;

// A spectral derivative was requested on data whose declared band limit does
// not fit the grid along that axis.
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Real field sampled on a TorusGrid. Each axis carries a declared band limit
// (largest |frequency|) or kUnbounded for smooth data of unknown bandwidth.
// Bands propagate through arithmetic so derivative and quadrature exactness
// can be decided from the declaration alone.
class GridField {
 public:
  static constexpr int kUnbounded = -1;

  GridField() = default;
  GridField(TorusGridPtr grid, std::vector<double> values, std::vector<int> band);

  static GridField constant(TorusGridPtr grid, double c);
  static GridField sample(TorusGridPtr grid, const std::function<double(std::span<const double>)>& f,
                          std::vector<int> band);

  const TorusGridPtr& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<int>& band() const noexcept { return band_; }
  bool known_zero() const noexcept { return zero_; }

  // Spectral derivative along an active axis; throws AliasingError when the
  // declared band does not satisfy 2 * band < N on that axis.
  GridField partial(int axis) const;
  GridField scaled(double c) const;
  GridField apply(double (*fn)(double)) const;  // result band is unbounded
  GridField exp_scaled(double q) const;

  // Trapezoidal mean over the unit torus (exact for band < N on every axis).
  double integrate() const;
  bool quadrature_exact() const;
  double max_abs() const;

  GridField operator-() const;
  GridField& operator+=(const GridField& o);
  GridField& operator-=(const GridField& o);
  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(const GridField& a, const GridField& b);

 private:
  void check_compatible(const GridField& o) const;

  TorusGridPtr grid_;
  std::vector<double> values_;
  std::vector<int> band_;
  bool zero_ = false;
};

inline GridField scale(const GridField& f, const Rational& c) { return f.scaled(c.get_d()); }
GridField constant_like(const GridField& like, const Rational& c);
inline bool is_zero(const GridField& f) { return f.known_zero(); }
inline GridField partial(const GridField& f, int axis) { return f.partial(axis); }

}  // namespace confcov
