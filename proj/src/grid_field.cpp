#include "confcov/grid_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace confcov {

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)), size(n) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
  std::size_t size;
};

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// Planning is not thread safe in FFTW; execution on fresh arrays is.
PlanPair plans_for(const std::vector<int>& res, std::size_t points) {
  static std::mutex mu;
  static std::map<std::vector<int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(res);
  if (it != cache.end()) return it->second;
  FftwBuffer a(points), b(points);
  int rank = static_cast<int>(res.size());
  PlanPair p{};
  p.forward = fftw_plan_dft(rank, res.data(), a.data, b.data, FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft(rank, res.data(), b.data, a.data, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!p.forward || !p.backward) throw std::runtime_error("FFTW planning failed");
  cache.emplace(res, p);
  return p;
}

int combine_band(int a, int b) {
  if (a == GridField::kUnbounded || b == GridField::kUnbounded) return GridField::kUnbounded;
  return a + b;
}

int max_band(int a, int b) {
  if (a == GridField::kUnbounded || b == GridField::kUnbounded) return GridField::kUnbounded;
  return std::max(a, b);
}

}  // namespace

std::shared_ptr<const TorusGrid> TorusGrid::make(std::vector<int> resolution) {
  if (resolution.empty()) throw DomainError("torus grid needs at least one axis");
  auto g = std::make_shared<TorusGrid>();
  std::size_t pts = 1;
  for (int r : resolution) {
    if (r < 2) throw DomainError("torus grid resolution must be at least 2");
    pts *= static_cast<std::size_t>(r);
  }
  g->resolution = std::move(resolution);
  g->points = pts;
  return g;
}

std::vector<double> TorusGrid::coordinates(std::size_t index) const {
  std::vector<double> x(resolution.size());
  for (int a = axes() - 1; a >= 0; --a) {
    auto r = static_cast<std::size_t>(resolution[static_cast<std::size_t>(a)]);
    x[static_cast<std::size_t>(a)] = static_cast<double>(index % r) / static_cast<double>(r);
    index /= r;
  }
  return x;
}

GridField::GridField(TorusGridPtr grid, std::vector<double> values, std::vector<int> band)
    : grid_(std::move(grid)), values_(std::move(values)), band_(std::move(band)) {
  if (!grid_) throw DomainError("grid field without a grid");
  if (values_.size() != grid_->points) throw DomainError("grid field size mismatch");
  if (band_.size() != grid_->resolution.size()) throw DomainError("band limit per axis required");
  for (int b : band_)
    if (b < kUnbounded) throw DomainError("invalid band limit");
}

GridField GridField::constant(TorusGridPtr grid, double c) {
  std::size_t pts = grid->points;
  std::vector<int> band(grid->resolution.size(), 0);
  GridField f(std::move(grid), std::vector<double>(pts, c), std::move(band));
  f.zero_ = (c == 0.0);
  return f;
}

GridField GridField::sample(TorusGridPtr grid, const std::function<double(std::span<const double>)>& fn,
                            std::vector<int> band) {
  std::vector<double> v(grid->points);
  for (std::size_t i = 0; i < grid->points; ++i) {
    std::vector<double> x = grid->coordinates(i);
    v[i] = fn(x);
  }
  return GridField(std::move(grid), std::move(v), std::move(band));
}

GridField constant_like(const GridField& like, const Rational& c) {
  return GridField::constant(like.grid(), c.get_d());
}

GridField GridField::partial(int axis) const {
  if (axis < 0 || axis >= grid_->axes()) throw DomainError("derivative axis out of range");
  int n_axis = grid_->resolution[static_cast<std::size_t>(axis)];
  int b = band_[static_cast<std::size_t>(axis)];
  if (b != kUnbounded && 2 * b >= n_axis)
    throw AliasingError("band limit " + std::to_string(b) + " does not fit " + std::to_string(n_axis) +
                        " points on axis " + std::to_string(axis));
  if (zero_) return *this;

  const std::size_t pts = grid_->points;
  PlanPair plan = plans_for(grid_->resolution, pts);
  FftwBuffer spatial(pts), spectral(pts);
  for (std::size_t i = 0; i < pts; ++i) {
    spatial.data[i][0] = values_[i];
    spatial.data[i][1] = 0.0;
  }
  fftw_execute_dft(plan.forward, spatial.data, spectral.data);

  std::size_t inner = 1;
  for (int a = axis + 1; a < grid_->axes(); ++a) inner *= static_cast<std::size_t>(grid_->resolution[static_cast<std::size_t>(a)]);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < pts; ++i) {
    auto j = static_cast<int>((i / inner) % static_cast<std::size_t>(n_axis));
    double k = 0.0;
    if (2 * j < n_axis) k = j;
    else if (2 * j > n_axis) k = j - n_axis;
    // Multiply by 2 pi i k; the Nyquist mode is dropped.
    double re = spectral.data[i][0], im = spectral.data[i][1];
    spectral.data[i][0] = -two_pi * k * im;
    spectral.data[i][1] = two_pi * k * re;
  }
  fftw_execute_dft(plan.backward, spectral.data, spatial.data);
  std::vector<double> out(pts);
  const double norm = 1.0 / static_cast<double>(pts);
  for (std::size_t i = 0; i < pts; ++i) out[i] = spatial.data[i][0] * norm;
  return GridField(grid_, std::move(out), band_);
}

GridField GridField::scaled(double c) const {
  GridField r = *this;
  for (double& v : r.values_) v *= c;
  r.zero_ = zero_ || c == 0.0;
  return r;
}

GridField GridField::apply(double (*fn)(double)) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), fn);
  return GridField(grid_, std::move(out), std::vector<int>(band_.size(), kUnbounded));
}

GridField GridField::exp_scaled(double q) const {
  if (zero_ || q == 0.0) return constant(grid_, 1.0);
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = std::exp(q * values_[i]);
  return GridField(grid_, std::move(out), std::vector<int>(band_.size(), kUnbounded));
}

double GridField::integrate() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

bool GridField::quadrature_exact() const {
  for (std::size_t a = 0; a < band_.size(); ++a)
    if (band_[a] == kUnbounded || band_[a] >= grid_->resolution[a]) return false;
  return true;
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridField GridField::operator-() const { return scaled(-1.0); }

void GridField::check_compatible(const GridField& o) const {
  if (grid_ != o.grid_ && grid_->resolution != o.grid_->resolution)
    throw DomainError("grid fields on different grids");
}

GridField& GridField::operator+=(const GridField& o) {
  check_compatible(o);
  if (o.zero_) return *this;
  if (zero_) return *this = o;
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  for (std::size_t a = 0; a < band_.size(); ++a) band_[a] = max_band(band_[a], o.band_[a]);
  return *this;
}

GridField& GridField::operator-=(const GridField& o) {
  check_compatible(o);
  if (o.zero_) return *this;
  if (zero_) return *this = -o;
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  for (std::size_t a = 0; a < band_.size(); ++a) band_[a] = max_band(band_[a], o.band_[a]);
  return *this;
}

GridField operator*(const GridField& a, const GridField& b) {
  a.check_compatible(b);
  if (a.zero_) return a;
  if (b.zero_) return b;
  std::vector<double> out(a.values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] * b.values_[i];
  std::vector<int> band(a.band_.size());
  for (std::size_t k = 0; k < band.size(); ++k) band[k] = combine_band(a.band_[k], b.band_[k]);
  return GridField(a.grid_, std::move(out), std::move(band));
}

}  // namespace confcov
