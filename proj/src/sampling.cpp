#include "confcov/sampling.hpp"

#include <cmath>
#include <numbers>

namespace confcov {

std::uint64_t Sampler::derive(std::uint64_t seed, std::string_view salt) {
  // FNV-1a over the salt, then a splitmix64 finalizer.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : salt) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rational Sampler::small_rational() { return make_rational(uniform_int(-5, 5), uniform_int(1, 4)); }

MultiPoly Sampler::poly(int nvars, int deg, int terms, int coeff) {
  MultiPoly p(nvars);
  while (p.is_zero() || p.total_degree() < deg) {
    p = MultiPoly(nvars);
    for (int t = 0; t < terms; ++t) {
      std::vector<int> e(static_cast<std::size_t>(nvars), 0);
      int budget = t == 0 ? deg : uniform_int(0, deg);
      for (int b = 0; b < budget; ++b) ++e[static_cast<std::size_t>(uniform_int(0, nvars - 1))];
      int c = uniform_int(-coeff, coeff);
      if (t == 0 && c == 0) c = 1;
      p += MultiPoly::monomial(nvars, e, make_rational(c, uniform_int(1, 3)));
    }
  }
  return p;
}

GridField Sampler::trig(const TorusGridPtr& grid, int band, int terms, double amp, double offset) {
  const int axes = grid->axes();
  std::vector<std::vector<int>> freqs;
  std::vector<double> cs, ss;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> k(static_cast<std::size_t>(axes));
    for (auto& v : k) v = uniform_int(-band, band);
    freqs.push_back(k);
    cs.push_back(amp * uniform(-1, 1));
    ss.push_back(amp * uniform(-1, 1));
  }
  auto f = [&](std::span<const double> x) {
    double s = offset;
    for (std::size_t t = 0; t < freqs.size(); ++t) {
      double arg = 0.0;
      for (std::size_t a = 0; a < x.size(); ++a) arg += freqs[t][a] * x[a];
      arg *= 2.0 * std::numbers::pi;
      s += cs[t] * std::cos(arg) + ss[t] * std::sin(arg);
    }
    return s;
  };
  return GridField::sample(grid, f, std::vector<int>(static_cast<std::size_t>(axes), band));
}

}  // namespace confcov
