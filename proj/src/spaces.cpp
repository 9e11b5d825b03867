#include "fbl/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fbl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_abs_desc(std::span<const double> x) {
  std::vector<double> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = std::fabs(x[i]);
  std::sort(a.begin(), a.end(), std::greater<double>());
  return a;
}

double lq_norm(double q, std::span<const double> x) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
  }
  if (q == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::fabs(v);
    return s;
  }
  if (q == 2.0) return l2_norm(x);
  double m = 0.0;
  for (double v : x) m = std::max(m, std::fabs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::fabs(v) / m, q);
  return m * std::pow(s, 1.0 / q);
}

// max over k of k^{1/p-1} * (sum of k largest moduli)
double lorentz_weak_norm(double p, std::span<const double> x) {
  std::vector<double> a = sorted_abs_desc(x);
  double best = 0.0, prefix = 0.0;
  for (std::size_t k = 1; k <= a.size(); ++k) {
    prefix += a[k - 1];
    best = std::max(best, std::pow(static_cast<double>(k), 1.0 / p - 1.0) * prefix);
  }
  return best;
}

// sum_i (i^{1/r} - (i-1)^{1/r}) * x*_i with x* the decreasing rearrangement
double lorentz_l1_norm(double r, std::span<const double> x) {
  std::vector<double> a = sorted_abs_desc(x);
  double s = 0.0, prev = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    double cur = std::pow(static_cast<double>(i), 1.0 / r);
    s += (cur - prev) * a[i - 1];
    prev = cur;
  }
  return s;
}

}  // namespace

double conjugate_exponent(double q) {
  if (q == 1.0) return kInf;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

NormedSpace NormedSpace::lq(double q, int dim) {
  if (!(q >= 1.0) && !std::isinf(q)) throw ValidationError("Lq: q must lie in [1,inf]");
  if (dim < 1) throw ValidationError("Lq: dim must be >= 1");
  return {SpaceKind::Lq, q, dim};
}

NormedSpace NormedSpace::lorentz_weak(double p, int dim) {
  if (!(p > 1.0) || std::isinf(p)) throw ValidationError("LorentzWeak: p must lie in (1,inf)");
  if (dim < 1) throw ValidationError("LorentzWeak: dim must be >= 1");
  return {SpaceKind::LorentzWeak, p, dim};
}

NormedSpace NormedSpace::lorentz_l1(double r, int dim) {
  if (!(r > 1.0) || std::isinf(r)) throw ValidationError("LorentzL1: r must lie in (1,inf)");
  if (dim < 1) throw ValidationError("LorentzL1: dim must be >= 1");
  return {SpaceKind::LorentzL1, r, dim};
}

NormedSpace NormedSpace::dual() const {
  switch (kind) {
    case SpaceKind::Lq:
      return lq(conjugate_exponent(param), dim);
    case SpaceKind::LorentzWeak:
      return lorentz_l1(conjugate_exponent(param), dim);
    case SpaceKind::LorentzL1:
      return lorentz_weak(conjugate_exponent(param), dim);
  }
  throw ValidationError("NormedSpace: unknown kind");
}

double norm(const NormedSpace& space, std::span<const double> x) {
  check_dim(x.size(), static_cast<std::size_t>(space.dim), "norm");
  check_finite(x, "norm");
  switch (space.kind) {
    case SpaceKind::Lq:
      return lq_norm(space.param, x);
    case SpaceKind::LorentzWeak:
      return lorentz_weak_norm(space.param, x);
    case SpaceKind::LorentzL1:
      return lorentz_l1_norm(space.param, x);
  }
  throw ValidationError("norm: unknown kind");
}

double dual_norm(const NormedSpace& space, std::span<const double> xstar) {
  return norm(space.dual(), xstar);
}

double quasi_norm_pinfty(double p, std::span<const double> x) {
  if (!(p > 1.0) || std::isinf(p)) throw ValidationError("quasi_norm_pinfty: p must lie in (1,inf)");
  check_finite(x, "quasi_norm_pinfty");
  std::vector<double> a = sorted_abs_desc(x);
  double best = 0.0;
  for (std::size_t k = 1; k <= a.size(); ++k) {
    best = std::max(best, a[k - 1] * std::pow(static_cast<double>(k), 1.0 / p));
  }
  return best;
}

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                           31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double radical_inverse(int base, std::uint64_t i) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// One low-discrepancy Gaussian direction via Halton points and Box-Muller.
Vector halton_gaussian(int dim, std::uint64_t index) {
  Vector g(dim);
  int pairs = (dim + 1) / 2;
  for (int k = 0; k < pairs; ++k) {
    double u1 = radical_inverse(kPrimes[(2 * k) % 20], index);
    double u2 = radical_inverse(kPrimes[(2 * k + 1) % 20], index);
    u1 = std::max(u1, 1e-12);
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * M_PI * u2;
    g[2 * k] = rad * std::cos(ang);
    if (2 * k + 1 < dim) g[2 * k + 1] = rad * std::sin(ang);
  }
  return g;
}

}  // namespace

std::vector<Vector> sample_sphere(const NormedSpace& space, int count, std::uint64_t seed) {
  if (count < 1) throw ValidationError("sample_sphere: count must be >= 1");
  std::vector<Vector> out;
  out.reserve(count);
  const int n = space.dim;
  if (n == 1) {
    double unit = 1.0 / norm(space, std::vector<double>{1.0});
    for (int k = 0; k < count; ++k) out.push_back({k % 2 == 0 ? unit : -unit});
    return out;
  }
  if (n == 2) {
    for (int k = 0; k < count; ++k) {
      double theta = 2.0 * M_PI * k / count;
      Vector v{std::cos(theta), std::sin(theta)};
      double nv = norm(space, v);
      v[0] /= nv;
      v[1] /= nv;
      out.push_back(std::move(v));
    }
    return out;
  }
  std::uint64_t index = 1 + seed;
  while (static_cast<int>(out.size()) < count) {
    Vector g = halton_gaussian(n, index++);
    if (l2_norm(g) < 1e-9) continue;
    double nv = norm(space, g);
    for (double& v : g) v /= nv;
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace fbl
