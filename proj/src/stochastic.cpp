#include "ppflow/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "ppflow/errors.hpp"

namespace ppflow {

double RandomViscosityField::amplitude(int k) const {
  const double kl = k * std::numbers::pi * l;
  return std::sqrt(std::sqrt(std::numbers::pi) * l) * std::exp(-kl * kl / 8.0);
}

double RandomViscosityField::leading_amplitude() const {
  return std::sqrt(std::sqrt(std::numbers::pi) * l / 2.0);
}

double RandomViscosityField::psi(Point2 x, const std::vector<double>& y) const {
  if (static_cast<int>(y.size()) != sample_dimension())
    throw std::invalid_argument("sample length " + std::to_string(y.size()) + " != " +
                                std::to_string(sample_dimension()));
  double s = c + leading_amplitude() * y[0];
  for (int k = 1; k <= q; ++k) {
    const double a = k * std::numbers::pi / L;
    s += amplitude(k) * (std::sin(a * x.x) * std::sin(a * x.y) * y[2 * k - 1] +
                         std::cos(a * x.x) * std::cos(a * x.y) * y[2 * k]);
  }
  return s;
}

double kl_viscosity(const RandomViscosityField& field, Point2 x, const std::vector<double>& y) {
  const double nu = field.scale * field.psi(x, y);
  if (!(nu > 0.0)) throw NonpositiveViscosityError("viscosity not positive at (" + std::to_string(x.x) + ", " +
                                                   std::to_string(x.y) + ")");
  return nu;
}

double check_positive(const RandomViscosityField& field, const std::vector<Point2>& points,
                      const std::vector<double>& y) {
  double m = std::numeric_limits<double>::infinity();
  for (const Point2& p : points) m = std::min(m, field.psi(p, y));
  if (!(m > 0.0) || !(field.scale > 0.0)) throw NonpositiveViscosityError("viscosity field is not positive");
  return m;
}

std::vector<double> uniform_viscosity_samples(double mean, double spread, int J, std::uint64_t seed) {
  if (!(spread < 1.0) || spread < 0.0) throw std::invalid_argument("spread must lie in [0, 1)");
  if (J < 1) throw std::invalid_argument("J must be positive");
  std::mt19937_64 gen(seed);
  std::vector<double> out(J);
  const double lo = mean * (1.0 - spread), width = 2.0 * mean * spread;
  for (double& v : out) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v = lo + width * u;
  }
  return out;
}

void clenshaw_curtis_1d(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  if (m < 1) throw std::invalid_argument("clenshaw_curtis_1d needs m >= 1");
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  if (m == 1) {
    weights[0] = 2.0;
    return;
  }
  const int n = m - 1;
  for (int k = 0; k <= n; ++k) {
    const double theta = k * std::numbers::pi / n;
    double x = std::cos(theta);
    if (2 * k == n) x = 0.0;
    nodes[k] = -x;
    double s = 0.0;
    for (int j = 1; j <= n / 2; ++j) {
      const double b = (2 * j == n) ? 1.0 : 2.0;
      s += b / (4.0 * j * j - 1.0) * std::cos(2.0 * j * theta);
    }
    weights[k] = ((k == 0 || k == n) ? 1.0 : 2.0) / n * (1.0 - s);
  }
}

namespace {

int cc_points(int i) { return i == 1 ? 1 : (1 << (i - 1)) + 1; }

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SparseGridRule clenshaw_curtis_sparse_grid(int N, int level) {
  if (N < 1) throw std::invalid_argument("sparse grid dimension must be >= 1");
  if (level < 0) throw std::invalid_argument("sparse grid level must be >= 0");
  const double half_width = std::sqrt(3.0);
  const int qsum = N + level;

  std::map<std::vector<long long>, std::pair<std::vector<double>, double>> acc;
  std::vector<int> idx(N, 1);
  std::function<void(int, int)> recurse = [&](int d, int used) {
    if (d == N) {
      if (used < std::max(N, qsum - N + 1) || used > qsum) return;
      const int diff = qsum - used;
      const double coef = ((diff % 2) ? -1.0 : 1.0) * binomial(N - 1, diff);
      std::vector<std::vector<double>> xs(N), ws(N);
      for (int k = 0; k < N; ++k) clenshaw_curtis_1d(cc_points(idx[k]), xs[k], ws[k]);
      std::vector<int> pos(N, 0);
      while (true) {
        std::vector<double> pt(N);
        std::vector<long long> key(N);
        double w = coef;
        for (int k = 0; k < N; ++k) {
          pt[k] = half_width * xs[k][pos[k]];
          key[k] = std::llround(xs[k][pos[k]] * 1e12);
          w *= 0.5 * ws[k][pos[k]];
        }
        auto [it, inserted] = acc.try_emplace(key, pt, 0.0);
        it->second.second += w;
        int k = 0;
        while (k < N && ++pos[k] == static_cast<int>(xs[k].size())) pos[k++] = 0;
        if (k == N) break;
      }
      return;
    }
    for (int i = 1; used + i + (N - d - 1) <= qsum; ++i) {
      idx[d] = i;
      recurse(d + 1, used + i);
    }
  };
  recurse(0, 0);

  SparseGridRule rule;
  rule.dimension = N;
  rule.level = level;
  for (auto& [key, pw] : acc) {
    if (std::abs(pw.second) < 1e-15) continue;
    rule.points.push_back(pw.first);
    rule.weights.push_back(pw.second);
  }
  return rule;
}

double expectation(const SparseGridRule& rule, const std::vector<double>& qoi_values) {
  if (qoi_values.size() != rule.weights.size()) throw std::invalid_argument("expectation: length mismatch");
  double s = 0.0;
  for (size_t j = 0; j < qoi_values.size(); ++j) s += rule.weights[j] * qoi_values[j];
  return s;
}

}  // namespace ppflow
