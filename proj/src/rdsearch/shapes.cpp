#include <cmath>

#include "ardtk/error.hpp"
#include "ardtk/random.hpp"
#include "ardtk/rdsearch.hpp"

namespace ardtk {

namespace {

std::optional<std::size_t> value_at(const CurveEstimate& g, std::size_t l) {
  const Rational key(static_cast<std::int64_t>(l));
  for (const auto& p : g.points) {
    if (p.axis_value == key) return p.bits;
  }
  return std::nullopt;
}

std::size_t require_value(const CurveEstimate& g, std::size_t l) {
  const auto v = value_at(g, l);
  if (!v) fail(ErrorKind::MissingGridPoint, "canonical estimate has no value at l = " + std::to_string(l));
  return *v;
}

}  // namespace

std::vector<TransformedPoint> transform_rate_distortion(const CurveEstimate& g,
                                                        const DistortionSpec& spec,
                                                        const std::vector<Rational>& delta_grid) {
  if (g.axis != Axis::Canonical) fail(ErrorKind::Domain, "transform needs a canonical estimate");
  std::vector<TransformedPoint> out;
  for (const auto& delta : delta_grid) {
    TransformedPoint t;
    t.delta = delta;
    t.l = log_cardinality(spec, delta);
    t.bits = require_value(g, t.l);
    if (spec.family == Family::Hamming) {
      const double h = static_cast<double>(spec.n) * binary_entropy(delta.to_double());
      t.entropy_l = static_cast<std::size_t>(std::llround(h));
      t.entropy_bits = value_at(g, *t.entropy_l);
    }
    out.push_back(t);
  }
  return out;
}

ShapeFn shape_generate(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k > n) fail(ErrorKind::Domain, "shape start value k must be at most n");
  Rng rng(seed);
  std::vector<bool> drop(n + 1, false);
  for (auto i : rng.subset(n, k)) drop[i + 1] = true;
  ShapeFn g;
  g.values.assign(n + 1, 0);
  for (std::size_t l = n; l-- > 0;) g.values[l] = g.values[l + 1] + (drop[l + 1] ? 1 : 0);
  return g;
}

ShapeCheck shape_validate(const ShapeFn& g, std::size_t n) {
  ShapeCheck out;
  if (g.values.size() != n + 1) fail(ErrorKind::Domain, "shape must have n + 1 values");
  if (g.values[n] != 0) {
    out.ok = false;
    out.violation = n;
    return out;
  }
  for (std::size_t l = n; l >= 1; --l) {
    const auto hi = g.values[l - 1], lo = g.values[l];
    if (hi < lo || hi - lo > 1) {
      out.ok = false;
      out.violation = l;
      return out;
    }
  }
  return out;
}

ShapeFn staircase_shape(std::size_t n) {
  const double dn = static_cast<double>(n);
  const auto a = static_cast<std::size_t>(std::llround(dn * binary_entropy(1.0 / 6)));
  const auto b = static_cast<std::size_t>(std::llround(dn * binary_entropy(1.0 / 3)));
  ShapeFn g;
  for (std::size_t l = 0; l <= n; ++l) {
    if (l <= a) {
      g.values.push_back(n - b + a - l);
    } else if (l <= b) {
      g.values.push_back(n - b);
    } else {
      g.values.push_back(n - l);
    }
  }
  return g;
}

ShapeFn project_to_shapes(const std::vector<std::size_t>& estimate) {
  if (estimate.empty()) fail(ErrorKind::Domain, "estimate must cover l = 0..n");
  const std::size_t n = estimate.size() - 1;
  ShapeFn g;
  g.values.assign(n + 1, 0);
  for (std::size_t l = n; l >= 1; --l) {
    g.values[l - 1] = g.values[l] + (g.values[l] < estimate[l - 1] ? 1 : 0);
  }
  return g;
}

BoundsReport shape_bounds_check(const std::vector<std::size_t>& g, std::size_t n, double c) {
  if (g.size() != n + 1) fail(ErrorKind::Domain, "bounds check needs g(0..n)");
  BoundsReport out;
  out.slack = c * std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  constexpr double eps = 1e-9;
  out.endpoint_ok = static_cast<double>(g[n]) <= out.slack + eps;
  for (std::size_t l = 0; l <= n; ++l) {
    for (std::size_t m = l + 1; m <= n; ++m) {
      const long long diff = static_cast<long long>(g[l]) - static_cast<long long>(g[m]);
      const double d = static_cast<double>(diff);
      if (d < -out.slack - eps || d > static_cast<double>(m - l) + out.slack + eps) {
        out.violations.push_back({l, m, diff});
      }
    }
  }
  return out;
}

BoundsReport shape_bounds_check(const CurveEstimate& g, std::size_t n, double c) {
  return shape_bounds_check(canonical_values(g, n), n, c);
}

std::vector<std::size_t> canonical_values(const CurveEstimate& g, std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l <= n; ++l) out.push_back(require_value(g, l));
  return out;
}

}  // namespace ardtk
