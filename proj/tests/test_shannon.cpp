#include <cmath>

#include "ardtk/error.hpp"
#include "ardtk/shannon.hpp"
#include "doctest.h"

using namespace ardtk;

namespace {

double h2(double p) { return p <= 0 || p >= 1 ? 0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

// Independent check: binary-input binary-output mutual information minimized
// over a fine grid of channels meeting the distortion budget.
double grid_rate(double p1, double delta) {
  double best = 1e9;
  const int steps = 2000;
  for (int i = 0; i <= steps; ++i) {
    const double a = static_cast<double>(i) / steps;  // Q(1|0)
    // Largest admissible b = Q(0|1) given a; the mutual information is
    // then minimized at the boundary for the symmetric source.
    const double b = (delta - (1 - p1) * a) / p1;
    if (b < 0 || b > 1) continue;
    const double r1 = (1 - p1) * a + p1 * (1 - b);
    const double i_xz = h2(r1) - (1 - p1) * h2(a) - p1 * h2(b);
    best = std::min(best, i_xz);
  }
  return best;
}

const auto uniform = SourceModel::bernoulli(Rational(1, 2), 1);

}  // namespace

TEST_CASE("source model validation") {
  CHECK_THROWS_AS((SourceModel{{Rational(1, 2), Rational(1, 3)}, 1}).validate(), Error);
  CHECK_THROWS_AS((SourceModel{{Rational(3, 2), Rational(-1, 2)}, 1}).validate(), Error);
  CHECK_NOTHROW((SourceModel{{Rational(1, 3), Rational(2, 3)}, 4}).validate());
}

TEST_CASE("analytic binary rate") {
  CHECK(analytic_binary_hamming(Rational(1, 2), 0) == doctest::Approx(1.0));
  CHECK(analytic_binary_hamming(Rational(1, 2), 0.5) == doctest::Approx(0.0));
  CHECK(analytic_binary_hamming(Rational(1, 4), 0.125) == doctest::Approx(h2(0.25) - h2(0.125)));
  CHECK(analytic_binary_hamming(Rational(1, 4), 0.125) == doctest::Approx(0.26771).epsilon(1e-4));
  CHECK(analytic_binary_hamming(Rational(1, 4), 0.3) == 0.0);
  CHECK_THROWS_AS(analytic_binary_hamming(Rational(1, 4), -0.1), Error);
}

TEST_CASE("blahut-arimoto endpoints") {
  const auto d = hamming_matrix(2);
  CHECK(blahut_arimoto(uniform, d, 0.0).rate == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(blahut_arimoto(uniform, d, 0.5).rate == 0.0);
  const auto q = blahut_arimoto(uniform, d, 0.25, {1e-4});
  CHECK(std::abs(q.rate - (1 - h2(0.25))) <= 1e-4);
  CHECK(std::abs(q.rate - 0.18872) <= 1e-4);
  CHECK(std::abs(q.rate - grid_rate(0.5, 0.25)) <= 1e-4);
}

TEST_CASE("blahut-arimoto matches the closed form") {
  const auto d = hamming_matrix(2);
  for (const auto& p1 : {Rational(1, 2), Rational(1, 4), Rational(1, 10)}) {
    const auto src = SourceModel::bernoulli(p1, 1);
    for (int i = 1; i <= 9; ++i) {
      const double delta = 0.05 * i;
      const auto pt = blahut_arimoto(src, d, delta);
      CHECK(std::abs(pt.rate - analytic_binary_hamming(p1, delta)) <= 1e-4);
      CHECK(pt.expected_distortion <= delta + 1e-9);
      CHECK(pt.gap <= 1e-6);
    }
  }
}

TEST_CASE("blahut-arimoto invariants") {
  const auto d = hamming_matrix(3);
  const SourceModel src{{Rational(1, 2), Rational(1, 3), Rational(1, 6)}, 1};
  double prev = 1e9;
  std::vector<double> rates;
  for (int i = 0; i <= 10; ++i) {
    const double delta = 0.05 * i;
    const auto pt = blahut_arimoto(src, d, delta);
    for (const auto& row : pt.channel) {
      double s = 0;
      for (double v : row) s += v;
      CHECK(s == doctest::Approx(1.0));
    }
    for (std::size_t k = 1; k < pt.objective.size(); ++k) CHECK(pt.objective[k] <= pt.objective[k - 1] + 1e-12);
    CHECK(pt.rate <= prev + 1e-9);
    prev = pt.rate;
    rates.push_back(pt.rate);
  }
  for (std::size_t i = 1; i + 1 < rates.size(); ++i) CHECK(rates[i - 1] + rates[i + 1] - 2 * rates[i] >= -1e-5);
  // Three letters at zero distortion need log2 of nothing less than H(p).
  const double hp = -(0.5 * std::log2(0.5) + std::log2(1.0 / 3) / 3 + std::log2(1.0 / 6) / 6);
  CHECK(rates[0] == doctest::Approx(hp).epsilon(1e-5));
}

TEST_CASE("blahut-arimoto rejects bad input") {
  CHECK_THROWS_AS(blahut_arimoto(uniform, hamming_matrix(2), -0.1), Error);
  CHECK_THROWS_AS(blahut_arimoto(uniform, hamming_matrix(3), 0.1), Error);
  CHECK_THROWS_AS(blahut_arimoto(uniform, hamming_matrix(2), 0.1, {0.0}), Error);
  BAParams tight;
  tight.max_iterations = 1;
  tight.tol = 1e-14;
  const SourceModel skew{{Rational(1, 2), Rational(1, 3), Rational(1, 6)}, 1};
  DistortionMatrix d{{0, 1, 3}, {2, 0, 1}, {1, 4, 0}};
  try {
    blahut_arimoto(skew, d, 0.2, tight);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
  }
}

TEST_CASE("comparison report at n = 12") {
  const DistortionSpec spec{Family::Hamming, 12};
  std::vector<Rational> grid;
  for (int i = 1; i <= 6; ++i) grid.emplace_back(i, 12);
  ComparisonParams cp;
  cp.samples = 6;
  cp.search.budget = 1 << 12;
  const auto r = expected_rate_comparison(SourceModel::bernoulli(Rational(1, 2), 12), spec, grid, cp);
  REQUIRE(r.rows.size() == grid.size());
  for (std::size_t j = 0; j < r.rows.size(); ++j) {
    const auto& row = r.rows[j];
    CHECK(row.min <= row.mean);
    CHECK(row.mean <= row.max);
    CHECK(row.n_rate == doctest::Approx(12 * (1 - h2(grid[j].to_double()))).epsilon(1e-4));
    REQUIRE(row.delta2.has_value());
    CHECK(*row.entropy_s <= 12.0 + 1e-9);
    CHECK(*row.exact_mean <= static_cast<double>(*row.exact_max));
    if (j > 0) {
      CHECK(row.mean <= r.rows[j - 1].mean);
      CHECK(*row.exact_mean <= *r.rows[j - 1].exact_mean);
    }
  }
  for (const auto& c : r.sample_curves) {
    for (std::size_t j = 1; j < c.size(); ++j) CHECK(c[j] <= c[j - 1]);
  }
  const auto again = expected_rate_comparison(SourceModel::bernoulli(Rational(1, 2), 12), spec, grid, cp);
  CHECK(again.sample_curves == r.sample_curves);
}

TEST_CASE("comparison at n = 64 stays under the cap") {
  const DistortionSpec spec{Family::Hamming, 64};
  ComparisonParams cp;
  cp.samples = 3;
  cp.search.budget = 600;
  const auto r = expected_rate_comparison(SourceModel::bernoulli(Rational(1, 2), 64), spec,
                                          {Rational(1, 4), Rational(1, 2)}, cp);
  CHECK(r.rows[1].mean <= 64.0);
  CHECK(r.rows[1].n_rate == 0.0);
  CHECK_FALSE(r.rows[0].delta2.has_value());
  CHECK_THROWS_AS(expected_rate_comparison(SourceModel::bernoulli(Rational(1, 2), 64), spec, {Rational(1, 4)},
                                           [] {
                                             ComparisonParams c;
                                             c.samples = 0;
                                             return c;
                                           }()),
                  Error);
}
