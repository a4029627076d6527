#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ardtk/distortion.hpp"
#include "ardtk/rational.hpp"
#include "ardtk/rdsearch.hpp"

// Shannon's rate-distortion function for i.i.d. sources and the comparison
// between the expected individual rate and n R(delta).

namespace ardtk {

struct SourceModel {
  std::vector<Rational> p;  // per-letter mass, sums to exactly 1
  std::size_t n = 1;        // block length

  void validate() const;
  static SourceModel bernoulli(const Rational& p_one, std::size_t n);
};

using DistortionMatrix = std::vector<std::vector<double>>;  // d[x][z]
DistortionMatrix hamming_matrix(std::size_t alphabet);

struct BAParams {
  double tol = 1e-6;              // bits, duality gap
  std::size_t max_iterations = 100000;  // per slope
  double max_slope = 200;         // nats per unit distortion
};

struct RDPoint {
  double delta = 0;
  double rate = 0;                 // bits per letter, upper end of the bracket
  double expected_distortion = 0;  // of the returned channel, <= delta
  double gap = 0;                  // rate minus the dual lower bound
  double slope = 0;
  std::size_t iterations = 0;      // summed over the slope bisection
  std::vector<std::vector<double>> channel;  // Q(z|x)
  std::vector<double> objective;   // Lagrangian per iteration at the final slope
};

/// R(delta) by Blahut-Arimoto with bisection on the slope. Throws
/// Error(Domain) when delta is below the least achievable distortion and
/// Error(NonConvergence) when the gap stays above tol.
RDPoint blahut_arimoto(const SourceModel& src, const DistortionMatrix& d, double delta,
                       const BAParams& params = {});

/// H(p) - H(delta) for 0 <= delta <= min(p, 1-p); 0 beyond. Throws
/// Error(Domain) for negative delta or p outside [0, 1].
double analytic_binary_hamming(const Rational& p_one, double delta);

struct ComparisonParams {
  std::size_t samples = 10;
  SearchParams search;
  double slack = 24;  // stands in for the uncomputable Delta_1
  BAParams ba;
};

struct ComparisonRow {
  Rational delta;
  double mean = 0;
  std::size_t min = 0, max = 0;
  double n_rate = 0;    // n R(delta)
  bool shannon_floor_ok = false;  // mean >= n R(delta) - slack
  // Exhaustive view at n <= 12: exact expectation of the proxy r_x over p,
  // the code map's output entropy H(S) and Delta_2 = n - H(S).
  std::optional<double> exact_mean;
  std::optional<std::size_t> exact_max;
  std::optional<double> entropy_s;
  std::optional<double> delta2;
};

struct ComparisonReport {
  std::size_t n = 0;
  Rational p_one;
  double slack = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<ComparisonRow> rows;
  std::vector<BitWord> sample_words;
  std::vector<std::vector<std::size_t>> sample_curves;  // [sample][delta]
};

/// Draws sample words from a Bernoulli source, estimates each r_x on the
/// delta grid and aggregates. Reports only; no pass/fail.
ComparisonReport expected_rate_comparison(const SourceModel& src, const DistortionSpec& spec,
                                          const std::vector<Rational>& delta_grid,
                                          const ComparisonParams& params);

}  // namespace ardtk
