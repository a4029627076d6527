#include "ardtk/shannon.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "ardtk/codec.hpp"
#include "ardtk/error.hpp"
#include "ardtk/random.hpp"

namespace ardtk {

void SourceModel::validate() const {
  if (p.empty()) fail(ErrorKind::Domain, "source alphabet is empty");
  if (n == 0) fail(ErrorKind::Domain, "block length must be positive");
  Rational sum(0);
  for (const auto& q : p) {
    if (q < Rational(0)) fail(ErrorKind::Domain, "negative source probability");
    sum = sum + q;
  }
  if (sum != Rational(1)) fail(ErrorKind::Domain, "source probabilities sum to " + sum.to_string());
}

SourceModel SourceModel::bernoulli(const Rational& p_one, std::size_t n) {
  SourceModel m{{Rational(1) - p_one, p_one}, n};
  m.validate();
  return m;
}

DistortionMatrix hamming_matrix(std::size_t alphabet) {
  DistortionMatrix d(alphabet, std::vector<double>(alphabet, 1.0));
  for (std::size_t i = 0; i < alphabet; ++i) d[i][i] = 0.0;
  return d;
}

namespace {

struct Iterate {
  std::vector<double> q;                 // reproduction marginal
  std::vector<std::vector<double>> Q;    // channel
  double rate = 0;                       // I(p, Q) in nats
  double distortion = 0;
  double dual = 0;                       // -sum p log c - log max g, nats
  double objective = 0;                  // -sum p log c
};

// One Blahut-Arimoto step at slope s: channel from q, then the new q.
void step(const std::vector<double>& p, const DistortionMatrix& d, double s, Iterate& it) {
  const std::size_t ax = p.size(), az = it.q.size();
  std::vector<double> c(ax, 0.0), g(az, 0.0), next(az, 0.0);
  it.Q.assign(ax, std::vector<double>(az, 0.0));
  it.objective = 0;
  for (std::size_t x = 0; x < ax; ++x) {
    for (std::size_t z = 0; z < az; ++z) c[x] += it.q[z] * std::exp(-s * d[x][z]);
    if (p[x] > 0) it.objective -= p[x] * std::log(c[x]);
  }
  it.distortion = 0;
  for (std::size_t x = 0; x < ax; ++x) {
    for (std::size_t z = 0; z < az; ++z) {
      const double a = std::exp(-s * d[x][z]);
      it.Q[x][z] = it.q[z] * a / c[x];
      g[z] += p[x] * a / c[x];
      next[z] += p[x] * it.Q[x][z];
      it.distortion += p[x] * it.Q[x][z] * d[x][z];
    }
  }
  it.rate = 0;
  for (std::size_t x = 0; x < ax; ++x) {
    for (std::size_t z = 0; z < az; ++z) {
      const double v = it.Q[x][z];
      if (p[x] > 0 && v > 0 && next[z] > 0) it.rate += p[x] * v * std::log(v / next[z]);
    }
  }
  it.rate = std::max(0.0, it.rate);
  double gmax = 0;
  for (std::size_t z = 0; z < az; ++z) {
    if (it.q[z] > 0) gmax = std::max(gmax, g[z]);
  }
  it.dual = it.objective - std::log(gmax);
  it.q = next;
}

struct SlopeRun {
  Iterate it;
  std::size_t iterations = 0;
  std::vector<double> objective;
  bool converged = false;
};

// Iterates at a fixed slope until the gap at the channel's own distortion
// is below tol (nats).
SlopeRun run_slope(const std::vector<double>& p, const DistortionMatrix& d, double s,
                   std::vector<double> q, double tol, std::size_t cap) {
  SlopeRun r;
  r.it.q = std::move(q);
  for (; r.iterations < cap; ++r.iterations) {
    step(p, d, s, r.it);
    r.objective.push_back(r.it.objective);  // min over channels of I + sD at this q
    const double lower = r.it.dual - s * r.it.distortion;
    if (r.it.rate - lower <= tol) {
      r.converged = true;
      ++r.iterations;
      break;
    }
  }
  return r;
}

}  // namespace

RDPoint blahut_arimoto(const SourceModel& src, const DistortionMatrix& d, double delta,
                       const BAParams& params) {
  src.validate();
  if (!(params.tol > 0)) fail(ErrorKind::Domain, "tolerance must be positive");
  const std::size_t ax = src.p.size();
  if (d.size() != ax || d.empty()) fail(ErrorKind::Domain, "distortion matrix rows must match the alphabet");
  const std::size_t az = d[0].size();
  for (const auto& row : d) {
    if (row.size() != az || az == 0) fail(ErrorKind::Domain, "distortion matrix is ragged");
  }
  std::vector<double> p(ax);
  for (std::size_t x = 0; x < ax; ++x) p[x] = src.p[x].to_double();

  double d_min = 0;
  for (std::size_t x = 0; x < ax; ++x) d_min += p[x] * *std::min_element(d[x].begin(), d[x].end());
  if (delta < d_min - 1e-15) fail(ErrorKind::Domain, "delta is below the least achievable distortion");

  RDPoint out;
  out.delta = delta;

  // A constant reproduction letter already meets delta.
  std::size_t best_z = 0;
  double d_max = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < az; ++z) {
    double e = 0;
    for (std::size_t x = 0; x < ax; ++x) e += p[x] * d[x][z];
    if (e < d_max) {
      d_max = e;
      best_z = z;
    }
  }
  if (delta >= d_max) {
    out.channel.assign(ax, std::vector<double>(az, 0.0));
    for (auto& row : out.channel) row[best_z] = 1.0;
    out.expected_distortion = d_max;
    return out;
  }

  const double tol = params.tol * std::log(2.0);
  const double inner_tol = tol / 4;
  std::vector<double> q(az, 1.0 / static_cast<double>(az));
  double lo = 0, hi = params.max_slope;
  std::optional<SlopeRun> feasible;
  double feasible_s = 0;
  std::size_t total = 0;

  auto accept = [&](double s, SlopeRun run) {
    feasible = std::move(run);
    feasible_s = s;
  };
  // At the top slope the distortion may sit a hair above the floor.
  {
    auto top = run_slope(p, d, hi, q, inner_tol, params.max_iterations);
    total += top.iterations;
    if (top.it.distortion <= delta + 1e-12) accept(hi, std::move(top));
  }
  for (int iter = 0; iter < 100 && feasible; ++iter) {
    const double mid = 0.5 * (lo + hi);
    auto run = run_slope(p, d, mid, feasible->it.q, inner_tol, params.max_iterations);
    total += run.iterations;
    if (run.it.distortion <= delta) {
      hi = mid;
      accept(mid, std::move(run));
    } else {
      lo = mid;
    }
    const double gap = feasible->it.rate - (feasible->it.dual - feasible_s * delta);
    if (hi - lo < 1e-13 || (feasible->converged && gap <= tol)) break;
  }
  if (!feasible) fail(ErrorKind::NonConvergence, "no slope reaches the requested distortion");

  const auto& it = feasible->it;
  out.iterations = total;
  out.slope = feasible_s;
  out.rate = it.rate / std::log(2.0);
  out.expected_distortion = it.distortion;
  out.gap = std::max(0.0, (it.rate - (it.dual - feasible_s * delta)) / std::log(2.0));
  out.channel = it.Q;
  out.objective = feasible->objective;
  for (auto& v : out.objective) v /= std::log(2.0);
  if (!feasible->converged || out.gap > params.tol) {
    fail(ErrorKind::NonConvergence, "duality gap " + std::to_string(out.gap) + " bits exceeds tolerance");
  }
  return out;
}

double analytic_binary_hamming(const Rational& p_one, double delta) {
  if (p_one < Rational(0) || p_one > Rational(1)) fail(ErrorKind::Domain, "p must lie in [0, 1]");
  if (delta < 0) fail(ErrorKind::Domain, "delta must be nonnegative");
  const double p = p_one.to_double();
  if (delta >= std::min(p, 1 - p)) return 0.0;
  return binary_entropy(p) - binary_entropy(delta);
}

namespace {

// Exhaustive code map at small n: for each x the lexicographically least
// destination of least codelength in each ball.
void exhaustive_view(const SourceModel& src, const DistortionSpec& spec,
                     const std::vector<Rational>& grid, ComparisonReport& report) {
  const std::size_t n = spec.n;
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::pair<std::size_t, std::uint64_t>> order;
  order.reserve(total);
  for (std::uint64_t v = 0; v < total; ++v) order.emplace_back(codec::codelength(BitWord::from_uint(v, n)), v);
  std::sort(order.begin(), order.end());

  const double p1 = src.p[1].to_double();
  std::vector<std::size_t> flips;
  for (const auto& g : grid) flips.push_back(radius_flips(n, g));
  const std::size_t k = grid.size();
  std::vector<double> mean(k, 0.0);
  std::vector<std::size_t> worst(k, 0);
  std::vector<std::vector<double>> mass(k, std::vector<double>(total, 0.0));
  for (std::uint64_t x = 0; x < total; ++x) {
    const int ones_x = std::popcount(x);
    const double px = std::pow(p1, ones_x) * std::pow(1 - p1, static_cast<int>(n) - ones_x);
    std::size_t assigned = 0;
    std::vector<bool> done(k, false);
    for (const auto& [bits, y] : order) {
      const auto dist = static_cast<std::size_t>(std::popcount(x ^ y));
      for (std::size_t j = 0; j < k; ++j) {
        if (done[j] || dist > flips[j]) continue;
        done[j] = true;
        ++assigned;
        mean[j] += px * static_cast<double>(bits);
        worst[j] = std::max(worst[j], bits);
        mass[j][y] += px;
      }
      if (assigned == k) break;
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    double h = 0;
    for (double s : mass[j]) {
      if (s > 0) h -= s * std::log2(s);
    }
    auto& row = report.rows[j];
    row.exact_mean = mean[j];
    row.exact_max = worst[j];
    row.entropy_s = h;
    row.delta2 = static_cast<double>(n) - h;
  }
}

}  // namespace

ComparisonReport expected_rate_comparison(const SourceModel& src, const DistortionSpec& spec,
                                          const std::vector<Rational>& delta_grid,
                                          const ComparisonParams& params) {
  src.validate();
  spec.validate();
  if (src.p.size() != 2) fail(ErrorKind::Domain, "comparison needs a binary source");
  if (spec.family != Family::Hamming) fail(ErrorKind::Domain, "comparison is defined for Hamming distortion");
  if (src.n != spec.n) fail(ErrorKind::Domain, "source block length differs from n");
  if (params.samples == 0) fail(ErrorKind::Domain, "need at least one sample");
  if (!std::is_sorted(delta_grid.begin(), delta_grid.end())) fail(ErrorKind::Domain, "delta grid must be sorted");

  ComparisonReport report;
  report.n = spec.n;
  report.p_one = src.p[1];
  report.slack = params.slack;
  report.samples = params.samples;
  report.seed = params.search.seed;

  Rng rng(derive_seed(params.search.seed, 0x5a));
  const auto num = static_cast<std::uint64_t>(src.p[1].num());
  const auto den = static_cast<std::uint64_t>(src.p[1].den());
  for (std::size_t s = 0; s < params.samples; ++s) {
    BitWord x(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) x.set(i, rng.below(den) < num);
    SearchParams sp = params.search;
    sp.seed = derive_seed(params.search.seed, s + 1);
    const auto curve = rate_distortion_curve(x, spec, delta_grid, sp);
    std::vector<std::size_t> bits;
    for (const auto& pt : curve.points) bits.push_back(*pt.bits);
    report.sample_words.push_back(std::move(x));
    report.sample_curves.push_back(std::move(bits));
  }

  const auto matrix = hamming_matrix(2);
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    ComparisonRow row;
    row.delta = delta_grid[j];
    row.min = SIZE_MAX;
    double sum = 0;
    for (const auto& c : report.sample_curves) {
      sum += static_cast<double>(c[j]);
      row.min = std::min(row.min, c[j]);
      row.max = std::max(row.max, c[j]);
    }
    row.mean = sum / static_cast<double>(params.samples);
    row.n_rate = static_cast<double>(spec.n) * blahut_arimoto(src, matrix, delta_grid[j].to_double(), params.ba).rate;
    row.shannon_floor_ok = row.mean >= row.n_rate - params.slack;
    report.rows.push_back(row);
  }
  if (spec.n <= 12) exhaustive_view(src, spec, delta_grid, report);
  return report;
}

}  // namespace ardtk
