#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ardtk/codec.hpp"
#include "ardtk/cover.hpp"
#include "ardtk/denoise.hpp"
#include "ardtk/error.hpp"
#include "ardtk/game.hpp"
#include "ardtk/rdsearch.hpp"
#include "ardtk/shannon.hpp"
#include "json.hpp"

namespace ardtk::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

// Reals are exported at 12 significant digits so outputs replay bit-exactly.
std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
json real_json(double v) { return std::isfinite(v) ? json(std::stod(real(v))) : json(real(v)); }

std::string hex(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json rational_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// ASCII '0'/'1' with whitespace and '#' comment lines ignored, or packed
/// bytes (MSB first) with --raw.
BitWord read_bits(const std::string& path, bool raw) {
  const std::string text = slurp(path);
  if (raw) {
    std::vector<std::uint8_t> bytes(text.begin(), text.end());
    return BitWord::from_bytes(bytes, 8 * bytes.size());
  }
  BitWord out;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] == '#') continue;
    for (char c : line) {
      if (c == '0' || c == '1') {
        out.push_back(c == '1');
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        fail(ErrorKind::Io, path + ": unexpected character '" + std::string(1, c) + "'");
      }
    }
  }
  return out;
}

Rational parse_rational(const std::string& s) {
  try {
    return Rational::parse(s);
  } catch (const Error& e) {
    fail(ErrorKind::Usage, "bad rational '" + s + "'");
  }
}

/// Comma-separated values or inclusive ranges start:stop:step.
std::vector<Rational> parse_grid(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_rational(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) fail(ErrorKind::Usage, "range '" + item + "' needs start:stop:step");
    const Rational a = parse_rational(item.substr(0, c1));
    const Rational b = parse_rational(item.substr(c1 + 1, c2 - c1 - 1));
    const Rational step = parse_rational(item.substr(c2 + 1));
    if (!(step > Rational(0))) fail(ErrorKind::Usage, "range step must be positive");
    for (Rational v = a; v <= b; v = v + step) out.push_back(v);
  }
  if (out.empty()) fail(ErrorKind::Usage, "empty grid");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> integer_grid(const std::vector<Rational>& grid) {
  std::vector<std::size_t> out;
  for (const auto& g : grid) {
    if (g.den() != 1 || g < Rational(0)) fail(ErrorKind::Usage, "grid needs nonnegative integers, got " + g.to_string());
    out.push_back(static_cast<std::size_t>(g.num()));
  }
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("ARDTK_SEED");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') fail(ErrorKind::Usage, "ARDTK_SEED must be an unsigned integer");
  return v;
}

struct Globals {
  std::string out_dir = ".";
  unsigned threads = 1;
  std::uint64_t seed = 1;
  codec::CodecParams codec;
};

/// Collects outputs and writes manifest.json next to them.
class Run {
 public:
  Run(const Globals& g, std::string subcommand, const std::vector<std::string>& args)
      : g_(g), subcommand_(std::move(subcommand)), args_(args) {
    fs::create_directories(g_.out_dir);
  }

  std::string path(const std::string& name) {
    outputs_.push_back(name);
    return (fs::path(g_.out_dir) / name).string();
  }
  void input(const std::string& p) {
    const std::string bytes = slurp(p);
    std::vector<std::uint8_t> v(bytes.begin(), bytes.end());
    inputs_[p] = hex(content_hash(BitWord::from_bytes(v, 8 * v.size())));
  }
  void write_text(const std::string& name, const std::string& text) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + name);
    out << text;
  }
  void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }
  json& extra() { return extra_; }

  void finish() {
    json m;
    m["tool"] = "ardtk";
    m["version"] = kVersion;
    m["subcommand"] = subcommand_;
    m["argv"] = args_;
    m["seed"] = g_.seed;
    m["threads"] = g_.threads;
    m["codec"] = {{"block_size", g_.codec.block_size}, {"coder_precision", g_.codec.coder_precision}};
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    for (auto& [k, v] : extra_.items()) m[k] = v;
    std::ofstream out(fs::path(g_.out_dir) / "manifest.json", std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write manifest.json");
    out << m.dump(2) << "\n";
  }

 private:
  const Globals& g_;
  std::string subcommand_;
  std::vector<std::string> args_;
  std::vector<std::string> outputs_;
  json inputs_ = json::object();
  json extra_ = json::object();
};

std::string curve_csv(const CurveEstimate& c) {
  std::ostringstream s;
  s << "axis_value,bits,distortion_num,distortion_den,candidate_hash\n";
  for (const auto& p : c.points) {
    s << p.axis_value.to_string() << ',';
    if (p.bits) s << *p.bits;
    s << ',';
    if (p.distortion) s << p.distortion->num() << ',' << p.distortion->den();
    else s << ',';
    s << ',' << (p.bits ? hex(p.candidate_hash) : "") << '\n';
  }
  return s.str();
}

// Subcommand bodies. Each returns after writing its outputs.

struct CodecOpts {
  std::string input, given;
  bool raw = false;
};

void cmd_codec(const std::string& which, const CodecOpts& o, Run& run, const Globals& g) {
  run.input(o.input);
  const BitWord x = read_bits(o.input, o.raw);
  json result{{"n", x.size()}};
  if (which == "roundtrip") {
    const auto c = codec::compress(x, g.codec);
    const bool ok = codec::decompress(c, g.codec) == x;
    if (!ok) fail(ErrorKind::MalformedCodeword, "round trip mismatch");
    result["codelength"] = c.size();
    result["roundtrip"] = ok;
    std::cout << "codelength " << c.size() << "\n";
  } else if (which == "length") {
    result["codelength"] = codec::codelength(x, g.codec);
    std::cout << "codelength " << result["codelength"].get<std::size_t>() << "\n";
  } else {
    run.input(o.given);
    const BitWord y = read_bits(o.given, o.raw);
    result["conditional_codelength"] = codec::conditional_codelength(x, y, g.codec);
    std::cout << "conditional_codelength " << result["conditional_codelength"].get<std::size_t>() << "\n";
  }
  run.write_json("codec.json", result);
}

struct CurveOpts {
  std::string input, family = "hamming", axis = "distortion", grid, out = "curve.csv";
  bool raw = false;
  std::size_t budget = 20000, starts = 4;
  double slack = kDefaultSlack;
};

void cmd_curve(const CurveOpts& o, Run& run, const Globals& g) {
  run.input(o.input);
  const BitWord x = read_bits(o.input, o.raw);
  const DistortionSpec spec{parse_family(o.family), x.size()};
  spec.validate();
  const Axis axis = parse_axis(o.axis);
  SearchParams p;
  p.budget = o.budget;
  p.seed = g.seed;
  p.codec = g.codec;
  p.threads = g.threads;
  p.starts = o.starts;

  std::vector<Rational> grid;
  if (!o.grid.empty()) {
    grid = parse_grid(o.grid);
  } else {
    const auto n = static_cast<std::int64_t>(spec.n);
    switch (axis) {
      case Axis::Rate:
        for (std::int64_t r = 0; r <= static_cast<std::int64_t>(codec::codelength(x, g.codec)); ++r) grid.emplace_back(r);
        break;
      case Axis::Canonical:
        for (std::int64_t l = 0; l <= n; ++l) grid.emplace_back(l);
        break;
      case Axis::Distortion:
        if (spec.family == Family::List) {
          for (std::int64_t l = 0; l <= std::min<std::int64_t>(n, 16); ++l) grid.emplace_back(l);
        } else if (spec.family == Family::Hamming) {
          for (std::int64_t i = 0; i <= n / 2; ++i) grid.emplace_back(i, n);
        } else {
          for (std::int64_t i = 0; i <= 16; ++i) grid.emplace_back(i, 16);
        }
        break;
    }
  }
  CurveEstimate c;
  switch (axis) {
    case Axis::Rate: c = distortion_rate_curve(x, spec, integer_grid(grid), p); break;
    case Axis::Distortion: c = rate_distortion_curve(x, spec, grid, p); break;
    case Axis::Canonical: c = canonical_estimate(x, spec, integer_grid(grid), p, o.slack); break;
  }
  run.write_text(o.out, curve_csv(c));
  run.extra()["budget_used"] = c.budget_used;
  run.extra()["exhaustive"] = c.exhaustive;
  if (axis == Axis::Canonical) run.extra()["slack_bits"] = real_json(c.slack);
  run.extra()["slack_c"] = real_json(o.slack);
  std::cout << "wrote " << c.points.size() << " points, " << c.budget_used << " evaluations"
            << (c.exhaustive ? " (exhaustive)" : "") << "\n";
}

struct DenoiseOpts {
  std::string input, clean;
  std::size_t budget = 200000, rate_step = 1;
  bool packed = false;
};

std::string gnuplot_script(bool with_clean) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
       "set key autotitle columnhead\n"
       "set xlabel 'rate (bits)'\n"
       "set ylabel 'distortion (fraction of pixels)'\n"
       "set terminal pngcairo size 900,600\n"
       "set output 'curve.png'\n"
       "plot 'curve.csv' using 1:($3/$4) with steps title 'to noisy input'";
  if (with_clean) s << ", \\\n     'curve.csv' using 1:($6/$7) with steps title 'to clean image'";
  s << "\n";
  return s.str();
}

void cmd_denoise(const DenoiseOpts& o, Run& run, const Globals& g) {
  run.input(o.input);
  const Bitmap img = read_pbm_file(o.input);
  std::optional<Bitmap> clean;
  if (!o.clean.empty()) {
    run.input(o.clean);
    clean = read_pbm_file(o.clean);
    if (clean->width != img.width || clean->height != img.height) fail(ErrorKind::Domain, "clean image size differs");
  }
  const DistortionSpec spec{Family::Hamming, img.pixels.size()};
  DenoiseParams p;
  p.search.budget = o.budget;
  p.search.seed = g.seed;
  p.search.codec = g.codec;
  p.search.threads = g.threads;
  p.width = img.width;
  p.rate_step = o.rate_step;
  const auto r = denoise(img.pixels, spec, p);

  write_pbm_file(run.path("denoised.pbm"), Bitmap{img.width, img.height, r.denoised}, o.packed);
  std::ostringstream csv;
  csv << "rate,bits,distortion_num,distortion_den,candidate_hash";
  if (clean) csv << ",clean_num,clean_den";
  csv << "\n";
  std::optional<std::size_t> best_clean;
  std::size_t best_clean_rate = 0;
  for (const auto& pt : r.curve.points) {
    csv << pt.axis_value.to_string() << ',' << *pt.bits << ',' << pt.distortion->num() << ','
        << pt.distortion->den() << ',' << hex(pt.candidate_hash);
    if (clean) {
      const Rational dc(static_cast<std::int64_t>((pt.destination ^ clean->pixels).popcount()),
                        static_cast<std::int64_t>(spec.n));
      csv << ',' << dc.num() << ',' << dc.den();
      const auto w = (pt.destination ^ clean->pixels).popcount();
      if (!best_clean || w < *best_clean) {
        best_clean = w;
        best_clean_rate = static_cast<std::size_t>(pt.axis_value.floor());
      }
    }
    csv << "\n";
  }
  run.write_text("curve.csv", csv.str());
  run.write_text("plot.gp", gnuplot_script(clean.has_value()));

  json d;
  d["knee_rate"] = r.knee.rate;
  d["knee_linear"] = r.knee.linear;
  d["denoised_bits"] = r.denoised_bits;
  d["residual_weight"] = r.residual_weight;
  d["residual_fraction"] = real_json(r.residual_fraction);
  d["residual_bits"] = r.residual_bits;
  d["residual_log_ball"] = real_json(r.residual_log_ball);
  d["evaluations"] = r.evaluations;
  d["input_bits"] = codec::codelength(img.pixels, g.codec);
  if (clean) {
    d["clean_distance"] = (r.denoised ^ clean->pixels).popcount();
    d["clean_minimizer_rate"] = best_clean_rate;
    d["clean_minimum_distance"] = *best_clean;
  }
  run.write_json("diagnostics.json", d);
  std::cout << "knee at " << r.knee.rate << " bits, residual weight " << r.residual_weight << "\n";
}

struct CrossOpts {
  std::size_t side = 32;
  std::string flip = "1/10";
  bool packed = false;
};

void cmd_cross(const CrossOpts& o, Run& run, const Globals& g) {
  const auto c = make_noisy_cross(o.side, parse_rational(o.flip), g.seed);
  write_pbm_file(run.path("clean.pbm"), c.clean, o.packed);
  write_pbm_file(run.path("noisy.pbm"), c.noisy, o.packed);
  std::cout << "flipped " << (c.clean.pixels ^ c.noisy.pixels).popcount() << " pixels\n";
}

struct CoverOpts {
  std::size_t n = 8;
  std::string delta = "1/2", d = "1/8", center;
  bool space = false;
  unsigned c = 1, attempts = 32;
};

void cmd_cover(const CoverOpts& o, Run& run, const Globals& g) {
  const Rational d = parse_rational(o.d);
  CoverParams cp{o.c, o.attempts};
  CoverResult r;
  double target_size = 0;
  if (o.space) {
    r = cover_space(o.n, d, g.seed, cp);
    target_size = std::exp2(static_cast<double>(o.n));
  } else {
    const Rational delta = parse_rational(o.delta);
    std::optional<BitWord> center;
    if (!o.center.empty()) center = BitWord::from_string(o.center);
    r = cover_ball(o.n, delta, d, g.seed, cp, center);
    target_size = static_cast<double>(ball_cardinality(DistortionSpec{Family::Hamming, o.n}, delta));
  }
  const auto check = verify_cover(o.n, r.target, r.centers, d);
  json j;
  j["n"] = o.n;
  j["whole_cube"] = r.target.whole_cube;
  if (!r.target.whole_cube) {
    j["center"] = r.target.center.to_string();
    j["radius"] = rational_json(r.target.radius);
  }
  j["small_radius"] = rational_json(r.small_radius);
  j["size"] = r.centers.size();
  j["bound"] = real_json(cover_size_bound(o.n, target_size, d));
  j["verified"] = check.ok;
  j["retries_used"] = r.retries_used;
  json shells = json::array();
  for (const auto& s : r.shells) {
    shells.push_back({{"shell", rational_json(s.shell)}, {"offset", rational_json(s.offset)},
                      {"sampled", s.sampled}, {"kept", s.kept}, {"attempts", s.attempts}});
  }
  j["shells"] = shells;
  json centers = json::array();
  for (const auto& c : r.centers) centers.push_back(c.to_string());
  j["centers"] = centers;
  run.write_json("cover.json", j);
  std::cout << r.centers.size() << " centers" << (check.ok ? ", verified" : ", NOT a cover") << "\n";
  if (!check.ok) fail(ErrorKind::Domain, "constructed cover failed verification");
}

struct GameOpts {
  std::size_t n = 4;
  unsigned k = 6, m = 2;
  std::string adversary = "random", strategy = "det", sets;
  std::optional<std::uint64_t> moves;
};

void cmd_game(const GameOpts& o, Run& run, const Globals& g) {
  GameParams params{o.n, o.k, o.m};
  params.validate();
  std::unique_ptr<Adversary> alice;
  if (o.adversary == "file") {
    if (o.sets.empty()) fail(ErrorKind::Usage, "--adversary file needs --sets");
    run.input(o.sets);
    alice = make_scripted_adversary(parse_adversary_sets(slurp(o.sets), o.n));
  } else {
    alice = make_adversary(parse_adversary(o.adversary), params, derive_seed(g.seed, 1), o.moves);
  }
  const Strategy strategy = parse_strategy(o.strategy);
  const auto tr = play_game(*alice, params, strategy, g.seed);
  json j;
  j["params"] = {{"n", o.n}, {"k", o.k}, {"m", o.m}};
  j["strategy"] = to_string(strategy);
  j["adversary"] = o.adversary;
  j["seed"] = g.seed;
  j["win"] = tr.win();
  j["total_marks"] = tr.total_marks();
  j["mark_bound"] = mark_bound(params);
  json moves = json::array();
  for (const auto& mv : tr.moves) {
    json set = json::array();
    for (auto e : mv.alice) set.push_back(BitWord::from_uint(e, o.n).to_string());
    moves.push_back({{"alice", set}, {"marks", mv.marks}, {"block_exponent", mv.block_exponent},
                     {"passes", mv.passes}, {"win", mv.win}});
  }
  j["moves"] = moves;
  if (strategy == Strategy::Deterministic && o.n <= 16) {
    const auto check = verify_transcript(tr, params);
    j["verified"] = check.ok;
    if (!check.ok) j["violation"] = check.reason;
  }
  run.write_json("transcript.json", j);
  std::cout << j.dump() << "\n";
}

struct ShannonOpts {
  std::string p = "1/2", grid = "1/20:9/20:1/20";
  double tol = 1e-6;
};

void cmd_shannon(const ShannonOpts& o, Run& run) {
  const Rational p1 = parse_rational(o.p);
  const auto src = SourceModel::bernoulli(p1, 1);
  BAParams ba;
  ba.tol = o.tol;
  std::ostringstream csv;
  csv << "delta_num,delta_den,rate_ba,rate_analytic,gap,iterations\n";
  for (const auto& delta : parse_grid(o.grid)) {
    const auto pt = blahut_arimoto(src, hamming_matrix(2), delta.to_double(), ba);
    csv << delta.num() << ',' << delta.den() << ',' << real(pt.rate) << ','
        << real(analytic_binary_hamming(p1, delta.to_double())) << ',' << real(pt.gap) << ',' << pt.iterations << "\n";
  }
  run.write_text("shannon.csv", csv.str());
  std::cout << csv.str();
}

struct CompareOpts {
  std::size_t n = 12, samples = 10, budget = 4096;
  std::string p = "1/2", grid;
  double slack = 24;
};

void cmd_compare(const CompareOpts& o, Run& run, const Globals& g) {
  const DistortionSpec spec{Family::Hamming, o.n};
  spec.validate();
  const auto src = SourceModel::bernoulli(parse_rational(o.p), o.n);
  std::vector<Rational> grid;
  if (o.grid.empty()) {
    for (std::size_t i = 0; i <= o.n / 2; ++i) grid.emplace_back(static_cast<std::int64_t>(i), static_cast<std::int64_t>(o.n));
  } else {
    grid = parse_grid(o.grid);
  }
  ComparisonParams cp;
  cp.samples = o.samples;
  cp.slack = o.slack;
  cp.search.budget = o.budget;
  cp.search.seed = g.seed;
  cp.search.codec = g.codec;
  cp.search.threads = g.threads;
  const auto r = expected_rate_comparison(src, spec, grid, cp);

  json j;
  j["n"] = r.n;
  j["p_one"] = rational_json(r.p_one);
  j["slack"] = real_json(r.slack);
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  json rows = json::array();
  std::ostringstream csv;
  csv << "delta_num,delta_den,mean,min,max,n_rate,shannon_floor_ok,exact_mean,exact_max,entropy_s,delta2\n";
  for (const auto& row : r.rows) {
    json jr{{"delta", rational_json(row.delta)}, {"mean", real_json(row.mean)}, {"min", row.min},
            {"max", row.max}, {"n_rate", real_json(row.n_rate)}, {"shannon_floor_ok", row.shannon_floor_ok}};
    csv << row.delta.num() << ',' << row.delta.den() << ',' << real(row.mean) << ',' << row.min << ',' << row.max
        << ',' << real(row.n_rate) << ',' << (row.shannon_floor_ok ? 1 : 0) << ',';
    if (row.delta2) {
      jr["exact_mean"] = real_json(*row.exact_mean);
      jr["exact_max"] = *row.exact_max;
      jr["entropy_s"] = real_json(*row.entropy_s);
      jr["delta2"] = real_json(*row.delta2);
      csv << real(*row.exact_mean) << ',' << *row.exact_max << ',' << real(*row.entropy_s) << ',' << real(*row.delta2);
    } else {
      csv << ",,,";
    }
    csv << "\n";
    rows.push_back(jr);
  }
  j["rows"] = rows;
  json samples = json::array();
  for (std::size_t s = 0; s < r.sample_words.size(); ++s) {
    samples.push_back({{"word", r.sample_words[s].to_string()}, {"curve", r.sample_curves[s]}});
  }
  j["sample_curves"] = samples;
  run.write_json("compare.json", j);
  run.write_text("compare.csv", csv.str());
  std::cout << csv.str();
}

struct ShapesOpts {
  std::size_t n = 16, k = 8;
  std::string input;
  double c = kDefaultSlack;
};

std::vector<std::size_t> read_shape(const std::string& path) {
  std::string text = slurp(path);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<std::size_t> out;
  long long v;
  while (in >> v) {
    if (v < 0) fail(ErrorKind::Domain, "shape values must be nonnegative");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (!in.eof()) fail(ErrorKind::Io, path + ": expected integers");
  if (out.empty()) fail(ErrorKind::Domain, "empty shape");
  return out;
}

std::string shape_csv(const std::vector<std::size_t>& g) {
  std::ostringstream s;
  s << "l,g\n";
  for (std::size_t l = 0; l < g.size(); ++l) s << l << ',' << g[l] << "\n";
  return s.str();
}

void cmd_shapes(const std::string& which, const ShapesOpts& o, Run& run, const Globals& g) {
  if (which == "generate" || which == "staircase") {
    const auto shape = which == "generate" ? shape_generate(o.n, o.k, g.seed) : staircase_shape(o.n);
    run.write_text("shape.csv", shape_csv(shape.values));
    std::cout << shape_csv(shape.values);
    return;
  }
  run.input(o.input);
  const auto values = read_shape(o.input);
  const std::size_t n = values.size() - 1;
  json j;
  if (which == "validate") {
    const auto check = shape_validate(ShapeFn{values}, n);
    j["ok"] = check.ok;
    if (check.violation) j["violation"] = *check.violation;
  } else {
    const auto report = shape_bounds_check(values, n, o.c);
    j["ok"] = report.ok();
    j["slack"] = real_json(report.slack);
    j["endpoint_ok"] = report.endpoint_ok;
    json v = json::array();
    for (const auto& b : report.violations) v.push_back({{"l", b.l}, {"m", b.m}, {"diff", b.diff}});
    j["violations"] = v;
  }
  run.write_json("shape_check.json", j);
  std::cout << j.dump() << "\n";
}

int run_impl(const std::vector<std::string>& args);

int replay(const std::string& manifest, const std::string& out_dir) {
  json m;
  try {
    m = json::parse(slurp(manifest));
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, manifest + ": " + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) fail(ErrorKind::Domain, "manifest has no argv");
  std::vector<std::string> argv = m["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "replay") fail(ErrorKind::Domain, "manifest records a replay");
  // Pin the seed the original run used, which may have come from ARDTK_SEED.
  argv.insert(argv.begin(), {"--seed", std::to_string(m.value("seed", std::uint64_t{1}))});
  if (!out_dir.empty()) argv.insert(argv.begin(), {"--out-dir", out_dir});
  return run_impl(argv);
}

int run_impl(const std::vector<std::string>& args) {
  CLI::App app{"Algorithmic rate-distortion toolkit", "ardtk"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.seed = default_seed();
  app.add_option("--out-dir", g.out_dir, "Directory for all outputs and manifest.json");
  app.add_option("--threads", g.threads, "Worker threads for search")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", g.seed, "Random seed (default: $ARDTK_SEED or 1)");
  app.add_option("--block-size", g.codec.block_size, "Codec block size in bits");
  app.add_option("--precision", g.codec.coder_precision, "Arithmetic coder precision in bits");
  app.set_version_flag("--version", kVersion);

  CodecOpts codec_o;
  auto* codec_cmd = app.add_subcommand("codec", "Compressor utilities");
  codec_cmd->require_subcommand(1);
  for (const char* name : {"roundtrip", "length", "conditional"}) {
    auto* sc = codec_cmd->add_subcommand(name, std::string("codec ") + name);
    sc->add_option("--input", codec_o.input, "Bit file")->required();
    sc->add_flag("--raw", codec_o.raw, "Input is packed bytes");
    if (std::string(name) == "conditional") sc->add_option("--given", codec_o.given, "Conditioning bit file")->required();
  }

  CurveOpts curve_o;
  auto* curve = app.add_subcommand("curve", "Estimate r_x, d_x or g_x for one word");
  curve->add_option("--input", curve_o.input, "Bit file")->required();
  curve->add_flag("--raw", curve_o.raw, "Input is packed bytes");
  curve->add_option("--family", curve_o.family, "hamming|euclid|list");
  curve->add_option("--axis", curve_o.axis, "rate|distortion|canonical");
  curve->add_option("--grid", curve_o.grid, "Values or start:stop:step ranges, comma separated");
  curve->add_option("--budget", curve_o.budget, "Codelength evaluations");
  curve->add_option("--starts", curve_o.starts, "Hill-climbing restarts per radius");
  curve->add_option("--slack", curve_o.slack, "Slack constant c in c*log2(n)");
  curve->add_option("--out", curve_o.out, "CSV file name inside --out-dir");

  DenoiseOpts denoise_o;
  auto* den = app.add_subcommand("denoise", "Denoise a PBM bitmap at the curve's knee");
  den->add_option("--input", denoise_o.input, "PBM image")->required();
  den->add_option("--clean", denoise_o.clean, "Held-out clean PBM for the second curve");
  den->add_option("--budget", denoise_o.budget, "Codelength evaluations");
  den->add_option("--rate-step", denoise_o.rate_step, "Rate grid spacing in bits");
  den->add_flag("--packed", denoise_o.packed, "Write P4 instead of P1");

  CrossOpts cross_o;
  auto* cross = app.add_subcommand("cross", "Write a clean and a noisy cross bitmap");
  cross->add_option("--side", cross_o.side, "Side length in pixels");
  cross->add_option("--flip", cross_o.flip, "Fraction of pixels flipped");
  cross->add_flag("--packed", cross_o.packed, "Write P4 instead of P1");

  CoverOpts cover_o;
  auto* cover = app.add_subcommand("cover", "Construct and verify a covering by small balls");
  cover->add_option("--n", cover_o.n, "Word length")->required();
  cover->add_option("--delta", cover_o.delta, "Radius of the covered ball");
  cover->add_option("--d", cover_o.d, "Radius of the covering balls");
  cover->add_option("--center", cover_o.center, "Center of the covered ball (default 0^n)");
  cover->add_flag("--space", cover_o.space, "Cover the whole cube");
  cover->add_option("--c", cover_o.c, "Sample-count exponent");
  cover->add_option("--attempts", cover_o.attempts, "Attempts per shell");

  GameOpts game_o;
  auto* game = app.add_subcommand("game", "Play the online covering game");
  game->add_option("--n", game_o.n, "Element word length");
  game->add_option("--k", game_o.k, "At most 2^k - 1 moves");
  game->add_option("--m", game_o.m, "Win threshold exponent");
  game->add_option("--adversary", game_o.adversary, "random|repeat|balls|adaptive|file");
  game->add_option("--sets", game_o.sets, "Set file for --adversary file");
  game->add_option("--moves", game_o.moves, "Number of moves for built-in adversaries");
  game->add_option("--strategy", game_o.strategy, "det|prob");

  ShannonOpts shannon_o;
  auto* sh = app.add_subcommand("shannon", "Blahut-Arimoto rate-distortion function of a binary source");
  sh->add_option("--p", shannon_o.p, "Probability of a one");
  sh->add_option("--delta-grid", shannon_o.grid, "Distortion grid");
  sh->add_option("--tol", shannon_o.tol, "Duality-gap tolerance in bits");

  CompareOpts compare_o;
  auto* cmp = app.add_subcommand("compare", "Expected individual rate against n R(delta)");
  cmp->add_option("--n", compare_o.n, "Word length");
  cmp->add_option("--p", compare_o.p, "Probability of a one");
  cmp->add_option("--delta-grid", compare_o.grid, "Distortion grid");
  cmp->add_option("--samples", compare_o.samples, "Sample words");
  cmp->add_option("--budget", compare_o.budget, "Evaluations per sample");
  cmp->add_option("--slack", compare_o.slack, "Report slack in bits");

  ShapesOpts shapes_o;
  auto* shapes = app.add_subcommand("shapes", "Shape functions");
  shapes->require_subcommand(1);
  auto* gen = shapes->add_subcommand("generate", "Uniform shape with g(0) = k");
  gen->add_option("--n", shapes_o.n)->required();
  gen->add_option("--k", shapes_o.k)->required();
  auto* stair = shapes->add_subcommand("staircase", "Three-phase staircase shape");
  stair->add_option("--n", shapes_o.n)->required();
  auto* val = shapes->add_subcommand("validate", "Check membership of g(0..n)");
  val->add_option("--input", shapes_o.input, "Whitespace or comma separated values")->required();
  auto* chk = shapes->add_subcommand("check", "Pairwise bounds with slack c*log2(n)");
  chk->add_option("--input", shapes_o.input, "Whitespace or comma separated values")->required();
  chk->add_option("--c", shapes_o.c, "Slack constant");

  std::string manifest, replay_out;
  auto* rep = app.add_subcommand("replay", "Rerun the command recorded in a manifest");
  rep->add_option("manifest", manifest, "manifest.json")->required();

  std::vector<std::string> argv_store{"ardtk"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (rep->parsed()) {
    const bool custom_out = app.count("--out-dir") > 0;
    return replay(manifest, custom_out ? g.out_dir : "");
  }
  g.codec.validate();

  // The recorded argv drops global flags that replay pins separately.
  std::vector<std::string> recorded;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if ((args[i] == "--out-dir" || args[i] == "--seed") && i + 1 < args.size()) {
      ++i;
      continue;
    }
    recorded.push_back(args[i]);
  }

  for (auto* sub : app.get_subcommands()) {
    const std::string name = sub->get_name();
    Run run(g, name, recorded);
    if (name == "codec") {
      cmd_codec(sub->get_subcommands().front()->get_name(), codec_o, run, g);
    } else if (name == "curve") {
      cmd_curve(curve_o, run, g);
    } else if (name == "denoise") {
      cmd_denoise(denoise_o, run, g);
    } else if (name == "cross") {
      cmd_cross(cross_o, run, g);
    } else if (name == "cover") {
      cmd_cover(cover_o, run, g);
    } else if (name == "game") {
      cmd_game(game_o, run, g);
    } else if (name == "shannon") {
      cmd_shannon(shannon_o, run);
    } else if (name == "compare") {
      cmd_compare(compare_o, run, g);
    } else if (name == "shapes") {
      cmd_shapes(sub->get_subcommands().front()->get_name(), shapes_o, run, g);
    }
    run.finish();
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    return run_impl(args);
  } catch (const Error& e) {
    std::cerr << "ardtk: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::Usage ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "ardtk: io: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ardtk: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ardtk::cli
