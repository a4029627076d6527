#include "ardtk/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ardtk/codec.hpp"
#include "ardtk/error.hpp"
#include "ardtk/random.hpp"

namespace ardtk {

namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_dimension(std::istream& in) {
  skip_space_and_comments(in);
  long long v = -1;
  if (!(in >> v) || v <= 0 || v > (1 << 16)) fail(ErrorKind::Io, "bad PBM dimension");
  return static_cast<std::size_t>(v);
}

void put_varint(BitWord& out, std::uint64_t value) {
  do {
    std::uint64_t byte = value & 0x7F;
    value >>= 7;
    if (value != 0) byte |= 0x80;
    out.append_uint(byte, 8);
  } while (value != 0);
}

void require_member(const BitWord& x, const Ball& ball) {
  if (!contains(ball, x)) fail(ErrorKind::Membership, "word is outside the ball");
}

std::vector<BitWord> image_seeds(const BitWord& x, std::size_t width) {
  std::vector<BitWord> out;
  if (width == 0 || x.size() % width != 0) return out;
  Bitmap img{width, x.size() / width, x};
  for (std::size_t r = 1; r <= 3; ++r) {
    Bitmap f = img;
    for (int pass = 0; pass < 3; ++pass) {
      f = majority_filter(f, r);
      out.push_back(f.pixels);
    }
  }
  // Block majorities.
  for (std::size_t b = 2; b <= std::min(img.width, img.height) / 2; b *= 2) {
    Bitmap f = img;
    for (std::size_t by = 0; by < img.height; by += b) {
      for (std::size_t bx = 0; bx < img.width; bx += b) {
        std::size_t ones_count = 0, total = 0;
        for (std::size_t y = by; y < std::min(img.height, by + b); ++y) {
          for (std::size_t xx = bx; xx < std::min(img.width, bx + b); ++xx) {
            ones_count += img.pixels[y * width + xx];
            ++total;
          }
        }
        for (std::size_t y = by; y < std::min(img.height, by + b); ++y) {
          for (std::size_t xx = bx; xx < std::min(img.width, bx + b); ++xx) {
            f.pixels.set(y * width + xx, 2 * ones_count > total);
          }
        }
      }
    }
    out.push_back(f.pixels);
  }
  return out;
}

}  // namespace

Bitmap read_pbm(std::istream& in) {
  std::string magic(2, '\0');
  if (!in.read(magic.data(), 2) || (magic != "P1" && magic != "P4")) fail(ErrorKind::Io, "not a PBM file");
  Bitmap img;
  img.width = read_dimension(in);
  img.height = read_dimension(in);
  img.pixels = BitWord(img.width * img.height);
  if (magic == "P1") {
    for (std::size_t i = 0; i < img.width * img.height; ++i) {
      skip_space_and_comments(in);
      const int c = in.get();
      if (c != '0' && c != '1') fail(ErrorKind::Io, "truncated or malformed P1 raster");
      img.pixels.set(i, c == '1');
    }
  } else {
    if (!std::isspace(in.get())) fail(ErrorKind::Io, "missing separator before P4 raster");
    const std::size_t row_bytes = (img.width + 7) / 8;
    std::vector<char> row(row_bytes);
    for (std::size_t y = 0; y < img.height; ++y) {
      if (!in.read(row.data(), static_cast<std::streamsize>(row_bytes))) fail(ErrorKind::Io, "truncated P4 raster");
      for (std::size_t x = 0; x < img.width; ++x) {
        img.pixels.set(y * img.width + x, (static_cast<unsigned char>(row[x / 8]) >> (7 - x % 8)) & 1u);
      }
    }
  }
  return img;
}

Bitmap read_pbm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);
  return read_pbm(in);
}

void write_pbm(std::ostream& out, const Bitmap& image, bool packed) {
  out << (packed ? "P4\n" : "P1\n") << image.width << ' ' << image.height << '\n';
  for (std::size_t y = 0; y < image.height; ++y) {
    if (packed) {
      std::vector<unsigned char> row((image.width + 7) / 8, 0);
      for (std::size_t x = 0; x < image.width; ++x) {
        if (image.pixels[y * image.width + x]) row[x / 8] |= static_cast<unsigned char>(0x80u >> (x % 8));
      }
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    } else {
      for (std::size_t x = 0; x < image.width; ++x) out << (image.pixels[y * image.width + x] ? '1' : '0');
      out << '\n';
    }
  }
}

void write_pbm_file(const std::string& path, const Bitmap& image, bool packed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  write_pbm(out, image, packed);
}

NoisyCross make_noisy_cross(std::size_t side, const Rational& flip_fraction, std::uint64_t seed) {
  if (side < 8) fail(ErrorKind::Domain, "cross side must be at least 8");
  if (flip_fraction < Rational(0) || flip_fraction > Rational(1, 2)) {
    fail(ErrorKind::Domain, "flip fraction must lie in [0, 1/2]");
  }
  const std::size_t arm = (side + 7) / 8;
  const std::size_t lo = (side - arm) / 2, hi = lo + arm;
  NoisyCross out;
  out.clean = Bitmap{side, side, BitWord(side * side)};
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) {
      out.clean.pixels.set(y * side + x, (x >= lo && x < hi) || (y >= lo && y < hi));
    }
  }
  out.noisy = out.clean;
  const auto flips = static_cast<std::size_t>((flip_fraction * Rational(static_cast<std::int64_t>(side * side))).floor());
  Rng rng(seed);
  for (auto i : rng.subset(side * side, flips)) out.noisy.pixels.flip(i);
  return out;
}

Bitmap majority_filter(const Bitmap& image, std::size_t radius) {
  Bitmap out = image;
  const auto w = static_cast<long long>(image.width), h = static_cast<long long>(image.height);
  const auto r = static_cast<long long>(radius);
  for (long long y = 0; y < h; ++y) {
    for (long long x = 0; x < w; ++x) {
      std::size_t ones_count = 0, total = 0;
      for (long long dy = std::max(0LL, y - r); dy <= std::min(h - 1, y + r); ++dy) {
        for (long long dx = std::max(0LL, x - r); dx <= std::min(w - 1, x + r); ++dx) {
          ones_count += image.pixels[static_cast<std::size_t>(dy * w + dx)];
          ++total;
        }
      }
      const auto i = static_cast<std::size_t>(y * w + x);
      if (2 * ones_count > total) {
        out.pixels.set(i, true);
      } else if (2 * ones_count < total) {
        out.pixels.set(i, false);
      }
    }
  }
  return out;
}

BitWord ball_descriptor(const Ball& ball) {
  BitWord d = ball.center;
  d.pad_to_byte();
  put_varint(d, static_cast<std::uint64_t>(ball.radius.num()));
  put_varint(d, static_cast<std::uint64_t>(ball.radius.den()));
  return d;
}

DeficiencyEstimate deficiency_estimate(const BitWord& x, const Ball& ball, const codec::CodecParams& params) {
  require_member(x, ball);
  DeficiencyEstimate e;
  e.ball = ball;
  e.log_cardinality = log2_big(ball_cardinality(ball));
  e.conditional_bits = codec::conditional_codelength(x, ball_descriptor(ball), params);
  e.value = e.log_cardinality - static_cast<double>(e.conditional_bits);
  return e;
}

double sufficiency_gap(const BitWord& x, const Ball& ball, const codec::CodecParams& params) {
  require_member(x, ball);
  return static_cast<double>(codec::codelength(ball_descriptor(ball), params)) +
         log2_big(ball_cardinality(ball)) - static_cast<double>(codec::codelength(x, params));
}

double sufficiency_gap(const BitWord& x, const codec::CodecParams& params) {
  BitWord desc;
  put_varint(desc, x.size());
  return static_cast<double>(codec::codelength(desc, params)) + static_cast<double>(x.size()) -
         static_cast<double>(codec::codelength(x, params));
}

std::vector<MajorityCheck> majority_property_sweep(const Ball& ball, const std::vector<double>& betas,
                                                   const codec::CodecParams& params) {
  if (ball.spec.family != Family::Hamming || ball.spec.n > 12) {
    fail(ErrorKind::SizeGuard, "majority check enumerates Hamming balls with n <= 12");
  }
  const BitWord desc = ball_descriptor(ball);
  const double log_size = log2_big(ball_cardinality(ball));
  std::vector<std::size_t> bits;
  for (const auto& m : ball_members(ball)) bits.push_back(codec::conditional_codelength(m, desc, params));
  std::vector<MajorityCheck> out;
  for (double beta : betas) {
    MajorityCheck c;
    c.beta = beta;
    c.bound = std::exp2(log_size - beta);
    for (auto b : bits) c.count += static_cast<double>(b) < log_size - beta ? 1 : 0;
    out.push_back(c);
  }
  return out;
}

MajorityCheck majority_property_check(const Ball& ball, double beta, const codec::CodecParams& params) {
  return majority_property_sweep(ball, {beta}, params).front();
}

Knee knee_detect(const CurveEstimate& curve) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    if (curve.points[i].distortion) idx.push_back(i);
  }
  if (idx.size() < 3) fail(ErrorKind::DegenerateCurve, "knee detection needs three finite points");
  const auto& first = curve.points[idx.front()];
  const auto& last = curve.points[idx.back()];
  const double r0 = first.axis_value.to_double(), r1 = last.axis_value.to_double();
  const double d0 = first.distortion->to_double(), d1 = last.distortion->to_double();
  if (!(d0 > d1) || !(r1 > r0)) fail(ErrorKind::DegenerateCurve, "flat distortion-rate curve");
  Knee k;
  k.index = idx.front();
  double best = 0;
  constexpr double eps = 1e-12;
  for (auto i : idx) {
    const auto& p = curve.points[i];
    const double u = (p.axis_value.to_double() - r0) / (r1 - r0);
    const double v = (p.distortion->to_double() - d1) / (d0 - d1);
    const double score = 1 - u - v;
    if (score > best + eps) {
      best = score;
      k.index = i;
    }
  }
  k.linear = best <= eps;
  k.rate = static_cast<std::size_t>(curve.points[k.index].axis_value.floor());
  return k;
}

std::vector<Rational> denoise_radii(std::size_t n) {
  (void)n;
  std::vector<Rational> out;
  for (int k = 0; k <= 16; ++k) out.emplace_back(k, 64);
  out.emplace_back(3, 8);
  out.emplace_back(1, 2);
  return out;
}

DenoiseResult denoise(const BitWord& x, const DistortionSpec& spec, const DenoiseParams& params) {
  if (spec.family != Family::Hamming) fail(ErrorKind::Domain, "denoising is defined for Hamming distortion");
  spec.validate();
  if (x.size() != spec.n) fail(ErrorKind::Domain, "input length differs from n");
  if (params.rate_step == 0) fail(ErrorKind::Domain, "rate step must be positive");

  std::size_t width = params.width;
  if (width == 0) {
    const auto s = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(spec.n))));
    if (s * s == spec.n) width = s;
  }
  SearchParams sp = params.search;
  if (sp.width == 0) sp.width = width;
  for (auto& s : image_seeds(x, width)) sp.seeds.push_back(std::move(s));

  DenoiseResult out;
  out.input = x;
  std::size_t used = 0;
  bool exhaustive = false;
  const auto archive = explore_radii(x, spec, sp, denoise_radii(spec.n), &used, &exhaustive);
  out.evaluations = used;

  const auto front = archive.front();
  std::size_t lo = SIZE_MAX;
  for (const auto& c : front) lo = std::min(lo, c.score);
  const std::size_t hi = codec::codelength(x, sp.codec);
  std::vector<Rational> grid;
  for (std::size_t r = lo; r < hi; r += params.rate_step) grid.emplace_back(static_cast<std::int64_t>(r));
  grid.emplace_back(static_cast<std::int64_t>(hi));
  out.curve = curve_from_archive(archive, spec, Axis::Rate, grid);
  out.curve.budget_used = used;
  out.curve.seed = sp.seed;
  out.curve.exhaustive = exhaustive;

  out.knee = knee_detect(out.curve);
  const auto& p = out.curve.points[out.knee.index];
  out.denoised = p.destination;
  out.denoised_bits = *p.bits;
  out.residual = out.denoised ^ x;
  out.residual_weight = out.residual.popcount();
  out.residual_fraction = static_cast<double>(out.residual_weight) / static_cast<double>(spec.n);
  out.residual_bits = codec::codelength(out.residual, sp.codec);
  out.residual_log_ball = log2_big(hamming_ball_size(spec.n, out.residual_weight));
  return out;
}

}  // namespace ardtk
