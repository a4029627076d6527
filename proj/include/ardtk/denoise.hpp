#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ardtk/bitword.hpp"
#include "ardtk/distortion.hpp"
#include "ardtk/rdsearch.hpp"

// Denoising by picking the destination at the knee of the distortion-rate
// curve, plus the deficiency diagnostics that justify it.

namespace ardtk {

/// Row-major bitmap, 1 = black.
struct Bitmap {
  std::size_t width = 0, height = 0;
  BitWord pixels;
};

/// Reads PBM P1 (ASCII) or P4 (packed). Throws Error(Io) on malformed input.
Bitmap read_pbm(std::istream& in);
Bitmap read_pbm_file(const std::string& path);
void write_pbm(std::ostream& out, const Bitmap& image, bool packed = false);
void write_pbm_file(const std::string& path, const Bitmap& image, bool packed = false);

struct NoisyCross {
  Bitmap clean, noisy;
};

/// Centered plus with arm thickness ceil(side/8), then exactly
/// floor(flip_fraction * side^2) uniformly chosen pixels flipped.
NoisyCross make_noisy_cross(std::size_t side, const Rational& flip_fraction, std::uint64_t seed);

/// Square-window majority filter; ties keep the pixel. Outside pixels are
/// ignored rather than padded.
Bitmap majority_filter(const Bitmap& image, std::size_t radius);

/// Center followed by LEB128 varints of the radius numerator and denominator.
BitWord ball_descriptor(const Ball& ball);

struct DeficiencyEstimate {
  Ball ball;
  double log_cardinality = 0;     // log2 |B|, from the exact count
  std::size_t conditional_bits = 0;  // L(x | descriptor)
  double value = 0;               // log_cardinality - conditional_bits
};

/// Throws Error(Membership) unless x lies in the ball.
DeficiencyEstimate deficiency_estimate(const BitWord& x, const Ball& ball,
                                       const codec::CodecParams& params = {});

/// L(descriptor) + log2 |B| - L(x). Throws Error(Membership) unless x is in the ball.
double sufficiency_gap(const BitWord& x, const Ball& ball, const codec::CodecParams& params = {});
/// Same for the whole cube {0,1}^n, described by the varint of n alone.
double sufficiency_gap(const BitWord& x, const codec::CodecParams& params = {});

struct MajorityCheck {
  double beta = 0;
  std::size_t count = 0;  // members with L(x | B) < log2 |B| - beta
  double bound = 0;       // |B| 2^-beta
  bool ok() const { return static_cast<double>(count) < bound || count == 0; }
};

/// Counts members of a Hamming ball (n <= 12) whose conditional codelength
/// falls beta bits short of log2 |B|, against the counting bound.
MajorityCheck majority_property_check(const Ball& ball, double beta,
                                      const codec::CodecParams& params = {});
/// One check per beta, reusing the member codelengths.
std::vector<MajorityCheck> majority_property_sweep(const Ball& ball, const std::vector<double>& betas,
                                                   const codec::CodecParams& params = {});

struct Knee {
  std::size_t index = 0;  // into the curve's points
  std::size_t rate = 0;
  bool linear = false;    // no point strictly off the chord
};

/// Rate maximizing the distance below the chord joining the first and last
/// finite points, both axes scaled to [0, 1]; ties toward smaller rate.
/// Throws Error(DegenerateCurve) for fewer than three finite points or a
/// flat curve.
Knee knee_detect(const CurveEstimate& curve);

struct DenoiseParams {
  SearchParams search;
  std::size_t width = 0;       // image width for 2-D seeds; 0 means sqrt(n) if square
  std::size_t rate_step = 1;   // rate grid spacing
};

struct DenoiseResult {
  BitWord input, denoised, residual;  // residual = denoised xor input
  Knee knee;
  CurveEstimate curve;                // distortion to the input over rate
  std::size_t residual_weight = 0;
  double residual_fraction = 0;
  std::size_t residual_bits = 0;      // L(residual)
  double residual_log_ball = 0;       // log2 b(residual_fraction)
  std::size_t denoised_bits = 0;
  std::size_t evaluations = 0;
};

DenoiseResult denoise(const BitWord& x, const DistortionSpec& spec, const DenoiseParams& params);

/// Radii searched by denoise(): fine steps of 1/64 up to 1/4, then coarser.
std::vector<Rational> denoise_radii(std::size_t n);

}  // namespace ardtk
