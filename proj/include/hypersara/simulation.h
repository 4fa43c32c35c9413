#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "hypersara/fourier.h"
#include "hypersara/types.h"

namespace hypersara {

struct SpectralBand {
  t_real reference_hz = 1.4e9;
  t_real low_hz = 1.4e9;
  t_real high_hz = 2.78e9;
};

//! L equally spaced frequencies from low to high (low only when L = 1).
RealVector channel_frequencies(SpectralBand const &band, t_int channels);

struct EmissionLine {
  t_int channel = 0;
  t_real amplitude = 0;
};

/// Linear mixture X = S H^T: each column of S is one source image, each column of H its
/// spectrum. Source supports are disjoint.
struct GroundTruthModel {
  ImageDims dims;
  RealMatrix sources;   //!< N x Q
  RealMatrix spectra;   //!< L x Q
  RealVector alpha;     //!< spectral index per source
  RealVector beta;      //!< curvature per source
  std::vector<std::vector<EmissionLine>> lines;
  t_real reference_hz = 0;
  RealVector frequencies;
  [[nodiscard]] Cube cube() const { return sources * spectra.transpose(); }
};

struct GroundTruthOptions {
  bool emission_lines = true;
  bool curvature = true;
  bool background = true;  //!< last source is a faint extended background when Q > 1
};

//! (nu / nu_0)^(-alpha + beta log(nu / nu_0))
t_real curved_power_law(t_real nu, t_real nu0, t_real alpha, t_real beta);

/// Procedural sources (Gaussian blobs and compact point-like sources, peak brightness in
/// [0.005, 1]) with curved power-law spectra and optional emission lines. Deterministic per seed.
GroundTruthModel generate_ground_truth(ImageDims dims, t_int sources, t_int channels,
                                       SpectralBand const &band, std::uint64_t seed,
                                       GroundTruthOptions const &options = {});

/// Sources from a user image and a label map (label q in 1..Q marks source q, 0 is empty);
/// spectra drawn as in generate_ground_truth.
GroundTruthModel ground_truth_from_image(ImageDims dims, RealVector const &image,
                                         std::vector<t_int> const &labels, t_int channels,
                                         SpectralBand const &band, std::uint64_t seed,
                                         GroundTruthOptions const &options = {});

struct CoverageParams {
  t_real sigma_uv = std::numbers::pi / 3;    //!< std of the Gaussian density
  t_real sigma_hole = std::numbers::pi / 2;  //!< width of the inverse-Gaussian hole mask
  t_real redraw_band = 0.9;      //!< scaled points leaving [-pi, pi) land in [band pi, pi)
  bool hermitian = false;        //!< every point comes with its mirror (-u, -v)
};

//! Rejection probability of the hole mask at a given radius.
t_real hole_rejection(t_real radius, t_real sigma_hole);

//! round(SR N), at least 1.
t_int measurement_count(t_real sampling_rate, ImageDims dims);

/// Reference coverage of M points scaled to each channel by nu_l / nu_0. Coordinates that leave
/// [-pi, pi) after scaling are redrawn uniformly in the boundary band with their original sign.
WidebandCoverage generate_coverage(t_int points, t_int channels, SpectralBand const &band,
                                   std::uint64_t seed, CoverageParams const &params = {});

inline constexpr t_real kNoiseless = std::numeric_limits<t_real>::infinity();

struct NoisyData {
  std::vector<ComplexVector> y;
  t_real sigma = 0;  //!< per complex sample; 0 when noiseless
};

/// sigma = ||Y||_F 10^(-InSNR/20) / sqrt(M L), i.i.d. complex Gaussian noise with sigma / sqrt(2)
/// per component. InSNR = kNoiseless passes the data through.
NoisyData add_noise(std::vector<ComplexVector> const &clean, t_real insnr_db, std::uint64_t seed);

//! sigma sqrt((2 M_b + 4 sqrt(M_b)) / 2): mean plus two standard deviations of the chi^2 law.
t_real epsilon_from_noise(t_real sigma, t_int block_size);

struct SimulationConfig {
  ImageDims dims{64, 64};
  t_int channels = 8;
  t_int sources = 3;
  t_real sampling_rate = 0.3;
  t_real insnr_db = 40;
  t_int blocks = 1;          //!< per channel
  std::uint64_t seed = 0;
  SpectralBand band;
  GroundTruthOptions truth;
  CoverageParams coverage;
  OperatorParams op;
  t_real noiseless_epsilon = 1e-4;  //!< relative to ||y_b|| when there is no noise
};

struct Simulation {
  GroundTruthModel model;
  Cube truth;
  WidebandCoverage coverage;
  std::vector<ComplexVector> clean;
  NoisyData noisy;
  WidebandData data;  //!< blocks carry the chi^2 bound
};

Simulation simulate(SimulationConfig const &config);

//! Per-block chi^2 bounds of a simulated data set.
std::vector<std::vector<t_real>> true_bounds(Simulation const &sim);

} // namespace hypersara
