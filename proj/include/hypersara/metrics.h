#pragma once

#include <limits>
#include <vector>

#include "hypersara/fourier.h"
#include "hypersara/types.h"

namespace hypersara {

//! Returned by snr/similarity when the two signals coincide.
inline constexpr t_real kPerfectScore = std::numeric_limits<t_real>::infinity();

//! 20 log10(||truth|| / ||truth - estimate||)
t_real snr(Eigen::Ref<RealVector const> const &truth, Eigen::Ref<RealVector const> const &estimate);
//! Mean of per-channel SNRs.
t_real asnr(Cube const &truth, Cube const &estimate);
RealVector snr_per_channel(Cube const &truth, Cube const &estimate);

//! 20 log10(max(||a||, ||b||) / ||a - b||); symmetric.
t_real similarity(Eigen::Ref<RealVector const> const &a, Eigen::Ref<RealVector const> const &b);
t_real average_similarity(Cube const &a, Cube const &b);
RealVector similarity_per_channel(Cube const &a, Cube const &b);

//! Population standard deviation of an image.
t_real image_std(Eigen::Ref<RealVector const> const &image);

struct ResidualCube {
  Cube residual;       //!< columns eta_l Phi_l^T (y_l - Phi_l x_l)
  RealVector std;      //!< per channel
  t_real astd = 0;
};

//! Naturally-weighted residual cube and its average standard deviation.
ResidualCube residual_cube(WidebandData const &data, Cube const &estimate);
//! Same, with precomputed PSF normalizations eta_l.
ResidualCube residual_cube(WidebandData const &data, Cube const &estimate, RealVector const &eta);

/// Elliptical Gaussian fitted to the PSF main lobe, unit amplitude at the phase centre.
/// Widths are standard deviations in pixels; angle is the orientation of the major axis,
/// measured from the column (second) axis towards the row axis.
struct CleanBeam {
  t_real sigma_major = 1;
  t_real sigma_minor = 1;
  t_real angle = 0;
  bool fallback = false;  //!< main lobe too narrow, 1-pixel isotropic beam used
  RealVector image;       //!< beam sampled on the image grid, centred on the phase centre
  [[nodiscard]] t_real flux() const { return image.lpNorm<1>(); }
};

//! Gaussian image with the given widths and orientation, centred on the phase centre.
RealVector gaussian_beam(ImageDims dims, t_real sigma_major, t_real sigma_minor, t_real angle);

/// Nonlinear least-squares fit over the connected main-lobe samples at or above half the peak.
/// Lobes narrower than 3 pixels along either axis fall back to a 1-pixel isotropic Gaussian.
CleanBeam fit_clean_beam(Eigen::Ref<RealVector const> const &psf, ImageDims dims);

//! Zero-padded linear convolution with a kernel centred on the phase centre; output has image size.
RealVector convolve(Eigen::Ref<RealVector const> const &image,
                    Eigen::Ref<RealVector const> const &kernel, ImageDims dims);

struct RestoredImage {
  RealVector smoothed;  //!< x * c
  RealVector restored;  //!< x * c + r
};
RestoredImage restore(Eigen::Ref<RealVector const> const &model,
                      Eigen::Ref<RealVector const> const &residual, CleanBeam const &beam,
                      ImageDims dims, bool flux_normalize = false);

struct ChannelMetrics {
  RealVector snr;
  RealVector similarity;
  RealVector residual_std;
  t_real asnr = 0;
  t_real asm_db = 0;
  t_real astd = 0;
};

/// SNR against the truth, SM between beam-smoothed truth and estimate, residual std; beams are
/// fitted per channel from the PSF.
ChannelMetrics evaluate(WidebandData const &data, Cube const &truth, Cube const &estimate);

} // namespace hypersara
