#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hypersara/fourier.h"
#include "hypersara/metrics.h"
#include "hypersara/reweighting.h"
#include "hypersara/simulation.h"
#include "hypersara/types.h"

namespace hypersara {

namespace fs = std::filesystem;

//! Raised on unreadable or malformed files.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Cube file: magic "WBCUBE1", u32 N1, u32 N2, u32 L, then N1 N2 L little-endian f64, channel-major
/// with row-major pixels inside a channel.
void write_cube(fs::path const &path, Cube const &cube, ImageDims dims);
Cube read_cube(fs::path const &path, ImageDims *dims = nullptr);

/// Visibility file: magic "WBVIS1", u32 L, then per channel u32 M, f64 frequency and M records of
/// f64 u, v, re, im, weight.
struct VisibilityChannel {
  UVCoverage uv;
  ComplexVector y;
  RealVector weight;
};
void write_visibilities(fs::path const &path, std::vector<VisibilityChannel> const &channels);
std::vector<VisibilityChannel> read_visibilities(fs::path const &path);

//! Channels of a simulation with natural weights 1 / sigma (1 when noiseless).
std::vector<VisibilityChannel> visibilities_of(Simulation const &sim);

/// Measurement operators and blocks from loaded visibilities; the weights are applied to both, so
/// the weighted data have unit noise. Epsilon left at zero.
WidebandData wideband_data(std::vector<VisibilityChannel> const &channels, ImageDims dims,
                           t_int blocks, OperatorParams params = {});

enum class Stretch { linear, log10 };
//! 8-bit binary PGM of one channel, min-max scaled after the stretch.
void write_pgm(fs::path const &path, Eigen::Ref<RealVector const> const &image, ImageDims dims,
               Stretch stretch = Stretch::linear);

//! channel,snr,sm,std rows plus a final "mean" row.
void write_metrics_csv(fs::path const &path, ChannelMetrics const &metrics);
//! k,gamma,gamma_bar,effective_rank,row_support,asnr,iterations,converged
void write_reweight_csv(fs::path const &path, std::vector<ReweightRecord> const &records);
//! Spectra, spectral parameters and emission lines of a ground-truth model.
void write_model_csv(fs::path const &directory, GroundTruthModel const &model);

//! FNV-1a 64-bit digest of a file, hex encoded.
std::string file_digest(fs::path const &path);
std::string string_digest(std::string const &text);

} // namespace hypersara
