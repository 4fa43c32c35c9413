#pragma once

#include <memory>
#include <vector>

#include "hypersara/types.h"

namespace hypersara {

//! uv-points of one channel, in radians per pixel, each coordinate in [-pi, pi).
struct UVCoverage {
  RealVector u;
  RealVector v;
  t_real frequency_hz = 0;
  [[nodiscard]] t_int size() const { return u.size(); }
};

struct WidebandCoverage {
  std::vector<UVCoverage> channels;
  t_real reference_hz = 0;
};

struct OperatorParams {
  t_int oversampling = 2;  //!< per axis
  t_int support = 7;       //!< kernel taps per axis
};

//! Sparse interpolation matrix G: every row holds exactly support^2 entries.
struct InterpolationTable {
  t_int rows = 0;
  t_int grid_size = 0;
  t_int nnz_per_row = 0;
  std::vector<t_int> index;   //!< rows * nnz_per_row grid indices
  std::vector<t_real> weight; //!< matching kernel values
};

//! G^T stored by touched grid cell so the adjoint is a deterministic gather.
struct TransposedTable {
  std::vector<t_int> cell;    //!< touched grid cells, ascending
  std::vector<t_int> offset;  //!< cell.size() + 1 offsets into row/weight
  std::vector<t_int> row;     //!< ascending within each cell
  std::vector<t_real> weight;
};

TransposedTable transpose(InterpolationTable const &table);

//! Per-call scratch; one per concurrent caller.
struct FourierWorkspace {
  ComplexVector grid;
};

//! Kaiser-Bessel kernel value at offset t (in grid cells) for the given support and shape beta.
t_real kaiser_bessel(t_real t, t_int support, t_real beta);
//! Continuous Fourier transform of the Kaiser-Bessel kernel at frequency f (cycles per cell).
t_real kaiser_bessel_ft(t_real f, t_int support, t_real beta);
//! Shape parameter for a given oversampling and support.
t_real kaiser_bessel_beta(t_int oversampling, t_int support);

/// Phi = Theta G F: deapodized zero-padded unitary FFT, Kaiser-Bessel degridding, natural weighting.
///
/// Pixel (i1, i2) sits at centred position (i1 - n1/2, i2 - n2/2), so the phase centre is
/// pixel (n1/2, n2/2) in 0-based indexing. The measured quantity approximates
///   y_j = theta_j / sqrt(K1 K2) * sum_n x_n exp(-i (u_j m1 + v_j m2))
/// with K1 x K2 the oversampled grid. Immutable after construction.
class MeasurementOperator {
public:
  MeasurementOperator(ImageDims dims, UVCoverage const &uv, RealVector natural_weights,
                      OperatorParams params = {});
  MeasurementOperator(ImageDims dims, UVCoverage const &uv, OperatorParams params = {});

  [[nodiscard]] ImageDims dims() const { return dims_; }
  [[nodiscard]] ImageDims grid_dims() const { return grid_; }
  [[nodiscard]] t_int rows() const { return table_.rows; }
  [[nodiscard]] OperatorParams const &params() const { return params_; }
  [[nodiscard]] RealVector const &natural_weights() const { return theta_; }
  [[nodiscard]] InterpolationTable const &table() const { return table_; }
  [[nodiscard]] RealVector const &correction() const { return correction_; }
  [[nodiscard]] UVCoverage const &coverage() const { return uv_; }

  [[nodiscard]] FourierWorkspace workspace() const;

  [[nodiscard]] ComplexVector forward(Eigen::Ref<RealVector const> const &x) const;
  [[nodiscard]] RealVector adjoint(Eigen::Ref<ComplexVector const> const &v) const;

  //! Oversampled Fourier grid of x, left in ws.grid.
  void fourier_grid(Eigen::Ref<RealVector const> const &x, FourierWorkspace &ws) const;
  //! Rows [begin, end) of Theta G applied to the grid held in ws.
  void degrid_rows(FourierWorkspace const &ws, t_int begin, t_int end,
                   Eigen::Ref<ComplexVector> out) const;
  void forward(Eigen::Ref<RealVector const> const &x, Eigen::Ref<ComplexVector> out,
               FourierWorkspace &ws) const;
  void adjoint(Eigen::Ref<ComplexVector const> const &v, Eigen::Ref<RealVector> out,
               FourierWorkspace &ws) const;

private:
  void check_image(t_int size) const;

  ImageDims dims_;
  ImageDims grid_;
  OperatorParams params_;
  UVCoverage uv_;
  RealVector theta_;
  RealVector correction_;
  InterpolationTable table_;
  TransposedTable transposed_;
  std::shared_ptr<void> forward_plan_;
  std::shared_ptr<void> backward_plan_;
};

//! One data block of a channel: contiguous rows [begin, end) of the channel operator.
struct VisibilityBlock {
  t_int begin = 0;
  t_int end = 0;
  ComplexVector y;
  t_real epsilon = 0;
  RealVector preconditioner;  //!< diagonal of U, entries in (0, 1]
  [[nodiscard]] t_int size() const { return end - begin; }
};

struct ChannelData {
  std::shared_ptr<MeasurementOperator const> op;
  std::vector<VisibilityBlock> blocks;
};

using WidebandData = std::vector<ChannelData>;

//! Splits [0, rows) into n nearly equal contiguous ranges.
std::vector<std::pair<t_int, t_int>> partition_rows(t_int rows, t_int n);

//! Builds blocks over the given ranges from channel data y; epsilon left at zero.
std::vector<VisibilityBlock> make_blocks(MeasurementOperator const &op, ComplexVector const &y,
                                         std::vector<std::pair<t_int, t_int>> const &ranges);

/// Diagonal preconditioner for rows [begin, end): 1 / (number of channel visibilities falling in
/// the oversampled-grid cell nearest to each point).
RealVector build_preconditioner(MeasurementOperator const &op, t_int begin, t_int end);

struct Psf {
  RealVector image;  //!< eta Phi^T Phi delta, peak 1
  t_real eta = 0;
};

//! Point spread function at the phase centre, normalized to unit peak.
Psf psf_and_eta(MeasurementOperator const &op);

//! Phase-centre pixel index (0-based, row-major).
t_int phase_centre_index(ImageDims dims);

} // namespace hypersara
