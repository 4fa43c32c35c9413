#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "hypersara/fourier.h"
#include "hypersara/simulation.h"
#include "hypersara/types.h"

namespace testing {

using namespace hypersara;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline RealVector random_vector(t_int n, std::uint64_t seed) {
  auto g = rng(seed);
  std::normal_distribution<t_real> d;
  RealVector x(n);
  for(auto &v : x)
    v = d(g);
  return x;
}

inline RealMatrix random_matrix(t_int rows, t_int cols, std::uint64_t seed) {
  return random_vector(rows * cols, seed).reshaped(rows, cols);
}

inline ComplexVector random_complex(t_int n, std::uint64_t seed) {
  RealVector const re = random_vector(n, seed);
  RealVector const im = random_vector(n, seed + 7919);
  ComplexVector z(n);
  for(t_int i = 0; i < n; ++i)
    z[i] = t_complex(re[i], im[i]);
  return z;
}

inline UVCoverage uniform_uv(t_int points, std::uint64_t seed) {
  auto g = rng(seed);
  std::uniform_real_distribution<t_real> d(-std::numbers::pi, std::numbers::pi);
  UVCoverage uv;
  uv.u.resize(points);
  uv.v.resize(points);
  for(t_int j = 0; j < points; ++j) {
    uv.u[j] = d(g);
    uv.v[j] = d(g);
  }
  uv.frequency_hz = 1;
  return uv;
}

//! Columns are Phi e_n.
inline Matrix<t_complex> dense_operator(MeasurementOperator const &op) {
  auto const n = op.dims().size();
  Matrix<t_complex> a(op.rows(), n);
  for(t_int k = 0; k < n; ++k) {
    RealVector e = RealVector::Zero(n);
    e[k] = 1;
    a.col(k) = op.forward(e);
  }
  return a;
}

/// theta_j / sqrt(K1 K2) sum_n x_n exp(-i (u_j m1 + v_j m2)), pixel (i1, i2) at (i1 - n1/2, i2 - n2/2).
inline ComplexVector direct_dft(UVCoverage const &uv, RealVector const &x, ImageDims dims,
                                t_int oversampling) {
  auto const scale = 1 / std::sqrt(static_cast<t_real>(oversampling * oversampling * dims.size()));
  ComplexVector y = ComplexVector::Zero(uv.size());
  for(t_int j = 0; j < uv.size(); ++j)
    for(t_int i1 = 0; i1 < dims.n1; ++i1)
      for(t_int i2 = 0; i2 < dims.n2; ++i2) {
        auto const phase = uv.u[j] * t_real(i1 - dims.n1 / 2) + uv.v[j] * t_real(i2 - dims.n2 / 2);
        y[j] += x[i1 * dims.n2 + i2] * std::polar(scale, -phase);
      }
  return y;
}

//! Noiseless channel data of `cube` on a shared random coverage; epsilon = rel_eps ||y_b||.
inline WidebandData channel_data(Cube const &cube, ImageDims dims, t_int points, std::uint64_t seed,
                                 t_real rel_eps, t_int blocks = 1) {
  auto const coverage = generate_coverage(points, cube.cols(), SpectralBand{}, seed);
  WidebandData data;
  for(t_int l = 0; l < cube.cols(); ++l) {
    ChannelData channel;
    channel.op = std::make_shared<MeasurementOperator const>(dims, coverage.channels[l]);
    ComplexVector const y = channel.op->forward(cube.col(l));
    channel.blocks = make_blocks(*channel.op, y, partition_rows(y.size(), blocks));
    for(auto &block : channel.blocks)
      block.epsilon = rel_eps * block.y.norm();
    data.push_back(std::move(channel));
  }
  return data;
}

/// Exactly low-rank, exactly joint-sparse cube: Q sources of a few point components each, with
/// power-law spectra.
inline Cube point_source_cube(ImageDims dims, t_int channels, t_int sources, std::uint64_t seed) {
  auto g = rng(seed);
  std::uniform_int_distribution<t_int> pixel(0, dims.size() - 1);
  std::uniform_real_distribution<t_real> amplitude(0.2, 1);
  RealMatrix s = RealMatrix::Zero(dims.size(), sources);
  for(t_int q = 0; q < sources; ++q)
    for(int k = 0; k < 6; ++k)
      s(pixel(g), q) = amplitude(g);
  SpectralBand const band;
  auto const f = channel_frequencies(band, channels);
  RealMatrix h(channels, sources);
  for(t_int q = 0; q < sources; ++q)
    for(t_int l = 0; l < channels; ++l)
      h(l, q) = curved_power_law(f[l], band.reference_hz, 0.3 * t_real(q + 1) - 0.5, 0.2 * t_real(q - 1));
  return s * h.transpose();
}

inline t_real relative_error(auto const &a, auto const &b) {
  auto const denominator = std::max<t_real>(b.norm(), 1e-300);
  return (a - b).norm() / denominator;
}

} // namespace testing
