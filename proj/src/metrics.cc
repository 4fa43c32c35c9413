#include "hypersara/metrics.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <queue>

#include <Eigen/Dense>
#include <fftw3.h>

namespace hypersara {

namespace {

t_real ratio_db(t_real numerator, t_real denominator) {
  if(denominator == 0)
    return kPerfectScore;
  return 20 * std::log10(numerator / denominator);
}

void check_same(Cube const &a, Cube const &b) {
  if(a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput("metrics: cubes have different shapes");
}

std::mutex &fft_mutex() {
  static std::mutex mutex;
  return mutex;
}

void fft2(ComplexVector &data, ImageDims dims, int sign) {
  auto *ptr = reinterpret_cast<fftw_complex *>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fft_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(dims.n1), static_cast<int>(dims.n2), ptr, ptr, sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fft_mutex());
  fftw_destroy_plan(plan);
}

struct LobeSample {
  t_real x, y, value;
};

// Pixels >= half peak connected (4-neighbourhood) to the phase centre.
std::vector<LobeSample> main_lobe(Eigen::Ref<RealVector const> const &psf, ImageDims dims,
                                  t_int &width_rows, t_int &width_cols) {
  auto const c1 = dims.n1 / 2, c2 = dims.n2 / 2;
  auto const peak = psf[phase_centre_index(dims)];
  auto const level = 0.5 * peak;
  std::vector<char> seen(dims.size(), 0);
  std::queue<std::pair<t_int, t_int>> queue;
  std::vector<LobeSample> samples;
  queue.emplace(c1, c2);
  seen[phase_centre_index(dims)] = 1;
  while(!queue.empty()) {
    auto [i1, i2] = queue.front();
    queue.pop();
    samples.push_back({static_cast<t_real>(i2 - c2), static_cast<t_real>(i1 - c1),
                       psf[i1 * dims.n2 + i2] / peak});
    constexpr t_int step[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for(auto const &s : step) {
      auto const j1 = i1 + s[0], j2 = i2 + s[1];
      if(j1 < 0 || j2 < 0 || j1 >= dims.n1 || j2 >= dims.n2)
        continue;
      auto const idx = j1 * dims.n2 + j2;
      if(seen[idx] || psf[idx] < level)
        continue;
      seen[idx] = 1;
      queue.emplace(j1, j2);
    }
  }
  width_rows = 0;
  width_cols = 0;
  for(auto const &s : samples) {
    if(s.x == 0)
      ++width_rows;
    if(s.y == 0)
      ++width_cols;
  }
  return samples;
}

} // namespace

t_real snr(Eigen::Ref<RealVector const> const &truth, Eigen::Ref<RealVector const> const &estimate) {
  if(truth.size() != estimate.size())
    throw InvalidInput("snr: size mismatch");
  return ratio_db(truth.norm(), (truth - estimate).norm());
}

RealVector snr_per_channel(Cube const &truth, Cube const &estimate) {
  check_same(truth, estimate);
  RealVector out(truth.cols());
  for(t_int l = 0; l < truth.cols(); ++l)
    out[l] = snr(truth.col(l), estimate.col(l));
  return out;
}

t_real asnr(Cube const &truth, Cube const &estimate) { return snr_per_channel(truth, estimate).mean(); }

t_real similarity(Eigen::Ref<RealVector const> const &a, Eigen::Ref<RealVector const> const &b) {
  if(a.size() != b.size())
    throw InvalidInput("similarity: size mismatch");
  return ratio_db(std::max(a.norm(), b.norm()), (a - b).norm());
}

RealVector similarity_per_channel(Cube const &a, Cube const &b) {
  check_same(a, b);
  RealVector out(a.cols());
  for(t_int l = 0; l < a.cols(); ++l)
    out[l] = similarity(a.col(l), b.col(l));
  return out;
}

t_real average_similarity(Cube const &a, Cube const &b) { return similarity_per_channel(a, b).mean(); }

t_real image_std(Eigen::Ref<RealVector const> const &image) {
  if(image.size() == 0)
    return 0;
  auto const mean = image.mean();
  return std::sqrt((image.array() - mean).square().mean());
}

ResidualCube residual_cube(WidebandData const &data, Cube const &estimate, RealVector const &eta) {
  auto const channels = static_cast<t_int>(data.size());
  if(estimate.cols() != channels || eta.size() != channels)
    throw InvalidInput("residual cube: channel count mismatch");
  ResidualCube out;
  out.residual.resize(estimate.rows(), channels);
  out.std.resize(channels);
#pragma omp parallel for schedule(dynamic)
  for(t_int l = 0; l < channels; ++l) {
    auto const &op = *data[l].op;
    ComplexVector residual = -op.forward(estimate.col(l));
    for(auto const &block : data[l].blocks)
      residual.segment(block.begin, block.size()) += block.y;
    out.residual.col(l) = eta[l] * op.adjoint(residual);
    out.std[l] = image_std(out.residual.col(l));
  }
  out.astd = out.std.mean();
  return out;
}

ResidualCube residual_cube(WidebandData const &data, Cube const &estimate) {
  RealVector eta(data.size());
  for(std::size_t l = 0; l < data.size(); ++l)
    eta[l] = psf_and_eta(*data[l].op).eta;
  return residual_cube(data, estimate, eta);
}

RealVector gaussian_beam(ImageDims dims, t_real sigma_major, t_real sigma_minor, t_real angle) {
  Eigen::Matrix2d rotation;
  rotation << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  Eigen::Matrix2d const covariance =
      rotation * Eigen::Vector2d(sigma_major * sigma_major, sigma_minor * sigma_minor).asDiagonal() *
      rotation.transpose();
  Eigen::Matrix2d const precision = covariance.inverse();
  RealVector beam(dims.size());
  auto const c1 = dims.n1 / 2, c2 = dims.n2 / 2;
  for(t_int i1 = 0; i1 < dims.n1; ++i1)
    for(t_int i2 = 0; i2 < dims.n2; ++i2) {
      Eigen::Vector2d const p(static_cast<t_real>(i2 - c2), static_cast<t_real>(i1 - c1));
      beam[i1 * dims.n2 + i2] = std::exp(-0.5 * p.dot(precision * p));
    }
  return beam;
}

CleanBeam fit_clean_beam(Eigen::Ref<RealVector const> const &psf, ImageDims dims) {
  if(psf.size() != dims.size())
    throw InvalidInput("clean beam: PSF size mismatch");
  if(!(psf[phase_centre_index(dims)] > 0))
    throw InvalidInput("clean beam: PSF must peak positively at the phase centre");
  t_int width_rows = 0, width_cols = 0;
  auto const samples = main_lobe(psf, dims, width_rows, width_cols);
  CleanBeam beam;
  if(width_rows < 3 || width_cols < 3) {
    beam.fallback = true;
    beam.image = gaussian_beam(dims, 1, 1, 0);
    return beam;
  }

  // q = a x^2 + 2 b xy + c y^2 with beam = exp(-q / 2). Linear fit of -2 log(g) first.
  auto const m = static_cast<t_int>(samples.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs(m);
  for(t_int i = 0; i < m; ++i) {
    auto const &s = samples[i];
    design.row(i) << s.x * s.x, 2 * s.x * s.y, s.y * s.y;
    rhs[i] = -2 * std::log(std::max(s.value, 1e-12));
  }
  Eigen::Vector3d p = design.colPivHouseholderQr().solve(rhs);

  auto residuals = [&](Eigen::Vector3d const &q, Eigen::VectorXd &r, Eigen::MatrixXd *jacobian) {
    r.resize(m);
    if(jacobian)
      jacobian->resize(m, 3);
    for(t_int i = 0; i < m; ++i) {
      auto const &s = samples[i];
      auto const e = std::exp(-0.5 * (q[0] * s.x * s.x + 2 * q[1] * s.x * s.y + q[2] * s.y * s.y));
      r[i] = e - s.value;
      if(jacobian)
        jacobian->row(i) << -0.5 * s.x * s.x * e, -s.x * s.y * e, -0.5 * s.y * s.y * e;
    }
  };

  // Levenberg-Marquardt refinement on the samples themselves.
  t_real damping = 1e-3;
  Eigen::VectorXd r;
  Eigen::MatrixXd jacobian;
  residuals(p, r, &jacobian);
  t_real cost = r.squaredNorm();
  for(int it = 0; it < 100; ++it) {
    Eigen::Matrix3d normal = jacobian.transpose() * jacobian;
    Eigen::Vector3d gradient = jacobian.transpose() * r;
    Eigen::Matrix3d damped = normal;
    damped.diagonal() *= (1 + damping);
    Eigen::Vector3d step = damped.ldlt().solve(-gradient);
    Eigen::Vector3d candidate = p + step;
    Eigen::VectorXd r_candidate;
    residuals(candidate, r_candidate, nullptr);
    auto const candidate_cost = r_candidate.squaredNorm();
    if(candidate_cost < cost) {
      auto const improvement = cost - candidate_cost;
      p = candidate;
      residuals(p, r, &jacobian);
      cost = candidate_cost;
      damping = std::max(damping / 10, 1e-12);
      if(improvement <= 1e-14 * std::max(cost, 1e-30) || step.norm() <= 1e-12 * p.norm())
        break;
    } else {
      damping *= 10;
      if(damping > 1e12)
        break;
    }
  }

  Eigen::Matrix2d precision;
  precision << p[0], p[1], p[1], p[2];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(precision);
  if(eig.info() != Eigen::Success || !(eig.eigenvalues()[0] > 0)) {
    beam.fallback = true;
    beam.image = gaussian_beam(dims, 1, 1, 0);
    return beam;
  }
  // Smallest precision eigenvalue <-> major axis.
  beam.sigma_major = 1 / std::sqrt(eig.eigenvalues()[0]);
  beam.sigma_minor = 1 / std::sqrt(eig.eigenvalues()[1]);
  Eigen::Vector2d const axis = eig.eigenvectors().col(0);
  beam.angle = std::atan2(axis[1], axis[0]);
  if(beam.angle > std::numbers::pi / 2)
    beam.angle -= std::numbers::pi;
  if(beam.angle <= -std::numbers::pi / 2)
    beam.angle += std::numbers::pi;
  beam.image = gaussian_beam(dims, beam.sigma_major, beam.sigma_minor, beam.angle);
  return beam;
}

RealVector convolve(Eigen::Ref<RealVector const> const &image,
                    Eigen::Ref<RealVector const> const &kernel, ImageDims dims) {
  if(image.size() != dims.size() || kernel.size() != dims.size())
    throw InvalidInput("convolve: size mismatch");
  ImageDims const padded{2 * dims.n1, 2 * dims.n2};
  auto const c1 = dims.n1 / 2, c2 = dims.n2 / 2;
  ComplexVector a = ComplexVector::Zero(padded.size());
  ComplexVector b = ComplexVector::Zero(padded.size());
  for(t_int i1 = 0; i1 < dims.n1; ++i1)
    for(t_int i2 = 0; i2 < dims.n2; ++i2) {
      a[i1 * padded.n2 + i2] = image[i1 * dims.n2 + i2];
      auto const k1 = ((i1 - c1) % padded.n1 + padded.n1) % padded.n1;
      auto const k2 = ((i2 - c2) % padded.n2 + padded.n2) % padded.n2;
      b[k1 * padded.n2 + k2] = kernel[i1 * dims.n2 + i2];
    }
  fft2(a, padded, FFTW_FORWARD);
  fft2(b, padded, FFTW_FORWARD);
  a.array() *= b.array();
  fft2(a, padded, FFTW_BACKWARD);
  auto const scale = 1.0 / static_cast<t_real>(padded.size());
  RealVector out(dims.size());
  for(t_int i1 = 0; i1 < dims.n1; ++i1)
    for(t_int i2 = 0; i2 < dims.n2; ++i2)
      out[i1 * dims.n2 + i2] = scale * a[i1 * padded.n2 + i2].real();
  return out;
}

RestoredImage restore(Eigen::Ref<RealVector const> const &model,
                      Eigen::Ref<RealVector const> const &residual, CleanBeam const &beam,
                      ImageDims dims, bool flux_normalize) {
  RestoredImage out;
  out.smoothed = convolve(model, beam.image, dims);
  out.restored = out.smoothed + residual;
  if(flux_normalize) {
    auto const flux = beam.flux();
    out.smoothed /= flux;
    out.restored /= flux;
  }
  return out;
}

ChannelMetrics evaluate(WidebandData const &data, Cube const &truth, Cube const &estimate) {
  check_same(truth, estimate);
  auto const channels = static_cast<t_int>(data.size());
  if(truth.cols() != channels)
    throw InvalidInput("evaluate: channel count mismatch");
  auto const dims = data.front().op->dims();
  ChannelMetrics metrics;
  metrics.snr = snr_per_channel(truth, estimate);
  metrics.similarity.resize(channels);
  RealVector eta(channels);
  for(t_int l = 0; l < channels; ++l) {
    auto const psf = psf_and_eta(*data[l].op);
    eta[l] = psf.eta;
    auto const beam = fit_clean_beam(psf.image, dims);
    metrics.similarity[l] =
        similarity(convolve(truth.col(l), beam.image, dims), convolve(estimate.col(l), beam.image, dims));
  }
  auto const residual = residual_cube(data, estimate, eta);
  metrics.residual_std = residual.std;
  metrics.asnr = metrics.snr.mean();
  metrics.asm_db = metrics.similarity.mean();
  metrics.astd = residual.astd;
  return metrics;
}

} // namespace hypersara
