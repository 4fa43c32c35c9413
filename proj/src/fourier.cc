#include "hypersara/fourier.h"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "hypersara/kernels.h"

namespace hypersara {

namespace {

// FFTW's planner is not thread-safe; execution on new arrays is.
std::mutex &planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

std::shared_ptr<void> make_plan(ImageDims grid, int sign) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto *buffer = fftw_alloc_complex(static_cast<std::size_t>(grid.size()));
  // FFTW_ESTIMATE keeps the chosen algorithm, and therefore the output bits, reproducible.
  auto plan = fftw_plan_dft_2d(static_cast<int>(grid.n1), static_cast<int>(grid.n2), buffer,
                               buffer, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buffer);
  if(plan == nullptr)
    throw NumericalError("FFTW failed to create a plan");
  return {plan, [](void *p) {
            std::lock_guard<std::mutex> guard(planner_mutex());
            fftw_destroy_plan(static_cast<fftw_plan>(p));
          }};
}

void execute(std::shared_ptr<void> const &plan, ComplexVector &grid) {
  auto *data = reinterpret_cast<fftw_complex *>(grid.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan.get()), data, data);
}

t_int wrap(t_int k, t_int n) { return ((k % n) + n) % n; }

} // namespace

t_real kaiser_bessel_beta(t_int oversampling, t_int support) {
  auto const ratio = static_cast<t_real>(support) / static_cast<t_real>(oversampling);
  auto const o = static_cast<t_real>(oversampling);
  return std::numbers::pi * std::sqrt(ratio * ratio * (o - 0.5) * (o - 0.5) - 0.8);
}

t_real kaiser_bessel(t_real t, t_int support, t_real beta) {
  auto const half = 0.5 * static_cast<t_real>(support);
  if(std::abs(t) > half)
    return 0;
  auto const r = t / half;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1 - r * r))) /
         std::cyl_bessel_i(0.0, beta);
}

t_real kaiser_bessel_ft(t_real f, t_int support, t_real beta) {
  auto const j = static_cast<t_real>(support);
  auto const a = std::numbers::pi * j * f;
  auto const arg = beta * beta - a * a;
  t_real value;
  if(arg > 1e-12) {
    auto const s = std::sqrt(arg);
    value = std::sinh(s) / s;
  } else if(arg < -1e-12) {
    auto const s = std::sqrt(-arg);
    value = std::sin(s) / s;
  } else {
    value = 1;
  }
  return j * value / std::cyl_bessel_i(0.0, beta);
}

TransposedTable transpose(InterpolationTable const &table) {
  auto const total = table.rows * table.nnz_per_row;
  std::vector<t_int> counts(table.grid_size, 0);
  for(t_int k = 0; k < total; ++k)
    ++counts[table.index[k]];

  TransposedTable result;
  std::vector<t_int> start(table.grid_size, -1);
  t_int running = 0;
  for(t_int c = 0; c < table.grid_size; ++c) {
    if(counts[c] == 0)
      continue;
    start[c] = running;
    result.cell.push_back(c);
    result.offset.push_back(running);
    running += counts[c];
  }
  result.offset.push_back(running);
  result.row.resize(running);
  result.weight.resize(running);
  // Rows are visited in ascending order, so entries within a cell stay sorted by row.
  for(t_int r = 0; r < table.rows; ++r) {
    for(t_int k = 0; k < table.nnz_per_row; ++k) {
      auto const flat = r * table.nnz_per_row + k;
      auto const c = table.index[flat];
      auto const slot = start[c]++;
      result.row[slot] = r;
      result.weight[slot] = table.weight[flat];
    }
  }
  return result;
}

MeasurementOperator::MeasurementOperator(ImageDims dims, UVCoverage const &uv, OperatorParams params)
    : MeasurementOperator(dims, uv, RealVector::Ones(uv.size()), params) {}

MeasurementOperator::MeasurementOperator(ImageDims dims, UVCoverage const &uv,
                                         RealVector natural_weights, OperatorParams params)
    : dims_(dims), params_(params), uv_(uv), theta_(std::move(natural_weights)) {
  if(!is_power_of_two(dims.n1) || !is_power_of_two(dims.n2))
    throw InvalidInput("image dimensions must be powers of two, got " + std::to_string(dims.n1) +
                       "x" + std::to_string(dims.n2));
  if(uv.size() == 0)
    throw InvalidInput("uv-coverage is empty");
  if(uv.u.size() != uv.v.size())
    throw InvalidInput("u and v have different lengths");
  if(theta_.size() != uv.size())
    throw InvalidInput("natural weights do not match the number of visibilities");
  if(params.oversampling < 1)
    throw InvalidInput("oversampling factor must be >= 1");
  if(params.support < 2)
    throw InvalidInput("kernel support must be >= 2");
  grid_ = {dims.n1 * params.oversampling, dims.n2 * params.oversampling};
  if(params.support > std::min(grid_.n1, grid_.n2))
    throw InvalidInput("kernel support " + std::to_string(params.support) +
                       " exceeds the oversampled grid");
  auto const pi = std::numbers::pi;
  for(t_int j = 0; j < uv.size(); ++j) {
    for(t_real c : {uv.u[j], uv.v[j]})
      if(!(c >= -pi && c < pi))
        throw InvalidInput("uv-point " + std::to_string(j) + " lies outside [-pi, pi)");
    if(!(theta_[j] > 0))
      throw InvalidInput("natural weights must be strictly positive");
  }

  auto const support = params.support;
  auto const beta = kaiser_bessel_beta(params.oversampling, support);

  correction_.resize(dims.size());
  for(t_int i1 = 0; i1 < dims.n1; ++i1) {
    auto const c1 = kaiser_bessel_ft(static_cast<t_real>(i1 - dims.n1 / 2) / grid_.n1, support, beta);
    for(t_int i2 = 0; i2 < dims.n2; ++i2) {
      auto const c2 =
          kaiser_bessel_ft(static_cast<t_real>(i2 - dims.n2 / 2) / grid_.n2, support, beta);
      correction_[i1 * dims.n2 + i2] = 1.0 / (c1 * c2);
    }
  }

  table_.rows = uv.size();
  table_.grid_size = grid_.size();
  table_.nnz_per_row = support * support;
  table_.index.resize(table_.rows * table_.nnz_per_row);
  table_.weight.resize(table_.rows * table_.nnz_per_row);
  std::vector<t_real> w1(support), w2(support);
  std::vector<t_int> k1(support), k2(support);
  for(t_int j = 0; j < uv.size(); ++j) {
    auto const s1 = uv.u[j] * static_cast<t_real>(grid_.n1) / (2 * pi);
    auto const s2 = uv.v[j] * static_cast<t_real>(grid_.n2) / (2 * pi);
    auto const first1 = static_cast<t_int>(std::ceil(s1 - 0.5 * support));
    auto const first2 = static_cast<t_int>(std::ceil(s2 - 0.5 * support));
    for(t_int k = 0; k < support; ++k) {
      w1[k] = kaiser_bessel(s1 - static_cast<t_real>(first1 + k), support, beta);
      w2[k] = kaiser_bessel(s2 - static_cast<t_real>(first2 + k), support, beta);
      k1[k] = wrap(first1 + k, grid_.n1);
      k2[k] = wrap(first2 + k, grid_.n2);
    }
    auto const base = j * table_.nnz_per_row;
    for(t_int a = 0; a < support; ++a)
      for(t_int b = 0; b < support; ++b) {
        table_.index[base + a * support + b] = k1[a] * grid_.n2 + k2[b];
        table_.weight[base + a * support + b] = w1[a] * w2[b];
      }
  }
  transposed_ = transpose(table_);
  forward_plan_ = make_plan(grid_, FFTW_FORWARD);
  backward_plan_ = make_plan(grid_, FFTW_BACKWARD);
}

FourierWorkspace MeasurementOperator::workspace() const {
  return {ComplexVector::Zero(grid_.size())};
}

void MeasurementOperator::check_image(t_int size) const {
  if(size != dims_.size())
    throw InvalidInput("image has " + std::to_string(size) + " pixels, operator expects " +
                       std::to_string(dims_.size()));
}

void MeasurementOperator::fourier_grid(Eigen::Ref<RealVector const> const &x,
                                       FourierWorkspace &ws) const {
  check_image(x.size());
  ws.grid.setZero(grid_.size());
  for(t_int i1 = 0; i1 < dims_.n1; ++i1) {
    auto const g1 = wrap(i1 - dims_.n1 / 2, grid_.n1);
    for(t_int i2 = 0; i2 < dims_.n2; ++i2) {
      auto const g2 = wrap(i2 - dims_.n2 / 2, grid_.n2);
      auto const n = i1 * dims_.n2 + i2;
      ws.grid[g1 * grid_.n2 + g2] = correction_[n] * x[n];
    }
  }
  execute(forward_plan_, ws.grid);
  ws.grid *= 1.0 / std::sqrt(static_cast<t_real>(grid_.size()));
}

void MeasurementOperator::degrid_rows(FourierWorkspace const &ws, t_int begin, t_int end,
                                      Eigen::Ref<ComplexVector> out) const {
  if(begin < 0 || end > rows() || begin > end || out.size() != end - begin)
    throw InvalidInput("degrid: invalid row range");
  kernels::omp::degrid(table_, theta_, ws.grid.data(), begin, end, out.data());
}

void MeasurementOperator::forward(Eigen::Ref<RealVector const> const &x,
                                  Eigen::Ref<ComplexVector> out, FourierWorkspace &ws) const {
  if(out.size() != rows())
    throw InvalidInput("forward: output has wrong length");
  fourier_grid(x, ws);
  degrid_rows(ws, 0, rows(), out);
}

ComplexVector MeasurementOperator::forward(Eigen::Ref<RealVector const> const &x) const {
  auto ws = workspace();
  ComplexVector out(rows());
  forward(x, out, ws);
  return out;
}

void MeasurementOperator::adjoint(Eigen::Ref<ComplexVector const> const &v,
                                  Eigen::Ref<RealVector> out, FourierWorkspace &ws) const {
  if(v.size() != rows())
    throw InvalidInput("adjoint: data vector has " + std::to_string(v.size()) +
                       " entries, operator has " + std::to_string(rows()) + " rows");
  check_image(out.size());
  ws.grid.setZero(grid_.size());
  kernels::omp::grid_gather(transposed_, theta_, v.data(), ws.grid.data());
  execute(backward_plan_, ws.grid);
  auto const scale = 1.0 / std::sqrt(static_cast<t_real>(grid_.size()));
  for(t_int i1 = 0; i1 < dims_.n1; ++i1) {
    auto const g1 = wrap(i1 - dims_.n1 / 2, grid_.n1);
    for(t_int i2 = 0; i2 < dims_.n2; ++i2) {
      auto const g2 = wrap(i2 - dims_.n2 / 2, grid_.n2);
      auto const n = i1 * dims_.n2 + i2;
      out[n] = correction_[n] * scale * ws.grid[g1 * grid_.n2 + g2].real();
    }
  }
}

RealVector MeasurementOperator::adjoint(Eigen::Ref<ComplexVector const> const &v) const {
  auto ws = workspace();
  RealVector out(dims_.size());
  adjoint(v, out, ws);
  return out;
}

std::vector<std::pair<t_int, t_int>> partition_rows(t_int rows, t_int n) {
  if(n < 1 || n > rows)
    throw InvalidInput("cannot split " + std::to_string(rows) + " rows into " + std::to_string(n) +
                       " blocks");
  std::vector<std::pair<t_int, t_int>> ranges;
  for(t_int b = 0; b < n; ++b)
    ranges.emplace_back(rows * b / n, rows * (b + 1) / n);
  return ranges;
}

std::vector<VisibilityBlock> make_blocks(MeasurementOperator const &op, ComplexVector const &y,
                                         std::vector<std::pair<t_int, t_int>> const &ranges) {
  if(y.size() != op.rows())
    throw InvalidInput("data length does not match the operator");
  std::vector<VisibilityBlock> blocks;
  t_int expected = 0;
  for(auto [begin, end] : ranges) {
    if(begin != expected || end <= begin || end > op.rows())
      throw InvalidInput("block ranges must partition the channel rows contiguously");
    expected = end;
    VisibilityBlock block;
    block.begin = begin;
    block.end = end;
    block.y = y.segment(begin, end - begin);
    block.preconditioner = build_preconditioner(op, begin, end);
    blocks.push_back(std::move(block));
  }
  if(expected != op.rows())
    throw InvalidInput("block ranges do not cover every row");
  return blocks;
}

RealVector build_preconditioner(MeasurementOperator const &op, t_int begin, t_int end) {
  auto const grid = op.grid_dims();
  auto const &uv = op.coverage();
  auto const pi = std::numbers::pi;
  std::vector<t_int> cell(uv.size());
  std::vector<t_int> counts(grid.size(), 0);
  for(t_int j = 0; j < uv.size(); ++j) {
    auto const k1 = wrap(static_cast<t_int>(std::lround(uv.u[j] * grid.n1 / (2 * pi))), grid.n1);
    auto const k2 = wrap(static_cast<t_int>(std::lround(uv.v[j] * grid.n2 / (2 * pi))), grid.n2);
    cell[j] = k1 * grid.n2 + k2;
    ++counts[cell[j]];
  }
  RealVector u(end - begin);
  for(t_int j = begin; j < end; ++j)
    u[j - begin] = 1.0 / static_cast<t_real>(counts[cell[j]]);
  return u;
}

t_int phase_centre_index(ImageDims dims) { return (dims.n1 / 2) * dims.n2 + dims.n2 / 2; }

Psf psf_and_eta(MeasurementOperator const &op) {
  RealVector delta = RealVector::Zero(op.dims().size());
  delta[phase_centre_index(op.dims())] = 1;
  RealVector response = op.adjoint(op.forward(delta));
  auto const peak = response.maxCoeff();
  if(!(peak > 0) || !std::isfinite(peak))
    throw NumericalError("singular PSF: Phi^T Phi delta has no positive peak");
  return {response / peak, 1.0 / peak};
}

} // namespace hypersara
