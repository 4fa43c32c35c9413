#include <algorithm>
#include <cmath>
#include <vector>

#include "hypersara/kernels.h"
#include "hypersara/sara.h"

namespace hypersara::kernels::omp {

void degrid(InterpolationTable const &table, RealVector const &theta, t_complex const *grid,
            t_int begin, t_int end, t_complex *out) {
  auto const nnz = table.nnz_per_row;
#pragma omp parallel for schedule(static)
  for(t_int r = begin; r < end; ++r) {
    t_int const *idx = table.index.data() + r * nnz;
    t_real const *w = table.weight.data() + r * nnz;
    t_complex acc = 0;
    for(t_int k = 0; k < nnz; ++k)
      acc += w[k] * grid[idx[k]];
    out[r - begin] = theta[r] * acc;
  }
}

void grid_gather(TransposedTable const &table, RealVector const &theta, t_complex const *vis,
                 t_complex *grid) {
  auto const cells = static_cast<t_int>(table.cell.size());
#pragma omp parallel for schedule(static)
  for(t_int c = 0; c < cells; ++c) {
    t_complex acc = 0;
    for(t_int k = table.offset[c]; k < table.offset[c + 1]; ++k)
      acc += (table.weight[k] * theta[table.row[k]]) * vis[table.row[k]];
    grid[table.cell[c]] = acc;
  }
}

void sara_analysis(SaraDictionary const &dict, Cube const &x, RealMatrix &coefficients) {
  auto const n = dict.dims().size();
  auto const width = x.cols();
  coefficients.resize(dict.coefficient_rows(), width);
  // Pixel-interleaved copy: column n holds the L values of pixel n.
  RealMatrix const interleaved = x.transpose();
#pragma omp parallel
  {
    std::vector<t_real> scratch;
    RealMatrix buffer;
#pragma omp for schedule(dynamic)
    for(t_int d = 0; d < dict.size(); ++d) {
      buffer = interleaved;
      dict.analyse_interleaved(d, width, buffer.data(), scratch);
      coefficients.middleRows(d * n, n) = buffer.transpose();
    }
  }
}

void sara_synthesis(SaraDictionary const &dict, RealMatrix const &coefficients, Cube &x) {
  auto const n = dict.dims().size();
  auto const width = coefficients.cols();
  // Per-basis images first, then a fixed-order sum over d.
  std::vector<RealMatrix> images(dict.size());
#pragma omp parallel
  {
    std::vector<t_real> scratch;
#pragma omp for schedule(dynamic)
    for(t_int d = 0; d < dict.size(); ++d) {
      images[d] = coefficients.middleRows(d * n, n).transpose();
      dict.synthesise_interleaved(d, width, images[d].data(), scratch);
    }
  }
  for(t_int d = 1; d < dict.size(); ++d)
    images[0] += images[d];
  x = images[0].transpose();
}

void row_soft_threshold(RealMatrix &z, RealVector const &thresholds) {
#pragma omp parallel for schedule(static)
  for(t_int n = 0; n < z.rows(); ++n) {
    t_real const norm = z.row(n).norm();
    if(norm <= thresholds[n] || norm == 0)
      z.row(n).setZero();
    else
      z.row(n) *= (norm - thresholds[n]) / norm;
  }
}

void projected_step(Cube const &x_prev, Cube const &g, t_real tau, Cube &x_out) {
  x_out.resize(x_prev.rows(), x_prev.cols());
#pragma omp parallel for schedule(static)
  for(t_int l = 0; l < x_prev.cols(); ++l)
    for(t_int n = 0; n < x_prev.rows(); ++n)
      x_out(n, l) = std::max(x_prev(n, l) - tau * g(n, l), 0.0);
}

} // namespace hypersara::kernels::omp
