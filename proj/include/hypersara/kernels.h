#pragma once

// Data-parallel inner loops. The `omp` variants are what the solver calls; the `serial` variants
// are plain loops kept as the reference for tests and benchmarks. Every output element is written
// by exactly one iteration with the same arithmetic order, so both variants agree bit-for-bit.

#include "hypersara/fourier.h"
#include "hypersara/types.h"

namespace hypersara {
class SaraDictionary;
}

namespace hypersara::kernels {

namespace serial {
//! out[r - begin] = theta_r * sum_k w_rk grid[idx_rk] for r in [begin, end)
void degrid(InterpolationTable const &table, RealVector const &theta, t_complex const *grid,
            t_int begin, t_int end, t_complex *out);
//! grid[cell] = sum_r w_rc theta_r vis_r for every touched cell; other cells are left alone
void grid_gather(TransposedTable const &table, RealVector const &theta, t_complex const *vis,
                 t_complex *grid);
//! coefficients (D N x L) = Psi^T X
void sara_analysis(SaraDictionary const &dict, Cube const &x, RealMatrix &coefficients);
//! X = sum_d Psi_d A_d
void sara_synthesis(SaraDictionary const &dict, RealMatrix const &coefficients, Cube &x);
//! row n of z scaled by max(|z_n| - t_n, 0) / |z_n|; zero rows stay zero
void row_soft_threshold(RealMatrix &z, RealVector const &thresholds);
//! x_out = max(x_prev - tau g, 0)
void projected_step(Cube const &x_prev, Cube const &g, t_real tau, Cube &x_out);
} // namespace serial

namespace omp {
void degrid(InterpolationTable const &table, RealVector const &theta, t_complex const *grid,
            t_int begin, t_int end, t_complex *out);
void grid_gather(TransposedTable const &table, RealVector const &theta, t_complex const *vis,
                 t_complex *grid);
void sara_analysis(SaraDictionary const &dict, Cube const &x, RealMatrix &coefficients);
void sara_synthesis(SaraDictionary const &dict, RealMatrix const &coefficients, Cube &x);
void row_soft_threshold(RealMatrix &z, RealVector const &thresholds);
void projected_step(Cube const &x_prev, Cube const &g, t_real tau, Cube &x_out);
} // namespace omp

} // namespace hypersara::kernels
