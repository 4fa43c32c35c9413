#pragma once

#include <vector>

#include "hypersara/types.h"

namespace hypersara {

struct Wavelet {
  int order = 0;            //!< db<order>, 2 * order taps
  std::vector<t_real> low;  //!< scaling (reconstruction low-pass) filter
  std::vector<t_real> high; //!< high[k] = (-1)^k low[K-1-k]
};

Wavelet daubechies(int order);

/// In-place periodized 2D transform over `levels` levels, Mallat layout (approximation in the
/// top-left corner). `width` images are interleaved pixel by pixel: value k of pixel (r, c) sits
/// at data[(r n2 + c) width + k]. width = 1 is a plain row-major image.
void dwt2(Wavelet const &w, t_int levels, ImageDims dims, t_int width, t_real *data,
          std::vector<t_real> &scratch);
//! Inverse (and adjoint) of dwt2.
void idwt2(Wavelet const &w, t_int levels, ImageDims dims, t_int width, t_real *data,
           std::vector<t_real> &scratch);

bool dyadic_compatible(ImageDims dims, t_int levels);

} // namespace hypersara
