#include "hypersara/wavelets.h"

#include <algorithm>
#include <array>
#include <string>

namespace hypersara {

namespace {

// Daubechies scaling filters, 2N taps, sum = sqrt(2).
constexpr std::array<std::array<t_real, 16>, 8> kDaubechies = {{
    {0.70710678118654757, 0.70710678118654757},
    {0.48296291314453416, 0.83651630373780794, 0.22414386804201339, -0.12940952255126037},
    {0.33267055295008263, 0.80689150931109255, 0.45987750211849154, -0.13501102001025458,
     -0.085441273882026658, 0.035226291885709533},
    {0.23037781330889651, 0.71484657055291567, 0.63088076792985892, -0.027983769416859854,
     -0.18703481171909309, 0.030841381835560764, 0.032883011666885197, -0.010597401785069032},
    {0.16010239797419293, 0.60382926979718965, 0.72430852843777294, 0.13842814590132074,
     -0.24229488706638203, -0.032244869584638375, 0.077571493840045719, -0.0062414902127982744,
     -0.012580751999081999, 0.0033357252854737712},
    {0.11154074335010947, 0.49462389039845306, 0.75113390802109536, 0.31525035170919763,
     -0.22626469396543983, -0.12976686756726194, 0.097501605587323043, 0.027522865530305727,
     -0.03158203931748603, 0.00055384220116149613, 0.0047772575109455108,
     -0.0010773010853084796},
    {0.077852054085009184, 0.39653931948191729, 0.72913209084623509, 0.46978228740519312,
     -0.14390600392856498, -0.22403618499387498, 0.071309219266830259, 0.080612609151083078,
     -0.038029936935014413, -0.016574541630666881, 0.01255099855609984,
     0.00042957797292136651, -0.0018016407040474908, 0.00035371379997452024},
    {0.054415842243104008, 0.31287159091429995, 0.67563073629728976, 0.58535468365420673,
     -0.015829105256349306, -0.28401554296154691, 0.00047248457391328279, 0.12874742662047847,
     -0.017369301001807547, -0.044088253930794755, 0.013981027917398282,
     0.0087460940474057766, -0.0048703529934515741, -0.00039174037337694705,
     0.00067544940645056933, -0.00011747678412476953},
}};

t_int modulo(t_int a, t_int n) { return ((a % n) + n) % n; }

// A "line" is n elements spaced `stride` apart; every element is a run of `len` contiguous values
// transformed independently, so the innermost loops are contiguous.
//
// Periodized analysis step on a line of even length n:
//   approx[i] = sum_j low[j]  x[(2i + j + 1 - K/2) mod n]
//   detail[i] = sum_j high[j] x[(2i + j + 1 - K/2) mod n]
// Approximation goes to elements [0, n/2), detail to [n/2, n).
void analyse_line(Wavelet const &w, t_real *x, t_int n, t_int stride, t_int len,
                  std::vector<t_real> &buffer) {
  auto const taps = static_cast<t_int>(w.low.size());
  auto const offset = 1 - taps / 2;
  auto const half = n / 2;
  buffer.assign(n * len, 0);
  for(t_int i = 0; i < half; ++i) {
    t_real *a = buffer.data() + i * len;
    t_real *d = buffer.data() + (half + i) * len;
    for(t_int j = 0; j < taps; ++j) {
      t_real const *src = x + modulo(2 * i + j + offset, n) * stride;
      t_real const lo = w.low[j], hi = w.high[j];
      for(t_int k = 0; k < len; ++k) {
        a[k] += lo * src[k];
        d[k] += hi * src[k];
      }
    }
  }
  for(t_int i = 0; i < n; ++i)
    std::copy_n(buffer.data() + i * len, len, x + i * stride);
}

// Transpose of analyse_line.
void synthesise_line(Wavelet const &w, t_real *x, t_int n, t_int stride, t_int len,
                     std::vector<t_real> &buffer) {
  auto const taps = static_cast<t_int>(w.low.size());
  auto const offset = 1 - taps / 2;
  auto const half = n / 2;
  buffer.assign((n + taps) * len, 0);
  for(t_int i = 0; i < half; ++i) {
    t_real const *a = x + i * stride;
    t_real const *d = x + (half + i) * stride;
    for(t_int j = 0; j < taps; ++j) {
      t_real *e = buffer.data() + (2 * i + j) * len;
      t_real const lo = w.low[j], hi = w.high[j];
      for(t_int k = 0; k < len; ++k)
        e[k] += lo * a[k] + hi * d[k];
    }
  }
  for(t_int i = 0; i < n; ++i)
    std::fill_n(x + i * stride, len, 0.0);
  for(t_int t = 0; t < n + taps; ++t) {
    t_real *dst = x + modulo(t + offset, n) * stride;
    t_real const *e = buffer.data() + t * len;
    for(t_int k = 0; k < len; ++k)
      dst[k] += e[k];
  }
}

} // namespace

Wavelet daubechies(int order) {
  if(order < 1 || order > 8)
    throw InvalidInput("Daubechies order must lie in [1, 8], got " + std::to_string(order));
  Wavelet w;
  w.order = order;
  auto const taps = static_cast<std::size_t>(2 * order);
  auto const &coefficients = kDaubechies[order - 1];
  w.low.assign(coefficients.begin(), coefficients.begin() + taps);
  w.high.resize(taps);
  for(std::size_t k = 0; k < taps; ++k)
    w.high[k] = (k % 2 == 0 ? 1.0 : -1.0) * w.low[taps - 1 - k];
  return w;
}

bool dyadic_compatible(ImageDims dims, t_int levels) {
  if(levels < 0 || dims.n1 <= 0 || dims.n2 <= 0)
    return false;
  t_int const step = t_int(1) << levels;
  return dims.n1 % step == 0 && dims.n2 % step == 0;
}

void dwt2(Wavelet const &w, t_int levels, ImageDims dims, t_int width, t_real *data,
          std::vector<t_real> &scratch) {
  auto const row_stride = dims.n2 * width;
  t_int rows = dims.n1, cols = dims.n2;
  for(t_int level = 0; level < levels; ++level) {
    for(t_int r = 0; r < rows; ++r)
      analyse_line(w, data + r * row_stride, cols, width, width, scratch);
    analyse_line(w, data, rows, row_stride, cols * width, scratch);
    rows /= 2;
    cols /= 2;
  }
}

void idwt2(Wavelet const &w, t_int levels, ImageDims dims, t_int width, t_real *data,
           std::vector<t_real> &scratch) {
  auto const row_stride = dims.n2 * width;
  for(t_int level = levels - 1; level >= 0; --level) {
    t_int const rows = dims.n1 >> level;
    t_int const cols = dims.n2 >> level;
    synthesise_line(w, data, rows, row_stride, cols * width, scratch);
    for(t_int r = 0; r < rows; ++r)
      synthesise_line(w, data + r * row_stride, cols, width, width, scratch);
  }
}

} // namespace hypersara
