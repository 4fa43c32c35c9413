#pragma once

#include <string>
#include <vector>

#include "hypersara/types.h"
#include "hypersara/wavelets.h"

namespace hypersara {

/// Psi = (Psi_1, ..., Psi_D) / sqrt(D): the Dirac basis followed by periodized Daubechies
/// wavelets. Each block is orthonormal, so the normalized concatenation is a Parseval frame
/// with ||Psi^T||_S = 1.
///
/// Coefficients are stacked basis-major (Dirac, db1, ..., db8), each basis in the row-major
/// Mallat layout of its image.
class SaraDictionary {
public:
  //! Orders are Daubechies orders; 0 stands for the Dirac basis.
  SaraDictionary(ImageDims dims, t_int levels = 4,
                 std::vector<int> bases = {0, 1, 2, 3, 4, 5, 6, 7, 8});

  [[nodiscard]] ImageDims dims() const { return dims_; }
  [[nodiscard]] t_int levels() const { return levels_; }
  [[nodiscard]] t_int size() const { return static_cast<t_int>(bases_.size()); }
  [[nodiscard]] t_int coefficient_rows() const { return size() * dims_.size(); }
  [[nodiscard]] t_real normalization() const { return normalization_; }
  [[nodiscard]] std::vector<int> const &orders() const { return bases_; }
  [[nodiscard]] Wavelet const &wavelet(t_int d) const { return wavelets_[d]; }
  [[nodiscard]] bool is_dirac(t_int d) const { return bases_[d] == 0; }

  //! Psi^T X, shape (D N) x L.
  [[nodiscard]] RealMatrix analysis(Cube const &x) const;
  //! Sum_d Psi_d A_d.
  [[nodiscard]] Cube synthesis_adjoint(RealMatrix const &coefficients) const;

  //! Single basis, in place on `width` pixel-interleaved images (see dwt2): Psi_d^T x / sqrt(D).
  void analyse_interleaved(t_int d, t_int width, t_real *data, std::vector<t_real> &scratch) const;
  //! Single basis, in place: Psi_d a / sqrt(D).
  void synthesise_interleaved(t_int d, t_int width, t_real *data,
                              std::vector<t_real> &scratch) const;

private:
  ImageDims dims_;
  t_int levels_;
  std::vector<int> bases_;
  std::vector<Wavelet> wavelets_;
  t_real normalization_;
};

} // namespace hypersara
