#include "hypersara/sara.h"

#include <cmath>
#include <string>

#include "hypersara/kernels.h"

namespace hypersara {

SaraDictionary::SaraDictionary(ImageDims dims, t_int levels, std::vector<int> bases)
    : dims_(dims), levels_(levels), bases_(std::move(bases)) {
  if(bases_.empty())
    throw InvalidInput("SARA dictionary needs at least one basis");
  if(!dyadic_compatible(dims_, levels_))
    throw InvalidInput("image " + std::to_string(dims_.n1) + "x" + std::to_string(dims_.n2) +
                       " is not divisible by 2^" + std::to_string(levels_));
  for(int order : bases_) {
    if(order == 0)
      wavelets_.emplace_back();
    else
      wavelets_.push_back(daubechies(order));
  }
  normalization_ = 1.0 / std::sqrt(static_cast<t_real>(bases_.size()));
}

void SaraDictionary::analyse_interleaved(t_int d, t_int width, t_real *data,
                                         std::vector<t_real> &scratch) const {
  auto const size = dims_.size() * width;
  if(!is_dirac(d))
    dwt2(wavelets_[d], levels_, dims_, width, data, scratch);
  for(t_int i = 0; i < size; ++i)
    data[i] *= normalization_;
}

void SaraDictionary::synthesise_interleaved(t_int d, t_int width, t_real *data,
                                            std::vector<t_real> &scratch) const {
  auto const size = dims_.size() * width;
  if(!is_dirac(d))
    idwt2(wavelets_[d], levels_, dims_, width, data, scratch);
  for(t_int i = 0; i < size; ++i)
    data[i] *= normalization_;
}

RealMatrix SaraDictionary::analysis(Cube const &x) const {
  if(x.rows() != dims_.size())
    throw InvalidInput("analysis: cube has " + std::to_string(x.rows()) + " rows, expected " +
                       std::to_string(dims_.size()));
  RealMatrix coefficients(coefficient_rows(), x.cols());
  kernels::omp::sara_analysis(*this, x, coefficients);
  return coefficients;
}

Cube SaraDictionary::synthesis_adjoint(RealMatrix const &coefficients) const {
  if(coefficients.rows() != coefficient_rows())
    throw InvalidInput("synthesis: coefficient matrix has " + std::to_string(coefficients.rows()) +
                       " rows, expected " + std::to_string(coefficient_rows()));
  Cube x(dims_.size(), coefficients.cols());
  kernels::omp::sara_synthesis(*this, coefficients, x);
  return x;
}

} // namespace hypersara
