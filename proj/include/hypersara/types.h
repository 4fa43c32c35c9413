#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hypersara {

using t_real = double;
using t_complex = std::complex<double>;
using t_int = std::ptrdiff_t;

template <typename T> using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T> using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using RealVector = Vector<t_real>;
using ComplexVector = Vector<t_complex>;
using RealMatrix = Matrix<t_real>;

//! Wideband cube: N x L, column l is the channel-l image with pixels stored row-major.
using Cube = RealMatrix;

struct ImageDims {
  t_int n1 = 0;  //!< rows
  t_int n2 = 0;  //!< columns
  [[nodiscard]] t_int size() const { return n1 * n2; }
  bool operator==(ImageDims const &) const = default;
};

//! Rejected input: bad dimensions, out-of-range parameters, malformed files.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

//! Non-finite values, failed factorizations, degenerate operators.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Configuration rejected; message names the key and the admissible range.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline bool is_power_of_two(t_int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace hypersara
