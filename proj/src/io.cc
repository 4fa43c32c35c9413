#include "hypersara/io.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace hypersara {

namespace {

constexpr char kCubeMagic[] = "WBCUBE1";
constexpr char kVisMagic[] = "WBVIS1";

template <typename T> T to_little(T value) {
  if constexpr(std::endian::native == std::endian::big) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    std::reverse(bytes.begin(), bytes.end());
    std::memcpy(&value, bytes.data(), sizeof(T));
  }
  return value;
}

template <typename T> void put(std::ostream &os, T value) {
  value = to_little(value);
  os.write(reinterpret_cast<char const *>(&value), sizeof(T));
}

template <typename T> T get(std::istream &is, fs::path const &path) {
  T value;
  if(!is.read(reinterpret_cast<char *>(&value), sizeof(T)))
    throw IoError("truncated file: " + path.string());
  return to_little(value);
}

void put_magic(std::ostream &os, char const *magic) { os.write(magic, std::strlen(magic)); }

void expect_magic(std::istream &is, char const *magic, fs::path const &path) {
  std::string buffer(std::strlen(magic), '\0');
  if(!is.read(buffer.data(), static_cast<std::streamsize>(buffer.size())) || buffer != magic)
    throw IoError("not a " + std::string(magic) + " file: " + path.string());
}

std::ofstream open_out(fs::path const &path, bool binary) {
  if(path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if(!os)
    throw IoError("cannot write " + path.string());
  return os;
}

std::ifstream open_in(fs::path const &path) {
  if(!fs::exists(path))
    throw IoError("missing input file: " + path.string());
  std::ifstream is(path, std::ios::binary);
  if(!is)
    throw IoError("cannot read " + path.string());
  return is;
}

std::uint32_t checked_u32(t_int value) {
  if(value < 0 || value > static_cast<t_int>(UINT32_MAX))
    throw InvalidInput("value does not fit the file header");
  return static_cast<std::uint32_t>(value);
}

std::string hex(std::uint64_t value) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << value;
  return os.str();
}

struct Fnv {
  std::uint64_t state = 0xcbf29ce484222325ull;
  void update(char const *data, std::size_t n) {
    for(std::size_t i = 0; i < n; ++i) {
      state ^= static_cast<unsigned char>(data[i]);
      state *= 0x100000001b3ull;
    }
  }
};

// Full precision so reruns can be compared byte for byte.
std::ostream &number(std::ostream &os, t_real value) {
  return os << std::setprecision(17) << value;
}

} // namespace

void write_cube(fs::path const &path, Cube const &cube, ImageDims dims) {
  if(cube.rows() != dims.size())
    throw InvalidInput("cube rows do not match the image size");
  auto os = open_out(path, true);
  put_magic(os, kCubeMagic);
  put(os, checked_u32(dims.n1));
  put(os, checked_u32(dims.n2));
  put(os, checked_u32(cube.cols()));
  for(t_int l = 0; l < cube.cols(); ++l)
    for(t_int n = 0; n < cube.rows(); ++n)
      put(os, cube(n, l));
  if(!os)
    throw IoError("failed writing " + path.string());
}

Cube read_cube(fs::path const &path, ImageDims *dims) {
  auto is = open_in(path);
  expect_magic(is, kCubeMagic, path);
  ImageDims d;
  d.n1 = get<std::uint32_t>(is, path);
  d.n2 = get<std::uint32_t>(is, path);
  auto const channels = static_cast<t_int>(get<std::uint32_t>(is, path));
  Cube cube(d.size(), channels);
  for(t_int l = 0; l < channels; ++l)
    for(t_int n = 0; n < d.size(); ++n)
      cube(n, l) = get<double>(is, path);
  if(dims)
    *dims = d;
  return cube;
}

void write_visibilities(fs::path const &path, std::vector<VisibilityChannel> const &channels) {
  auto os = open_out(path, true);
  put_magic(os, kVisMagic);
  put(os, checked_u32(static_cast<t_int>(channels.size())));
  for(auto const &channel : channels) {
    auto const m = channel.uv.size();
    if(channel.y.size() != m || channel.weight.size() != m || channel.uv.v.size() != m)
      throw InvalidInput("visibility channel arrays differ in length");
    put(os, checked_u32(m));
    put(os, channel.uv.frequency_hz);
    for(t_int j = 0; j < m; ++j) {
      put(os, channel.uv.u[j]);
      put(os, channel.uv.v[j]);
      put(os, channel.y[j].real());
      put(os, channel.y[j].imag());
      put(os, channel.weight[j]);
    }
  }
  if(!os)
    throw IoError("failed writing " + path.string());
}

std::vector<VisibilityChannel> read_visibilities(fs::path const &path) {
  auto is = open_in(path);
  expect_magic(is, kVisMagic, path);
  auto const channels = get<std::uint32_t>(is, path);
  std::vector<VisibilityChannel> out(channels);
  for(auto &channel : out) {
    auto const m = static_cast<t_int>(get<std::uint32_t>(is, path));
    channel.uv.frequency_hz = get<double>(is, path);
    channel.uv.u.resize(m);
    channel.uv.v.resize(m);
    channel.y.resize(m);
    channel.weight.resize(m);
    for(t_int j = 0; j < m; ++j) {
      channel.uv.u[j] = get<double>(is, path);
      channel.uv.v[j] = get<double>(is, path);
      auto const re = get<double>(is, path);
      auto const im = get<double>(is, path);
      channel.y[j] = t_complex(re, im);
      channel.weight[j] = get<double>(is, path);
    }
  }
  return out;
}

std::vector<VisibilityChannel> visibilities_of(Simulation const &sim) {
  std::vector<VisibilityChannel> out;
  for(std::size_t l = 0; l < sim.data.size(); ++l) {
    VisibilityChannel channel;
    channel.uv = sim.coverage.channels[l];
    channel.y = sim.noisy.y[l];
    auto const sigma = sim.noisy.sigma;
    channel.weight = RealVector::Constant(channel.y.size(), sigma > 0 ? 1 / sigma : 1.0);
    out.push_back(std::move(channel));
  }
  return out;
}

WidebandData wideband_data(std::vector<VisibilityChannel> const &channels, ImageDims dims,
                           t_int blocks, OperatorParams params) {
  WidebandData data;
  for(auto const &channel : channels) {
    ChannelData cd;
    auto op = std::make_shared<MeasurementOperator const>(dims, channel.uv, channel.weight, params);
    // Stored visibilities are raw; the operator applies the natural weights.
    ComplexVector const y = channel.y.cwiseProduct(channel.weight.cast<t_complex>());
    cd.blocks = make_blocks(*op, y, partition_rows(op->rows(), blocks));
    cd.op = std::move(op);
    data.push_back(std::move(cd));
  }
  return data;
}

void write_pgm(fs::path const &path, Eigen::Ref<RealVector const> const &image, ImageDims dims,
               Stretch stretch) {
  if(image.size() != dims.size())
    throw InvalidInput("image size does not match dimensions");
  RealVector values = image;
  if(stretch == Stretch::log10) {
    auto const max = values.maxCoeff();
    auto const floor = max > 0 ? max * 1e-4 : 1e-12;
    values = values.cwiseMax(floor).array().log10().matrix();
  }
  auto const lo = values.minCoeff();
  auto const hi = values.maxCoeff();
  auto const range = hi > lo ? hi - lo : 1.0;
  auto os = open_out(path, true);
  os << "P5\n" << dims.n2 << ' ' << dims.n1 << "\n255\n";
  for(t_int n = 0; n < values.size(); ++n) {
    auto const level = std::lround(255 * (values[n] - lo) / range);
    os.put(static_cast<char>(std::clamp<long>(level, 0, 255)));
  }
}

void write_metrics_csv(fs::path const &path, ChannelMetrics const &metrics) {
  auto os = open_out(path, false);
  os << "channel,snr,sm,std\n";
  for(t_int l = 0; l < metrics.snr.size(); ++l) {
    os << l << ',';
    number(os, metrics.snr[l]) << ',';
    number(os, metrics.similarity[l]) << ',';
    number(os, metrics.residual_std[l]) << '\n';
  }
  os << "mean,";
  number(os, metrics.asnr) << ',';
  number(os, metrics.asm_db) << ',';
  number(os, metrics.astd) << '\n';
}

void write_reweight_csv(fs::path const &path, std::vector<ReweightRecord> const &records) {
  auto os = open_out(path, false);
  os << "k,gamma,gamma_bar,effective_rank,row_support,asnr,iterations,converged\n";
  for(auto const &r : records) {
    os << r.k << ',';
    number(os, r.gamma) << ',';
    number(os, r.gamma_bar) << ',' << r.effective_rank << ',' << r.row_support << ',';
    number(os, r.asnr) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

void write_model_csv(fs::path const &directory, GroundTruthModel const &model) {
  fs::create_directories(directory);
  {
    auto os = open_out(directory / "spectra.csv", false);
    os << "channel,frequency_hz";
    for(t_int q = 0; q < model.spectra.cols(); ++q)
      os << ",source" << q;
    os << '\n';
    for(t_int l = 0; l < model.spectra.rows(); ++l) {
      os << l << ',';
      number(os, model.frequencies[l]);
      for(t_int q = 0; q < model.spectra.cols(); ++q)
        number(os << ',', model.spectra(l, q));
      os << '\n';
    }
  }
  {
    auto os = open_out(directory / "spectral_parameters.csv", false);
    os << "source,alpha,beta\n";
    for(t_int q = 0; q < model.alpha.size(); ++q) {
      os << q << ',';
      number(os, model.alpha[q]) << ',';
      number(os, model.beta[q]) << '\n';
    }
  }
  {
    auto os = open_out(directory / "lines.csv", false);
    os << "source,channel,amplitude\n";
    for(std::size_t q = 0; q < model.lines.size(); ++q)
      for(auto const &line : model.lines[q]) {
        os << q << ',' << line.channel << ',';
        number(os, line.amplitude) << '\n';
      }
  }
}

std::string file_digest(fs::path const &path) {
  auto is = open_in(path);
  Fnv fnv;
  std::array<char, 1 << 16> buffer;
  while(is) {
    is.read(buffer.data(), buffer.size());
    fnv.update(buffer.data(), static_cast<std::size_t>(is.gcount()));
  }
  return hex(fnv.state);
}

std::string string_digest(std::string const &text) {
  Fnv fnv;
  fnv.update(text.data(), text.size());
  return hex(fnv.state);
}

} // namespace hypersara
