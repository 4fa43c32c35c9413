#include "hypersara/simulation.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace hypersara {

namespace {

constexpr t_real kMinBrightness = 0.005;
constexpr t_real kBackgroundPeak = 0.02;
constexpr t_int kMaxLines = 3;

enum Stream : std::uint64_t { kSources = 1, kSpectra = 2, kCoverage = 3, kNoise = 4, kChannels = 100 };

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

t_real uniform(std::mt19937_64 &rng, t_real a, t_real b) {
  return std::uniform_real_distribution<t_real>(a, b)(rng);
}

t_real signed_log_uniform(std::mt19937_64 &rng) {
  auto const magnitude = std::pow(10.0, uniform(rng, -1, 0));
  return std::bernoulli_distribution(0.5)(rng) ? magnitude : -magnitude;
}

void add_gaussian(RealVector &image, ImageDims dims, t_real c1, t_real c2, t_real s_major,
                  t_real s_minor, t_real angle, t_real amplitude) {
  auto const ca = std::cos(angle), sa = std::sin(angle);
  for(t_int i1 = 0; i1 < dims.n1; ++i1)
    for(t_int i2 = 0; i2 < dims.n2; ++i2) {
      auto const d1 = i1 - c1, d2 = i2 - c2;
      auto const a = (ca * d2 + sa * d1) / s_major;
      auto const b = (-sa * d2 + ca * d1) / s_minor;
      image[i1 * dims.n2 + i2] += amplitude * std::exp(-0.5 * (a * a + b * b));
    }
}

RealVector compact_source(ImageDims dims, std::mt19937_64 &rng, t_real peak) {
  RealVector image = RealVector::Zero(dims.size());
  auto const c1 = uniform(rng, 0.2 * dims.n1, 0.8 * dims.n1);
  auto const c2 = uniform(rng, 0.2 * dims.n2, 0.8 * dims.n2);
  auto const extent = static_cast<t_real>(std::min(dims.n1, dims.n2));
  if(std::bernoulli_distribution(0.3)(rng)) {
    // Cluster of nearly unresolved components.
    auto const count = std::uniform_int_distribution<int>(1, 4)(rng);
    for(int k = 0; k < count; ++k)
      add_gaussian(image, dims, c1 + uniform(rng, -3, 3), c2 + uniform(rng, -3, 3), 0.7, 0.7, 0,
                   uniform(rng, 0.3, 1));
  } else {
    auto const s_major = uniform(rng, 1.5, std::max(2.0, extent / 10));
    auto const s_minor = s_major * uniform(rng, 0.4, 1);
    add_gaussian(image, dims, c1, c2, s_major, s_minor, uniform(rng, 0, std::numbers::pi), 1);
  }
  auto const max = image.maxCoeff();
  return image * (peak / max);
}

void draw_spectra(GroundTruthModel &model, std::mt19937_64 &rng, GroundTruthOptions const &options) {
  auto const q_count = model.sources.cols();
  auto const channels = model.frequencies.size();
  model.spectra.resize(channels, q_count);
  model.alpha.resize(q_count);
  model.beta.resize(q_count);
  model.lines.assign(q_count, {});
  for(t_int q = 0; q < q_count; ++q) {
    model.alpha[q] = signed_log_uniform(rng);
    model.beta[q] = options.curvature ? signed_log_uniform(rng) : 0;
    for(t_int l = 0; l < channels; ++l)
      model.spectra(l, q) =
          curved_power_law(model.frequencies[l], model.reference_hz, model.alpha[q], model.beta[q]);
    if(!options.emission_lines)
      continue;
    auto const continuum = model.spectra.col(q).maxCoeff();
    auto const count = std::uniform_int_distribution<t_int>(0, kMaxLines)(rng);
    for(t_int k = 0; k < count; ++k) {
      EmissionLine line{std::uniform_int_distribution<t_int>(0, channels - 1)(rng),
                        uniform(rng, 0.2, 1) * continuum};
      model.spectra(line.channel, q) += line.amplitude;
      model.lines[q].push_back(line);
    }
  }
}

} // namespace

RealVector channel_frequencies(SpectralBand const &band, t_int channels) {
  if(channels < 1)
    throw InvalidInput("at least one channel is required");
  if(!(band.low_hz > 0 && band.high_hz >= band.low_hz && band.reference_hz > 0))
    throw InvalidInput("invalid frequency band");
  if(channels == 1)
    return RealVector::Constant(1, band.low_hz);
  return RealVector::LinSpaced(channels, band.low_hz, band.high_hz);
}

t_real curved_power_law(t_real nu, t_real nu0, t_real alpha, t_real beta) {
  auto const ratio = nu / nu0;
  return std::pow(ratio, -alpha + beta * std::log(ratio));
}

GroundTruthModel generate_ground_truth(ImageDims dims, t_int sources, t_int channels,
                                       SpectralBand const &band, std::uint64_t seed,
                                       GroundTruthOptions const &options) {
  if(sources <= 0)
    throw InvalidInput("number of sources must be positive");
  if(sources > 16)
    throw InvalidInput("number of sources must be at most 16");
  if(dims.n1 < 4 || dims.n2 < 4)
    throw InvalidInput("image must be at least 4 x 4");
  GroundTruthModel model;
  model.dims = dims;
  model.reference_hz = band.reference_hz;
  model.frequencies = channel_frequencies(band, channels);

  auto rng = make_rng(seed, kSources);
  bool const background = options.background && sources > 1;
  auto const compact = sources - (background ? 1 : 0);
  RealMatrix raw = RealMatrix::Zero(dims.size(), sources);
  for(t_int q = 0; q < compact; ++q) {
    // Brightest source at 1, the others spread log-uniformly down to 0.05.
    auto const peak = q == 0 ? 1.0 : std::pow(10.0, uniform(rng, std::log10(0.05), 0));
    raw.col(q) = compact_source(dims, rng, peak);
  }
  if(background) {
    RealVector image = RealVector::Zero(dims.size());
    add_gaussian(image, dims, dims.n1 / 2.0, dims.n2 / 2.0, dims.n1 / 4.0, dims.n2 / 4.0, 0,
                 kBackgroundPeak);
    raw.col(sources - 1) = image;
  }
  raw = (raw.array() < kMinBrightness).select(0, raw);

  // Disjoint supports: each pixel goes to its brightest compact source, the background fills the
  // remaining pixels.
  model.sources = RealMatrix::Zero(dims.size(), sources);
  for(t_int n = 0; n < dims.size(); ++n) {
    t_int best = -1;
    t_real value = 0;
    for(t_int q = 0; q < compact; ++q)
      if(raw(n, q) > value) {
        value = raw(n, q);
        best = q;
      }
    if(best >= 0)
      model.sources(n, best) = value;
    else if(background)
      model.sources(n, sources - 1) = raw(n, sources - 1);
  }

  auto spectra_rng = make_rng(seed, kSpectra);
  draw_spectra(model, spectra_rng, options);
  return model;
}

GroundTruthModel ground_truth_from_image(ImageDims dims, RealVector const &image,
                                         std::vector<t_int> const &labels, t_int channels,
                                         SpectralBand const &band, std::uint64_t seed,
                                         GroundTruthOptions const &options) {
  if(image.size() != dims.size() || static_cast<t_int>(labels.size()) != dims.size())
    throw InvalidInput("image and label map must match the image size");
  if((image.array() < 0).any())
    throw InvalidInput("source image must be nonnegative");
  auto const q_count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
  if(q_count <= 0 || *std::min_element(labels.begin(), labels.end()) < 0)
    throw InvalidInput("label map must hold labels 0..Q with Q >= 1");
  GroundTruthModel model;
  model.dims = dims;
  model.reference_hz = band.reference_hz;
  model.frequencies = channel_frequencies(band, channels);
  model.sources = RealMatrix::Zero(dims.size(), q_count);
  for(t_int n = 0; n < dims.size(); ++n)
    if(labels[n] > 0)
      model.sources(n, labels[n] - 1) = image[n];
  auto rng = make_rng(seed, kSpectra);
  draw_spectra(model, rng, options);
  return model;
}

t_real hole_rejection(t_real radius, t_real sigma_hole) {
  return std::exp(-sigma_hole * sigma_hole / (radius * radius + 1e-3));
}

t_int measurement_count(t_real sampling_rate, ImageDims dims) {
  if(!(sampling_rate > 0))
    throw InvalidInput("sampling rate must be positive");
  return std::max<t_int>(1, std::llround(sampling_rate * static_cast<t_real>(dims.size())));
}

WidebandCoverage generate_coverage(t_int points, t_int channels, SpectralBand const &band,
                                   std::uint64_t seed, CoverageParams const &params) {
  if(points < 1)
    throw InvalidInput("at least one uv-point is required");
  auto const pi = std::numbers::pi;
  auto const frequencies = channel_frequencies(band, channels);

  auto rng = make_rng(seed, kCoverage);
  std::normal_distribution<t_real> gaussian(0, params.sigma_uv);
  // Hermitian mode draws half the points and mirrors them; an odd count adds the origin.
  auto const drawn = params.hermitian ? points / 2 : points;
  RealVector u = RealVector::Zero(points), v = RealVector::Zero(points);
  for(t_int j = 0; j < drawn;) {
    auto const a = gaussian(rng);
    auto const b = gaussian(rng);
    if(a <= -pi || a >= pi || b <= -pi || b >= pi)
      continue;
    if(uniform(rng, 0, 1) < hole_rejection(std::hypot(a, b), params.sigma_hole))
      continue;
    u[j] = a;
    v[j] = b;
    ++j;
  }

  WidebandCoverage coverage;
  coverage.reference_hz = band.reference_hz;
  for(t_int l = 0; l < channels; ++l) {
    auto channel_rng = make_rng(seed, kChannels + l);
    auto const scale = frequencies[l] / band.reference_hz;
    auto place = [&](t_real x) {
      auto const scaled = scale * x;
      if(scaled >= -pi && scaled < pi)
        return scaled;
      auto const magnitude = uniform(channel_rng, params.redraw_band * pi, pi);
      return x >= 0 ? magnitude : -magnitude;
    };
    UVCoverage uv;
    uv.frequency_hz = frequencies[l];
    uv.u.resize(points);
    uv.v.resize(points);
    for(t_int j = 0; j < drawn; ++j) {
      uv.u[j] = place(u[j]);
      uv.v[j] = place(v[j]);
    }
    if(params.hermitian) {
      uv.u.segment(drawn, drawn) = -uv.u.head(drawn);
      uv.v.segment(drawn, drawn) = -uv.v.head(drawn);
      if(points % 2)
        uv.u[points - 1] = uv.v[points - 1] = 0;
    }
    coverage.channels.push_back(std::move(uv));
  }
  return coverage;
}

NoisyData add_noise(std::vector<ComplexVector> const &clean, t_real insnr_db, std::uint64_t seed) {
  NoisyData out;
  out.y = clean;
  if(std::isinf(insnr_db) && insnr_db > 0)
    return out;
  if(std::isnan(insnr_db))
    throw InvalidInput("InSNR must be a number");
  t_real energy = 0;
  t_int count = 0;
  for(auto const &y : clean) {
    energy += y.squaredNorm();
    count += y.size();
  }
  if(!(energy > 0))
    throw InvalidInput("cannot add noise at a target InSNR to zero data");
  out.sigma = std::sqrt(energy) * std::pow(10.0, -insnr_db / 20) / std::sqrt(static_cast<t_real>(count));
  auto rng = make_rng(seed, kNoise);
  std::normal_distribution<t_real> gaussian(0, out.sigma / std::sqrt(2.0));
  for(auto &y : out.y)
    for(t_int j = 0; j < y.size(); ++j) {
      auto const re = gaussian(rng);
      auto const im = gaussian(rng);
      y[j] += t_complex(re, im);
    }
  return out;
}

t_real epsilon_from_noise(t_real sigma, t_int block_size) {
  if(block_size <= 0)
    throw InvalidInput("block must hold at least one visibility");
  if(!(sigma > 0))
    throw InvalidInput("noise level must be strictly positive");
  auto const m = static_cast<t_real>(block_size);
  return sigma * std::sqrt((2 * m + 4 * std::sqrt(m)) / 2);
}

Simulation simulate(SimulationConfig const &config) {
  if(config.blocks < 1)
    throw InvalidInput("at least one block per channel is required");
  Simulation sim;
  sim.model = generate_ground_truth(config.dims, config.sources, config.channels, config.band,
                                    config.seed, config.truth);
  sim.truth = sim.model.cube();
  auto const points = measurement_count(config.sampling_rate, config.dims);
  if(config.blocks > points)
    throw InvalidInput("more blocks than visibilities per channel");
  sim.coverage = generate_coverage(points, config.channels, config.band, config.seed, config.coverage);

  std::vector<std::shared_ptr<MeasurementOperator const>> ops;
  for(t_int l = 0; l < config.channels; ++l) {
    ops.push_back(std::make_shared<MeasurementOperator const>(config.dims, sim.coverage.channels[l],
                                                              config.op));
    sim.clean.push_back(ops.back()->forward(sim.truth.col(l)));
  }
  sim.noisy = add_noise(sim.clean, config.insnr_db, config.seed);

  auto const ranges = partition_rows(points, config.blocks);
  for(t_int l = 0; l < config.channels; ++l) {
    ChannelData channel;
    channel.op = ops[l];
    channel.blocks = make_blocks(*ops[l], sim.noisy.y[l], ranges);
    for(auto &block : channel.blocks)
      block.epsilon = sim.noisy.sigma > 0 ? epsilon_from_noise(sim.noisy.sigma, block.size())
                                          : config.noiseless_epsilon * block.y.norm();
    sim.data.push_back(std::move(channel));
  }
  return sim;
}

std::vector<std::vector<t_real>> true_bounds(Simulation const &sim) {
  std::vector<std::vector<t_real>> bounds;
  for(auto const &channel : sim.data) {
    std::vector<t_real> row;
    for(auto const &block : channel.blocks)
      row.push_back(sim.noisy.sigma > 0 ? epsilon_from_noise(sim.noisy.sigma, block.size())
                                        : block.epsilon);
    bounds.push_back(std::move(row));
  }
  return bounds;
}

} // namespace hypersara
