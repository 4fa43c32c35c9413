#include "hypersara/config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace hypersara {

namespace {

using nlohmann::json;

constexpr t_real kInf = std::numeric_limits<t_real>::infinity();

struct Range {
  t_real lo = -kInf;
  t_real hi = kInf;
  bool lo_open = false;
  bool hi_open = false;

  [[nodiscard]] bool contains(t_real x) const {
    return (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
  }
  [[nodiscard]] std::string str() const {
    auto bound = [](t_real v) {
      if(std::isinf(v))
        return std::string(v > 0 ? "inf" : "-inf");
      std::ostringstream os;
      os << v;
      return os.str();
    };
    return (lo_open ? "(" : "[") + bound(lo) + ", " + bound(hi) + (hi_open ? ")" : "]");
  }
};

Range open(t_real lo, t_real hi) { return {lo, hi, true, true}; }
Range closed(t_real lo, t_real hi) { return {lo, hi, false, false}; }
Range left_open(t_real lo, t_real hi) { return {lo, hi, true, false}; }
Range positive() { return {0, kInf, true, true}; }
Range at_least(t_real lo) { return {lo, kInf, false, true}; }

// Reads keys one at a time, records the effective value and a documentation line per key.
class Reader {
public:
  explicit Reader(json const &doc) : doc_(doc) {
    if(!doc_.is_object())
      throw ConfigError("config: top level must be a JSON object");
  }

  t_real real(std::string const &key, t_real fallback, Range range, std::string const &help) {
    document(key, json(fallback), range.str(), help);
    auto const *value = find(key);
    if(!value)
      return store(key, fallback);
    if(!value->is_number())
      throw ConfigError("config key '" + key + "' must be a number in " + range.str());
    return store(key, checked(key, value->get<t_real>(), range));
  }

  t_int integer(std::string const &key, t_int fallback, Range range, std::string const &help) {
    document(key, json(fallback), range.str(), help);
    auto const *value = find(key);
    if(!value)
      return store(key, fallback);
    if(!value->is_number_integer())
      throw ConfigError("config key '" + key + "' must be an integer in " + range.str());
    return store(key, static_cast<t_int>(checked(key, value->get<t_real>(), range)));
  }

  bool boolean(std::string const &key, bool fallback, std::string const &help) {
    document(key, json(fallback), "true | false", help);
    auto const *value = find(key);
    if(!value)
      return store(key, fallback);
    if(!value->is_boolean())
      throw ConfigError("config key '" + key + "' must be true or false");
    return store(key, value->get<bool>());
  }

  std::string choice(std::string const &key, std::string const &fallback,
                     std::vector<std::string> const &allowed, std::string const &help) {
    auto const range = join(allowed);
    document(key, json(fallback), range, help);
    auto const *value = find(key);
    if(!value)
      return store(key, fallback);
    if(!value->is_string())
      throw ConfigError("config key '" + key + "' must be one of " + range);
    auto const text = value->get<std::string>();
    if(std::find(allowed.begin(), allowed.end(), text) == allowed.end())
      throw ConfigError("config key '" + key + "' = '" + text + "' must be one of " + range);
    return store(key, text);
  }

  std::string text(std::string const &key, std::string const &help) {
    document(key, json(""), "path", help);
    auto const *value = find(key);
    if(!value)
      return store(key, std::string());
    if(!value->is_string())
      throw ConfigError("config key '" + key + "' must be a string");
    return store(key, value->get<std::string>());
  }

  std::optional<t_real> optional_real(std::string const &key, Range range, std::string const &help) {
    document(key, json(nullptr), range.str(), help);
    auto const *value = find(key);
    if(!value || value->is_null()) {
      normalized_[key] = nullptr;
      return std::nullopt;
    }
    if(!value->is_number())
      throw ConfigError("config key '" + key + "' must be a number in " + range.str());
    return store(key, checked(key, value->get<t_real>(), range));
  }

  std::vector<t_real> real_list(std::string const &key, Range range, std::string const &help) {
    document(key, json::array(), "array of " + range.str(), help);
    std::vector<t_real> out;
    for(auto const &item : list(key)) {
      if(!item.is_number())
        throw ConfigError("config key '" + key + "' entries must be numbers in " + range.str());
      out.push_back(checked(key, item.get<t_real>(), range));
    }
    normalized_[key] = out;
    return out;
  }

  std::vector<std::uint64_t> seed_list(std::string const &key, std::string const &help) {
    document(key, json::array(), "array of integers >= 0", help);
    std::vector<std::uint64_t> out;
    for(auto const &item : list(key)) {
      if(!item.is_number_unsigned())
        throw ConfigError("config key '" + key + "' entries must be integers >= 0");
      out.push_back(item.get<std::uint64_t>());
    }
    normalized_[key] = out;
    return out;
  }

  std::vector<std::string> choice_list(std::string const &key,
                                       std::vector<std::string> const &allowed,
                                       std::string const &help) {
    auto const range = join(allowed);
    document(key, json::array(), "array of " + range, help);
    std::vector<std::string> out;
    for(auto const &item : list(key)) {
      if(!item.is_string() ||
         std::find(allowed.begin(), allowed.end(), item.get<std::string>()) == allowed.end())
        throw ConfigError("config key '" + key + "' entries must be one of " + range);
      out.push_back(item.get<std::string>());
    }
    normalized_[key] = out;
    return out;
  }

  void reject_unknown() const {
    for(auto const &[key, value] : doc_.items())
      if(!known_.count(key))
        throw ConfigError("config key '" + key + "' is not recognised");
  }

  json const &normalized() const { return normalized_; }
  std::string const &documentation() const { return docs_; }

private:
  json const *find(std::string const &key) const {
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  json list(std::string const &key) const {
    auto const *value = find(key);
    if(!value)
      return json::array();
    if(!value->is_array())
      throw ConfigError("config key '" + key + "' must be an array");
    return *value;
  }

  template <typename T> T store(std::string const &key, T value) {
    normalized_[key] = value;
    return value;
  }

  static t_real checked(std::string const &key, t_real value, Range range) {
    if(!range.contains(value)) {
      std::ostringstream os;
      os << "config key '" << key << "' = " << value << " is outside the admissible range "
         << range.str();
      throw ConfigError(os.str());
    }
    return value;
  }

  static std::string join(std::vector<std::string> const &items) {
    std::string out;
    for(auto const &item : items)
      out += (out.empty() ? "" : " | ") + item;
    return out;
  }

  void document(std::string const &key, json const &fallback, std::string const &range,
                std::string const &help) {
    known_.insert(key);
    docs_ += key + "\tdefault " + fallback.dump() + "\t" + range + "\t" + help + "\n";
  }

  json const &doc_;
  json normalized_ = json::object();
  std::set<std::string> known_;
  std::string docs_;
};

std::vector<std::string> const kAlgorithms{"hypersara", "lrjas", "lr", "jas", "sara"};

RunConfig read(Reader &r) {
  RunConfig c;
  auto &sim = c.simulation;
  auto &solver = c.solver;
  auto &ppd = solver.ppd;

  if(auto seed = r.optional_real("seed", closed(0, 9007199254740992.0), "random seed; required to simulate"))
    c.seed = static_cast<std::uint64_t>(*seed);
  sim.seed = c.seed.value_or(0);
  sim.dims.n1 = r.integer("n1", 64, closed(8, 4096), "image rows, power of two");
  sim.dims.n2 = r.integer("n2", 64, closed(8, 4096), "image columns, power of two");
  for(auto [key, n] : {std::pair{"n1", sim.dims.n1}, std::pair{"n2", sim.dims.n2}})
    if(!is_power_of_two(n))
      throw ConfigError(std::string("config key '") + key + "' must be a power of two in [8, 4096]");
  sim.channels = r.integer("channels", 8, closed(1, 1 << 16), "number of channels L");
  sim.sources = r.integer("sources", 3, closed(1, 16), "number of sources Q");
  sim.sampling_rate = r.real("sampling_rate", 0.3, left_open(0, 1), "visibilities per pixel per channel");
  sim.insnr_db = r.real("insnr_db", 40, closed(-100, 300), "input SNR of the simulated data in dB");
  if(r.boolean("noiseless", false, "skip the noise (insnr_db is ignored)"))
    sim.insnr_db = kNoiseless;
  sim.blocks = r.integer("blocks", 1, closed(1, 1 << 20), "data blocks per channel");
  sim.band.low_hz = r.real("band_low_hz", 1.4e9, positive(), "first channel frequency");
  sim.band.high_hz = r.real("band_high_hz", 2.78e9, positive(), "last channel frequency");
  sim.band.reference_hz = r.real("reference_hz", 1.4e9, positive(), "reference frequency of the coverage");
  if(sim.band.high_hz < sim.band.low_hz)
    throw ConfigError("config key 'band_high_hz' must be >= band_low_hz");
  sim.truth.emission_lines = r.boolean("emission_lines", true, "superimpose emission lines on the spectra");
  sim.truth.curvature = r.boolean("curvature", true, "draw a nonzero spectral curvature");
  sim.truth.background = r.boolean("background", true, "add a faint extended background source");
  sim.coverage.sigma_uv = r.real("sigma_uv", std::numbers::pi / 3, left_open(0, std::numbers::pi),
                                 "std of the Gaussian uv-density");
  sim.coverage.sigma_hole = r.real("sigma_hole", std::numbers::pi / 2, positive(), "width of the hole mask");
  sim.op.oversampling = r.integer("oversampling", 2, closed(1, 4), "Fourier grid oversampling per axis");
  sim.op.support = r.integer("kernel_support", 7, closed(1, 16), "interpolation kernel taps per axis");

  c.algorithm = parse_algorithm(r.choice("algorithm", "hypersara", kAlgorithms, "solver"));
  solver.reweights = r.integer("reweights", 5, at_least(1), "number of weighted solves K");
  solver.decay = r.real("decay", 0.5, open(0, 1), "per-reweight decay of the weight scales");
  c.noise_floors = r.boolean("noise_floors", true, "floor the weight scales at the noise level");
  ppd.mu = r.real("mu", 1, positive(), "weight of the sparsity prior");
  ppd.rel_tol = r.real("rel_tol", 5e-4, open(0, 1), "stop when ||X - X_prev|| / ||X|| is below");
  ppd.feas_tol = r.real("feas_tol", 1e-3, Range{0, 1, false, true}, "relative slack on the data bounds");
  ppd.max_iter = r.integer("max_iter", 5000, at_least(1), "iterations per weighted solve");
  solver.balance_target = r.real("balance_target", kBalanceTarget, at_least(0),
                                 "peak the dirty image is rescaled to for the step sizes, 0 disables");

  auto &adaptive = ppd.adaptive;
  adaptive.enabled = r.boolean("adaptive_eps", false, "adjust the data bounds during the solve");
  adaptive.lambda1 = r.real("lambda1", 1e-3, open(0, 1), "beta threshold enabling bound updates");
  adaptive.lambda2 = r.real("lambda2", 1e-2, open(0, 1), "relative residual gap triggering an update");
  adaptive.lambda3 = r.real("lambda3", 0.5, open(0, 1), "weight of the residual in a new bound");
  adaptive.min_gap = r.integer("min_gap", 100, at_least(0), "iterations between two updates of a block");
  c.nnls_init = r.boolean("nnls_init", false, "initialise the bounds from nonnegative least squares");
  c.nnls.tol = r.real("nnls_tol", 1e-5, open(0, 1), "relative objective change stopping NNLS");
  c.nnls.max_iter = r.integer("nnls_max_iter", 2000, at_least(1), "NNLS iterations");

  auto const psi = r.optional_real("norm_psi", positive(), "supplied sparsity operator norm");
  auto const phi = r.optional_real("norm_phi", positive(), "supplied preconditioned measurement norm");
  if(psi.has_value() != phi.has_value())
    throw ConfigError("config keys 'norm_psi' and 'norm_phi' must be given together");
  if(psi)
    c.norms = OperatorNorms{*psi, *phi};
  std::array<std::optional<t_real>, 4> steps{
      r.optional_real("tau", positive(), "primal step"),
      r.optional_real("kappa1", positive(), "low-rank dual step"),
      r.optional_real("kappa2", positive(), "sparsity dual step"),
      r.optional_real("kappa3", positive(), "data dual step")};
  auto const given = std::count_if(steps.begin(), steps.end(), [](auto const &s) { return s.has_value(); });
  if(given != 0 && given != 4)
    throw ConfigError("config keys 'tau', 'kappa1', 'kappa2', 'kappa3' must be given together");
  if(given == 4)
    c.manual_steps = std::array<t_real, 4>{*steps[0], *steps[1], *steps[2], *steps[3]};

  c.workers = r.integer("workers", 0, closed(0, 1024), "OpenMP threads, 0 for the default");
  c.progress_every = r.integer("progress_every", 10, at_least(0), "progress CSV period, 0 disables it");
  c.pgm_stretch = r.choice("pgm_stretch", "linear", {"linear", "log10"}, "PGM intensity stretch") == "log10"
                      ? Stretch::log10
                      : Stretch::linear;
  c.visibilities = r.text("visibilities", "WBVIS1 input; simulate when empty");
  c.truth = r.text("truth", "WBCUBE1 ground truth used for metrics");
  c.sweep_sampling_rates = r.real_list("sweep_sampling_rates", left_open(0, 1), "sweep grid of SR");
  c.sweep_seeds = r.seed_list("sweep_seeds", "sweep seeds; defaults to [seed]");
  for(auto const &name : r.choice_list("sweep_algorithms", kAlgorithms, "sweep algorithms; defaults to [algorithm]"))
    c.sweep_algorithms.push_back(parse_algorithm(name));
  r.reject_unknown();

  auto const priors = [&] {
    switch(c.algorithm) {
    case Algorithm::lr:
      return PriorSelection{true, false};
    case Algorithm::jas:
    case Algorithm::sara:
      return PriorSelection{false, true};
    default:
      return PriorSelection{true, true};
    }
  }();
  if(c.norms && c.manual_steps) {
    auto const &s = *c.manual_steps;
    try {
      solver.steps = make_step_sizes(s[0], s[1], s[2], s[3], *c.norms, priors);
    } catch(InvalidInput const &e) {
      throw ConfigError(std::string("config keys 'tau', 'kappa1', 'kappa2', 'kappa3': ") + e.what());
    }
  }
  c.normalized = r.normalized();
  return c;
}

} // namespace

Algorithm parse_algorithm(std::string const &name) {
  if(name == "hypersara")
    return Algorithm::hypersara;
  if(name == "lrjas")
    return Algorithm::lrjas;
  if(name == "lr")
    return Algorithm::lr;
  if(name == "jas")
    return Algorithm::jas;
  if(name == "sara")
    return Algorithm::sara;
  throw ConfigError("unknown algorithm '" + name + "'; expected hypersara | lrjas | lr | jas | sara");
}

std::string algorithm_name(Algorithm algorithm) {
  switch(algorithm) {
  case Algorithm::hypersara:
    return "hypersara";
  case Algorithm::lrjas:
    return "lrjas";
  case Algorithm::lr:
    return "lr";
  case Algorithm::jas:
    return "jas";
  case Algorithm::sara:
    return "sara";
  }
  return "unknown";
}

RunConfig validate_config(json const &document) {
  Reader r(document);
  return read(r);
}

RunConfig load_config(std::string const &path) {
  std::ifstream is(path);
  if(!is)
    throw ConfigError("cannot open config file '" + path + "'");
  json document;
  try {
    document = json::parse(is);
  } catch(json::parse_error const &e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return validate_config(document);
}

std::string config_documentation() {
  json const empty = json::object();
  Reader r(empty);
  read(r);
  return r.documentation();
}

} // namespace hypersara
