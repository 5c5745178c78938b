// Command-line front end: denoising, simulation benchmarks, risk curves and
// noise-moment reports. Every run echoes its resolved configuration to
// stderr; all randomness derives from --seed. Exit codes: 0 ok, 2 bad
// flags, 3 I/O failure, 4 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hypd/bench.hpp"
#include "hypd/image.hpp"
#include "hypd/noise_stats.hpp"
#include "hypd/risk.hpp"
#include "hypd/shrinkage.hpp"

namespace {

constexpr int kExitFlags = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

// Removes a created output file unless the run commits it.
class OutputGuard {
public:
  explicit OutputGuard(std::string path) : path_(std::move(path)) {}
  ~OutputGuard() {
    if (!committed_ && !path_.empty() && path_ != "-") {
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  void commit() { committed_ = true; }

private:
  std::string path_;
  bool committed_ = false;
};

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("empty list: " + s);
  return out;
}

// builtin:NAME?key=val&key=val — parameterized synthetic images.
hypd::Image make_builtin(const std::string& spec) {
  const std::string body = spec.substr(std::string("builtin:").size());
  std::string name = body;
  std::map<std::string, double> kv;
  if (const auto q = body.find('?'); q != std::string::npos) {
    name = body.substr(0, q);
    std::stringstream ss(body.substr(q + 1));
    std::string pair;
    while (std::getline(ss, pair, '&')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("malformed builtin parameter: " + pair);
      kv[pair.substr(0, eq)] = std::stod(pair.substr(eq + 1));
    }
  }
  auto take = [&kv](const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  const int n = int(take("n", 256.0));
  hypd::Image img(8);
  if (name == "oscillation") {
    img = hypd::make_oscillation(take("a", 1.0), take("f0", 0.15),
                                 take("phi0", M_PI / 6.0), n);
  } else if (name == "ridge") {
    img = hypd::make_edge(take("theta", M_PI / 3.0), take("c", 0.5 * n),
                          take("amp", 1.0), take("width", 1.0), n);
  } else if (name == "blobs") {
    img = hypd::make_blobs(n);
  } else if (name == "composite") {
    img = hypd::make_composite(n);
  } else {
    throw std::invalid_argument("unknown builtin image: " + name);
  }
  if (!kv.empty())
    throw std::invalid_argument("unknown builtin parameter: " + kv.begin()->first);
  return img;
}

hypd::Image load_source(const std::string& path) {
  if (path.rfind("builtin:", 0) == 0) return make_builtin(path);
  return hypd::load_image(path);
}

struct DenoiseArgs {
  std::string input, output;
  std::string method = "h";
  std::string sigma = "auto";
  std::string wavelet = "la8";
  int levels = 3;
  int spins = 8;
  std::string lambda = "universal";
  std::uint64_t seed = 0;
  int threads = 0;
};

int run_denoise(const DenoiseArgs& a) {
  hypd::Image y(8);
  try {
    y = load_source(a.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  hypd::DenoiseResult res;
  try {
    hypd::DenoiseConfig cfg;
    cfg.method = hypd::method_from_string(a.method);
    cfg.wavelet = a.wavelet;
    cfg.levels = a.levels;
    cfg.spins = a.spins;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    if (a.sigma != "auto") cfg.sigma = std::stod(a.sigma);
    if (a.lambda != "universal") cfg.lambda2 = std::stod(a.lambda);
    std::cerr << "config: cmd=denoise input=" << a.input << " output=" << a.output
              << " method=" << a.method << " sigma=" << a.sigma
              << " wavelet=" << a.wavelet << " levels=" << a.levels
              << " spins=" << a.spins << " lambda=" << a.lambda
              << " seed=" << a.seed << " threads=" << a.threads << "\n";
    res = hypd::denoise_full(y, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }

  OutputGuard guard(a.output);
  try {
    hypd::save_image(res.output, a.output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  guard.commit();
  std::cout << "sigma_used=" << res.sigma_used
            << " lambda2_used=" << res.lambda2_used
            << " kept_fraction=" << res.kept_fraction << "\n";
  return 0;
}

struct SimulateArgs {
  std::string image;
  std::string output;
  std::string snr = "2,4,8";
  std::string methods = "c,r,h";
  int reps = 20;
  std::uint64_t seed = 1;
  std::string wavelet = "la8";
  int levels = 3;
  int spins = 8;
  std::string lambda = "universal";
  double peak = 255.0;
  int threads = 0;
};

int run_simulate(const SimulateArgs& a) {
  hypd::ExperimentConfig cfg;
  try {
    cfg.truth = load_source(a.image);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  hypd::ResultTable table;
  try {
    cfg.image_name = a.image;
    cfg.snr_list = parse_double_list(a.snr);
    std::stringstream ss(a.methods);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) cfg.methods.push_back(hypd::method_from_string(tok));
    cfg.reps = a.reps;
    cfg.seed = a.seed;
    cfg.wavelet = a.wavelet;
    cfg.levels = a.levels;
    cfg.spins = a.spins;
    cfg.peak = a.peak;
    cfg.threads = a.threads;
    if (a.lambda != "universal") cfg.lambda2 = std::stod(a.lambda);
    std::cerr << "config: cmd=simulate image=" << a.image << " output=" << a.output
              << " snr=" << a.snr << " methods=" << a.methods << " reps=" << a.reps
              << " seed=" << a.seed << " wavelet=" << a.wavelet
              << " levels=" << a.levels << " spins=" << a.spins
              << " lambda=" << a.lambda << " peak=" << a.peak
              << " threads=" << a.threads << "\n";
    table = hypd::run_experiment(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }

  OutputGuard guard(a.output);
  try {
    std::ofstream f(a.output);
    if (!f) throw std::runtime_error("cannot open for writing: " + a.output);
    hypd::write_result_csv(table, f);
    if (!f) throw std::runtime_error("short write: " + a.output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  guard.commit();
  return 0;
}

struct RiskArgs {
  std::string method = "h";
  std::string profile = "custom";
  std::string theta;
  std::string lambda = "universal:65536";
  std::string grid;
  std::size_t mc = 0;
  std::uint64_t seed = 1;
  std::string output;
};

int run_risk(const RiskArgs& a) {
  std::ostringstream body;
  try {
    const hypd::RiskMethod method = hypd::risk_method_from_string(a.method);
    double lambda;
    if (a.lambda.rfind("universal:", 0) == 0) {
      const std::size_t k = std::stoull(a.lambda.substr(10));
      const hypd::Method shrink_method =
          method == hypd::RiskMethod::hypercomplex ? hypd::Method::hypercomplex
                                                   : hypd::Method::classic;
      lambda = std::sqrt(hypd::universal_threshold(shrink_method, k));
    } else {
      lambda = std::stod(a.lambda);
    }
    std::cerr << "config: cmd=risk method=" << a.method << " profile=" << a.profile
              << " theta=" << (a.theta.empty() ? "-" : a.theta)
              << " lambda=" << lambda << " grid=" << (a.grid.empty() ? "-" : a.grid)
              << " mc=" << a.mc << " seed=" << a.seed << " output=" << a.output
              << "\n";

    hypd::write_risk_csv_header(body);
    auto emit_point = [&](double theta_abs, const std::vector<double>& theta) {
      hypd::RiskSpec spec;
      spec.method = method;
      spec.theta = theta;
      spec.lambda = lambda;
      const hypd::RiskEval det = hypd::risk(spec);
      hypd::write_risk_csv_row(body, a.method, a.profile, theta_abs, lambda,
                               det.value, "cubature", det.error);
      if (theta_abs == 0.0 && method != hypd::RiskMethod::riesz_split)
        hypd::write_risk_csv_row(body, a.method, a.profile, theta_abs, lambda,
                                 hypd::risk_zero(method, lambda), "closed", 0.0);
      if (a.mc > 0) {
        const hypd::RiskMc mc = hypd::risk_mc(spec, a.mc, a.seed);
        hypd::write_risk_csv_row(body, a.method, a.profile, theta_abs, lambda,
                                 mc.estimate, "mc", mc.stderr_est);
      }
    };

    if (a.profile == "custom") {
      if (a.theta.empty())
        throw std::invalid_argument("custom profile needs --theta");
      std::vector<double> theta = parse_double_list(a.theta);
      const int dim = hypd::risk_method_dim(method);
      if (int(theta.size()) == 1 && dim > 1) theta.assign(dim, theta[0]);
      if (int(theta.size()) != dim)
        throw std::invalid_argument("theta length does not match method");
      double norm = 0.0;
      for (double t : theta) norm += t * t;
      emit_point(std::sqrt(norm), theta);
    } else {
      const hypd::RiskProfile profile = hypd::risk_profile_from_string(a.profile);
      std::vector<double> grid;
      if (a.grid.empty()) {
        for (double t = 0.0; t <= 8.0 + 1e-12; t += 0.25) grid.push_back(t);
      } else {
        const std::vector<double> parts = parse_double_list(a.grid);
        if (parts.size() != 3 || parts[1] <= 0.0 || parts[2] < parts[0])
          throw std::invalid_argument("grid must be start,step,stop");
        for (double t = parts[0]; t <= parts[2] + 1e-12; t += parts[1])
          grid.push_back(t);
      }
      for (double t : grid)
        emit_point(t, hypd::risk_profile_theta(profile, method, t));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }

  OutputGuard guard(a.output);
  try {
    if (a.output == "-") {
      std::cout << body.str();
    } else {
      std::ofstream f(a.output);
      if (!f) throw std::runtime_error("cannot open for writing: " + a.output);
      f << body.str();
      if (!f) throw std::runtime_error("short write: " + a.output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  guard.commit();
  return 0;
}

struct NoiseStatsArgs {
  std::string family = "riesz";
  int n = 256;
  int reps = 50;
  std::uint64_t seed = 1;
  int levels = 3;
  std::string wavelet = "la8";
  std::string output;
};

int run_noise_stats(const NoiseStatsArgs& a) {
  std::ostringstream body;
  try {
    const hypd::Family family = a.family == "riesz"
                                    ? hypd::Family::riesz
                                    : hypd::Family::hypercomplex;
    std::cerr << "config: cmd=noise-stats family=" << a.family << " n=" << a.n
              << " reps=" << a.reps << " seed=" << a.seed << " levels=" << a.levels
              << " wavelet=" << a.wavelet << " output=" << a.output << "\n";
    const hypd::MomentReport report = hypd::empirical_noise_moments(
        family, a.n, a.reps, a.seed, a.levels, a.wavelet);
    hypd::write_moment_csv(report, body);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }

  OutputGuard guard(a.output);
  try {
    if (a.output == "-") {
      std::cout << body.str();
    } else {
      std::ofstream f(a.output);
      if (!f) throw std::runtime_error("cannot open for writing: " + a.output);
      f << body.str();
      if (!f) throw std::runtime_error("short write: " + a.output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  guard.commit();
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperanalytic wavelet denoising toolkit"};
  app.require_subcommand(1);

  DenoiseArgs da;
  CLI::App* den = app.add_subcommand("denoise", "denoise a single image");
  den->add_option("--input", da.input, "input image (.pgm, raw, or builtin:NAME)")
      ->required();
  den->add_option("--output", da.output, "output image path")->required();
  den->add_option("--method", da.method, "threshold rule: c, a, r or h")
      ->check(CLI::IsMember({"c", "a", "r", "h"}));
  den->add_option("--sigma", da.sigma, "noise sd, or 'auto' for a MAD estimate");
  den->add_option("--wavelet", da.wavelet, "filter bank")
      ->check(CLI::IsMember({"la8", "haar", "d4"}));
  den->add_option("--levels", da.levels, "decomposition depth")
      ->check(CLI::PositiveNumber);
  den->add_option("--spins", da.spins, "cycle-spin grid side (spins^2 shifts)")
      ->check(CLI::PositiveNumber);
  den->add_option("--lambda", da.lambda, "squared threshold, or 'universal'");
  den->add_option("--seed", da.seed, "random seed");
  den->add_option("--threads", da.threads, "thread cap (0 = all cores)");

  SimulateArgs sa;
  CLI::App* sim = app.add_subcommand("simulate", "run a denoising benchmark");
  sim->add_option("--image", sa.image, "truth image path or builtin:NAME")->required();
  sim->add_option("--output", sa.output, "CSV output path")->required();
  sim->add_option("--snr", sa.snr, "comma-separated target SNRs");
  sim->add_option("--methods", sa.methods, "comma-separated methods from c,a,r,h");
  sim->add_option("--reps", sa.reps, "replications")->check(CLI::PositiveNumber);
  sim->add_option("--seed", sa.seed, "random seed");
  sim->add_option("--wavelet", sa.wavelet, "filter bank")
      ->check(CLI::IsMember({"la8", "haar", "d4"}));
  sim->add_option("--levels", sa.levels, "decomposition depth")
      ->check(CLI::PositiveNumber);
  sim->add_option("--spins", sa.spins, "cycle-spin grid side")
      ->check(CLI::PositiveNumber);
  sim->add_option("--lambda", sa.lambda, "squared threshold, or 'universal'");
  sim->add_option("--peak", sa.peak, "PSNR peak value")->check(CLI::PositiveNumber);
  sim->add_option("--threads", sa.threads, "thread cap (0 = all cores)");

  RiskArgs ra;
  CLI::App* rk = app.add_subcommand("risk", "evaluate coefficient risk");
  rk->add_option("--method", ra.method, "risk rule: c, a, r1, r2 or h")
      ->check(CLI::IsMember({"c", "a", "r1", "r2", "h"}));
  rk->add_option("--profile", ra.profile, "fig2a, fig2b, fig2c, fig2d or custom")
      ->check(CLI::IsMember({"fig2a", "fig2b", "fig2c", "fig2d", "custom"}));
  rk->add_option("--theta", ra.theta, "mean vector for the custom profile");
  rk->add_option("--lambda", ra.lambda, "threshold (sigma units), or universal:K");
  rk->add_option("--grid", ra.grid, "|theta| grid as start,step,stop");
  rk->add_option("--mc", ra.mc, "Monte Carlo samples per point (0 = none)");
  rk->add_option("--seed", ra.seed, "random seed");
  rk->add_option("--output", ra.output, "CSV output path, or - for stdout")
      ->required();

  NoiseStatsArgs na;
  CLI::App* ns = app.add_subcommand("noise-stats", "empirical noise moments");
  ns->add_option("--family", na.family, "riesz or hct")
      ->check(CLI::IsMember({"riesz", "hct"}));
  ns->add_option("--n", na.n, "image side")->check(CLI::PositiveNumber);
  ns->add_option("--reps", na.reps, "replications")->check(CLI::PositiveNumber);
  ns->add_option("--seed", na.seed, "random seed");
  ns->add_option("--levels", na.levels, "decomposition depth")
      ->check(CLI::PositiveNumber);
  ns->add_option("--wavelet", na.wavelet, "filter bank")
      ->check(CLI::IsMember({"la8", "haar", "d4"}));
  ns->add_option("--output", na.output, "CSV output path, or - for stdout")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e); // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFlags;
  }

  if (den->parsed()) return run_denoise(da);
  if (sim->parsed()) return run_simulate(sa);
  if (rk->parsed()) return run_risk(ra);
  return run_noise_stats(na);
}
