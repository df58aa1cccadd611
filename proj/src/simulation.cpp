#include "icatopsis/simulation.hpp"

#include "icatopsis/errors.hpp"
#include "icatopsis/random.hpp"
#include "icatopsis/rank_metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace icatopsis {

namespace {

// Random streams of one realization. Every SNR of the sweep sees the same
// latents, unit noise and ICA starts, so the SNR curves are paired samples.
enum class Stream : std::uint64_t { Latents = 1, Noise = 2, Ica = 3 };

std::uint64_t stream_seed(std::uint64_t base, std::size_t realization, Stream stream) {
  return derive_seed(base, {static_cast<std::uint64_t>(realization), static_cast<std::uint64_t>(stream)});
}

// Expected tau of a ranking carrying no information, charged when a method
// produced nothing to score.
constexpr double kUnscoredTau = 0.5;

double sample_variance(const Eigen::RowVectorXd& row) {
  const double mean = row.mean();
  return (row.array() - mean).square().sum() / static_cast<double>(row.size() - 1);
}

}  // namespace

MixingSpec::MixingSpec(Eigen::MatrixXd matrix, std::string description)
    : matrix_(std::move(matrix)), description_(std::move(description)) {
  const Eigen::Index n = matrix_.rows();
  if (n < 1 || matrix_.cols() != n) throw InvalidInput("mixing matrix must be square");
  if (!matrix_.allFinite()) throw InvalidInput("mixing matrix has non-finite entries");
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = matrix_(i, i);
    if (!(d > 0.0)) throw InvalidInput("mixing matrix diagonal must be positive (row " + std::to_string(i + 1) + ")");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i && !(std::abs(matrix_(i, j)) < d)) {
        throw InvalidInput("mixing matrix row " + std::to_string(i + 1) + " is not diagonally dominant");
      }
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(matrix_);
  if (!lu.isInvertible()) throw InvalidInput("mixing matrix is singular");
}

MixingSpec MixingSpec::reference() {
  Eigen::MatrixXd a(2, 2);
  a << 1.00, -0.15, 0.30, 1.00;
  return MixingSpec(a, "reference 2x2 mixing");
}

NoiseSpec::NoiseSpec(double snr_db) : snr_db_(snr_db) {
  if (!std::isfinite(snr_db) || !(snr_db > 0.0) || snr_db > 50.0) {
    throw InvalidInput("SNR must lie in (0, 50] dB, got " + std::to_string(snr_db));
  }
}

double NoiseSpec::noise_to_signal() const noexcept { return std::pow(10.0, -snr_db_ / 10.0); }

void ExperimentConfig::validate() const {
  if (alternatives < 2) throw InvalidInput("experiment needs at least 2 alternatives");
  if (realizations < 1) throw InvalidInput("experiment needs at least 1 realization");
  if (weights.size() != static_cast<std::size_t>(mixing.latent_count())) {
    throw InvalidInput("weight count does not match the mixing dimension");
  }
  if (snr_grid_db.empty()) throw InvalidInput("SNR grid is empty");
  for (double snr : snr_grid_db) NoiseSpec{snr};
  if (methods.empty()) throw InvalidInput("no methods selected");
}

const CellSummary& ExperimentResult::at(Method method, double snr_db) const {
  for (const CellSummary& c : cells)
    if (c.method == method && c.snr_db == snr_db) return c;
  throw InvalidInput("no cell for method " + std::string(method_name(method)) + " at " + std::to_string(snr_db) + " dB");
}

Eigen::MatrixXd generate_latents(std::size_t alternatives, std::size_t latents, std::uint64_t seed) {
  if (alternatives < 1 || latents < 1) throw InvalidInput("generate_latents: counts must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::MatrixXd l(static_cast<Eigen::Index>(latents), static_cast<Eigen::Index>(alternatives));
  for (Eigen::Index k = 0; k < l.cols(); ++k)
    for (Eigen::Index n = 0; n < l.rows(); ++n) l(n, k) = uniform(rng);
  return l;
}

Eigen::MatrixXd mix(const Eigen::MatrixXd& latents, const MixingSpec& spec) {
  if (latents.rows() != spec.latent_count()) throw DimensionMismatch("mix: latent count does not match mixing matrix");
  return spec.matrix() * latents;
}

Eigen::MatrixXd unit_noise(Eigen::Index channels, Eigen::Index samples, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(channels, samples);
  for (Eigen::Index k = 0; k < samples; ++k)
    for (Eigen::Index n = 0; n < channels; ++n) g(n, k) = normal(rng);
  return g;
}

Eigen::MatrixXd add_noise(const Eigen::MatrixXd& signal, const NoiseSpec& noise, std::uint64_t seed) {
  if (signal.cols() < 2) throw InvalidInput("add_noise: need at least 2 samples per channel");
  Eigen::MatrixXd out = unit_noise(signal.rows(), signal.cols(), seed);
  for (Eigen::Index n = 0; n < signal.rows(); ++n) {
    const double power = sample_variance(signal.row(n));
    if (!(power > 0.0)) throw InvalidInput("add_noise: channel " + std::to_string(n + 1) + " has zero variance");
    out.row(n) = signal.row(n) + std::sqrt(power * noise.noise_to_signal()) * out.row(n);
  }
  return out;
}

RealizationRecord run_realization(const ExperimentConfig& config, const std::optional<NoiseSpec>& noise,
                                  std::size_t realization_index) {
  const auto n = static_cast<std::size_t>(config.mixing.latent_count());
  const Eigen::MatrixXd latents =
      generate_latents(config.alternatives, n, stream_seed(config.seed, realization_index, Stream::Latents));
  const Ranking truth = topsis_euclidean(DecisionMatrix(latents.transpose()), config.weights);

  Eigen::MatrixXd observed = mix(latents, config.mixing);
  if (noise) observed = add_noise(observed, *noise, stream_seed(config.seed, realization_index, Stream::Noise));
  const DecisionMatrix decision(observed.transpose());

  IcaOptions ica = config.ica;
  ica.seed = stream_seed(config.seed, realization_index, Stream::Ica);

  RealizationRecord record;
  record.ground_truth_tau = kendall_tau(truth, truth);
  for (Method method : config.methods) {
    MethodOutcome outcome;
    try {
      const MethodRanking ranked = rank_with(method, decision, config.weights, ica);
      outcome.tau = kendall_tau(truth, ranked.ranking);
      if (!ranked.converged) {
        outcome.failed = true;
        outcome.failure = "NotConverged";
      }
    } catch (const Error& e) {
      outcome.tau = kUnscoredTau;
      outcome.failed = true;
      outcome.failure = e.what();
    }
    record.outcomes[static_cast<std::size_t>(method)] = std::move(outcome);
  }
  return record;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t grid = config.snr_grid_db.size();
  const std::size_t total = config.realizations;
  std::vector<NoiseSpec> noises;
  for (double snr : config.snr_grid_db) noises.emplace_back(snr);

  // records[s * total + r]
  std::vector<RealizationRecord> records(grid * total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t r = next++; r < total; r = next++) {
      try {
        for (std::size_t s = 0; s < grid; ++s) records[s * total + r] = run_realization(config, noises[s], r);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  ExperimentResult result;
  for (Method method : config.methods) {
    for (std::size_t s = 0; s < grid; ++s) {
      double sum = 0.0;
      std::size_t failures = 0;
      for (std::size_t r = 0; r < total; ++r) {
        const MethodOutcome& o = *records[s * total + r][method];
        sum += o.tau;
        failures += o.failed ? 1 : 0;
      }
      const double mean = sum / static_cast<double>(total);
      double squares = 0.0;
      for (std::size_t r = 0; r < total; ++r) {
        const double d = records[s * total + r][method]->tau - mean;
        squares += d * d;
      }
      const double sd = total > 1 ? std::sqrt(squares / static_cast<double>(total - 1)) : 0.0;
      result.cells.push_back({method, config.snr_grid_db[s], mean, sd, total, failures});
    }
  }
  result.records = std::move(records);
  return result;
}

}  // namespace icatopsis
