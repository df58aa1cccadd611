#include "icatopsis/ica.hpp"

#include "icatopsis/random.hpp"

#include <cmath>
#include <limits>

namespace icatopsis {

namespace {

constexpr int kFastIcaMaxIter = 1000;
constexpr double kFastIcaTolerance = 1e-8;
constexpr int kInfomaxMaxEpochs = 2000;
constexpr double kInfomaxTolerance = 1e-7;
constexpr double kInfomaxBlowUp = 1e6;
constexpr double kRankTolerance = 1e-12;
constexpr int kMaxSaddleChecks = 10;
// E[log cosh(v)] for v ~ N(0, 1)
constexpr double kGaussianLogCosh = 0.3745672074914373;

/// (W W^T)^{-1/2} W
Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w * w.transpose());
  const Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose() * w;
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

double contrast(const Eigen::RowVectorXd& y) {
  const double d = y.unaryExpr(&log_cosh).mean() - kGaussianLogCosh;
  return d * d;
}

// Symmetric FastICA on two or more components can stop on a saddle point that
// sits halfway (45 degrees) between two true components. For every pair,
// rotating by 45 degrees either raises the summed contrast, in which case the
// pair was a saddle and is replaced, or it does not.
bool escape_saddles(Eigen::MatrixXd& w, const Eigen::MatrixXd& z) {
  bool rotated = false;
  Eigen::MatrixXd y = w * z;
  const double h = std::sqrt(0.5);
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < w.rows(); ++j) {
      const Eigen::RowVectorXd plus = h * (y.row(i) + y.row(j));
      const Eigen::RowVectorXd minus = h * (y.row(i) - y.row(j));
      if (contrast(plus) + contrast(minus) > contrast(y.row(i)) + contrast(y.row(j))) {
        const Eigen::RowVectorXd wi = w.row(i);
        w.row(i) = h * (wi + w.row(j));
        w.row(j) = h * (wi - w.row(j));
        y.row(i) = plus;
        y.row(j) = minus;
        rotated = true;
      }
    }
  }
  return rotated;
}

void require_sample_floor(const MixedData& data) {
  if (data.count() < kMinSamplesPerChannel * data.channels()) {
    throw InsufficientSamples("ICA needs at least " + std::to_string(kMinSamplesPerChannel) +
                              " samples per channel; got " + std::to_string(data.count()) + " for " +
                              std::to_string(data.channels()) + " channels");
  }
}

Rng attempt_rng(std::uint64_t seed, int attempt) {
  return Rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
}

SeparationResult assemble(const MixedData& data, const WhiteningResult& white, const Eigen::MatrixXd& rotation,
                          int iterations, bool converged, IcaAlgorithm algorithm) {
  SeparationResult r;
  r.separating = rotation * white.whitening_matrix;
  r.estimated_mixing = estimated_mixing(r.separating);
  const Eigen::MatrixXd centered = data.samples().colwise() - white.mean;
  r.sources = r.separating * centered;
  r.mean = white.mean;
  r.iterations = iterations;
  r.converged = converged;
  r.algorithm = algorithm;
  return r;
}

}  // namespace

MixedData::MixedData(Eigen::MatrixXd samples) : samples_(std::move(samples)) {
  if (samples_.rows() < 2) throw InvalidInput("MixedData needs at least 2 channels");
  if (samples_.cols() <= samples_.rows()) throw InvalidInput("MixedData needs more samples than channels");
  if (!samples_.allFinite()) throw InvalidInput("MixedData contains NaN or infinite entries");
}

std::string_view to_string(IcaAlgorithm algorithm) {
  switch (algorithm) {
    case IcaAlgorithm::FastICA: return "fastica";
    case IcaAlgorithm::InfomaxExtended: return "infomax";
    case IcaAlgorithm::InfomaxLogistic: return "infomax-logistic";
  }
  return "unknown";
}

IcaAlgorithm parse_algorithm(std::string_view name) {
  if (name == "fastica") return IcaAlgorithm::FastICA;
  if (name == "infomax" || name == "infomax-extended") return IcaAlgorithm::InfomaxExtended;
  if (name == "infomax-logistic") return IcaAlgorithm::InfomaxLogistic;
  throw InvalidInput("unknown ICA algorithm '" + std::string(name) + "'");
}

WhiteningResult center_whiten(const MixedData& data) {
  const Eigen::MatrixXd& x = data.samples();
  WhiteningResult out;
  out.mean = x.rowwise().mean();
  const Eigen::MatrixXd centered = x.colwise() - out.mean;
  Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(x.cols() - 1);
  cov = (cov + cov.transpose()) * 0.5;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw RankDeficient("covariance eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending
  if (!(lambda(0) > kRankTolerance * lambda(lambda.size() - 1))) {
    throw RankDeficient("RankDeficient: observation covariance is singular (eigenvalue ratio " +
                        std::to_string(lambda(0) / lambda(lambda.size() - 1)) + ")");
  }
  out.whitening_matrix = lambda.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  out.whitened = out.whitening_matrix * centered;
  return out;
}

SeparationResult fastica(const MixedData& data, const IcaOptions& options) {
  require_sample_floor(data);
  const WhiteningResult white = center_whiten(data);
  const Eigen::MatrixXd& z = white.whitened;
  const Eigen::Index n = z.rows();
  const double k = static_cast<double>(z.cols());
  const int max_iter = options.max_iter.value_or(kFastIcaMaxIter);
  const double tol = options.tolerance.value_or(kFastIcaTolerance);

  Eigen::MatrixXd best;
  double best_gap = std::numeric_limits<double>::infinity();
  int best_iterations = 0;

  for (int attempt = 0; attempt <= options.restarts; ++attempt) {
    Rng rng = attempt_rng(options.seed, attempt);
    Eigen::MatrixXd w = random_orthogonal(n, rng);
    double gap = std::numeric_limits<double>::infinity();
    int it = 0;
    int saddle_checks = 0;
    while (it < max_iter) {
      ++it;
      const Eigen::MatrixXd g = (w * z).array().tanh().matrix();
      const Eigen::VectorXd g_prime = (1.0 - g.array().square()).rowwise().mean().matrix();
      Eigen::MatrixXd next = g * z.transpose() / k - g_prime.asDiagonal() * w;
      next = symmetric_decorrelation(next);
      gap = 1.0 - (next * w.transpose()).diagonal().cwiseAbs().minCoeff();
      w = std::move(next);
      if (gap < tol) {
        if (saddle_checks++ < kMaxSaddleChecks && escape_saddles(w, z)) continue;
        break;
      }
    }
    if (gap < best_gap) {
      best_gap = gap;
      best = w;
      best_iterations = it;
    }
    if (gap < tol) return assemble(data, white, w, it, true, IcaAlgorithm::FastICA);
  }
  throw NotConverged(assemble(data, white, best, best_iterations, false, IcaAlgorithm::FastICA));
}

SeparationResult infomax(const MixedData& data, const IcaOptions& options, IcaAlgorithm variant) {
  if (variant == IcaAlgorithm::FastICA) throw InvalidInput("infomax: FastICA is not an Infomax variant");
  require_sample_floor(data);
  const WhiteningResult white = center_whiten(data);
  const Eigen::MatrixXd& z = white.whitened;
  const Eigen::Index n = z.rows();
  const double k = static_cast<double>(z.cols());
  const int max_epochs = options.max_iter.value_or(kInfomaxMaxEpochs);
  const double tol = options.tolerance.value_or(kInfomaxTolerance);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);

  if (!(options.learning_rate > 0.0)) {
    Rng rng = attempt_rng(options.seed, 0);
    throw NotConverged(assemble(data, white, random_orthogonal(n, rng), 0, false, variant));
  }

  double rate = options.learning_rate;
  Eigen::MatrixXd best;
  double best_step = std::numeric_limits<double>::infinity();
  int best_iterations = 0;

  for (int attempt = 0; attempt <= options.restarts; ++attempt) {
    Rng rng = attempt_rng(options.seed, attempt);
    Eigen::MatrixXd w = random_orthogonal(n, rng);
    double step = std::numeric_limits<double>::infinity();
    bool diverged = false;
    int epoch = 0;
    while (epoch < max_epochs) {
      ++epoch;
      const Eigen::MatrixXd y = w * z;
      Eigen::MatrixXd grad;
      if (variant == IcaAlgorithm::InfomaxExtended) {
        const Eigen::ArrayXXd t = y.array().tanh();
        const Eigen::ArrayXd sech2 = (1.0 - t.square()).rowwise().mean();
        const Eigen::ArrayXd second = y.array().square().rowwise().mean();
        const Eigen::ArrayXd corr = (t * y.array()).rowwise().mean();
        const Eigen::VectorXd kurt_sign =
            (sech2 * second - corr).unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; }).matrix();
        grad = identity - (kurt_sign.asDiagonal() * t.matrix()) * y.transpose() / k - y * y.transpose() / k;
      } else {
        const Eigen::MatrixXd t = (0.5 * y.array()).tanh().matrix();
        grad = identity - t * y.transpose() / k;
      }
      const Eigen::MatrixXd delta = rate * grad * w;
      w += delta;
      step = delta.norm();
      if (!w.allFinite() || w.norm() > kInfomaxBlowUp) {
        diverged = true;
        break;
      }
      if (step < tol) break;
    }
    if (diverged) {
      rate *= options.anneal;
      continue;
    }
    const Eigen::MatrixXd rotation = symmetric_decorrelation(w);
    if (step < tol) return assemble(data, white, rotation, epoch, true, variant);
    if (step < best_step) {
      best_step = step;
      best = rotation;
      best_iterations = epoch;
    }
  }
  if (best.size() == 0) {
    Rng rng = attempt_rng(options.seed, 0);
    best = random_orthogonal(n, rng);
  }
  throw NotConverged(assemble(data, white, best, best_iterations, false, variant));
}

SeparationResult separate(const MixedData& data, IcaAlgorithm algorithm, const IcaOptions& options) {
  if (algorithm == IcaAlgorithm::FastICA) return fastica(data, options);
  return infomax(data, options, algorithm);
}

Eigen::MatrixXd estimated_mixing(const Eigen::MatrixXd& separating) {
  if (separating.rows() != separating.cols() || separating.rows() == 0) {
    throw DimensionMismatch("estimated_mixing: separating matrix must be square");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(separating);
  const double rcond = lu.rcond();
  if (!separating.allFinite() || !(rcond > 1e-14)) {
    throw SingularMatrix("estimated_mixing: separating matrix is singular");
  }
  return lu.inverse();
}

}  // namespace icatopsis
