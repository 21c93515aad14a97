#include "spdcsim/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "spdcsim/errors.hpp"

namespace spdcsim {

namespace {

constexpr double kMinProbability = 1e-300;
constexpr double kMonotoneSlack = 1e-12;

double trace_product(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) {
  return rho.cwiseProduct(op.transpose()).sum().real();
}

DensityMatrix normalized_hermitian(Eigen::MatrixXcd m) {
  m = 0.5 * (m + m.adjoint().eval());
  const double tr = m.trace().real();
  if (!(tr > 0.0)) throw NumericError("iterate lost all trace");
  return DensityMatrix{m / tr};
}

double log_likelihood(const Eigen::MatrixXcd& rho,
                      const std::vector<Eigen::MatrixXcd>& elements,
                      const std::vector<double>& counts) {
  double loglik = 0.0;
  for (std::size_t j = 0; j < elements.size(); ++j) {
    const double p = trace_product(rho, elements[j]);
    if (p < kMinProbability) {
      throw NumericError("record " + std::to_string(j) +
                         " has no support under the current iterate");
    }
    loglik += counts[j] * std::log(p);
  }
  return loglik;
}

// Probability of losing k of the available photons: binomial mixing matrix
// B(n, m) = C(n, m) eta^m (1-eta)^{n-m}, m <= n.
Eigen::MatrixXd binomial_mixing(int dim, double eta) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m <= n; ++m) {
      b(n, m) = std::exp(log_binomial(n, m) + m * std::log(eta) +
                         (n - m) * std::log1p(-eta));
    }
  }
  return b;
}

}  // namespace

std::string to_string(TomoMode mode) {
  switch (mode) {
    case TomoMode::Full: return "full";
    case TomoMode::Diagonal: return "diagonal";
  }
  throw DomainError("unknown tomography mode");
}

TomoMode tomo_mode_from_string(const std::string& name) {
  if (name == "full") return TomoMode::Full;
  if (name == "diagonal") return TomoMode::Diagonal;
  throw DomainError("unknown tomography mode '" + name + "'");
}

void TomoConfig::validate() const {
  if (dim < 2) throw DomainError("reconstruction dimension must be >= 2");
  if (!(eta_d > 0.0 && eta_d <= 1.0)) {
    throw DomainError("assumed detection efficiency must lie in (0, 1]");
  }
  if (!(tol > 0.0)) throw DomainError("convergence tolerance must be positive");
  if (max_iter < 1) throw DomainError("iteration cap must be >= 1");
  if (histogram_bins < 0) throw DomainError("histogram bins must be >= 0");
}

Eigen::MatrixXcd povm_element(double x, double theta, const TomoConfig& cfg) {
  cfg.validate();
  const int d = cfg.dim;
  const Eigen::VectorXd psi = fock_wavefunctions(d - 1, x);
  Eigen::VectorXcd u(d);
  for (int n = 0; n < d; ++n) u[n] = psi[n] * std::polar(1.0, n * theta);

  if (cfg.eta_d == 1.0) return u * u.adjoint();

  // Adjoint loss map on the rank-one projector: sum_k (A_k^dag u)(A_k^dag u)^dag
  // with Kraus operators A_k of the transmission-eta_d loss channel.
  const double log_eta = std::log(cfg.eta_d);
  const double log_nu = std::log1p(-cfg.eta_d);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    for (int m = 0; m + k < d; ++m) {
      const double amp =
          std::exp(0.5 * (log_binomial(m + k, k) + m * log_eta + k * log_nu));
      v[m + k] = amp * u[m];
    }
    out += v * v.adjoint();
  }
  return out;
}

TomoResult maxlik_povm(const std::vector<Eigen::MatrixXcd>& elements,
                       const std::vector<double>& counts,
                       const TomoConfig& cfg,
                       const IterationObserver& observer) {
  cfg.validate();
  if (elements.empty() || elements.size() != counts.size()) {
    throw DomainError("maxlik needs a nonempty POVM list with matching counts");
  }
  const int d = cfg.dim;
  double total = 0.0;
  for (double c : counts) total += c;
  if (!(total > 0.0)) throw DomainError("total count must be positive");

  DensityMatrix rho = DensityMatrix::maximally_mixed(d);
  TomoDiagnostics info;
  double loglik = log_likelihood(rho.elements, elements, counts);
  info.loglik_trace.push_back(loglik);
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(d, d);

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    Eigen::MatrixXcd r_op = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t j = 0; j < elements.size(); ++j) {
      const double p = trace_product(rho.elements, elements[j]);
      if (p < kMinProbability) {
        throw NumericError("record " + std::to_string(j) +
                           " has no support under the current iterate");
      }
      r_op += (counts[j] / (total * p)) * elements[j];
    }

    DensityMatrix candidate =
        normalized_hermitian(r_op * rho.elements * r_op);
    double candidate_loglik =
        log_likelihood(candidate.elements, elements, counts);

    // The raw R rho R step is not guaranteed monotone; dilute it until the
    // likelihood does not decrease.
    double epsilon = 1.0;
    int halvings = 0;
    while (candidate_loglik + kMonotoneSlack < loglik && halvings < 60) {
      const Eigen::MatrixXcd g = identity + epsilon * r_op;
      candidate = normalized_hermitian(g * rho.elements * g);
      candidate_loglik = log_likelihood(candidate.elements, elements, counts);
      epsilon *= 0.5;
      ++halvings;
    }
    if (candidate_loglik + kMonotoneSlack < loglik) {
      // Even infinitesimal steps cannot raise the likelihood at numerical
      // resolution: keep the current iterate and stop.
      info.converged = true;
      break;
    }

    rho = std::move(candidate);
    const double previous = loglik;
    loglik = candidate_loglik;
    info.iterations = iter;
    info.loglik_trace.push_back(loglik);
    if (observer) observer(rho, loglik);

    const double gain = loglik - previous;
    if (gain <= cfg.tol * std::max(1.0, std::abs(loglik))) {
      info.converged = true;
      break;
    }
  }

  info.loglik = loglik;
  return TomoResult{std::move(rho), std::move(info)};
}

namespace {

// Unbinned: one element per record. Histogram mode groups records that share
// a phase into `bins` equal-width x bins over the sampler window.
std::pair<std::vector<Eigen::MatrixXcd>, std::vector<double>> build_elements(
    const QuadratureDataset& data, const TomoConfig& cfg) {
  std::vector<Eigen::MatrixXcd> elements;
  std::vector<double> counts;
  if (cfg.histogram_bins == 0) {
    elements.reserve(data.records.size());
    counts.assign(data.records.size(), 1.0);
    for (const auto& rec : data.records) {
      elements.push_back(povm_element(rec.x, rec.theta, cfg));
    }
    return {std::move(elements), std::move(counts)};
  }

  const double x_max = 8.0;
  const double width = 2.0 * x_max / cfg.histogram_bins;
  std::map<std::pair<double, int>, double> histogram;
  for (const auto& rec : data.records) {
    int bin = static_cast<int>(std::floor((rec.x + x_max) / width));
    bin = std::clamp(bin, 0, cfg.histogram_bins - 1);
    histogram[{rec.theta, bin}] += 1.0;
  }
  for (const auto& [key, count] : histogram) {
    const double center = -x_max + (key.second + 0.5) * width;
    elements.push_back(povm_element(center, key.first, cfg));
    counts.push_back(count);
  }
  return {std::move(elements), std::move(counts)};
}

}  // namespace

TomoResult maxlik(const QuadratureDataset& data, const TomoConfig& cfg,
                  const IterationObserver& observer) {
  cfg.validate();
  if (data.records.empty()) throw DomainError("dataset is empty");
  auto [elements, counts] = build_elements(data, cfg);
  return maxlik_povm(elements, counts, cfg, observer);
}

DiagonalTomoResult diagonal_maxlik(const QuadratureDataset& data,
                                   const TomoConfig& cfg) {
  cfg.validate();
  if (data.records.empty()) throw DomainError("dataset is empty");
  const int d = cfg.dim;

  // h_n(x) = Tr(|n><n| Pi^eta(x)) = sum_m B(n, m) psi_m(x)^2.
  const Eigen::MatrixXd mixing = (cfg.eta_d == 1.0)
                                     ? Eigen::MatrixXd::Identity(d, d)
                                     : binomial_mixing(d, cfg.eta_d);
  const std::size_t n_records = data.records.size();
  Eigen::MatrixXd response(n_records, d);
  for (std::size_t j = 0; j < n_records; ++j) {
    const Eigen::VectorXd psi = fock_wavefunctions(d - 1, data.records[j].x);
    response.row(j) = (mixing * psi.cwiseProduct(psi)).transpose();
  }

  Eigen::VectorXd weights = Eigen::VectorXd::Constant(d, 1.0 / d);
  TomoDiagnostics info;

  auto log_lik = [&](const Eigen::VectorXd& w) {
    const Eigen::VectorXd p = response * w;
    double acc = 0.0;
    for (std::size_t j = 0; j < n_records; ++j) {
      if (p[j] < kMinProbability) {
        throw NumericError("record " + std::to_string(j) +
                           " has no support under the current iterate");
      }
      acc += std::log(p[j]);
    }
    return acc;
  };

  double loglik = log_lik(weights);
  info.loglik_trace.push_back(loglik);

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    const Eigen::VectorXd p = response * weights;
    Eigen::VectorXd gain = Eigen::VectorXd::Zero(d);
    for (std::size_t j = 0; j < n_records; ++j) {
      if (p[j] < kMinProbability) {
        throw NumericError("record " + std::to_string(j) +
                           " has no support under the current iterate");
      }
      gain += response.row(j).transpose() / p[j];
    }
    Eigen::VectorXd candidate =
        weights.cwiseProduct(gain) / static_cast<double>(n_records);
    candidate /= candidate.sum();

    const double candidate_loglik = log_lik(candidate);
    if (candidate_loglik + kMonotoneSlack < loglik) {
      // EM is monotone in exact arithmetic; a computed decrease means the
      // update is below rounding resolution. Keep the current weights.
      info.converged = true;
      break;
    }

    weights = std::move(candidate);
    const double previous = loglik;
    loglik = candidate_loglik;
    info.iterations = iter;
    info.loglik_trace.push_back(loglik);
    if (loglik - previous <= cfg.tol * std::max(1.0, std::abs(loglik))) {
      info.converged = true;
      break;
    }
  }

  info.loglik = loglik;
  return DiagonalTomoResult{PhotonDistribution{weights}, std::move(info)};
}

}  // namespace spdcsim
