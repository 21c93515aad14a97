// Acceptance suite: one check per release criterion, each printed as a
// single [PASS]/[FAIL] line. Returns the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spdcsim/cavity.hpp"
#include "spdcsim/config.hpp"
#include "spdcsim/errors.hpp"
#include "spdcsim/herald.hpp"
#include "spdcsim/io.hpp"
#include "spdcsim/pipeline.hpp"
#include "spdcsim/tomo.hpp"
#include "spdcsim/wigner.hpp"
#include "test_support.hpp"

using namespace spdcsim;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label,
               const std::function<void(std::ostringstream&)>& body) {
  std::ostringstream detail;
  const auto start = std::chrono::steady_clock::now();
  bool passed = true;
  try {
    body(detail);
  } catch (const std::exception& e) {
    passed = false;
    detail << " exception: " << e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (!passed) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.2fs)%s\n", passed ? "PASS" : "FAIL",
              number, label.c_str(), seconds, detail.str().c_str());
  std::fflush(stdout);
}

void require(bool condition, std::ostringstream& detail,
             const std::string& message) {
  if (!condition) throw Error(message + " |" + detail.str());
}

// Fixed-seed replica of the two-photon heralding pipeline shared by
// criteria 5 and 6.
SimulationConfig replica_config() {
  SimulationConfig config;
  config.lambda = 0.0135;
  config.rep_rate_hz = 82e6;
  config.cavity = CavitySpec{0.90, 0.93};
  config.herald.split = 0.5;
  config.herald.eta_click = 0.25;
  config.herald.dark = 0.0;
  config.herald.pattern = ClickPattern::Both;
  config.eta_prep = 0.81;
  config.eta_d = 0.67;
  config.sampling.n_samples = 7000;
  config.sampling.schedule = ScheduleKind::UniformRandom;
  config.sampling.seed = 213;
  config.tomo.dim = 5;
  config.tomo.eta_d = 0.67;
  config.tomo.tol = 1e-9;
  config.tomo.max_iter = 5000;
  config.tomo.mode = TomoMode::Full;
  return config;
}

struct ReplicaRun {
  SimulateArtifacts sim;
  ReconstructArtifacts corrected;
};

std::optional<ReplicaRun> g_replica;

const ReplicaRun& replica_run() {
  if (!g_replica) {
    const SimulationConfig config = replica_config();
    ReplicaRun run;
    run.sim = run_simulate(config);
    run.corrected = run_reconstruct(run.sim.dataset, config.tomo);
    g_replica = std::move(run);
  }
  return *g_replica;
}

}  // namespace

int main() {
  criterion(1, "power enhancement at both design points", [](auto& detail) {
    const double measured = enhancement(CavitySpec{0.90, 0.93});
    const double matched = enhancement(CavitySpec{0.99, 0.99});
    detail << " E(0.90,0.93)=" << measured << " E(0.99,0.99)=" << matched;
    require(std::abs(measured - 13.80) <= 0.01, detail, "E(0.90,0.93) != 13.80");
    require(std::abs(matched - 100.0) <= 0.1, detail, "E(0.99,0.99) != 100");
  });

  criterion(2, "finesse within 5% of the quoted values", [](auto& detail) {
    const double low = finesse(CavitySpec{0.90, 0.93});
    const double high = finesse(CavitySpec{0.99, 0.99});
    detail << " F(0.90,0.93)=" << low << " F(0.99,0.99)=" << high;
    require(std::abs(low - 35.0) / 35.0 <= 0.05, detail, "F != 35 within 5%");
    require(std::abs(high - 313.0) / 313.0 <= 0.05, detail,
            "F != 313 within 5%");
  });

  criterion(3, "rate law from the measured single-photon rate", [](auto& detail) {
    SimulationConfig config = replica_config();
    config.reference = ReferenceRates{5.8e3, 0.14, 0.05};
    const nlohmann::json report = run_rates(config);
    const double formula =
        report["reference"]["formula_r2_from_measured_r1_hz"].get<double>();
    detail << " formula=" << formula << " Hz, report echoes measured "
           << report["reference"]["measured_r2_hz"].get<double>() << "+/-"
           << report["reference"]["measured_r2_err_hz"].get<double>() << " Hz";
    require(std::abs(formula - 0.205) <= 0.001, detail,
            "r1^2/(2 rep) != 0.205 Hz");
    require(report["reference"].contains("measured_r2_hz") &&
                report["reference"].contains("measured_r2_err_hz"),
            detail, "report must echo the measured reference rate");
  });

  criterion(4, "two-photon gain is the squared single-photon gain",
            [](auto& detail) {
    const HeraldSpec spec{0.5, 1.0, 0.0, ClickPattern::Both};
    for (const CavitySpec cavity :
         {CavitySpec{0.90, 0.93}, CavitySpec{0.99, 0.99}, CavitySpec{0.5, 0.7}}) {
      const double e = enhancement(cavity);
      const RateModel base{82e6, 0.04 / std::sqrt(e)};
      const RateModel boosted = apply_cavity(base, cavity);
      const RatePrediction r0 = predicted_rates(base, spec);
      const RatePrediction r1 = predicted_rates(boosted, spec);
      const double gain1 = r1.r1_hz / r0.r1_hz;
      const double gain2 = r1.r2_hz / r0.r2_hz;
      detail << " [E=" << e << " g1=" << gain1 << " g2=" << gain2 << "]";
      require(std::abs(gain2 - gain1 * gain1) <= 0.01 * gain1 * gain1, detail,
              "two-photon gain is not the squared single-photon gain");
      if (std::abs(e - 13.801) < 0.01) {
        require(std::abs(gain2 - 190.47) <= 0.01 * 190.47, detail,
                "gain at E=13.8 should be about 190");
      }
    }
  });

  criterion(5, "end-to-end two-photon replica reconstruction", [](auto& detail) {
    const ReplicaRun& run = replica_run();
    const Eigen::VectorXd diag = run.corrected.rho_hat.diagonal_real();
    const double target[5] = {0.0361, 0.3078, 0.6561, 0.0, 0.0};
    detail << " diag=(";
    for (int n = 0; n < 5; ++n) detail << (n ? "," : "") << diag[n];
    detail << ") iters=" << run.corrected.info.iterations;
    for (int n = 0; n < 5; ++n) {
      require(std::abs(diag[n] - target[n]) <= 0.04, detail,
              "diagonal element " + std::to_string(n) + " off by > 0.04");
    }
    double max_offdiag = 0.0;
    for (int m = 0; m < 5; ++m) {
      for (int n = 0; n < 5; ++n) {
        if (m != n) {
          max_offdiag = std::max(
              max_offdiag, std::abs(run.corrected.rho_hat.elements(m, n)));
        }
      }
    }
    detail << " max_offdiag=" << max_offdiag;
    require(max_offdiag < 0.05, detail, "off-diagonal magnitude >= 0.05");
    require(diag[3] <= 0.02 && diag[4] <= 0.02, detail,
            "population above n=2 exceeds 0.02");
  });

  criterion(6, "Wigner negativity with and without loss correction",
            [](auto& detail) {
    const ReplicaRun& run = replica_run();
    const NegativityReport& corrected = run.corrected.negativity;
    detail << " corrected: W(0,0)=" << corrected.w_origin << " min="
           << corrected.min_value << " at r=" << corrected.min_radius;
    require(corrected.w_origin > 0.0, detail, "corrected W(0,0) must be > 0");
    require(corrected.min_value < -0.005, detail,
            "corrected ring minimum must be < -0.005");

    TomoConfig uncorrected_cfg = replica_config().tomo;
    uncorrected_cfg.eta_d = 1.0;
    const ReconstructArtifacts uncorrected =
        run_reconstruct(run.sim.dataset, uncorrected_cfg);
    detail << " uncorrected: W(0,0)=" << uncorrected.negativity.w_origin
           << " min=" << uncorrected.negativity.min_value << " at r="
           << uncorrected.negativity.min_radius;
    require(uncorrected.negativity.min_value < 0.0, detail,
            "uncorrected ring must stay negative");
  });

  criterion(7, "ideal Wigner anchors", [](auto& detail) {
    const double one = wigner_point(fock_state(1, 5), 0.0, 0.0);
    const double two = wigner_point(fock_state(2, 5), 0.0, 0.0);
    detail << " W1(0)=" << one << " W2(0)=" << two;
    require(std::abs(one + 1.0 / test_support::kPi) <= 1e-9, detail,
            "W(0,0) of |1> must be -1/pi");
    require(std::abs(two - 1.0 / test_support::kPi) <= 1e-9, detail,
            "W(0,0) of |2> must be +1/pi");

    const Eigen::VectorXd probs = fock_state(2, 5).diagonal_real();
    double lo = 0.3;
    double hi = 0.8;
    for (int iter = 0; iter < 100; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (wigner_radial(probs, mid) > 0.0 ? lo : hi) = mid;
    }
    const double r2 = 0.25 * (lo + hi) * (lo + hi);
    detail << " ring zero r^2=" << r2;
    require(std::abs(r2 - (2.0 - std::sqrt(2.0)) / 2.0) <= 1e-6, detail,
            "first ring zero of |2> misplaced");
  });

  criterion(8, "click probabilities match exhaustive enumeration",
            [](auto& detail) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      HeraldSpec spec;
      spec.eta_click = unit(rng);
      spec.dark = 0.5 * unit(rng);
      spec.split = 0.1 + 0.8 * unit(rng);
      for (int n = 0; n <= 10; ++n) {
        const auto oracle = test_support::click_probability_oracle(n, spec);
        for (ClickPattern pattern :
             {ClickPattern::None, ClickPattern::AOnly, ClickPattern::BOnly,
              ClickPattern::AOrBSingle, ClickPattern::Both}) {
          const double closed = click_probability(pattern, n, spec);
          worst = std::max(
              worst,
              std::abs(closed - static_cast<double>(oracle.pattern(pattern))));
        }
      }
    }
    detail << " worst |closed - enumerated| = " << worst;
    require(worst < 1e-12, detail, "closed form deviates beyond 1e-12");
  });

  criterion(9, "maximum-likelihood iteration properties", [](auto& detail) {
    std::mt19937_64 rng(515);
    bool all_monotone = true;
    bool all_physical = true;
    for (int trial = 0; trial < 50; ++trial) {
      const int dim = 2 + static_cast<int>(rng() % 4);
      const DensityMatrix truth =
          (trial % 2 == 0) ? test_support::random_diagonal_state(rng, dim)
                           : test_support::random_density_matrix(rng, dim);
      const std::vector<double> phases =
          phase_schedule(ScheduleKind::UniformRandom, 2000, 0, 900 + trial);
      const QuadratureDataset data = sample(truth, 1.0, phases, 901 + trial);

      TomoConfig cfg;
      cfg.dim = dim;
      cfg.eta_d = 1.0;
      cfg.tol = 1e-9;
      cfg.max_iter = 120;
      const IterationObserver observer = [&](const DensityMatrix& rho, double) {
        const double herm =
            (rho.elements - rho.elements.adjoint()).cwiseAbs().maxCoeff();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
            rho.elements, Eigen::EigenvaluesOnly);
        if (herm > 1e-12 ||
            std::abs(rho.elements.trace().real() - 1.0) > 1e-10 ||
            solver.eigenvalues().minCoeff() < -1e-10) {
          all_physical = false;
        }
      };
      const TomoResult result = maxlik(data, cfg, observer);
      for (std::size_t t = 1; t < result.info.loglik_trace.size(); ++t) {
        if (result.info.loglik_trace[t] <
            result.info.loglik_trace[t - 1] - 1e-12) {
          all_monotone = false;
        }
      }
    }
    require(all_monotone, detail, "log-likelihood decreased on some dataset");
    require(all_physical, detail, "an iterate broke PSD/trace/Hermiticity");

    // dim = 2 fixed point against a dense simplex grid search over a
    // three-outcome diagonal POVM.
    auto bin_mass = [](int n, double lo, double hi) {
      return test_support::simpson(
          [n](double x) {
            const double psi = fock_wavefunction(n, x);
            return psi * psi;
          },
          lo, hi, 4000);
    };
    std::vector<Eigen::MatrixXcd> elements(3, Eigen::MatrixXcd::Zero(2, 2));
    elements[0].diagonal() << bin_mass(0, -8.0, -0.6), bin_mass(1, -8.0, -0.6);
    elements[1].diagonal() << bin_mass(0, -0.6, 0.6), bin_mass(1, -0.6, 0.6);
    elements[2] = Eigen::MatrixXcd::Identity(2, 2) - elements[0] - elements[1];
    const double t_true = 0.3;
    std::vector<double> counts(3);
    for (int i = 0; i < 3; ++i) {
      counts[i] = 1e4 * (t_true * elements[i](0, 0).real() +
                         (1.0 - t_true) * elements[i](1, 1).real());
    }
    double best_t = 0.0;
    double best_l = -1e300;
    for (double t = 0.0; t <= 1.0; t += 1e-5) {
      double l = 0.0;
      for (int i = 0; i < 3; ++i) {
        l += counts[i] * std::log(t * elements[i](0, 0).real() +
                                  (1.0 - t) * elements[i](1, 1).real());
      }
      if (l > best_l) {
        best_l = l;
        best_t = t;
      }
    }
    TomoConfig cfg;
    cfg.dim = 2;
    cfg.tol = 1e-15;
    cfg.max_iter = 100000;
    const TomoResult fixed_point = maxlik_povm(elements, counts, cfg);
    detail << " grid argmax=" << best_t
           << " rho00=" << fixed_point.rho.elements(0, 0).real();
    require(std::abs(fixed_point.rho.elements(0, 0).real() - best_t) <= 1e-3,
            detail, "fixed point disagrees with the grid search");
  });

  criterion(10, "sampler fidelity and determinism", [](auto& detail) {
    const std::vector<double> phases(100000, 0.0);
    int index = 0;
    for (const DensityMatrix& rho :
         {fock_state(0, 5), fock_state(1, 5), fock_state(2, 5),
          apply_loss(fock_state(2, 5), 0.81)}) {
      const QuadratureDataset data = sample(rho, 1.0, phases, 7100 + index);
      std::vector<double> xs;
      xs.reserve(data.records.size());
      for (const auto& rec : data.records) xs.push_back(rec.x);
      const auto fit = test_support::chi_square_fit(xs, rho);
      detail << " p" << index << "=" << fit.p_value;
      require(fit.p_value > 0.001, detail,
              "chi-square p-value below 0.001 for state " +
                  std::to_string(index));
      ++index;
    }

    const DensityMatrix lossy = apply_loss(fock_state(2, 5), 0.81);
    const std::vector<double> schedule =
        phase_schedule(ScheduleKind::UniformRandom, 7000, 0, 4242);
    const QuadratureDataset a = sample(lossy, 0.67, schedule, 777);
    const QuadratureDataset b = sample(lossy, 0.67, schedule, 777);
    require(dataset_to_csv(a) == dataset_to_csv(b), detail,
            "repeated seeded runs differ");
  });

  if (g_failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria failed\n", g_failures);
  }
  return g_failures;
}
