#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spdcsim/errors.hpp"
#include "spdcsim/herald.hpp"
#include "test_support.hpp"

using namespace spdcsim;

namespace {

HeraldSpec make_spec(ClickPattern pattern, double eta, double dark = 0.0,
                     double split = 0.5) {
  HeraldSpec spec;
  spec.pattern = pattern;
  spec.eta_click = eta;
  spec.dark = dark;
  spec.split = split;
  return spec;
}

}  // namespace

TEST_CASE("coincidence clicks need at least two photons") {
  const HeraldSpec ideal = make_spec(ClickPattern::Both, 1.0);
  CHECK(click_probability(ClickPattern::Both, 0, ideal) == 0.0);
  CHECK(click_probability(ClickPattern::Both, 1, ideal) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // Two ideal photons coincide iff they split, probability 1/2.
  CHECK(click_probability(ClickPattern::Both, 2, ideal) ==
        doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("closed-form click probabilities match exhaustive enumeration") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
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
        const double brute = static_cast<double>(oracle.pattern(pattern));
        CHECK(std::abs(closed - brute) < 1e-12);
      }
    }
  }
}

TEST_CASE("the four exclusive patterns sum to one") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    HeraldSpec spec;
    spec.eta_click = unit(rng);
    spec.dark = 0.9 * unit(rng);
    spec.split = 0.05 + 0.9 * unit(rng);
    for (int n = 0; n <= 20; ++n) {
      const double sum = click_probability(ClickPattern::None, n, spec) +
                         click_probability(ClickPattern::AOnly, n, spec) +
                         click_probability(ClickPattern::BOnly, n, spec) +
                         click_probability(ClickPattern::Both, n, spec);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("low-gain heralds approach pure Fock states") {
  const HeraldOutcome single =
      herald_state(1e-4, make_spec(ClickPattern::AOrBSingle, 1.0), 5);
  CHECK(single.state.elements(1, 1).real() > 1.0 - 1e-6);

  const HeraldOutcome both =
      herald_state(1e-4, make_spec(ClickPattern::Both, 1.0), 5);
  CHECK(both.state.elements(2, 2).real() > 1.0 - 1e-6);
  CHECK(both.state.elements(0, 0).real() == 0.0);
  CHECK(both.state.elements(1, 1).real() ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("coincidence heralds without dark counts exclude n < 2") {
  for (double eta : {0.3, 0.8, 1.0}) {
    const HeraldOutcome out =
        herald_state(0.3, make_spec(ClickPattern::Both, eta), 8);
    CHECK(out.state.elements(0, 0).real() == 0.0);
    CHECK(std::abs(out.state.elements(1, 1).real()) < 1e-15);
    out.state.validate();
  }
}

TEST_CASE("impossible heralds raise an explicit error") {
  CHECK_THROWS_AS(herald_state(0.0, make_spec(ClickPattern::Both, 1.0), 5),
                  HeraldError);
  CHECK_THROWS_AS(
      herald_state(0.0, make_spec(ClickPattern::AOrBSingle, 1.0), 5),
      HeraldError);
  // Dark counts make any pattern possible even at zero gain.
  const HeraldOutcome dark_herald =
      herald_state(0.0, make_spec(ClickPattern::Both, 1.0, 0.01), 5);
  CHECK(dark_herald.state.elements(0, 0).real() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("herald weights and purity match the enumeration oracle") {
  const HeraldSpec spec = make_spec(ClickPattern::Both, 0.5);
  const double lambda = 0.2;
  const int dim = 6;

  // Oracle route: geometric source marginal times brute-force click
  // probabilities, normalized by hand.
  const PhotonDistribution source = squeezed_marginal(lambda, dim);
  Eigen::VectorXd weights(dim);
  for (int n = 0; n < dim; ++n) {
    weights[n] =
        source.probs[n] *
        static_cast<double>(
            test_support::click_probability_oracle(n, spec).pattern(
                ClickPattern::Both));
  }
  const double total = weights.sum();
  weights /= total;

  const HeraldOutcome out = herald_state(lambda, spec, dim);
  CHECK(out.prob_per_pulse == doctest::Approx(total).epsilon(1e-12));
  for (int n = 0; n < dim; ++n) {
    CHECK(out.state.elements(n, n).real() ==
          doctest::Approx(weights[n]).epsilon(1e-12));
  }
  const double purity = (out.state.elements * out.state.elements).trace().real();
  CHECK(purity == doctest::Approx(weights.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("predicted rates obey the R2 = R1^2 / 2R law at low gain") {
  for (double lambda : {0.01, 0.03, 0.05}) {
    const RateModel model{82e6, lambda};
    const RatePrediction rates =
        predicted_rates(model, make_spec(ClickPattern::Both, 1.0));
    CHECK(rates.r2_hz * 2.0 * model.rep_rate_hz ==
          doctest::Approx(rates.r1_hz * rates.r1_hz).epsilon(0.01));
    CHECK(rates.r2_formula_hz ==
          doctest::Approx(rates.r1_hz * rates.r1_hz / (2.0 * 82e6)));
  }
}

TEST_CASE("zero gain means zero rates") {
  const RatePrediction rates =
      predicted_rates(RateModel{82e6, 0.0}, make_spec(ClickPattern::Both, 1.0));
  CHECK(rates.r1_hz == 0.0);
  CHECK(rates.r2_hz == 0.0);
}

TEST_CASE("rate_law_r2 reproduces the design-point arithmetic") {
  CHECK(rate_law_r2(5.8e3, 8.2e7) == doctest::Approx(0.20512).epsilon(1e-4));
  CHECK_THROWS_AS(rate_law_r2(1.0, 0.0), DomainError);
}

TEST_CASE("apply_cavity scales gain by sqrt(enhancement)") {
  const RateModel base{82e6, 0.01};

  const RateModel same = apply_cavity(base, CavitySpec{0.0, 0.5});
  CHECK(same.base_gain == doctest::Approx(0.01).epsilon(1e-12));

  const CavitySpec measured{0.90, 0.93};
  const RateModel boosted = apply_cavity(base, measured);
  CHECK(boosted.base_gain ==
        doctest::Approx(0.01 * std::sqrt(enhancement(measured))).epsilon(1e-12));

  const HeraldSpec spec = make_spec(ClickPattern::Both, 1.0);
  const RatePrediction rates0 = predicted_rates(base, spec);
  const RatePrediction rates1 = predicted_rates(boosted, spec);
  CHECK(rates1.r1_hz / rates0.r1_hz ==
        doctest::Approx(enhancement(measured)).epsilon(0.01));
  CHECK(rates1.r2_hz / rates0.r2_hz ==
        doctest::Approx(enhancement(measured) * enhancement(measured))
            .epsilon(0.01));

  // Impedance-matched upgrade: E = 100, two-photon gain 1e4.
  const RateModel strong = apply_cavity(RateModel{82e6, 1e-3},
                                        CavitySpec{0.99, 0.99});
  const RatePrediction rates2 = predicted_rates(strong, spec);
  const RatePrediction rates3 = predicted_rates(RateModel{82e6, 1e-3}, spec);
  CHECK(rates2.r2_hz / rates3.r2_hz == doctest::Approx(1e4).epsilon(0.01));

  CHECK_THROWS_AS(apply_cavity(RateModel{82e6, 0.2}, CavitySpec{0.99, 0.99}),
                  DomainError);
}

TEST_CASE("herald probability grows with gain and efficiency at low gain") {
  for (ClickPattern pattern : {ClickPattern::AOrBSingle, ClickPattern::Both}) {
    double previous = -1.0;
    for (double lambda = 0.0; lambda <= 0.7; lambda += 0.05) {
      double prob = 0.0;
      if (lambda > 0.0) {
        prob = herald_state(lambda, make_spec(pattern, 0.6, 0.001), 40)
                   .prob_per_pulse;
      }
      CHECK(prob >= previous);
      previous = prob;
    }

    previous = -1.0;
    for (double eta = 0.05; eta <= 1.0; eta += 0.05) {
      const double prob =
          herald_state(0.3, make_spec(pattern, eta), 40).prob_per_pulse;
      CHECK(prob >= previous);
      previous = prob;
    }
  }

  // Dark-count monotonicity holds unconditionally for coincidences.
  double previous = -1.0;
  for (double dark = 0.0; dark <= 0.3; dark += 0.02) {
    const double prob =
        herald_state(0.3, make_spec(ClickPattern::Both, 0.6, dark), 40)
            .prob_per_pulse;
    CHECK(prob >= previous);
    previous = prob;
  }
}

TEST_CASE("herald spec validation") {
  CHECK_THROWS_AS(click_probability(ClickPattern::Both, 2,
                                    make_spec(ClickPattern::Both, 1.2)),
                  DomainError);
  CHECK_THROWS_AS(click_probability(ClickPattern::Both, 2,
                                    make_spec(ClickPattern::Both, 0.5, -0.1)),
                  DomainError);
  CHECK_THROWS_AS(
      click_probability(ClickPattern::Both, 2,
                        make_spec(ClickPattern::Both, 0.5, 0.0, 1.0)),
      DomainError);
  CHECK_THROWS_AS(click_probability(ClickPattern::Both, -1,
                                    make_spec(ClickPattern::Both, 0.5)),
                  DomainError);
  CHECK(click_pattern_from_string("A_OR_B_SINGLE") ==
        ClickPattern::AOrBSingle);
  CHECK_THROWS_AS(click_pattern_from_string("bogus"), DomainError);
}
