#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "psra/errors.hpp"
#include "psra/qanalytic.hpp"

using psra::DelayDistribution;
using psra::PsraProcess;

namespace {
std::vector<double> poisson_pmf(double mean, int n) {
  std::vector<double> out;
  double term = std::exp(-mean);
  for (int k = 0; k < n; ++k) {
    out.push_back(term);
    term *= mean / (k + 1);
  }
  return out;
}

double queue_sum(const psra::QueueStationaryDist& d) {
  double s = d.residual;
  for (double p : d.probs) s += p;
  return s;
}
}  // namespace

TEST_CASE("M/D/1 mean queue") {
  CHECK(psra::mdone_mean(0.5) == doctest::Approx(0.75));
  CHECK(psra::mdone_mean(0.9) == doctest::Approx(4.95));
  CHECK_THROWS_AS(psra::mdone_mean(1.0), psra::DomainError);
  CHECK_THROWS_AS(psra::mdone_mean(1.5), psra::DomainError);
  CHECK_THROWS_AS(psra::mdone_mean(0.0), psra::ConfigError);
}

TEST_CASE("slotted queue stationary law") {
  SUBCASE("no arrivals: always empty") {
    const auto d = psra::gidone_stationary(std::vector<double>{1.0, 0.0, 0.0});
    CHECK(d.probs.at(0) == doctest::Approx(1.0));
    CHECK(d.mean == doctest::Approx(0.0));
  }
  SUBCASE("poisson arrivals reproduce M/D/1") {
    const auto d = psra::gidone_stationary(poisson_pmf(0.9, 80));
    CHECK(std::abs(d.mean - 4.95) < 1e-3);
    CHECK(d.probs[0] == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(std::abs(queue_sum(d) - 1.0) < 1e-9);
  }
  SUBCASE("bernoulli arrivals: geometric-like closed form") {
    // m in {0, 1}: the queue never exceeds 1 since one customer leaves per slot.
    const auto d = psra::gidone_stationary(std::vector<double>{0.4, 0.6});
    CHECK(d.probs[0] == doctest::Approx(0.4));
    CHECK(d.probs[1] == doctest::Approx(0.6));
  }
  SUBCASE("cross-check against the plug-in mean") {
    const PsraProcess proc{1.0, DelayDistribution::gaussian(0.5)};
    const auto d = psra::gidone_stationary(psra::slot_count_dist(proc, 0.0, 0.9));
    CHECK(std::abs(d.mean - 3.03548) < 1e-3);
    CHECK(d.mean == doctest::Approx(psra::independence_approx_mean(proc, 0.0, 0.9)).epsilon(1e-6));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(psra::gidone_stationary(std::vector<double>{0.0, 1.0}), psra::DomainError);
    CHECK_THROWS_AS(psra::gidone_stationary(std::vector<double>{0.2, 0.3, 0.5}), psra::DomainError);
    CHECK_THROWS_AS(psra::gidone_stationary(std::vector<double>{0.5, 0.0, 0.5}), psra::DomainError);
  }
}

TEST_CASE("stationary law properties over random PSRA slots") {
  psra::RandomStream rng(5150);
  for (int k = 0; k < 40; ++k) {
    const double sigma = 0.1 + 1.5 * rng.uniform();
    const double T = 0.3 + 0.6 * rng.uniform();
    const double survival = 0.5 + 0.5 * rng.uniform();
    const double t = rng.uniform();
    const PsraProcess proc{1.0, DelayDistribution::gaussian(sigma), survival};
    const auto q = psra::slot_count_dist(proc, t, T);
    const auto d = psra::gidone_stationary(q);
    CAPTURE(sigma);
    CAPTURE(T);
    CHECK(std::abs(queue_sum(d) - 1.0) < 1e-9);
    CHECK(d.probs[0] == doctest::Approx(1.0 - q.mean).epsilon(1e-9));
    CHECK(d.traffic_intensity == doctest::Approx(q.mean));
    CHECK(d.max_clamp < 1e-12);
    CHECK(std::abs(d.mean - psra::independence_approx_mean(proc, t, T)) < 1e-6);
  }
}

TEST_CASE("independence approximation mean") {
  const PsraProcess half{1.0, DelayDistribution::gaussian(0.5)};
  const PsraProcess one{1.0, DelayDistribution::gaussian(1.0)};
  CHECK(std::abs(psra::independence_approx_mean(half, 0.0, 0.9) - 3.03548) < 1e-5);
  CHECK(std::abs(psra::independence_approx_mean(one, 0.5, 0.9) - 3.84452) < 1e-5);

  SUBCASE("matches the brute-force formula") {
    for (double sigma : {0.15, 0.4, 0.8}) {
      const PsraProcess proc{1.0, DelayDistribution::gaussian(sigma), 0.9};
      const auto p = oracle::gaussian_window_probs(sigma, 1.0, 0.37, 0.85, 0.9);
      CHECK(psra::independence_approx_mean(proc, 0.37, 0.85) ==
            doctest::Approx(oracle::independence_mean(p)).epsilon(1e-11));
    }
  }
  SUBCASE("overloaded windows are rejected") {
    CHECK_THROWS_AS(psra::independence_approx_mean(one, 0.0, 1.0), psra::DomainError);
    CHECK_THROWS_AS(psra::independence_approx_mean(std::vector<double>{0.6, 0.5}), psra::DomainError);
  }
  SUBCASE("large delays approach M/D/1") {
    for (double rho : {0.5, 0.7, 0.9}) {
      const PsraProcess proc{1.0, DelayDistribution::gaussian(2e4)};
      CAPTURE(rho);
      CHECK(std::abs(psra::independence_approx_mean(proc, 0.0, rho) - psra::mdone_mean(rho)) < 1e-4);
    }
  }
  SUBCASE("the gap to M/D/1 shrinks like 1 / sigma") {
    const double rho = 0.9;
    const double limit = rho * rho / (4.0 * std::sqrt(std::numbers::pi) * (1.0 - rho));
    for (double sigma : {50.0, 100.0, 200.0}) {
      const PsraProcess proc{1.0, DelayDistribution::gaussian(sigma)};
      const double gap = psra::mdone_mean(rho) - psra::independence_approx_mean(proc, 0.3, rho);
      CHECK(sigma * gap == doctest::Approx(limit).epsilon(1e-3));
    }
  }
}
