#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ehcr/model.hpp"
#include "ehcr/rng.hpp"
#include "test_helpers.hpp"

using namespace ehcr;

namespace {

ChannelRealization unit_gains(std::size_t m) {
  ChannelRealization r;
  r.h_pp.assign(m, 1.0);
  r.h_ps.assign(m, 1.0);
  r.h_sp.assign(m, 1.0);
  r.h_ss.assign(m, 1.0);
  return r;
}

}  // namespace

TEST_CASE("derived coefficients with unit gains and section-defaults") {
  SystemParams params;  // pp = 2, eta = 0.3, p_int = 0.1, sigma_s2 = 0.1
  const Instance inst = derived_coefficients(params, unit_gains(1));
  CHECK(inst.theta[0] == doctest::Approx(1.0 / 2.1).epsilon(1e-12));
  CHECK(inst.zeta[0] == doctest::Approx(0.6 / 2.1).epsilon(1e-12));
  CHECK(inst.psi[0] == doctest::Approx(0.6 / 0.7).epsilon(1e-12));
}

TEST_CASE("psi limit conventions") {
  SystemParams params;
  ChannelRealization r = unit_gains(1);

  SUBCASE("no interference path") {
    r.h_sp[0] = 0.0;
    CHECK(derived_coefficients(params, r).psi[0] == 0.0);
  }
  SUBCASE("zero threshold with a live path") {
    params.p_int = 0.0;
    CHECK(derived_coefficients(params, r).psi[0] == 1.0);
  }
  SUBCASE("vanishing denominator") {
    params.p_int = 0.0;
    params.eta = 0.0;
    CHECK(derived_coefficients(params, r).psi[0] == 1.0);
  }
  SUBCASE("no harvest, positive threshold") {
    params.eta = 0.0;
    CHECK(derived_coefficients(params, r).psi[0] == 0.0);
  }
}

TEST_CASE("derived coefficients rejects mismatched gain sequences") {
  SystemParams params;
  ChannelRealization r = unit_gains(3);
  r.h_sp.pop_back();
  CHECK_THROWS_AS(derived_coefficients(params, r), std::invalid_argument);
}

TEST_CASE("parameter invariants") {
  SystemParams params;
  params.eta = 1.2;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params.eta = 0.3;
  params.sigma_s2 = 0.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params.sigma_s2 = 0.1;
  params.slot_seconds = 2.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}

TEST_CASE("slot_rate closed form") {
  CHECK(slot_rate(0.0, 123.0, 4.0) == 0.0);
  CHECK(slot_rate(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(slot_rate(0.5, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(slot_rate(0.3, 0.0, 2.0) == 0.0);
  CHECK_THROWS_AS(slot_rate(-0.1, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(slot_rate(0.5, -1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(slot_rate(0.5, 1.0, -1.0), std::domain_error);
}

TEST_CASE("slot_rate is jointly concave and monotone in energy") {
  std::uint64_t k = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const double a1 = 0.05 + 0.9 * rng::to_unit(rng::word_at(11, 0, k));
    const double e1 = 2.0 * rng::to_unit(rng::word_at(11, 1, k));
    const double a2 = 0.05 + 0.9 * rng::to_unit(rng::word_at(11, 2, k));
    const double e2 = 2.0 * rng::to_unit(rng::word_at(11, 3, k));
    const double th = 5.0 * rng::to_unit(rng::word_at(11, 4, k));
    const double t = rng::to_unit(rng::word_at(11, 5, k));
    ++k;

    const double mid = slot_rate(t * a1 + (1 - t) * a2, t * e1 + (1 - t) * e2, th);
    const double chord = t * slot_rate(a1, e1, th) + (1 - t) * slot_rate(a2, e2, th);
    CHECK(mid >= chord - 1e-12);

    CHECK(slot_rate(a1, e1 + 0.25, th) >= slot_rate(a1, e1, th));
  }
}

TEST_CASE("theta and zeta fall with sigma_s2 and h_ps; psi rises with h_sp") {
  SystemParams base;
  const ChannelRealization r = unit_gains(1);
  const Instance ref = derived_coefficients(base, r);

  SystemParams noisier = base;
  noisier.sigma_s2 = 0.2;
  const Instance worse = derived_coefficients(noisier, r);
  CHECK(worse.theta[0] < ref.theta[0]);
  CHECK(worse.zeta[0] < ref.zeta[0]);

  ChannelRealization stronger_ps = r;
  stronger_ps.h_ps[0] = 2.0;
  const Instance jammed = derived_coefficients(base, stronger_ps);
  CHECK(jammed.theta[0] < ref.theta[0]);
  CHECK(jammed.zeta[0] < ref.zeta[0]);

  ChannelRealization stronger_sp = r;
  stronger_sp.h_sp[0] = 2.0;
  CHECK(derived_coefficients(base, stronger_sp).psi[0] > ref.psi[0]);
}

TEST_CASE("sum_rate equals slot-by-slot recomputation") {
  const Instance inst = testing::baseline_instance(7, 99);
  std::vector<double> alpha(7), energy(7);
  for (std::size_t i = 0; i < 7; ++i) {
    alpha[i] = 0.1 + 0.08 * double(i);
    energy[i] = 0.05 * double(i + 1);
  }
  double expected = 0.0;
  for (std::size_t i = 0; i < 7; ++i) expected += slot_rate(alpha[i], energy[i], inst.theta[i]);
  CHECK(sum_rate(alpha, energy, inst) == doctest::Approx(expected).epsilon(1e-15));

  CHECK(sum_rate(std::vector<double>(7, 0.0), std::vector<double>(7, 0.0), inst) == 0.0);
  CHECK_THROWS_AS(sum_rate(std::vector<double>(6, 0.5), energy, inst), std::invalid_argument);
}

TEST_CASE("recover_power") {
  CHECK(recover_power({0.0}, {0.0})[0] == 0.0);
  CHECK(recover_power({0.5}, {1.0})[0] == doctest::Approx(2.0));
  CHECK(recover_power({1.0}, {0.3})[0] == doctest::Approx(0.3));
  CHECK_THROWS_AS(recover_power({0.0}, {0.5}), std::invalid_argument);

  // energy round-trips through power wherever alpha > 0
  std::uint64_t k = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const double a = 0.01 + 0.99 * rng::to_unit(rng::word_at(12, 0, k));
    const double e = 3.0 * rng::to_unit(rng::word_at(12, 1, k));
    ++k;
    const double p = recover_power({a}, {e})[0];
    CHECK(a * p == doctest::Approx(e).epsilon(1e-14));
  }
}

TEST_CASE("harvest_profile") {
  SystemParams params;
  params.eta = 0.3;
  CHECK(harvest_profile({1.0}, params)[0] == 0.0);
  CHECK(harvest_profile({0.0}, params)[0] == doctest::Approx(0.6).epsilon(1e-14));
  params.eta = 0.5;
  CHECK(harvest_profile({0.5}, params)[0] == doctest::Approx(0.5).epsilon(1e-14));
}
