#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cavatten/modes.hpp"
#include "cavatten/rng.hpp"

using namespace cavatten;

namespace {

// Independent oracle: diagonalize [[f_a, g], [g, f_b]] via the characteristic
// polynomial and an explicit eigenvector, a different algebraic path from the
// implementation's cancellation-safe form.
struct EigOracle {
  double f_minus, f_plus, p_lower_in_a;
};

EigOracle eig2(double fa, double fb, double g) {
  const double tr = fa + fb;
  const double det = fa * fb - g * g;
  const double disc = std::sqrt(tr * tr / 4.0 - det);
  EigOracle out;
  out.f_minus = tr / 2.0 - disc;
  out.f_plus = tr / 2.0 + disc;
  // eigenvector of the lower eigenvalue: (g, lambda - fa)
  const double va = g;
  const double vb = out.f_minus - fa;
  out.p_lower_in_a = va * va / (va * va + vb * vb);
  return out;
}

}  // namespace

TEST_CASE("hybridize matches the brute-force eigensolve") {
  const auto pair = modes::hybridize(7.6037e9, 7.6883e9, 59.5e6);
  const auto ref = eig2(7.6037e9, 7.6883e9, 59.5e6);
  CHECK(pair.lower.f_hz == doctest::Approx(ref.f_minus).epsilon(1e-10));
  CHECK(pair.upper.f_hz == doctest::Approx(ref.f_plus).epsilon(1e-10));
  CHECK(pair.lower.participations[0].fraction == doctest::Approx(ref.p_lower_in_a).epsilon(1e-6));

  // Frozen high-precision references for the same inputs.
  CHECK(pair.lower.f_hz == doctest::Approx(7572996301.46).epsilon(1e-10));
  CHECK(pair.upper.f_hz == doctest::Approx(7719003698.54).epsilon(1e-10));
  CHECK(pair.lower.participations[0].fraction == doctest::Approx(0.78971134921).epsilon(1e-9));
}

TEST_CASE("hybridize structural identities") {
  const double fa = 7.6037e9, fb = 7.6883e9, g = 59.5e6;
  const auto pair = modes::hybridize(fa, fb, g);

  // Trace conservation and level repulsion.
  CHECK(pair.lower.f_hz + pair.upper.f_hz == doctest::Approx(fa + fb).epsilon(1e-12));
  CHECK(pair.upper.f_hz - pair.lower.f_hz >= 2 * g);

  // Participations are complementary by construction.
  CHECK(pair.lower.participations[0].fraction + pair.lower.participations[1].fraction == 1.0);
  CHECK(pair.upper.participations[0].fraction == pair.lower.participations[1].fraction);

  // Degenerate bare modes hybridize 50/50 with splitting 2g.
  const auto deg = modes::hybridize(7.6e9, 7.6e9, 40e6);
  CHECK(deg.lower.participations[0].fraction == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(deg.upper.f_hz - deg.lower.f_hz == doctest::Approx(2 * 40e6).epsilon(1e-12));

  // g = 0 returns the bare modes; the lower mode is labeled "a" when f_a <= f_b.
  const auto bare = modes::hybridize(7.5e9, 7.9e9, 0.0);
  CHECK(bare.lower.f_hz == doctest::Approx(7.5e9).epsilon(1e-15));
  CHECK(bare.lower.participations[0].fraction == 1.0);
  const auto bare_swapped = modes::hybridize(7.9e9, 7.5e9, 0.0);
  CHECK(bare_swapped.lower.participations[0].fraction == 0.0);

  CHECK_THROWS_AS(modes::hybridize(-1e9, 7.6e9, 1e6), std::invalid_argument);
  CHECK_THROWS_AS(modes::hybridize(7.6e9, 7.6e9, -1e6), std::invalid_argument);
}

TEST_CASE("infer_coupling reference case") {
  const auto bare = modes::infer_coupling(7.573e9, 7.719e9, 0.79);
  CHECK(bare.f_b_hz - bare.f_a_hz == doctest::Approx(84.68e6).epsilon(1e-12));
  CHECK(bare.g_hz == doctest::Approx(59467002.615).epsilon(1e-9));
  CHECK(bare.f_a_hz == doctest::Approx(7.60366e9).epsilon(1e-12));
  CHECK(bare.f_b_hz == doctest::Approx(7.68834e9).epsilon(1e-12));

  CHECK_THROWS_AS(modes::infer_coupling(7.7e9, 7.6e9, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(modes::infer_coupling(7.5e9, 7.6e9, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(modes::infer_coupling(7.5e9, 7.6e9, 1.0), std::invalid_argument);
}

TEST_CASE("hybridize / infer_coupling round-trip on random inputs") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto eng = rng::engine_for(99, 0x6d6f646573ull, i);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double fa = 4e9 + 5e9 * u01(eng);
    double dl = (u01(eng) - 0.5) * 1e9;
    if (std::abs(dl) < 1e3) dl = 1e3;
    const double fb = fa + dl;
    const double g = 1e6 + 199e6 * u01(eng);

    const auto fwd = modes::hybridize(fa, fb, g);
    const auto inv = modes::infer_coupling(fwd.lower.f_hz, fwd.upper.f_hz,
                                           fwd.lower.participations[0].fraction);
    CHECK(inv.f_a_hz == doctest::Approx(fa).epsilon(1e-9));
    CHECK(inv.f_b_hz == doctest::Approx(fb).epsilon(1e-9));
    CHECK(inv.g_hz == doctest::Approx(g).epsilon(1e-9));
  }
}

TEST_CASE("effective_rate and readout_mode") {
  const auto pair = modes::hybridize(7.6037e9, 7.6883e9, 59.5e6, "al", "cu");
  const std::vector<std::pair<std::string, double>> rates = {{"al", 0.2e6}, {"cu", 60e6}};
  const double p = pair.lower.participations[0].fraction;
  CHECK(modes::effective_rate(pair.lower, rates) ==
        doctest::Approx(p * 0.2e6 + (1 - p) * 60e6).epsilon(1e-14));

  const std::vector<std::pair<std::string, double>> missing = {{"al", 0.2e6}};
  CHECK_THROWS_AS(modes::effective_rate(pair.lower, missing), std::invalid_argument);

  // The lower mode participates ~79% in "al", so it is the readout mode for
  // "al" and the upper mode is the one for "cu".
  CHECK(&modes::readout_mode(pair, "al") == &pair.lower);
  CHECK(&modes::readout_mode(pair, "cu") == &pair.upper);
  CHECK_THROWS_AS(modes::readout_mode(pair, "nope"), std::invalid_argument);
}

TEST_CASE("two_port_transmission reference values") {
  const double ki = 54e6;
  const auto sym10 = modes::two_port_transmission(ki, ki / 10, ki / 10);
  CHECK(sym10.power_ratio == doctest::Approx(1.0 / 36.0).epsilon(1e-12));
  CHECK(sym10.insertion_loss_db == doctest::Approx(15.5630250077).epsilon(1e-9));

  const auto sym = modes::two_port_transmission(ki, ki, ki);
  CHECK(sym.power_ratio == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  CHECK(sym.insertion_loss_db == doctest::Approx(3.5218251811).epsilon(1e-9));

  const auto blocked = modes::two_port_transmission(ki, ki / 10, 0.0);
  CHECK(blocked.power_ratio == 0.0);
  CHECK(std::isinf(blocked.insertion_loss_db));

  CHECK_THROWS_AS(modes::two_port_transmission(-1.0, 1e6, 1e6), std::invalid_argument);
  CHECK_THROWS_AS(modes::two_port_transmission(0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("insertion_loss_to_coupling inverts the symmetric response") {
  const double ki = 54e6;
  const double kc = modes::insertion_loss_to_coupling(14.0, ki);
  CHECK(kc == doctest::Approx(6730024.72).epsilon(1e-8));
  CHECK(ki / kc == doctest::Approx(8.02374467).epsilon(1e-8));

  // Round-trip: the inferred coupler reproduces the requested insertion loss.
  const auto tx = modes::two_port_transmission(ki, kc, kc);
  CHECK(tx.insertion_loss_db == doctest::Approx(14.0).epsilon(1e-10));

  CHECK_THROWS_AS(modes::insertion_loss_to_coupling(0.0, ki), std::invalid_argument);
  CHECK_THROWS_AS(modes::insertion_loss_to_coupling(14.0, 0.0), std::invalid_argument);
}

TEST_CASE("reflection_response basics") {
  modes::ResonatorSpec spec;
  spec.f_hz = 7.6e9;
  spec.kappa_i_hz = 2e6;
  spec.kappa_c1_hz = 2e6;  // critically coupled

  CHECK(std::abs(modes::reflection_response(spec, 0.0)) == doctest::Approx(0.0).epsilon(1e-15));
  for (double d : {-10e6, -1e6, 0.5e6, 20e6}) {
    CHECK(std::abs(modes::reflection_response(spec, d)) <= 1.0 + 1e-12);
  }
  // Far off resonance everything reflects.
  CHECK(std::abs(modes::reflection_response(spec, 1e12)) == doctest::Approx(1.0).epsilon(1e-6));

  spec.kappa_c2_hz = 1e6;
  CHECK_THROWS_AS(modes::reflection_response(spec, 0.0), std::invalid_argument);
}

TEST_CASE("ResonatorSpec validation and Q") {
  modes::ResonatorSpec spec;
  spec.f_hz = 7.6e9;
  spec.kappa_i_hz = 38e6;
  CHECK(spec.kappa_total_hz() == 38e6);
  REQUIRE(spec.q_internal().has_value());
  CHECK(*spec.q_internal() == doctest::Approx(7.6e9 / 38e6).epsilon(1e-15));
  CHECK_NOTHROW(spec.validate());

  spec.kappa_i_hz = 0;
  CHECK_FALSE(spec.q_internal().has_value());
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);  // all rates zero

  spec.kappa_i_hz = -1;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.kappa_i_hz = 1e6;
  spec.f_hz = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
