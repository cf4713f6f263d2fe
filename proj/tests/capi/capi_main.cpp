// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <vector>

#include "forerunner/forerunner.h"

namespace {

frn_params params(double V, double E0, double L = 0.0) {
  frn_params p;
  frn_params_default(&p);
  p.V = V;
  p.E0 = E0;
  p.L = L;
  return p;
}

}  // namespace

TEST_CASE("scales and opacity through the C layer") {
  const frn_params p = params(1.0, 0.1, 40.0);
  frn_scales s;
  REQUIRE(frn_derive_scales(&p, &s) == FRN_OK);
  CHECK(s.kappa0 == doctest::Approx(1.2580).epsilon(1e-4));
  CHECK(s.penetration_length == doctest::Approx(1.0 / s.kappa0));
  double alpha = 0.0;
  REQUIRE(frn_opacity(&p, &alpha) == FRN_OK);
  CHECK(std::abs(alpha - 53.0) < 0.1);
}

TEST_CASE("regime and argument errors map to status codes") {
  const frn_params bad = params(1.0, 1.2);
  frn_scales s;
  CHECK(frn_derive_scales(&bad, &s) == FRN_ERR_REGIME);
  CHECK(std::strlen(frn_last_error()) > 0);
  CHECK(std::strcmp(frn_status_name(FRN_ERR_REGIME), "tunneling-regime") == 0);
  CHECK(frn_derive_scales(nullptr, &s) == FRN_ERR_INVALID_ARGUMENT);

  const frn_params p = params(0.3, 0.2721);
  frn_model* m = nullptr;
  REQUIRE(frn_source_create(&p, &m) == FRN_OK);
  double z[2];
  CHECK(frn_psi(m, -1.0, 1.0, z) == FRN_ERR_DOMAIN);
  frn_model_free(m);

  const frn_params no_length = params(1.0, 0.1);
  CHECK(frn_shutter_create(&no_length, nullptr, &m) == FRN_ERR_MISSING_DEPENDENCY);
  CHECK(m == nullptr);
}

TEST_CASE("source boundary value and peak search") {
  const frn_params p = params(0.3, 0.907 * 0.3);
  frn_model* m = nullptr;
  REQUIRE(frn_source_create(&p, &m) == FRN_OK);
  frn_scales s;
  REQUIRE(frn_derive_scales(&p, &s) == FRN_OK);
  double z[2];
  REQUIRE(frn_psi(m, 0.0, 7.5, z) == FRN_OK);
  CHECK(z[0] == doctest::Approx(std::cos(s.omega0 * 7.5)).epsilon(1e-10));
  CHECK(z[1] == doctest::Approx(-std::sin(s.omega0 * 7.5)).epsilon(1e-10));

  const double x = 20.0 / s.kappa0;
  frn_peak peak;
  REQUIRE(frn_find_peak(m, x, nullptr, &peak) == FRN_OK);
  const double tau = x / s.v_sc;
  CHECK(std::abs(peak.t_p / tau - 1.0 / std::sqrt(3.0)) < 0.02);
  CHECK(peak.has_omega == 1);
  frn_model_free(m);
}

TEST_CASE("pole table and time scales") {
  const frn_params p = params(1.0, 0.1, 40.0);
  std::vector<frn_pole> poles(3);
  REQUIRE(frn_find_poles(&p, 3, poles.data()) == FRN_OK);
  CHECK(poles[0].re == doctest::Approx(1.32841).epsilon(1e-4));
  CHECK(poles[0].im < 0.0);
  CHECK(poles[1].re > poles[0].re);
  frn_timescales ts;
  REQUIRE(frn_reference_timescales(&p, 40.0, poles.data(), &ts) == FRN_OK);
  CHECK(ts.has_pole == 1);
  CHECK(ts.tp_opaque == doctest::Approx(ts.bl_time / std::sqrt(3.0)));
  REQUIRE(frn_reference_timescales(&p, 40.0, nullptr, &ts) == FRN_OK);
  CHECK(ts.has_pole == 0);
  CHECK(std::isnan(ts.tp_basin));
}

TEST_CASE("fit and slope helpers") {
  const double V = 1.0;
  const double E0[] = {0.3, 0.4, 0.5, 0.6, 0.7};
  double tp[5];
  for (int i = 0; i < 5; ++i) tp[i] = 2.0 + 3.0 / (V - E0[i]);
  frn_fit f;
  REQUIRE(frn_fit_tp(E0, tp, 5, V, &f) == FRN_OK);
  CHECK(f.slope == doctest::Approx(3.0));
  CHECK(f.intercept == doctest::Approx(2.0));
  const double same[] = {0.3, 0.3, 0.3, 0.3};
  CHECK(frn_fit_tp(same, tp, 4, V, &f) == FRN_ERR_FIT);

  std::vector<frn_peak> curve(6);
  for (int i = 0; i < 6; ++i) curve[i] = frn_peak{1.0 + i, 0.5 * (1.0 + i) + 1.0, 1.0, 0.0, 0};
  double slope = 0.0;
  REQUIRE(frn_slope_over(curve.data(), curve.size(), 2.0, 5.0, &slope) == FRN_OK);
  CHECK(slope == doctest::Approx(0.5));
  double xc = 0.0;
  int found = 1;
  REQUIRE(frn_frequency_crossover(curve.data(), curve.size(), 1.0, &xc, &found) == FRN_OK);
  CHECK(found == 0);
}

TEST_CASE("step model and oracle agree at early times") {
  const frn_params p = params(1.0, 0.5);
  frn_model* m = nullptr;
  REQUIRE(frn_step_create(&p, nullptr, &m) == FRN_OK);
  const double xs[] = {0.5, 1.0, 2.0, 0.5, 1.0, 2.0};
  const double ts[] = {0.5, 0.5, 0.5, 1.0, 1.0, 1.0};
  std::vector<double> model(6), oracle(6);
  for (int i = 0; i < 6; ++i) {
    double z[2];
    REQUIRE(frn_psi(m, xs[i], ts[i], z) == FRN_OK);
    model[i] = z[0] * z[0] + z[1] * z[1];
  }
  frn_oracle_stats st;
  REQUIRE(frn_oracle_density(&p, FRN_STEP, 0.02, 0.004, xs, ts, 6, oracle.data(), &st) == FRN_OK);
  CHECK(st.nx >= 1024);
  double err = 1.0;
  REQUIRE(frn_relative_l2(model.data(), oracle.data(), 6, &err) == FRN_OK);
  CHECK(err < 1e-3);
  frn_model_free(m);
}
