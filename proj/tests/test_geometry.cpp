#include <doctest.h>

#include <cmath>

#include "rydsim/errors.hpp"
#include "rydsim/geometry.hpp"
#include "rydsim/units.hpp"

using namespace rydsim;

TEST_SUITE("geometry") {

TEST_CASE("vec3 arithmetic") {
  const Vec3 a{1.0, 2.0, 3.0}, b{-1.0, 0.5, 2.0};
  CHECK((a - b).x == doctest::Approx(2.0));
  CHECK((a + b).y == doctest::Approx(2.5));
  CHECK((a * 2.0).z == doctest::Approx(6.0));
  CHECK(a.dot(b) == doctest::Approx(6.0));
  CHECK(Vec3{3.0, 4.0, 0.0}.norm() == doctest::Approx(5.0));
}

TEST_CASE("gaussian beam: Rayleigh range and radius growth") {
  GaussianBeam beam;
  beam.waist = 2.0;
  beam.wavelength = 0.8;
  const double x = units::pi * 4.0 / 0.8;
  CHECK(beam.rayleigh_range() == doctest::Approx(x).epsilon(1e-14));
  CHECK(beam.waist_at(0.0) == doctest::Approx(2.0));
  // One Rayleigh range out, the radius grows by sqrt(2).
  CHECK(beam.waist_at(x) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS([] { GaussianBeam b; b.waist = 0.0; b.validate(); }(), ValidationError);
  CHECK_THROWS_AS([] { GaussianBeam b; b.wavelength = -1.0; b.validate(); }(), ValidationError);
  CHECK_THROWS_AS(([] { GaussianBeam b; b.direction = {0.0, 0.0, 0.0}; b.validate(); }()), ValidationError);
}

TEST_CASE("gaussian beam: axial/transverse decomposition and amplitude") {
  GaussianBeam beam;
  beam.waist = 2.54;
  beam.wavelength = 0.78;
  beam.focus = {1.0, -2.0, 0.5};
  beam.direction = {0.0, 1.0, 0.0};

  const Vec3 site{1.0, 8.0, 0.5};  // purely axial offset of 10
  CHECK(beam.axial_offset(site) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(beam.transverse_offset(site) == doctest::Approx(0.0).epsilon(1e-12));
  const double x = beam.rayleigh_range();
  CHECK(beam.amplitude_scale(site) == doctest::Approx(x / std::hypot(x, 10.0)).epsilon(1e-13));

  const Vec3 off{4.0, -2.0, 0.5};  // purely transverse offset of 3
  CHECK(beam.axial_offset(off) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(beam.transverse_offset(off) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(beam.amplitude_scale(off) ==
        doctest::Approx(std::exp(-9.0 / (2.54 * 2.54))).epsilon(1e-13));

  // Direction need not be normalized.
  GaussianBeam tilted = beam;
  tilted.direction = {0.0, 5.0, 0.0};
  CHECK(tilted.amplitude_scale(site) == doctest::Approx(beam.amplitude_scale(site)).epsilon(1e-14));
}

TEST_CASE("on-axis amplitude at the reference working distance is 0.73") {
  // Rayleigh range X = 26 um (waist = sqrt(X * lambda / pi)) and axial
  // distance l = sqrt(6)*10 um give X/sqrt(X^2 + l^2) = 0.728.
  GaussianBeam beam;
  beam.wavelength = 0.78;
  beam.waist = std::sqrt(26.0 * 0.78 / units::pi);
  CHECK(beam.rayleigh_range() == doctest::Approx(26.0).epsilon(1e-12));
  const double l = std::sqrt(6.0) * 10.0;
  const double scale = beam.amplitude_scale({0.0, l, 0.0});
  CHECK(scale == doctest::Approx(26.0 / std::sqrt(26.0 * 26.0 + 600.0)).epsilon(1e-12));
  CHECK(scale == doctest::Approx(0.73).epsilon(0.005 / 0.73));
}

TEST_CASE("van der Waals interaction follows the inverse sixth power") {
  const double v0 = units::mhz(0.1);
  CHECK(vdw_interaction(v0, 10.0, 10.0) == doctest::Approx(v0).epsilon(1e-15));
  CHECK(vdw_interaction(v0, 10.0, 20.0) == doctest::Approx(v0 / 64.0).epsilon(1e-14));
  // Next-nearest diagonal neighbours in a cubic lattice: d = sqrt(3) L and
  // the far corner of the addressable block: d = sqrt(6) L.
  CHECK(vdw_interaction(v0, 10.0, std::sqrt(3.0) * 10.0) == doctest::Approx(v0 / 27.0).epsilon(1e-13));
  CHECK(vdw_interaction(v0, 10.0, std::sqrt(6.0) * 10.0) == doctest::Approx(v0 / 216.0).epsilon(1e-13));
  CHECK_THROWS_AS(vdw_interaction(v0, 10.0, 0.0), ValidationError);
  CHECK_THROWS_AS(vdw_interaction(v0, -1.0, 5.0), ValidationError);
}

TEST_CASE("addressing distance bound") {
  CHECK(addressing_distance_bound(2.0, 0.8) == doctest::Approx(units::pi * 4.0 / 1.6).epsilon(1e-14));
  // Default transverse reach 0.46 L makes the bound ~0.33 L^2 / lambda.
  const double bound = addressing_distance_bound_default(16.5, 0.78);
  const double exact = units::pi * std::pow(0.46 * 16.5, 2) / (2.0 * 0.78);
  CHECK(bound == doctest::Approx(exact).epsilon(1e-12));
  CHECK(bound == doctest::Approx(0.33 * 16.5 * 16.5 / 0.78).epsilon(0.01));
  CHECK_THROWS_AS(addressing_distance_bound(0.0, 0.8), ValidationError);
}

TEST_CASE("retroreflection phase mismatch between offset tones") {
  const double domega = units::mhz(8.0);  // 2*Delta for a mirror-formed pair
  const double path = 5.0e4;              // 5 cm in um
  CHECK(retroreflection_phase_mismatch(domega, path) ==
        doctest::Approx(2.0 * domega * path / units::speed_of_light).epsilon(1e-13));
}

TEST_CASE("cubic lattice block dimensions scale with spacing/wavelength") {
  const auto lat = Lattice::cubic(16.5, 0.78);
  CHECK(lat.nx == 3);
  CHECK(lat.ny == 5);
  CHECK(lat.nz == 3);
  CHECK(lat.sites.size() == 45);
  CHECK(lat.target().x == doctest::Approx(0.0));
  CHECK(lat.target().y == doctest::Approx(0.0));
  CHECK(lat.target().z == doctest::Approx(0.0));

  // Tighter spacing shrinks the block: 0.13 * 6 / 0.78 = 1.
  const auto small = Lattice::cubic(6.0, 0.78);
  CHECK(small.nx == 2);
  CHECK(small.ny == 3);
  CHECK(small.nz == 2);
  CHECK(small.sites.size() == 12);

  CHECK_THROWS_AS(Lattice::cubic(0.0, 0.78), ValidationError);
}

TEST_CASE("lattice geometry: extents and neighbour distances") {
  const auto lat = Lattice::cubic(16.5, 0.78);
  double min_d = 1e30, max_y = 0.0, max_x = 0.0;
  for (std::size_t i = 0; i < lat.sites.size(); ++i) {
    if (static_cast<int>(i) == lat.target_index) continue;
    min_d = std::min(min_d, (lat.sites[i] - lat.target()).norm());
    max_y = std::max(max_y, std::abs(lat.sites[i].y));
    max_x = std::max(max_x, std::abs(lat.sites[i].x));
  }
  CHECK(min_d == doctest::Approx(16.5).epsilon(1e-12));       // nearest neighbour
  CHECK(max_y == doctest::Approx(2.0 * 16.5).epsilon(1e-12)); // 2N along the beam axis
  CHECK(max_x == doctest::Approx(16.5).epsilon(1e-12));       // N across it
}

TEST_CASE("site records summarize beam coverage of the lattice") {
  const auto lat = Lattice::cubic(16.5, 0.78);
  GaussianBeam beam;
  beam.waist = 2.54;
  beam.wavelength = 0.78;
  beam.focus = lat.target();
  beam.direction = {0.0, 1.0, 0.0};
  const auto recs = site_records(lat, beam);
  REQUIRE(recs.size() == lat.sites.size());

  const auto& target = recs[static_cast<std::size_t>(lat.target_index)];
  CHECK(target.rabi_scale == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(target.distance == doctest::Approx(0.0));
  CHECK(target.vdw_relative == doctest::Approx(0.0));  // no self-interaction

  for (const auto& r : recs) {
    if (r.index == lat.target_index) continue;
    CHECK(r.distance >= 16.5 - 1e-9);
    CHECK(r.vdw_relative == doctest::Approx(std::pow(16.5 / r.distance, 6.0)).epsilon(1e-12));
    // Off-axis sites are strongly suppressed by the transverse Gaussian.
    if (r.transverse > 1.0) CHECK(r.rabi_scale < 1e-6);
  }

  // The worst off-target exposure along this beam is the nearest on-axis
  // neighbour, attenuated only by axial defocus.
  const double x = beam.rayleigh_range();
  double worst = 0.0;
  for (const auto& r : recs)
    if (r.index != lat.target_index) worst = std::max(worst, r.rabi_scale);
  CHECK(worst == doctest::Approx(x / std::hypot(x, 16.5)).epsilon(1e-12));
}

}  // TEST_SUITE
