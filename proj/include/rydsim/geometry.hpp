#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "rydsim/errors.hpp"

namespace rydsim {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

// Focused Gaussian addressing beam.  Lengths in um.
struct GaussianBeam {
  double waist = 2.54;       // um; 1/e^2 intensity radius at the focus
  double wavelength = 0.78;  // um
  Vec3 focus;
  Vec3 direction{0.0, 1.0, 0.0};  // propagation axis (normalized on use)

  void validate() const;

  // Rayleigh range X = pi w0^2 / lambda.
  double rayleigh_range() const { return std::acos(-1.0) * waist * waist / wavelength; }

  // Beam radius at axial distance l from the focus.
  double waist_at(double l) const {
    const double x = rayleigh_range();
    return waist * std::sqrt(x * x + l * l) / x;
  }

  // Axial and transverse coordinates of a site relative to the focus.
  double axial_offset(const Vec3& site) const;
  double transverse_offset(const Vec3& site) const;

  // Ratio of the field amplitude (hence Rabi coupling) at `site` to its
  // value at the focus: (w0/w(l)) * exp(-r_perp^2 / w(l)^2).
  double amplitude_scale(const Vec3& site) const;
};

// Finite 3D block of optical-lattice sites with spacing L, sized so that
// every site stays within the addressability range of a beam focused on the
// central (target) site.  The block extends N sites from the target along
// each transverse axis and 2N along the beam axis (y), with
// N = floor(0.13 * L / lambda); the longer axial extent reflects the slower
// axial falloff of a focused beam.
struct Lattice {
  double spacing = 16.5;     // um
  double wavelength = 0.78;  // um
  int nx = 0, ny = 0, nz = 0;
  std::vector<Vec3> sites;
  int target_index = 0;

  static Lattice cubic(double spacing, double wavelength);
  const Vec3& target() const { return sites.at(static_cast<std::size_t>(target_index)); }
};

// Van der Waals interaction V(d) = v_nn * (spacing/d)^6 between two atoms at
// distance d, where v_nn is the nearest-neighbour strength (rad/us).
double vdw_interaction(double v_nn, double spacing, double distance);

// Largest axial distance l_max over which a beam of transverse reach
// r_perp0 can still address a single site: pi * r_perp0^2 / (2*lambda).
// With the default reach r_perp0 = 0.46*L this is ~0.33*L^2/lambda.
double addressing_distance_bound(double r_perp0, double wavelength);
double addressing_distance_bound_default(double spacing, double wavelength);

// Residual phase 2 * domega * z / c accumulated between two drive tones with
// angular-frequency offset `domega` (rad/us) over a retroreflection path of
// length z (um).  Quantifies how precisely a mirror-formed tone pair keeps
// the relative phase of the two tones locked.
double retroreflection_phase_mismatch(double domega, double path_um);

// Per-site addressing summary relative to the lattice target.
struct SiteRecord {
  int index = 0;
  Vec3 position;
  double axial = 0.0;       // um along the beam
  double transverse = 0.0;  // um off the beam axis
  double rabi_scale = 1.0;
  double distance = 0.0;    // um from the target site
  double vdw_relative = 0.0;  // V(d) / V(nearest neighbour)
};

std::vector<SiteRecord> site_records(const Lattice& lattice, const GaussianBeam& beam);

}  // namespace rydsim
