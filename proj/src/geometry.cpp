#include "rydsim/geometry.hpp"

#include <cmath>

#include "rydsim/units.hpp"

namespace rydsim {

void GaussianBeam::validate() const {
  if (!(waist > 0.0)) throw ValidationError("GaussianBeam: waist must be positive");
  if (!(wavelength > 0.0)) throw ValidationError("GaussianBeam: wavelength must be positive");
  if (!(direction.norm() > 0.0)) throw ValidationError("GaussianBeam: zero direction vector");
}

double GaussianBeam::axial_offset(const Vec3& site) const {
  validate();
  const Vec3 d = direction * (1.0 / direction.norm());
  return (site - focus).dot(d);
}

double GaussianBeam::transverse_offset(const Vec3& site) const {
  validate();
  const Vec3 d = direction * (1.0 / direction.norm());
  const Vec3 rel = site - focus;
  const Vec3 perp = rel - d * rel.dot(d);
  return perp.norm();
}

double GaussianBeam::amplitude_scale(const Vec3& site) const {
  const double l = axial_offset(site);
  const double r = transverse_offset(site);
  const double w = waist_at(l);
  return (waist / w) * std::exp(-(r * r) / (w * w));
}

Lattice Lattice::cubic(double spacing, double wavelength) {
  if (!(spacing > 0.0) || !(wavelength > 0.0))
    throw ValidationError("Lattice: spacing and wavelength must be positive");
  Lattice lat;
  lat.spacing = spacing;
  lat.wavelength = wavelength;
  // floor with a small epsilon so exact integer ratios are kept.
  const int n = static_cast<int>(std::floor(0.13 * spacing / wavelength + 1e-9));
  lat.nx = 1 + n;
  lat.ny = 1 + 2 * n;
  lat.nz = 1 + n;
  lat.sites.reserve(static_cast<std::size_t>(lat.nx) * lat.ny * lat.nz);
  const int tx = lat.nx / 2, ty = lat.ny / 2, tz = lat.nz / 2;
  int index = 0;
  for (int i = 0; i < lat.nx; ++i)
    for (int j = 0; j < lat.ny; ++j)
      for (int k = 0; k < lat.nz; ++k, ++index) {
        lat.sites.push_back(Vec3{(i - tx) * spacing, (j - ty) * spacing, (k - tz) * spacing});
        if (i == tx && j == ty && k == tz) lat.target_index = index;
      }
  return lat;
}

double vdw_interaction(double v_nn, double spacing, double distance) {
  if (!(spacing > 0.0) || !(distance > 0.0))
    throw ValidationError("vdw_interaction: spacing and distance must be positive");
  const double ratio = spacing / distance;
  const double r2 = ratio * ratio;
  return v_nn * r2 * r2 * r2;
}

double addressing_distance_bound(double r_perp0, double wavelength) {
  if (!(r_perp0 > 0.0) || !(wavelength > 0.0))
    throw ValidationError("addressing_distance_bound: arguments must be positive");
  return 0.5 * units::pi * r_perp0 * r_perp0 / wavelength;
}

double addressing_distance_bound_default(double spacing, double wavelength) {
  return addressing_distance_bound(0.46 * spacing, wavelength);
}

double retroreflection_phase_mismatch(double domega, double path_um) {
  return 2.0 * domega * path_um / units::speed_of_light;
}

std::vector<SiteRecord> site_records(const Lattice& lattice, const GaussianBeam& beam) {
  std::vector<SiteRecord> records;
  records.reserve(lattice.sites.size());
  const Vec3& target = lattice.target();
  for (std::size_t i = 0; i < lattice.sites.size(); ++i) {
    const Vec3& site = lattice.sites[i];
    SiteRecord rec;
    rec.index = static_cast<int>(i);
    rec.position = site;
    rec.axial = beam.axial_offset(site);
    rec.transverse = beam.transverse_offset(site);
    rec.rabi_scale = beam.amplitude_scale(site);
    rec.distance = (site - target).norm();
    rec.vdw_relative = rec.distance > 0.0 ? std::pow(lattice.spacing / rec.distance, 6.0) : 0.0;
    records.push_back(rec);
  }
  return records;
}

}  // namespace rydsim
