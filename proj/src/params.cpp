#include "spme/params.hpp"

#include <cmath>
#include <unordered_map>

namespace spme {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw DomainError(std::string("parameter must be > 0: ") + name);
}

void require_fraction(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0))
    throw DomainError(std::string("parameter must be in (0,1): ") + name);
}

} // namespace

void DimensionalParameters::validate() const {
  require_positive(volume_fraction_pos, "volume_fraction_pos");
  require_positive(volume_fraction_neg, "volume_fraction_neg");
  require_fraction(porosity_pos, "porosity_pos");
  require_fraction(porosity_neg, "porosity_neg");
  require_fraction(porosity_sep, "porosity_sep");
  require_positive(max_conc_pos, "max_conc_pos");
  require_positive(max_conc_neg, "max_conc_neg");
  require_positive(thickness_pos, "thickness_pos");
  require_positive(thickness_neg, "thickness_neg");
  require_positive(thickness_total, "thickness_total");
  if (!(thickness_pos + thickness_neg < thickness_total))
    throw DomainError("electrode thicknesses must leave room for the separator");
  require_positive(area, "area");
  require_positive(particle_radius_pos, "particle_radius_pos");
  require_positive(particle_radius_neg, "particle_radius_neg");
  require_positive(diffusivity_pos, "diffusivity_pos");
  require_positive(diffusivity_neg, "diffusivity_neg");
  require_positive(electrolyte_diffusivity, "electrolyte_diffusivity");
  if (dl_capacity_pos < 0.0) throw DomainError("parameter must be >= 0: dl_capacity_pos");
  if (dl_capacity_neg < 0.0) throw DomainError("parameter must be >= 0: dl_capacity_neg");
  require_positive(exchange_coeff_pos, "exchange_coeff_pos");
  require_positive(exchange_coeff_neg, "exchange_coeff_neg");
  require_fraction(t_plus, "t_plus");
  require_positive(conc_0pct_pos, "conc_0pct_pos");
  require_positive(conc_0pct_neg, "conc_0pct_neg");
  require_positive(conc_100pct_pos, "conc_100pct_pos");
  require_positive(conc_100pct_neg, "conc_100pct_neg");
  require_positive(electrolyte_conc, "electrolyte_conc");
  if (series_resistance < 0.0) throw DomainError("parameter must be >= 0: series_resistance");
  require_positive(measured_capacity, "measured_capacity");
}

void GroupedParameters::validate() const {
  require_positive(q_th_pos, "q_th_pos");
  require_positive(q_th_neg, "q_th_neg");
  require_positive(q_e, "q_e");
  require_positive(tau_d_pos, "tau_d_pos");
  require_positive(tau_d_neg, "tau_d_neg");
  require_positive(tau_e_pos, "tau_e_pos");
  require_positive(tau_e_neg, "tau_e_neg");
  require_positive(tau_e_sep, "tau_e_sep");
  require_positive(tau_ct_pos, "tau_ct_pos");
  require_positive(tau_ct_neg, "tau_ct_neg");
  if (c_dl_pos < 0.0) throw DomainError("parameter must be >= 0: c_dl_pos");
  if (c_dl_neg < 0.0) throw DomainError("parameter must be >= 0: c_dl_neg");
  require_positive(zeta_pos, "zeta_pos");
  require_positive(zeta_neg, "zeta_neg");
  require_positive(ell_pos, "ell_pos");
  require_positive(ell_neg, "ell_neg");
  if (!(ell_pos + ell_neg < 1.0))
    throw DomainError("relative thicknesses must satisfy ell_pos + ell_neg < 1");
  for (double c : {c0_pos, c0_neg, c100_pos, c100_neg})
    if (!(c >= 0.0 && c <= 1.0))
      throw DomainError("stoichiometry bounds must lie in [0,1]");
  // The positive electrode empties on charge, the negative one fills.
  if (!(c100_pos < c0_pos)) throw DomainError("require c100_pos < c0_pos");
  if (!(c0_neg < c100_neg)) throw DomainError("require c0_neg < c100_neg");
  require_fraction(t_plus, "t_plus");
  if (r0 < 0.0) throw DomainError("parameter must be >= 0: r0");
  require_positive(q_meas, "q_meas");
  require_positive(temperature, "temperature");
}

GroupedParameters group_parameters(const DimensionalParameters& dim,
                                   const PhysicalConstants& constants) {
  dim.validate();
  constants.validate();
  const double F = constants.faraday;

  GroupedParameters g;
  g.q_th_pos = F * dim.volume_fraction_pos * dim.max_conc_pos * dim.thickness_pos * dim.area;
  g.q_th_neg = F * dim.volume_fraction_neg * dim.max_conc_neg * dim.thickness_neg * dim.area;
  g.q_e = F * dim.porosity_sep * dim.electrolyte_conc * dim.thickness_total * dim.area;

  g.tau_d_pos = dim.particle_radius_pos * dim.particle_radius_pos / dim.diffusivity_pos;
  g.tau_d_neg = dim.particle_radius_neg * dim.particle_radius_neg / dim.diffusivity_neg;

  const double l2 = dim.thickness_total * dim.thickness_total;
  g.tau_e_pos = dim.porosity_sep * l2 /
                (std::pow(dim.porosity_pos, dim.bruggeman_pos) * dim.electrolyte_diffusivity);
  g.tau_e_neg = dim.porosity_sep * l2 /
                (std::pow(dim.porosity_neg, dim.bruggeman_neg) * dim.electrolyte_diffusivity);
  g.tau_e_sep = l2 / (std::pow(dim.porosity_sep, dim.bruggeman_sep - 1.0) *
                      dim.electrolyte_diffusivity);

  const double sqrt_ce0 = std::sqrt(dim.electrolyte_conc);
  g.tau_ct_pos = F * dim.particle_radius_pos / (dim.exchange_coeff_pos * sqrt_ce0);
  g.tau_ct_neg = F * dim.particle_radius_neg / (dim.exchange_coeff_neg * sqrt_ce0);

  g.c_dl_pos = 3.0 * dim.volume_fraction_pos * dim.dl_capacity_pos * dim.thickness_pos *
               dim.area / dim.particle_radius_pos;
  g.c_dl_neg = 3.0 * dim.volume_fraction_neg * dim.dl_capacity_neg * dim.thickness_neg *
               dim.area / dim.particle_radius_neg;

  g.zeta_pos = dim.porosity_pos / dim.porosity_sep;
  g.zeta_neg = dim.porosity_neg / dim.porosity_sep;
  g.ell_pos = dim.thickness_pos / dim.thickness_total;
  g.ell_neg = dim.thickness_neg / dim.thickness_total;

  g.c0_pos = dim.conc_0pct_pos / dim.max_conc_pos;
  g.c0_neg = dim.conc_0pct_neg / dim.max_conc_neg;
  g.c100_pos = dim.conc_100pct_pos / dim.max_conc_pos;
  g.c100_neg = dim.conc_100pct_neg / dim.max_conc_neg;

  g.t_plus = dim.t_plus;
  g.r0 = dim.series_resistance;
  g.q_meas = dim.measured_capacity;
  g.temperature = constants.temperature;

  g.validate();
  return g;
}

std::pair<double, double> theoretical_capacities(double q_meas, double c0_pos,
                                                 double c100_pos, double c0_neg,
                                                 double c100_neg) {
  if (!(q_meas > 0.0)) throw DomainError("theoretical_capacities: q_meas must be > 0");
  const double window_pos = c100_pos - c0_pos;
  const double window_neg = c100_neg - c0_neg;
  if (window_pos == 0.0 || window_neg == 0.0)
    throw DomainError("theoretical_capacities: zero-width stoichiometry window");
  const double q_pos = -q_meas / window_pos;
  const double q_neg = q_meas / window_neg;
  if (!(q_pos > 0.0 && q_neg > 0.0))
    throw DomainError("theoretical_capacities: stoichiometry windows have the wrong sign");
  return {q_pos, q_neg};
}

std::pair<double, double> typical_ct_resistance(const GroupedParameters& g,
                                                const PhysicalConstants& constants) {
  const double scale = 2.0 * constants.gas * g.temperature / constants.faraday;
  return {scale * g.tau_ct_pos / (3.0 * g.q_th_pos),
          scale * g.tau_ct_neg / (3.0 * g.q_th_neg)};
}

std::pair<double, double> stoichiometry_at_soc(double soc_percent,
                                               const GroupedParameters& g) {
  if (!(soc_percent >= 0.0 && soc_percent <= 100.0))
    throw DomainError("stoichiometry_at_soc: soc must lie in [0,100]");
  const double frac = soc_percent / 100.0;
  return {g.c0_pos + frac * (g.c100_pos - g.c0_pos),
          g.c0_neg + frac * (g.c100_neg - g.c0_neg)};
}

namespace {

using FieldPtr = double GroupedParameters::*;

const std::vector<std::pair<std::string, FieldPtr>>& field_table() {
  static const std::vector<std::pair<std::string, FieldPtr>> table = {
      {"q_th_pos", &GroupedParameters::q_th_pos},
      {"q_th_neg", &GroupedParameters::q_th_neg},
      {"q_e", &GroupedParameters::q_e},
      {"tau_d_pos", &GroupedParameters::tau_d_pos},
      {"tau_d_neg", &GroupedParameters::tau_d_neg},
      {"tau_e_pos", &GroupedParameters::tau_e_pos},
      {"tau_e_neg", &GroupedParameters::tau_e_neg},
      {"tau_e_sep", &GroupedParameters::tau_e_sep},
      {"tau_ct_pos", &GroupedParameters::tau_ct_pos},
      {"tau_ct_neg", &GroupedParameters::tau_ct_neg},
      {"c_dl_pos", &GroupedParameters::c_dl_pos},
      {"c_dl_neg", &GroupedParameters::c_dl_neg},
      {"zeta_pos", &GroupedParameters::zeta_pos},
      {"zeta_neg", &GroupedParameters::zeta_neg},
      {"ell_pos", &GroupedParameters::ell_pos},
      {"ell_neg", &GroupedParameters::ell_neg},
      {"c0_pos", &GroupedParameters::c0_pos},
      {"c0_neg", &GroupedParameters::c0_neg},
      {"c100_pos", &GroupedParameters::c100_pos},
      {"c100_neg", &GroupedParameters::c100_neg},
      {"t_plus", &GroupedParameters::t_plus},
      {"r0", &GroupedParameters::r0},
      {"q_meas", &GroupedParameters::q_meas},
      {"temperature", &GroupedParameters::temperature},
  };
  return table;
}

FieldPtr find_field(const std::string& name) {
  for (const auto& [key, ptr] : field_table())
    if (key == name) return ptr;
  throw DomainError("unknown grouped parameter: " + name);
}

} // namespace

const std::vector<std::string>& fit_parameter_names() {
  static const std::vector<std::string> names = {
      "tau_d_pos", "tau_e_pos", "tau_ct_pos", "c_dl_pos", "zeta_pos", "c0_pos", "c100_pos",
      "tau_d_neg", "tau_e_neg", "tau_ct_neg", "c_dl_neg", "zeta_neg", "c0_neg", "c100_neg",
      "tau_e_sep", "q_e", "t_plus", "r0"};
  return names;
}

double get_parameter(const GroupedParameters& g, const std::string& name) {
  return g.*find_field(name);
}

void set_parameter(GroupedParameters& g, const std::string& name, double value) {
  g.*find_field(name) = value;
}

const std::vector<std::string>& parameter_file_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [key, ptr] : field_table()) k.push_back(key);
    return k;
  }();
  return keys;
}

DimensionalParameters lgm50_dimensional() {
  DimensionalParameters d;
  d.volume_fraction_pos = 0.665;
  d.volume_fraction_neg = 0.75;
  d.porosity_pos = 0.335;
  d.porosity_neg = 0.25;
  d.porosity_sep = 0.47;
  d.max_conc_pos = 63104.0;
  d.max_conc_neg = 33133.0;
  d.thickness_pos = 75.6e-6;
  d.thickness_neg = 85.2e-6;
  d.thickness_total = 172.8e-6; // 75.6 + 85.2 + 12 um separator
  d.area = 0.1027;
  d.particle_radius_pos = 5.22e-6;
  d.particle_radius_neg = 5.86e-6;
  d.diffusivity_pos = 4.0e-15;
  d.diffusivity_neg = 3.3e-14;
  d.electrolyte_diffusivity = 1.7694e-10; // electrolyte correlation at 1 kmol/m^3
  d.dl_capacity_pos = 0.2;
  d.dl_capacity_neg = 0.2;
  d.exchange_coeff_pos = 3.42e-6;
  d.exchange_coeff_neg = 6.48e-7;
  d.t_plus = 0.2594;
  d.set_bruggeman(1.5);
  d.conc_0pct_pos = 0.8540 * d.max_conc_pos;
  d.conc_0pct_neg = 0.02635 * d.max_conc_neg;
  d.conc_100pct_pos = 0.2638 * d.max_conc_pos;
  d.conc_100pct_neg = 0.9106 * d.max_conc_neg;
  d.electrolyte_conc = 1000.0;
  d.series_resistance = 0.01;
  d.measured_capacity = 18551.0;
  return d;
}

GroupedParameters lgm50_grouped() {
  GroupedParameters g = group_parameters(lgm50_dimensional());
  // Tie the electrode capacities to the measured capacity so that coulomb
  // counting and the stoichiometry windows are exactly consistent.
  std::tie(g.q_th_pos, g.q_th_neg) =
      theoretical_capacities(g.q_meas, g.c0_pos, g.c100_pos, g.c0_neg, g.c100_neg);
  return g;
}

} // namespace spme
