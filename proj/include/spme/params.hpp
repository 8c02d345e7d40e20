#pragma once

// Cell parameters in two forms: the dimensional set a cell datasheet or
// characterisation campaign provides, and the grouped set that actually
// determines the model response. Only grouped parameters (plus the two
// electrode open-circuit potential curves) enter the simulation.

#include <string>
#include <utility>
#include <vector>

#include "spme/constants.hpp"
#include "spme/errors.hpp"

namespace spme {

/// Dimensional cell parameters. Subscripts: pos/neg electrode, sep separator.
struct DimensionalParameters {
  double volume_fraction_pos = 0;   // active material volume fraction
  double volume_fraction_neg = 0;
  double porosity_pos = 0;
  double porosity_neg = 0;
  double porosity_sep = 0;
  double max_conc_pos = 0;          // [mol/m^3]
  double max_conc_neg = 0;
  double thickness_pos = 0;         // [m]
  double thickness_neg = 0;
  double thickness_total = 0;       // electrodes + separator [m]
  double area = 0;                  // [m^2]
  double particle_radius_pos = 0;   // [m]
  double particle_radius_neg = 0;
  double diffusivity_pos = 0;       // [m^2/s]
  double diffusivity_neg = 0;
  double electrolyte_diffusivity = 0; // reference, [m^2/s]
  double dl_capacity_pos = 0;       // double-layer capacity [F/m^2]
  double dl_capacity_neg = 0;
  double exchange_coeff_pos = 0;    // ref. exchange current [(A/m^2)(m^3/mol)^1.5]
  double exchange_coeff_neg = 0;
  double t_plus = 0;                // cation transference number
  double bruggeman_pos = 1.5;
  double bruggeman_neg = 1.5;
  double bruggeman_sep = 1.5;
  double conc_0pct_pos = 0;         // particle concentration at 0% SOC [mol/m^3]
  double conc_0pct_neg = 0;
  double conc_100pct_pos = 0;       // particle concentration at 100% SOC [mol/m^3]
  double conc_100pct_neg = 0;
  double electrolyte_conc = 0;      // initial electrolyte concentration [mol/m^3]
  double series_resistance = 0;     // [ohm]
  double measured_capacity = 0;     // measured cell capacity [A s]

  /// Set a shared Bruggeman coefficient for all three regions.
  void set_bruggeman(double b) { bruggeman_pos = bruggeman_neg = bruggeman_sep = b; }

  void validate() const;
};

/// Grouped parameters: the minimal set (units of seconds, amperes, volts
/// only) that fixes the model response, plus measured capacity and
/// temperature.
struct GroupedParameters {
  double q_th_pos = 0;   // theoretical electrode capacity [A s]
  double q_th_neg = 0;
  double q_e = 0;        // reference electrolyte capacity [A s]
  double tau_d_pos = 0;  // particle diffusion timescale [s]
  double tau_d_neg = 0;
  double tau_e_pos = 0;  // electrolyte diffusion timescales [s]
  double tau_e_neg = 0;
  double tau_e_sep = 0;
  double tau_ct_pos = 0; // charge-transfer timescale [s]
  double tau_ct_neg = 0;
  double c_dl_pos = 0;   // double-layer capacitance [F]
  double c_dl_neg = 0;
  double zeta_pos = 0;   // relative porosity
  double zeta_neg = 0;
  double ell_pos = 0;    // relative thickness
  double ell_neg = 0;
  double c0_pos = 0;     // stoichiometry at 0% SOC
  double c0_neg = 0;
  double c100_pos = 0;   // stoichiometry at 100% SOC
  double c100_neg = 0;
  double t_plus = 0;
  double r0 = 0;         // series resistance [ohm]
  double q_meas = 0;     // measured cell capacity [A s]
  double temperature = 298.15; // [K]

  void validate() const;
};

/// Apply the grouping formulas to a dimensional set. Throws DomainError
/// naming the first offending field if any input is out of range.
GroupedParameters group_parameters(const DimensionalParameters& dim,
                                   const PhysicalConstants& constants = {});

/// Theoretical electrode capacities from the measured cell capacity and the
/// stoichiometry windows; returns (pos, neg), both positive.
std::pair<double, double> theoretical_capacities(double q_meas, double c0_pos,
                                                 double c100_pos, double c0_neg,
                                                 double c100_neg);

/// Typical charge-transfer resistances (pos, neg) [ohm]. Together with the
/// double-layer capacitances these set the corner frequencies of the two
/// kinetic semicircles.
std::pair<double, double> typical_ct_resistance(const GroupedParameters& g,
                                                const PhysicalConstants& constants = {});

/// Particle stoichiometries (pos, neg) at a given state of charge [%].
std::pair<double, double> stoichiometry_at_soc(double soc_percent,
                                               const GroupedParameters& g);

/// Names of the 18 parameters estimated from data, in canonical order.
const std::vector<std::string>& fit_parameter_names();

/// Read/write one grouped parameter by its canonical name (the file key).
double get_parameter(const GroupedParameters& g, const std::string& name);
void set_parameter(GroupedParameters& g, const std::string& name, double value);

/// All parameter file keys, in file order.
const std::vector<std::string>& parameter_file_keys();

/// LG M50 cell, dimensional values from the Chen et al. 2020
/// characterisation data set.
DimensionalParameters lgm50_dimensional();

/// LG M50 grouped parameter set (grouping of lgm50_dimensional, with
/// theoretical capacities tied to the measured capacity).
GroupedParameters lgm50_grouped();

} // namespace spme
