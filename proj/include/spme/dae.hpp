#pragma once

// Finite-volume discretization of the grouped single particle model with
// electrolyte (SPMe), or the plain SPM with electrolyte dynamics frozen,
// as a semi-explicit DAE
//
//     M dx/dt = F(x) + B i(t)
//
// with diagonal constant mass matrix M and a unit input vector B in the
// current entry. State layout:
//
//     x = [ c_neg (n_r cells) | c_pos (n_r cells) | c_e (n_x cells, SPMe) |
//           vbar_neg | vbar_pos | v | i ]
//
// Radial particle cells are uniform in r with the r^2 metric so particle
// lithium (integral of 3 r^2 c dr) is discretely conserved; electrolyte
// cells are uniform per region with harmonic-mean face transport and
// zero-flux outer boundaries. The last two rows of M are zero: voltage is
// fixed by the terminal-voltage relation and the final row pins the current
// state to the applied current. Charging current is positive.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <vector>

#include "spme/constants.hpp"
#include "spme/dual.hpp"
#include "spme/errors.hpp"
#include "spme/ocp.hpp"
#include "spme/params.hpp"

namespace spme {

using StateVector = Eigen::VectorXd;

enum class ModelMode { spme, spm };
enum class Electrode { neg = 0, pos = 1 };

struct Mesh {
  int radial_cells = 100;
  int neg_cells = 100;
  int sep_cells = 20;
  int pos_cells = 100;

  void validate() const {
    if (radial_cells < 2 || neg_cells < 2 || sep_cells < 2 || pos_cells < 2)
      throw DomainError("Mesh: every region needs at least 2 cells");
  }
};

struct StateLayout {
  int n_r = 0;                 // radial cells per particle
  int n_e = 0;                 // electrolyte cells (0 in SPM mode)
  int c_begin[2] = {0, 0};     // particle concentration blocks (neg, pos)
  int ce_begin = 0;
  int vbar[2] = {0, 0};
  int voltage = 0;
  int current = 0;
  int size = 0;

  int surface(Electrode e) const { return c_begin[static_cast<int>(e)] + n_r - 1; }
};

/// Abstract DAE with diagonal mass matrix, current input in the last row
/// and terminal voltage as a state. The residual is exposed for plain and
/// dual-number scalars so the same code path serves simulation and
/// linearization.
class DaeModel {
public:
  virtual ~DaeModel() = default;

  virtual int size() const = 0;
  virtual const Eigen::VectorXd& mass_diagonal() const = 0;
  virtual void residual(const double* x, double* f) const = 0;
  virtual void residual(const Dual* x, Dual* f) const = 0;
  virtual int voltage_index() const = 0;
  virtual int current_index() const = 0;

  /// Hard state guards; throws NumericalError naming the offending entry.
  virtual void check_state(const Eigen::VectorXd&) const {}

  void residual(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    f.resize(size());
    residual(x.data(), f.data());
  }

  /// Mass matrix in sparse form (diagonal; zero rows mark algebraic states).
  Eigen::SparseMatrix<double> mass_matrix() const;

  /// Input vector B: single unit entry in the current row.
  Eigen::VectorXd input_vector() const;
};

class DaeSystem; // below

namespace detail {

// Everything the residual and the analytic Jacobian share: cell geometry,
// face transport coefficients and kinetic scales, precomputed once at
// assembly.
struct Geometry {
  // radial, per electrode
  double radial_width = 0;
  std::vector<double> face_coef[2];  // r_f^2 / (tau_d h), index 0..n_r (boundary entries 0)
  std::vector<double> inv_volume;    // 3 / (r_{i+1}^3 - r_i^3), same for both electrodes
  std::vector<double> cell_volume;   // (r_{i+1}^3 - r_i^3) / 3

  // electrolyte (empty in SPM mode)
  std::vector<double> width;         // cell widths
  std::vector<double> zeta;          // porosity ratio per cell
  std::vector<int> region;           // 0 neg, 1 sep, 2 pos
  std::vector<double> trans;         // face transmissibility, 0 at outer faces
  std::vector<double> migration;     // (t+ / q_e) * w(x_face), 0 at outer faces
  int ce_count[2] = {0, 0};          // electrode cells (neg, pos)
  int ce_offset[2] = {0, 0};         // first electrolyte cell of each electrode
  double source_coef[2] = {0, 0};    // 3 q_th / (q_e ell)

  // kinetics
  double beta = 0;                   // F / (2 R T)
  double kappa = 0;                  // (2 R T / F)(1 - t+)
  double inv_tau_ct[2] = {0, 0};
  double q_th[2] = {0, 0};
  double c_dl[2] = {0, 0};
};

} // namespace detail

/// The assembled grouped SPMe/SPM. Immutable after construction and safe to
/// share across threads; residual evaluation has no hidden mutable state.
class DaeSystem final : public DaeModel {
public:
  DaeSystem(GroupedParameters g, OcpCurve ocp_pos, OcpCurve ocp_neg, Mesh mesh,
            ModelMode mode, PhysicalConstants constants);

  int size() const override { return layout_.size; }
  const Eigen::VectorXd& mass_diagonal() const override { return mass_; }
  void residual(const double* x, double* f) const override;
  void residual(const Dual* x, Dual* f) const override;
  int voltage_index() const override { return layout_.voltage; }
  int current_index() const override { return layout_.current; }
  void check_state(const Eigen::VectorXd& x) const override;

  const StateLayout& layout() const { return layout_; }
  const GroupedParameters& params() const { return params_; }
  const PhysicalConstants& constants() const { return constants_; }
  ModelMode mode() const { return mode_; }
  const Mesh& mesh() const { return mesh_; }
  const OcpCurve& ocp(Electrode e) const {
    return e == Electrode::pos ? ocp_pos_ : ocp_neg_;
  }
  const detail::Geometry& geometry() const { return geom_; }

  /// Volume-weighted particle mean concentration (integral of 3 r^2 c dr).
  double particle_mean(const Eigen::VectorXd& x, Electrode e) const;
  /// Total dimensionless electrolyte content (integral of zeta c_e dx);
  /// returns the equilibrium value in SPM mode.
  double electrolyte_content(const Eigen::VectorXd& x) const;

private:
  template <class T>
  void residual_impl(const T* x, T* f) const;

  GroupedParameters params_;
  OcpCurve ocp_pos_;
  OcpCurve ocp_neg_;
  Mesh mesh_;
  ModelMode mode_;
  PhysicalConstants constants_;
  StateLayout layout_;
  detail::Geometry geom_;
  Eigen::VectorXd mass_;
};

/// Build the DAE for a grouped parameter set. Validates parameters, curves
/// and mesh; the returned system is self-contained.
DaeSystem assemble_dae(const GroupedParameters& g, const OcpCurve& ocp_pos,
                       const OcpCurve& ocp_neg, const Mesh& mesh = {},
                       ModelMode mode = ModelMode::spme,
                       const PhysicalConstants& constants = {});

/// Stationary state at a given SOC: uniform particle concentrations from the
/// stoichiometry windows, rest electrolyte, zero current, open-circuit
/// voltage. The residual vanishes there (to roundoff).
StateVector equilibrium_state(const DaeSystem& dae, double soc_percent);

/// Per-cell interface quantities derived from a state, for diagnostics and
/// tests.
struct AuxFields {
  std::vector<double> molar_flux[2];      // j per electrode cell (or 1 value in SPM)
  std::vector<double> exchange_current[2];
  std::vector<double> overpotential[2];
  double avg_flux[2] = {0, 0};            // electrode-averaged j
  std::vector<double> electrolyte_flux;   // N_e at faces (SPMe)
  double electrolyte_overpotential = 0;
};

AuxFields evaluate_aux(const DaeSystem& dae, const StateVector& x);

} // namespace spme
