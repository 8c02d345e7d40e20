#pragma once

// Exact linearization of the DAE residual. Three routes to the same matrix:
//
//   jacobian()     analytic assembly in a structured form that mirrors the
//                  coupling graph (per-variable tridiagonal chains, one
//                  rank-1 electrolyte coupling per electrode from the
//                  electrode-average terms, and six dense border rows and
//                  columns: the two particle surface cells, the two
//                  double-layer voltages, terminal voltage and current);
//   ad_jacobian()  forward-mode dual-number propagation through the
//                  residual, column by column;
//   fd_jacobian()  central finite differences, the validation oracle.
//
// StructuredFactor solves (shift*M - J) z = b directly from the structured
// form: Thomas factorizations of the chains, a rank-2 Woodbury update for
// the electrolyte averages and a 6x6 Schur complement for the border. One
// factorization per shift, no reuse across shifts.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <complex>
#include <vector>

#include "spme/dae.hpp"

namespace spme {

using SparseMatrixd = Eigen::SparseMatrix<double>;

/// Border positions within JacobianPieces (fixed order).
enum BorderIndex {
  border_surf_neg = 0,
  border_surf_pos = 1,
  border_vbar_neg = 2,
  border_vbar_pos = 3,
  border_voltage = 4,
  border_current = 5,
};
inline constexpr int border_count = 6;

struct JacobianPieces {
  int n = 0;
  int n_interior = 0;

  std::vector<int> interior;             // global index of each interior position
  std::array<int, border_count> border{};

  struct Range {
    int begin = 0;
    int len = 0;
  };
  std::array<Range, 3> chains{};         // c_neg, c_pos, c_e (len 0 in SPM mode)
  int n_chains = 0;

  Eigen::VectorXd sub, diag, super;      // tridiagonal J entries per interior position

  std::array<Range, 2> rank1{};          // electrolyte average couplings (neg, pos)
  int n_rank1 = 0;
  std::array<Eigen::VectorXd, 2> rank1_u;
  std::array<Eigen::VectorXd, 2> rank1_w;

  Eigen::MatrixXd border_rows;           // border_count x n_interior
  Eigen::MatrixXd border_cols;           // n_interior x border_count
  Eigen::MatrixXd border_block;          // border_count x border_count

  Eigen::VectorXd mass_interior;
  Eigen::VectorXd mass_border;

  /// Reconstruct the full sparse Jacobian (row-major coupling order).
  SparseMatrixd to_sparse() const;
};

/// Analytic Jacobian of F at x in structured form.
void structured_jacobian(const DaeSystem& dae, const Eigen::VectorXd& x,
                         JacobianPieces& out);
JacobianPieces structured_jacobian(const DaeSystem& dae, const Eigen::VectorXd& x);

/// Analytic Jacobian of F at x (sparse). The sparsity pattern is fixed by
/// the mesh and mode, independent of the operating point.
SparseMatrixd jacobian(const DaeSystem& dae, const Eigen::VectorXd& x);

/// Jacobian via dual-number forward propagation; works for any DaeModel.
/// Exact zeros are dropped, so the pattern may be a subset of jacobian()'s.
SparseMatrixd ad_jacobian(const DaeModel& model, const Eigen::VectorXd& x);

/// Central finite differences with relative step h (absolute floor 1e-8).
SparseMatrixd fd_jacobian(const DaeModel& model, const Eigen::VectorXd& x,
                          double h_rel = 1e-6);

/// Direct solver for (shift*M - J) z = b built on JacobianPieces.
template <class Scalar>
class StructuredFactor {
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  /// Factor A = shift*M - J. Throws NumericalError on pivot breakdown.
  void factor(const JacobianPieces& pieces, Scalar shift);

  /// Solve A z = b in place; b uses the global state ordering.
  void solve(Vector& b) const;

  /// Entry `voltage` of A^{-1} e_current: the voltage response to a unit
  /// current input, i.e. the impedance when shift = j omega.
  Scalar voltage_response() const;

private:
  void solve_interior(Vector& b) const; // b indexed by interior position

  const JacobianPieces* pieces_ = nullptr;
  Vector low_, piv_, up_;               // factored chains
  Matrix wood_z_;                       // T^{-1} U for the electrolyte chain
  Eigen::Matrix<Scalar, 2, 2> wood_cap_inv_;
  int active_rank_ = 0;
  Matrix border_solve_;                 // A_II^{-1} A_IS
  Eigen::PartialPivLU<Matrix> schur_;
};

extern template class StructuredFactor<double>;
extern template class StructuredFactor<std::complex<double>>;

} // namespace spme
