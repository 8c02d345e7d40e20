#include "spme/jacobian.hpp"

#include <cmath>

namespace spme {

namespace {

// Per-electrode linearization of the interface kinetics at a state.
struct KineticDerivs {
  std::vector<double> p;      // dj_k / dvbar
  std::vector<double> d;      // local part of dj_k / dce_k (excl. average term)
  std::vector<double> djds;   // dj_k / ds
  std::vector<double> w;      // 1 / (n_e ce_l), the average-term column factor
  std::vector<double> j;
  double p_bar = 0, s_bar = 0, u_bar = 0; // averages; u_bar = kappa * p_bar
};

KineticDerivs kinetics_derivs(const DaeSystem& dae, const Eigen::VectorXd& x, int e) {
  const StateLayout& L = dae.layout();
  const detail::Geometry& G = dae.geometry();
  const bool spme = dae.mode() == ModelMode::spme;

  const double s = x[L.surface(static_cast<Electrode>(e))];
  const double vbar = x[L.vbar[e]];
  const auto [u, du] =
      dae.ocp(static_cast<Electrode>(e)).eval_with_slope(s);
  const double root = std::sqrt(s * (1.0 - s));
  const double half = G.inv_tau_ct[e] * root;
  const double dhalf = G.inv_tau_ct[e] * (1.0 - 2.0 * s) / (2.0 * root);

  KineticDerivs k;
  if (!spme) {
    const double arg = G.beta * (vbar - u);
    const double sh = std::sinh(arg), ch = std::cosh(arg);
    k.j = {2.0 * half * sh};
    k.p = {2.0 * half * ch * G.beta};
    k.djds = {2.0 * dhalf * sh - k.p[0] * du};
    k.d = {0.0};
    k.p_bar = k.p[0];
    k.s_bar = k.djds[0];
    k.u_bar = 0.0;
    return k;
  }

  const int n = G.ce_count[e];
  k.p.resize(n);
  k.d.resize(n);
  k.djds.resize(n);
  k.w.resize(n);
  k.j.resize(n);

  double avg_log = 0.0;
  for (int kk = 0; kk < n; ++kk)
    avg_log += std::log(x[L.ce_begin + G.ce_offset[e] + kk]);
  avg_log /= n;

  for (int kk = 0; kk < n; ++kk) {
    const double ce = x[L.ce_begin + G.ce_offset[e] + kk];
    const double arg = G.beta * (vbar + G.kappa * (avg_log - std::log(ce)) - u);
    const double sh = std::sinh(arg), ch = std::cosh(arg);
    const double sqrt_ce = std::sqrt(ce);
    const double j = 2.0 * half * sqrt_ce * sh;
    const double p = 2.0 * half * sqrt_ce * ch * G.beta;
    k.j[kk] = j;
    k.p[kk] = p;
    k.djds[kk] = 2.0 * dhalf * sqrt_ce * sh - p * du;
    k.d[kk] = 0.5 * j / ce - p * G.kappa / ce;
    k.w[kk] = 1.0 / (n * ce);
    k.p_bar += p;
    k.s_bar += k.djds[kk];
  }
  k.p_bar /= n;
  k.s_bar /= n;
  k.u_bar = G.kappa * k.p_bar;
  return k;
}

} // namespace

void structured_jacobian(const DaeSystem& dae, const Eigen::VectorXd& x,
                         JacobianPieces& J) {
  const StateLayout& L = dae.layout();
  const detail::Geometry& G = dae.geometry();
  const bool spme = dae.mode() == ModelMode::spme;
  const int nr = L.n_r;
  const int ne = L.n_e;
  const int ni = 2 * (nr - 1) + ne;

  J.n = L.size;
  J.n_interior = ni;

  J.interior.resize(ni);
  for (int e = 0; e < 2; ++e)
    for (int i = 0; i < nr - 1; ++i) J.interior[e * (nr - 1) + i] = L.c_begin[e] + i;
  for (int m = 0; m < ne; ++m) J.interior[2 * (nr - 1) + m] = L.ce_begin + m;

  J.border = {L.surface(Electrode::neg), L.surface(Electrode::pos),
              L.vbar[0],                 L.vbar[1],
              L.voltage,                 L.current};

  J.chains = {JacobianPieces::Range{0, nr - 1},
              JacobianPieces::Range{nr - 1, nr - 1},
              JacobianPieces::Range{2 * (nr - 1), ne}};
  J.n_chains = spme ? 3 : 2;

  J.sub.setZero(ni);
  J.diag.setZero(ni);
  J.super.setZero(ni);
  J.border_rows.setZero(border_count, ni);
  J.border_cols.setZero(ni, border_count);
  J.border_block.setZero(border_count, border_count);

  const Eigen::VectorXd& mass = dae.mass_diagonal();
  J.mass_interior.resize(ni);
  for (int p = 0; p < ni; ++p) J.mass_interior[p] = mass[J.interior[p]];
  J.mass_border.resize(border_count);
  for (int b = 0; b < border_count; ++b) J.mass_border[b] = mass[J.border[b]];

  const KineticDerivs kin[2] = {kinetics_derivs(dae, x, 0), kinetics_derivs(dae, x, 1)};

  // particle chains; the coupling of the last interior cell to the surface
  // cell lands in the border columns
  for (int e = 0; e < 2; ++e) {
    const auto& fc = G.face_coef[e];
    const int base = e * (nr - 1);
    for (int i = 0; i < nr - 1; ++i) {
      const double inv_v = G.inv_volume[i];
      J.diag[base + i] = -(fc[i] + fc[i + 1]) * inv_v;
      if (i > 0) J.sub[base + i] = fc[i] * inv_v;
      if (i < nr - 2) J.super[base + i] = fc[i + 1] * inv_v;
    }
    J.border_cols(base + nr - 2, e == 0 ? border_surf_neg : border_surf_pos) =
        fc[nr - 1] * G.inv_volume[nr - 2];
  }

  // electrolyte chain: flux tridiagonal plus local kinetic diagonal;
  // the electrode-average coupling goes into the rank-1 terms
  if (spme) {
    const int base = 2 * (nr - 1);
    for (int m = 0; m < ne; ++m) {
      const double inv_h = 1.0 / G.width[m];
      J.diag[base + m] = -(G.trans[m] + G.trans[m + 1]) * inv_h;
      if (m > 0) J.sub[base + m] = G.trans[m] * inv_h;
      if (m < ne - 1) J.super[base + m] = G.trans[m + 1] * inv_h;
      J.border_cols(base + m, border_current) =
          (G.migration[m + 1] - G.migration[m]) * inv_h;
    }
    J.n_rank1 = 2;
    for (int e = 0; e < 2; ++e) {
      const int n = G.ce_count[e];
      const int begin = base + G.ce_offset[e];
      const double src = G.source_coef[e];
      J.rank1[e] = {begin, n};
      J.rank1_u[e].resize(n);
      J.rank1_w[e].resize(n);
      const int col_s = e == 0 ? border_surf_neg : border_surf_pos;
      const int col_v = e == 0 ? border_vbar_neg : border_vbar_pos;
      for (int kk = 0; kk < n; ++kk) {
        J.diag[begin + kk] += src * kin[e].d[kk];
        J.rank1_u[e][kk] = src * G.kappa * kin[e].p[kk];
        J.rank1_w[e][kk] = kin[e].w[kk];
        J.border_cols(begin + kk, col_s) = src * kin[e].djds[kk];
        J.border_cols(begin + kk, col_v) = src * kin[e].p[kk];
      }
    }
  } else {
    J.n_rank1 = 0;
  }

  // border rows
  for (int e = 0; e < 2; ++e) {
    const int row_s = e == 0 ? border_surf_neg : border_surf_pos;
    const int row_v = e == 0 ? border_vbar_neg : border_vbar_pos;
    const double inv_v = G.inv_volume[nr - 1];
    const double q3 = 3.0 * G.q_th[e];
    const double fc_last = G.face_coef[e][nr - 1];

    J.border_rows(row_s, e * (nr - 1) + nr - 2) = fc_last * inv_v;
    J.border_block(row_s, row_s) = -(fc_last + kin[e].s_bar) * inv_v;
    J.border_block(row_s, row_v) = -kin[e].p_bar * inv_v;

    J.border_block(row_v, row_s) = -q3 * kin[e].s_bar;
    J.border_block(row_v, row_v) = -q3 * kin[e].p_bar;
    J.border_block(row_v, border_current) = e == 0 ? -1.0 : 1.0;

    if (spme) {
      const int n = G.ce_count[e];
      const int begin = 2 * (nr - 1) + G.ce_offset[e];
      for (int kk = 0; kk < n; ++kk) {
        const double djbar = kin[e].d[kk] / n + kin[e].u_bar * kin[e].w[kk];
        J.border_rows(row_s, begin + kk) = -inv_v * djbar;
        J.border_rows(row_v, begin + kk) = -q3 * djbar;
        // terminal-voltage row, electrolyte overpotential part
        J.border_rows(border_voltage, begin + kk) =
            (e == 0 ? -1.0 : 1.0) * G.kappa * kin[e].w[kk];
      }
    }
  }

  J.border_block(border_voltage, border_vbar_neg) = -1.0;
  J.border_block(border_voltage, border_vbar_pos) = 1.0;
  J.border_block(border_voltage, border_voltage) = -1.0;
  J.border_block(border_voltage, border_current) = dae.params().r0;
  J.border_block(border_current, border_current) = -1.0;
}

JacobianPieces structured_jacobian(const DaeSystem& dae, const Eigen::VectorXd& x) {
  JacobianPieces J;
  structured_jacobian(dae, x, J);
  return J;
}

SparseMatrixd JacobianPieces::to_sparse() const {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(3 * n_interior + 2 * border_count * n_interior +
                                        border_count * border_count) +
               (n_rank1 > 0 ? static_cast<std::size_t>(rank1[0].len) * rank1[0].len +
                                  static_cast<std::size_t>(rank1[1].len) * rank1[1].len
                            : 0));
  for (int c = 0; c < n_chains; ++c) {
    const auto [begin, len] = chains[c];
    for (int p = begin; p < begin + len; ++p) {
      trip.emplace_back(interior[p], interior[p], diag[p]);
      if (p > begin) trip.emplace_back(interior[p], interior[p - 1], sub[p]);
      if (p < begin + len - 1) trip.emplace_back(interior[p], interior[p + 1], super[p]);
    }
  }
  for (int r = 0; r < n_rank1; ++r) {
    const auto [begin, len] = rank1[r];
    for (int i = 0; i < len; ++i)
      for (int j = 0; j < len; ++j)
        trip.emplace_back(interior[begin + i], interior[begin + j],
                          rank1_u[r][i] * rank1_w[r][j]);
  }
  for (int b = 0; b < border_count; ++b) {
    for (int p = 0; p < n_interior; ++p) {
      if (border_rows(b, p) != 0.0)
        trip.emplace_back(border[b], interior[p], border_rows(b, p));
      if (border_cols(p, b) != 0.0)
        trip.emplace_back(interior[p], border[b], border_cols(p, b));
    }
    for (int b2 = 0; b2 < border_count; ++b2)
      if (border_block(b, b2) != 0.0)
        trip.emplace_back(border[b], border[b2], border_block(b, b2));
  }
  SparseMatrixd m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrixd jacobian(const DaeSystem& dae, const Eigen::VectorXd& x) {
  dae.check_state(x);
  return structured_jacobian(dae, x).to_sparse();
}

SparseMatrixd ad_jacobian(const DaeModel& model, const Eigen::VectorXd& x) {
  const int n = model.size();
  std::vector<Dual> xd(n), fd(n);
  for (int i = 0; i < n; ++i) xd[i] = Dual(x[i]);
  std::vector<Eigen::Triplet<double>> trip;
  for (int j = 0; j < n; ++j) {
    xd[j].der = 1.0;
    model.residual(xd.data(), fd.data());
    for (int i = 0; i < n; ++i)
      if (fd[i].der != 0.0) trip.emplace_back(i, j, fd[i].der);
    xd[j].der = 0.0;
  }
  SparseMatrixd m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrixd fd_jacobian(const DaeModel& model, const Eigen::VectorXd& x,
                          double h_rel) {
  if (!(h_rel >= 1e-9 && h_rel <= 1e-3))
    throw DomainError("fd_jacobian: relative step must lie in [1e-9, 1e-3]");
  const int n = model.size();
  Eigen::VectorXd xp = x, fp(n), fm(n);
  std::vector<Eigen::Triplet<double>> trip;
  for (int j = 0; j < n; ++j) {
    const double h = std::max(h_rel * std::abs(x[j]), 1e-8);
    xp[j] = x[j] + h;
    model.residual(xp.data(), fp.data());
    xp[j] = x[j] - h;
    model.residual(xp.data(), fm.data());
    xp[j] = x[j];
    const double inv = 1.0 / (2.0 * h);
    for (int i = 0; i < n; ++i) {
      const double v = (fp[i] - fm[i]) * inv;
      if (v != 0.0) trip.emplace_back(i, j, v);
    }
  }
  SparseMatrixd m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

template <class Scalar>
void StructuredFactor<Scalar>::factor(const JacobianPieces& pieces, Scalar shift) {
  pieces_ = &pieces;
  const int ni = pieces.n_interior;
  low_.resize(ni);
  piv_.resize(ni);
  up_.resize(ni);
  for (int p = 0; p < ni; ++p) {
    piv_[p] = shift * pieces.mass_interior[p] - pieces.diag[p];
    low_[p] = -pieces.sub[p];
    up_[p] = -pieces.super[p];
  }
  for (int c = 0; c < pieces.n_chains; ++c) {
    const auto [begin, len] = pieces.chains[c];
    for (int p = begin + 1; p < begin + len; ++p) {
      if (std::abs(piv_[p - 1]) < 1e-280)
        throw NumericalError("structured factorization breakdown (chain pivot)");
      low_[p] /= piv_[p - 1];
      piv_[p] -= low_[p] * up_[p - 1];
    }
    if (len > 0 && std::abs(piv_[begin + len - 1]) < 1e-280)
      throw NumericalError("structured factorization breakdown (chain pivot)");
  }

  // Woodbury update for the electrolyte average couplings: the chain was
  // factored without the rank-1 terms, correct through the capacitance
  // matrix cap = I + W^T T^{-1} U with U = -u (A = shift*M - J).
  active_rank_ = pieces.n_rank1;
  if (active_rank_ > 0) {
    wood_z_.setZero(ni, active_rank_);
    Eigen::Matrix<Scalar, 2, 2> cap = Eigen::Matrix<Scalar, 2, 2>::Identity();
    const auto& chain = pieces.chains[2];
    for (int r = 0; r < active_rank_; ++r) {
      const auto [begin, len] = pieces.rank1[r];
      for (int i = 0; i < len; ++i)
        wood_z_(begin + i, r) = Scalar(-pieces.rank1_u[r][i]);
      // tridiagonal solve restricted to the electrolyte chain
      for (int p = chain.begin + 1; p < chain.begin + chain.len; ++p)
        wood_z_(p, r) -= low_[p] * wood_z_(p - 1, r);
      wood_z_(chain.begin + chain.len - 1, r) /= piv_[chain.begin + chain.len - 1];
      for (int p = chain.begin + chain.len - 2; p >= chain.begin; --p)
        wood_z_(p, r) = (wood_z_(p, r) - up_[p] * wood_z_(p + 1, r)) / piv_[p];
    }
    for (int r = 0; r < active_rank_; ++r) {
      const auto [begin, len] = pieces.rank1[r];
      for (int s = 0; s < active_rank_; ++s) {
        Scalar acc(0);
        for (int i = 0; i < len; ++i)
          acc += Scalar(pieces.rank1_w[r][i]) * wood_z_(begin + i, s);
        cap(r, s) += acc;
      }
    }
    const Scalar det = cap(0, 0) * cap(1, 1) - cap(0, 1) * cap(1, 0);
    if (std::abs(det) < 1e-280)
      throw NumericalError("structured factorization breakdown (Woodbury)");
    wood_cap_inv_(0, 0) = cap(1, 1) / det;
    wood_cap_inv_(1, 1) = cap(0, 0) / det;
    wood_cap_inv_(0, 1) = -cap(0, 1) / det;
    wood_cap_inv_(1, 0) = -cap(1, 0) / det;
  }

  // Schur complement over the six border variables
  border_solve_.resize(ni, border_count);
  Vector col(ni);
  for (int b = 0; b < border_count; ++b) {
    for (int p = 0; p < ni; ++p) col[p] = Scalar(-pieces.border_cols(p, b));
    solve_interior(col);
    border_solve_.col(b) = col;
  }
  Matrix schur(border_count, border_count);
  for (int b = 0; b < border_count; ++b)
    for (int b2 = 0; b2 < border_count; ++b2)
      schur(b, b2) = (b == b2 ? shift * pieces.mass_border[b] : Scalar(0)) -
                     Scalar(pieces.border_block(b, b2));
  // A_SI = -border_rows, so schur += border_rows * Y
  for (int b = 0; b < border_count; ++b)
    for (int b2 = 0; b2 < border_count; ++b2) {
      Scalar acc(0);
      for (int p = 0; p < pieces.n_interior; ++p)
        acc += Scalar(pieces.border_rows(b, p)) * border_solve_(p, b2);
      schur(b, b2) += acc;
    }
  schur_.compute(schur);
  if (!schur_.matrixLU().diagonal().cwiseAbs().minCoeff()) { /* unreachable guard */
  }
}

template <class Scalar>
void StructuredFactor<Scalar>::solve_interior(Vector& b) const {
  const JacobianPieces& p = *pieces_;
  for (int c = 0; c < p.n_chains; ++c) {
    const auto [begin, len] = p.chains[c];
    for (int i = begin + 1; i < begin + len; ++i) b[i] -= low_[i] * b[i - 1];
    if (len == 0) continue;
    b[begin + len - 1] /= piv_[begin + len - 1];
    for (int i = begin + len - 2; i >= begin; --i)
      b[i] = (b[i] - up_[i] * b[i + 1]) / piv_[i];
  }
  if (active_rank_ > 0) {
    Eigen::Matrix<Scalar, 2, 1> t;
    for (int r = 0; r < active_rank_; ++r) {
      const auto [begin, len] = p.rank1[r];
      Scalar acc(0);
      for (int i = 0; i < len; ++i) acc += Scalar(p.rank1_w[r][i]) * b[begin + i];
      t[r] = acc;
    }
    const Eigen::Matrix<Scalar, 2, 1> corr = wood_cap_inv_ * t;
    b -= wood_z_ * corr;
  }
}

template <class Scalar>
void StructuredFactor<Scalar>::solve(Vector& b) const {
  const JacobianPieces& p = *pieces_;
  Vector bi(p.n_interior);
  for (int i = 0; i < p.n_interior; ++i) bi[i] = b[p.interior[i]];
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> bs(border_count);
  for (int i = 0; i < border_count; ++i) bs[i] = b[p.border[i]];

  solve_interior(bi);
  for (int bidx = 0; bidx < border_count; ++bidx) {
    Scalar acc(0);
    for (int i = 0; i < p.n_interior; ++i)
      acc += Scalar(p.border_rows(bidx, i)) * bi[i];
    bs[bidx] += acc; // b_S - A_SI y with A_SI = -border_rows
  }
  const Vector zs = schur_.solve(bs);
  bi -= border_solve_ * zs;

  for (int i = 0; i < p.n_interior; ++i) b[p.interior[i]] = bi[i];
  for (int i = 0; i < border_count; ++i) b[p.border[i]] = zs[i];
}

template <class Scalar>
Scalar StructuredFactor<Scalar>::voltage_response() const {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e(border_count);
  e.setZero();
  e[border_current] = Scalar(1);
  const Vector zs = schur_.solve(e);
  return zs[border_voltage];
}

template class StructuredFactor<double>;
template class StructuredFactor<std::complex<double>>;

} // namespace spme
