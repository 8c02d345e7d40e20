#include "spme/dae.hpp"

#include <cmath>
#include <string>

namespace spme {

Eigen::SparseMatrix<double> DaeModel::mass_matrix() const {
  const int n = size();
  Eigen::SparseMatrix<double> m(n, n);
  std::vector<Eigen::Triplet<double>> trip;
  const Eigen::VectorXd& diag = mass_diagonal();
  for (int i = 0; i < n; ++i)
    if (diag[i] != 0.0) trip.emplace_back(i, i, diag[i]);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Eigen::VectorXd DaeModel::input_vector() const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size());
  b[current_index()] = 1.0;
  return b;
}

DaeSystem::DaeSystem(GroupedParameters g, OcpCurve ocp_pos, OcpCurve ocp_neg,
                     Mesh mesh, ModelMode mode, PhysicalConstants constants)
    : params_(std::move(g)),
      ocp_pos_(std::move(ocp_pos)),
      ocp_neg_(std::move(ocp_neg)),
      mesh_(mesh),
      mode_(mode),
      constants_(constants) {
  params_.validate();
  mesh_.validate();
  constants_.validate();
  constants_.temperature = params_.temperature;

  const int nr = mesh_.radial_cells;
  const bool spme = mode_ == ModelMode::spme;
  const int ne = spme ? mesh_.neg_cells + mesh_.sep_cells + mesh_.pos_cells : 0;

  layout_.n_r = nr;
  layout_.n_e = ne;
  layout_.c_begin[0] = 0;
  layout_.c_begin[1] = nr;
  layout_.ce_begin = 2 * nr;
  layout_.vbar[0] = 2 * nr + ne;
  layout_.vbar[1] = layout_.vbar[0] + 1;
  layout_.voltage = layout_.vbar[1] + 1;
  layout_.current = layout_.voltage + 1;
  layout_.size = layout_.current + 1;

  // radial geometry, shared volumes, per-electrode transport coefficient
  const double h = 1.0 / nr;
  geom_.radial_width = h;
  geom_.inv_volume.resize(nr);
  geom_.cell_volume.resize(nr);
  for (int i = 0; i < nr; ++i) {
    const double r0 = i * h, r1 = (i + 1) * h;
    geom_.cell_volume[i] = (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
    geom_.inv_volume[i] = 1.0 / geom_.cell_volume[i];
  }
  const double tau_d[2] = {params_.tau_d_neg, params_.tau_d_pos};
  for (int e = 0; e < 2; ++e) {
    geom_.face_coef[e].assign(nr + 1, 0.0);
    for (int fc = 1; fc < nr; ++fc) {
      const double r = fc * h;
      geom_.face_coef[e][fc] = r * r / (tau_d[e] * h);
    }
  }

  geom_.beta = constants_.faraday / (2.0 * constants_.gas * params_.temperature);
  geom_.kappa = (1.0 - params_.t_plus) / geom_.beta;
  geom_.inv_tau_ct[0] = 1.0 / params_.tau_ct_neg;
  geom_.inv_tau_ct[1] = 1.0 / params_.tau_ct_pos;
  geom_.q_th[0] = params_.q_th_neg;
  geom_.q_th[1] = params_.q_th_pos;
  geom_.c_dl[0] = params_.c_dl_neg;
  geom_.c_dl[1] = params_.c_dl_pos;

  if (spme) {
    const int nn = mesh_.neg_cells, ns = mesh_.sep_cells, np = mesh_.pos_cells;
    const double ell_n = params_.ell_neg, ell_p = params_.ell_pos;
    const double ell_s = 1.0 - ell_n - ell_p;
    const double hn = ell_n / nn, hs = ell_s / ns, hp = ell_p / np;

    geom_.ce_count[0] = nn;
    geom_.ce_count[1] = np;
    geom_.ce_offset[0] = 0;
    geom_.ce_offset[1] = nn + ns;
    geom_.source_coef[0] = 3.0 * params_.q_th_neg / (params_.q_e * ell_n);
    geom_.source_coef[1] = 3.0 * params_.q_th_pos / (params_.q_e * ell_p);

    geom_.width.resize(ne);
    geom_.zeta.resize(ne);
    geom_.region.resize(ne);
    const double tau_e[3] = {params_.tau_e_neg, params_.tau_e_sep, params_.tau_e_pos};
    const double zeta_of[3] = {params_.zeta_neg, 1.0, params_.zeta_pos};
    for (int k = 0; k < ne; ++k) {
      const int reg = k < nn ? 0 : (k < nn + ns ? 1 : 2);
      geom_.region[k] = reg;
      geom_.width[k] = reg == 0 ? hn : (reg == 1 ? hs : hp);
      geom_.zeta[k] = zeta_of[reg];
    }

    geom_.trans.assign(ne + 1, 0.0);
    geom_.migration.assign(ne + 1, 0.0);
    double xf = 0.0;
    std::vector<double> face_x(ne + 1);
    face_x[0] = 0.0;
    for (int k = 0; k < ne; ++k) {
      xf += geom_.width[k];
      face_x[k + 1] = xf;
    }
    for (int fc = 1; fc < ne; ++fc) {
      const double hl = geom_.width[fc - 1], hr = geom_.width[fc];
      const double tl = tau_e[geom_.region[fc - 1]], tr = tau_e[geom_.region[fc]];
      geom_.trans[fc] = 2.0 / (hl * tl + hr * tr);
      const double x = face_x[fc];
      double w;
      if (x < ell_n)
        w = x / ell_n;
      else if (x > 1.0 - ell_p)
        w = (1.0 - x) / ell_p;
      else
        w = 1.0;
      geom_.migration[fc] = params_.t_plus * w / params_.q_e;
    }
  }

  mass_ = Eigen::VectorXd::Zero(layout_.size);
  for (int i = 0; i < 2 * nr; ++i) mass_[i] = 1.0;
  for (int k = 0; k < ne; ++k) mass_[layout_.ce_begin + k] = geom_.zeta[k];
  mass_[layout_.vbar[0]] = params_.c_dl_neg;
  mass_[layout_.vbar[1]] = params_.c_dl_pos;
  // voltage and current rows stay zero: the algebraic constraints
}

template <class T>
void DaeSystem::residual_impl(const T* x, T* f) const {
  const StateLayout& L = layout_;
  const detail::Geometry& G = geom_;
  const bool spme = mode_ == ModelMode::spme;
  const T& current = x[L.current];

  T avg_log[2] = {T(0.0), T(0.0)};
  if (spme) {
    for (int e = 0; e < 2; ++e) {
      T acc(0.0);
      for (int k = 0; k < G.ce_count[e]; ++k)
        acc += log(x[L.ce_begin + G.ce_offset[e] + k]);
      avg_log[e] = acc / static_cast<double>(G.ce_count[e]);
    }
  }

  // interface kinetics: per-cell molar flux and its electrode average; the
  // source contribution is written straight into the electrolyte rows
  T avg_flux[2];
  for (int e = 0; e < 2; ++e) {
    const T& surf = x[L.surface(static_cast<Electrode>(e))];
    const auto [u, du] =
        (e == 0 ? ocp_neg_ : ocp_pos_).eval_with_slope(value_of(surf));
    const T u_surf = chain(u, du, surf);
    const T half_i0 = G.inv_tau_ct[e] * sqrt(surf * (1.0 - surf));
    const T& vbar = x[L.vbar[e]];

    if (spme) {
      T acc(0.0);
      for (int k = 0; k < G.ce_count[e]; ++k) {
        const int cell = G.ce_offset[e] + k;
        const T& ce = x[L.ce_begin + cell];
        const T v_local = vbar + G.kappa * (avg_log[e] - log(ce));
        const T j = 2.0 * half_i0 * sqrt(ce) * sinh(G.beta * (v_local - u_surf));
        f[L.ce_begin + cell] = G.source_coef[e] * j;
        acc += j;
      }
      avg_flux[e] = acc / static_cast<double>(G.ce_count[e]);
    } else {
      avg_flux[e] = 2.0 * half_i0 * sinh(G.beta * (vbar - u_surf));
    }
  }

  // solid diffusion: conservative flux differences over the r^2 metric
  for (int e = 0; e < 2; ++e) {
    const int base = L.c_begin[e];
    const int nr = L.n_r;
    T flux_prev(0.0); // zero flux at the particle centre
    for (int i = 0; i < nr; ++i) {
      const T flux_next = (i + 1 < nr)
                              ? T(G.face_coef[e][i + 1] * (x[base + i + 1] - x[base + i]))
                              : T(-avg_flux[e]);
      f[base + i] = (flux_next - flux_prev) * G.inv_volume[i];
      flux_prev = flux_next;
    }
  }

  // electrolyte diffusion and migration (separator cells carry no source)
  if (spme) {
    const int ne = L.n_e;
    for (int k = G.ce_count[0]; k < G.ce_offset[1]; ++k) f[L.ce_begin + k] = T(0.0);
    for (int fc = 1; fc < ne; ++fc) {
      const T n_face = -G.trans[fc] * (x[L.ce_begin + fc] - x[L.ce_begin + fc - 1]) -
                       G.migration[fc] * current;
      f[L.ce_begin + fc - 1] -= n_face / G.width[fc - 1];
      f[L.ce_begin + fc] += n_face / G.width[fc];
    }
  }

  // double layer charge balance: C dvbar/dt = (+/-) i - 3 Q_th jbar
  f[L.vbar[0]] = -current - 3.0 * G.q_th[0] * avg_flux[0];
  f[L.vbar[1]] = current - 3.0 * G.q_th[1] * avg_flux[1];

  // terminal voltage constraint and current pin
  T eta_e = spme ? T(G.kappa * (avg_log[1] - avg_log[0])) : T(0.0);
  f[L.voltage] =
      x[L.vbar[1]] - x[L.vbar[0]] + eta_e + params_.r0 * current - x[L.voltage];
  f[L.current] = -current;
}

void DaeSystem::residual(const double* x, double* f) const { residual_impl(x, f); }
void DaeSystem::residual(const Dual* x, Dual* f) const { residual_impl(x, f); }

void DaeSystem::check_state(const Eigen::VectorXd& x) const {
  for (int e = 0; e < 2; ++e) {
    const double s = x[layout_.surface(static_cast<Electrode>(e))];
    if (!(s > 1e-6 && s < 1.0 - 1e-6))
      throw NumericalError("surface stoichiometry guard tripped in " +
                           std::string(e == 0 ? "negative" : "positive") +
                           " electrode: c = " + std::to_string(s));
  }
  for (int k = 0; k < layout_.n_e; ++k) {
    if (!(x[layout_.ce_begin + k] > 0.0))
      throw NumericalError("electrolyte concentration non-positive in cell " +
                           std::to_string(k));
  }
}

double DaeSystem::particle_mean(const Eigen::VectorXd& x, Electrode e) const {
  const int base = layout_.c_begin[static_cast<int>(e)];
  double acc = 0.0;
  for (int i = 0; i < layout_.n_r; ++i) acc += geom_.cell_volume[i] * x[base + i];
  return 3.0 * acc; // total volume of the unit sphere in this metric is 1/3
}

double DaeSystem::electrolyte_content(const Eigen::VectorXd& x) const {
  if (mode_ == ModelMode::spm) {
    const double ell_s = 1.0 - params_.ell_pos - params_.ell_neg;
    return params_.zeta_neg * params_.ell_neg + ell_s + params_.zeta_pos * params_.ell_pos;
  }
  double acc = 0.0;
  for (int k = 0; k < layout_.n_e; ++k)
    acc += geom_.width[k] * geom_.zeta[k] * x[layout_.ce_begin + k];
  return acc;
}

DaeSystem assemble_dae(const GroupedParameters& g, const OcpCurve& ocp_pos,
                       const OcpCurve& ocp_neg, const Mesh& mesh, ModelMode mode,
                       const PhysicalConstants& constants) {
  return DaeSystem(g, ocp_pos, ocp_neg, mesh, mode, constants);
}

StateVector equilibrium_state(const DaeSystem& dae, double soc_percent) {
  const auto [c_pos, c_neg] = stoichiometry_at_soc(soc_percent, dae.params());
  const StateLayout& L = dae.layout();
  StateVector x = StateVector::Zero(L.size);
  for (int i = 0; i < L.n_r; ++i) {
    x[L.c_begin[0] + i] = c_neg;
    x[L.c_begin[1] + i] = c_pos;
  }
  for (int k = 0; k < L.n_e; ++k) x[L.ce_begin + k] = 1.0;
  const double u_neg = dae.ocp(Electrode::neg).eval(c_neg);
  const double u_pos = dae.ocp(Electrode::pos).eval(c_pos);
  x[L.vbar[0]] = u_neg;
  x[L.vbar[1]] = u_pos;
  x[L.voltage] = u_pos - u_neg;
  x[L.current] = 0.0;
  return x;
}

AuxFields evaluate_aux(const DaeSystem& dae, const StateVector& x) {
  const StateLayout& L = dae.layout();
  const detail::Geometry& G = dae.geometry();
  const bool spme = dae.mode() == ModelMode::spme;
  AuxFields aux;

  double avg_log[2] = {0.0, 0.0};
  if (spme) {
    for (int e = 0; e < 2; ++e) {
      double acc = 0.0;
      for (int k = 0; k < G.ce_count[e]; ++k)
        acc += std::log(x[L.ce_begin + G.ce_offset[e] + k]);
      avg_log[e] = acc / G.ce_count[e];
    }
    aux.electrolyte_overpotential = G.kappa * (avg_log[1] - avg_log[0]);
  }

  for (int e = 0; e < 2; ++e) {
    const double surf = x[L.surface(static_cast<Electrode>(e))];
    const auto [u, du] = dae.ocp(static_cast<Electrode>(e)).eval_with_slope(surf);
    (void)du;
    const double half_i0 = G.inv_tau_ct[e] * std::sqrt(surf * (1.0 - surf));
    const double vbar = x[L.vbar[e]];
    const int count = spme ? G.ce_count[e] : 1;
    aux.molar_flux[e].resize(count);
    aux.exchange_current[e].resize(count);
    aux.overpotential[e].resize(count);
    double acc = 0.0;
    for (int k = 0; k < count; ++k) {
      double ce = 1.0, v_local = vbar;
      if (spme) {
        ce = x[L.ce_begin + G.ce_offset[e] + k];
        v_local = vbar + G.kappa * (avg_log[e] - std::log(ce));
      }
      const double i0 = half_i0 * std::sqrt(ce);
      const double eta = v_local - u;
      const double j = 2.0 * i0 * std::sinh(G.beta * eta);
      aux.exchange_current[e][k] = i0;
      aux.overpotential[e][k] = eta;
      aux.molar_flux[e][k] = j;
      acc += j;
    }
    aux.avg_flux[e] = acc / count;
  }

  if (spme) {
    aux.electrolyte_flux.assign(L.n_e + 1, 0.0);
    for (int fc = 1; fc < L.n_e; ++fc)
      aux.electrolyte_flux[fc] =
          -G.trans[fc] * (x[L.ce_begin + fc] - x[L.ce_begin + fc - 1]) -
          G.migration[fc] * x[L.current];
  }
  return aux;
}

} // namespace spme
