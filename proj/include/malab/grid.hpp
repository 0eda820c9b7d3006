#ifndef MALAB_GRID_HPP
#define MALAB_GRID_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "malab/errors.hpp"
#include "malab/rng.hpp"

namespace malab::grid {

/// Flat model torus of complex dimension n in {1, 2}: N grid points per real
/// axis on [0,1)^{2n}, spacing 1/N. N must be a power of two (the spectral
/// oracle diagonalizes the periodic stencil). The reference form is the flat
/// Kahler form, normalized so the associated volume measure is the uniform
/// probability measure (V_omega = 1).
struct TorusGrid {
  int n = 1;
  int N = 32;

  void validate() const {
    if (n != 1 && n != 2) throw_domain("bad-grid", "complex dimension must be 1 or 2");
    if (N < 8 || (N & (N - 1)) != 0) throw_domain("bad-grid", "N must be a power of two >= 8");
  }
  int real_dim() const { return 2 * n; }
  Eigen::Index size() const {
    Eigen::Index s = 1;
    for (int a = 0; a < real_dim(); ++a) s *= N;
    return s;
  }
  double dx() const { return 1.0 / N; }
  bool operator==(const TorusGrid& o) const { return n == o.n && N == o.N; }
};

/// Real scalar field on a TorusGrid. Axis order is (x1, y1[, x2, y2]) with
/// the last axis fastest (row-major).
struct TorusField {
  TorusGrid grid;
  Eigen::ArrayXd v;

  TorusField() = default;
  TorusField(TorusGrid g, Eigen::ArrayXd values) : grid(g), v(std::move(values)) {
    g.validate();
    if (v.size() != g.size()) throw_domain("bad-field", "field size does not match grid");
  }

  static TorusField constant(TorusGrid g, double c) {
    g.validate();
    return TorusField(g, Eigen::ArrayXd::Constant(g.size(), c));
  }

  double max() const { return v.maxCoeff(); }
  double min() const { return v.minCoeff(); }
  double mean() const { return v.mean(); }
};

/// Samples f(coords) on the grid, coords in [0,1)^{2n} ordered (x1,y1[,x2,y2]).
TorusField sample_field(TorusGrid g, const std::function<double(const Eigen::VectorXd&)>& f);

/// Random band-limited trigonometric field (deterministic in the seed):
/// sum of cosines with frequencies up to kmax per axis, scaled to the
/// requested amplitude, mean zero.
TorusField random_trig_field(TorusGrid g, Rng& rng, int kmax, double amplitude);

/// Hermitian complex Hessian of omega + dd^c phi relative to omega, from
/// central second differences; exact on quadratics away from the periodic
/// wrap. Entries: for n=1 only h11 (real); for n=2 also h22 and the complex
/// off-diagonal re12 + i im12. Eigenvalues are sorted ascending.
struct HessianField {
  TorusGrid grid;
  Eigen::ArrayXd h11, h22, re12, im12;
  Eigen::ArrayXd lam1, lam2;  // lam2 unused for n=1

  Eigen::VectorXd eigenvalues(Eigen::Index i) const {
    if (grid.n == 1) return Eigen::VectorXd::Constant(1, lam1(i));
    Eigen::VectorXd out(2);
    out << lam1(i), lam2(i);
    return out;
  }
};

HessianField complex_hessian(const TorusField& phi);

/// Pointwise product of the relative eigenvalues (the discrete
/// Monge-Ampere density against the uniform probability measure).
TorusField ma_density(const TorusField& phi);

struct MaReport {
  TorusField density;
  bool psh_clean = true;    // all eigenvalues > 0
  Eigen::Index negative_points = 0;
  double min_eigenvalue = 0.0;
};

MaReport ma_density_report(const TorusField& phi);

/// L^r norm against the uniform probability measure, stable for large r.
double lp_norm(const TorusField& phi, double r);

/// max - min.
double osc(const TorusField& phi);

/// Mean of the squared forward-difference gradient, ||grad phi||_2^2.
double grad_energy(const TorusField& phi);

/// Multi-index helpers (kept header-inline; sweeps are index-heavy).
inline Eigen::Index idx2(int N, int ix, int iy) {
  return Eigen::Index(ix) * N + iy;
}
inline Eigen::Index idx4(int N, int i0, int i1, int i2, int i3) {
  return ((Eigen::Index(i0) * N + i1) * N + i2) * N + i3;
}

/// Field binary format: magic "MAFLD", u32 n, u32 N, then N^{2n} little-
/// endian f64 in row-major axis order.
void write_field(const std::string& path, const TorusField& f);
TorusField read_field(const std::string& path);

/// CSV export for small grids: one line per point, indices then value.
void write_field_csv(const std::string& path, const TorusField& f);

}  // namespace malab::grid

#endif
