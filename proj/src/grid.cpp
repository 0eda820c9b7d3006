#include "malab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace malab::grid {

TorusField sample_field(TorusGrid g, const std::function<double(const Eigen::VectorXd&)>& f) {
  g.validate();
  Eigen::ArrayXd v(g.size());
  const int N = g.N;
  const double h = g.dx();
  if (g.n == 1) {
    Eigen::VectorXd x(2);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        x << i * h, j * h;
        v(idx2(N, i, j)) = f(x);
      }
  } else {
    Eigen::VectorXd x(4);
    for (int i0 = 0; i0 < N; ++i0)
      for (int i1 = 0; i1 < N; ++i1)
        for (int i2 = 0; i2 < N; ++i2)
          for (int i3 = 0; i3 < N; ++i3) {
            x << i0 * h, i1 * h, i2 * h, i3 * h;
            v(idx4(N, i0, i1, i2, i3)) = f(x);
          }
  }
  return TorusField(g, std::move(v));
}

TorusField random_trig_field(TorusGrid g, Rng& rng, int kmax, double amplitude) {
  g.validate();
  const int d = g.real_dim();
  const int modes = 2 * d * kmax;  // a cosine pair per axis and frequency
  std::vector<Eigen::VectorXd> freq;
  std::vector<double> amp, phase;
  for (int axis = 0; axis < d; ++axis)
    for (int k = 1; k <= kmax; ++k) {
      Eigen::VectorXd q = Eigen::VectorXd::Zero(d);
      q(axis) = k;
      // a second mixed frequency keeps the field genuinely multi-dimensional
      q((axis + 1) % d) = double(int(rng.below(2 * k + 1))) - k;
      freq.push_back(q);
      amp.push_back(rng.uniform(-1.0, 1.0) / (1.0 + k * k));
      phase.push_back(rng.uniform(0.0, 6.283185307179586));
      // second member of the pair
      q((axis + 1) % d) = double(int(rng.below(2 * k + 1))) - k;
      freq.push_back(q);
      amp.push_back(rng.uniform(-1.0, 1.0) / (1.0 + k * k));
      phase.push_back(rng.uniform(0.0, 6.283185307179586));
    }
  TorusField out = sample_field(g, [&](const Eigen::VectorXd& x) {
    double acc = 0.0;
    for (int m = 0; m < modes; ++m)
      acc += amp[m] * std::cos(6.283185307179586 * freq[m].dot(x) + phase[m]);
    return acc;
  });
  out.v -= out.v.mean();
  const double cur = std::max(out.v.maxCoeff(), -out.v.minCoeff());
  if (cur > 0) out.v *= amplitude / cur;
  return out;
}

namespace {

// second differences on the periodic grid; mask = N-1 (N a power of two)
struct Stencil2 {
  const Eigen::ArrayXd& u;
  int N;
  int mask;
  double inv_h2;

  double dxx(int i, int j) const {
    return (u(idx2(N, (i + 1) & mask, j)) + u(idx2(N, (i - 1) & mask, j)) -
            2.0 * u(idx2(N, i, j))) * inv_h2;
  }
  double dyy(int i, int j) const {
    return (u(idx2(N, i, (j + 1) & mask)) + u(idx2(N, i, (j - 1) & mask)) -
            2.0 * u(idx2(N, i, j))) * inv_h2;
  }
};

struct Stencil4 {
  const Eigen::ArrayXd& u;
  int N;
  int mask;
  double inv_h2;

  double at(int a, int b, int c, int d) const {
    return u(idx4(N, a & mask, b & mask, c & mask, d & mask));
  }

  double dii(const int i[4], int axis) const {
    int p[4] = {i[0], i[1], i[2], i[3]};
    int m[4] = {i[0], i[1], i[2], i[3]};
    ++p[axis];
    --m[axis];
    return (at(p[0], p[1], p[2], p[3]) + at(m[0], m[1], m[2], m[3]) -
            2.0 * at(i[0], i[1], i[2], i[3])) * inv_h2;
  }
  double dij(const int i[4], int a, int b) const {
    int pp[4] = {i[0], i[1], i[2], i[3]}, pm[4] = {i[0], i[1], i[2], i[3]};
    int mp[4] = {i[0], i[1], i[2], i[3]}, mm[4] = {i[0], i[1], i[2], i[3]};
    ++pp[a]; ++pp[b];
    ++pm[a]; --pm[b];
    --mp[a]; ++mp[b];
    --mm[a]; --mm[b];
    return (at(pp[0], pp[1], pp[2], pp[3]) - at(pm[0], pm[1], pm[2], pm[3]) -
            at(mp[0], mp[1], mp[2], mp[3]) + at(mm[0], mm[1], mm[2], mm[3])) *
           0.25 * inv_h2;
  }
};

}  // namespace

HessianField complex_hessian(const TorusField& phi) {
  phi.grid.validate();
  const int N = phi.grid.N;
  const int mask = N - 1;
  const double inv_h2 = double(N) * double(N);
  HessianField H;
  H.grid = phi.grid;
  const Eigen::Index M = phi.grid.size();
  H.h11.resize(M);
  H.lam1.resize(M);
  if (phi.grid.n == 1) {
    Stencil2 st{phi.v, N, mask, inv_h2};
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const Eigen::Index id = idx2(N, i, j);
        H.h11(id) = 0.25 * (st.dxx(i, j) + st.dyy(i, j));
        H.lam1(id) = 1.0 + H.h11(id);
      }
    return H;
  }
  H.h22.resize(M);
  H.re12.resize(M);
  H.im12.resize(M);
  H.lam2.resize(M);
  Stencil4 st{phi.v, N, mask, inv_h2};
  // axes: 0 = x1, 1 = y1, 2 = x2, 3 = y2
  for (int i0 = 0; i0 < N; ++i0)
    for (int i1 = 0; i1 < N; ++i1)
      for (int i2 = 0; i2 < N; ++i2)
        for (int i3 = 0; i3 < N; ++i3) {
          const int ii[4] = {i0, i1, i2, i3};
          const Eigen::Index id = idx4(N, i0, i1, i2, i3);
          const double a = 0.25 * (st.dii(ii, 0) + st.dii(ii, 1));
          const double c = 0.25 * (st.dii(ii, 2) + st.dii(ii, 3));
          const double re = 0.25 * (st.dij(ii, 0, 2) + st.dij(ii, 1, 3));
          const double im = 0.25 * (st.dij(ii, 0, 3) - st.dij(ii, 1, 2));
          H.h11(id) = a;
          H.h22(id) = c;
          H.re12(id) = re;
          H.im12(id) = im;
          const double mid = 1.0 + 0.5 * (a + c);
          const double rad = std::sqrt(0.25 * (a - c) * (a - c) + re * re + im * im);
          H.lam1(id) = mid - rad;
          H.lam2(id) = mid + rad;
        }
  return H;
}

MaReport ma_density_report(const TorusField& phi) {
  const HessianField H = complex_hessian(phi);
  MaReport rep;
  Eigen::ArrayXd dens;
  if (phi.grid.n == 1) {
    dens = H.lam1;
  } else {
    dens = H.lam1 * H.lam2;
  }
  rep.min_eigenvalue = H.lam1.minCoeff();
  rep.negative_points = (H.lam1 <= 0.0).count();
  rep.psh_clean = (rep.negative_points == 0);
  rep.density = TorusField(phi.grid, std::move(dens));
  return rep;
}

TorusField ma_density(const TorusField& phi) { return ma_density_report(phi).density; }

double lp_norm(const TorusField& phi, double r) {
  if (r < 1.0) throw_domain("bad-exponent", "L^r norms need r >= 1");
  const double m = phi.v.abs().maxCoeff();
  if (m == 0.0) return 0.0;
  // factor out the max so that r up to ~1e6 stays in range
  const double s = (phi.v.abs() / m).pow(r).mean();
  return m * std::pow(s, 1.0 / r);
}

double osc(const TorusField& phi) { return phi.v.maxCoeff() - phi.v.minCoeff(); }

double grad_energy(const TorusField& phi) {
  const int N = phi.grid.N;
  const int mask = N - 1;
  const double inv_h = double(N);
  double acc = 0.0;
  if (phi.grid.n == 1) {
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double c = phi.v(idx2(N, i, j));
        const double gx = (phi.v(idx2(N, (i + 1) & mask, j)) - c) * inv_h;
        const double gy = (phi.v(idx2(N, i, (j + 1) & mask)) - c) * inv_h;
        acc += gx * gx + gy * gy;
      }
  } else {
    for (int i0 = 0; i0 < N; ++i0)
      for (int i1 = 0; i1 < N; ++i1)
        for (int i2 = 0; i2 < N; ++i2)
          for (int i3 = 0; i3 < N; ++i3) {
            const double c = phi.v(idx4(N, i0, i1, i2, i3));
            const double g0 = (phi.v(idx4(N, (i0 + 1) & mask, i1, i2, i3)) - c) * inv_h;
            const double g1 = (phi.v(idx4(N, i0, (i1 + 1) & mask, i2, i3)) - c) * inv_h;
            const double g2 = (phi.v(idx4(N, i0, i1, (i2 + 1) & mask, i3)) - c) * inv_h;
            const double g3 = (phi.v(idx4(N, i0, i1, i2, (i3 + 1) & mask)) - c) * inv_h;
            acc += g0 * g0 + g1 * g1 + g2 * g2 + g3 * g3;
          }
  }
  return acc / double(phi.grid.size());
}

void write_field(const std::string& path, const TorusField& f) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw Error(ErrorKind::Io, "open-failed", "cannot open " + path);
  const char magic[5] = {'M', 'A', 'F', 'L', 'D'};
  std::fwrite(magic, 1, 5, fp);
  const std::uint32_t n = std::uint32_t(f.grid.n), N = std::uint32_t(f.grid.N);
  std::fwrite(&n, 4, 1, fp);
  std::fwrite(&N, 4, 1, fp);
  std::fwrite(f.v.data(), 8, std::size_t(f.v.size()), fp);
  std::fclose(fp);
}

TorusField read_field(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw Error(ErrorKind::Io, "open-failed", "cannot open " + path);
  char magic[5];
  std::uint32_t n = 0, N = 0;
  bool ok = std::fread(magic, 1, 5, fp) == 5 && std::memcmp(magic, "MAFLD", 5) == 0 &&
            std::fread(&n, 4, 1, fp) == 1 && std::fread(&N, 4, 1, fp) == 1;
  if (!ok) {
    std::fclose(fp);
    throw Error(ErrorKind::Io, "bad-magic", "not a MAFLD field file: " + path);
  }
  TorusGrid g{int(n), int(N)};
  g.validate();
  Eigen::ArrayXd v(g.size());
  ok = std::fread(v.data(), 8, std::size_t(v.size()), fp) == std::size_t(v.size());
  std::fclose(fp);
  if (!ok) throw Error(ErrorKind::Io, "truncated", "field file too short: " + path);
  return TorusField(g, std::move(v));
}

void write_field_csv(const std::string& path, const TorusField& f) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw Error(ErrorKind::Io, "open-failed", "cannot open " + path);
  const int N = f.grid.N;
  if (f.grid.n == 1) {
    std::fprintf(fp, "ix,iy,value\n");
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        std::fprintf(fp, "%d,%d,%.17g\n", i, j, f.v(idx2(N, i, j)));
  } else {
    std::fprintf(fp, "ix1,iy1,ix2,iy2,value\n");
    for (int i0 = 0; i0 < N; ++i0)
      for (int i1 = 0; i1 < N; ++i1)
        for (int i2 = 0; i2 < N; ++i2)
          for (int i3 = 0; i3 < N; ++i3)
            std::fprintf(fp, "%d,%d,%d,%d,%.17g\n", i0, i1, i2, i3,
                         f.v(idx4(N, i0, i1, i2, i3)));
  }
  std::fclose(fp);
}

}  // namespace malab::grid
