#include "ksgeo/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ksgeo/errors.hpp"

// LAPACK tridiagonal eigensolver (selected eigenpairs by index range)
extern "C" void dstevx_(const char* jobz, const char* range, const int* n,
                        double* d, double* e, const double* vl,
                        const double* vu, const int* il, const int* iu,
                        const double* abstol, int* m, double* w, double* z,
                        const int* ldz, double* work, int* iwork, int* ifail,
                        int* info);

namespace ksgeo {

namespace {

// Highest tolerated ratio of boundary to peak amplitude of a requested
// eigenvector; larger means the state is visibly truncated by the walls.
constexpr double kBoundaryDecayTol = 1e-3;

struct FdEigenpairs {
  std::vector<double> values;           // count eigenvalues, ascending
  std::vector<std::vector<double>> vectors;  // count vectors over interior nodes
  std::vector<double> x;                // interior node coordinates
  double h = 0.0;                       // grid spacing
};

void validate_grid(const GridSpec& grid, int count) {
  if (grid.points < 3 || grid.points % 2 == 0)
    throw PreconditionError("grid points must be odd and >= 3");
  if (!(grid.half_width > 0.0))
    throw PreconditionError("grid half_width must be positive");
  if (count < 1) throw PreconditionError("eigenvalue count must be >= 1");
  if (count > grid.points / 4)
    throw PreconditionError("eigenvalue count exceeds points/4");
}

FdEigenpairs fd_eigenpairs(const GridSpec& grid, const OscillatorParams& params,
                           int count) {
  validate_grid(grid, count);
  const int n = grid.points - 2;  // interior nodes
  const double h = 2.0 * grid.half_width / (grid.points - 1);
  const double kin = 1.0 / (2.0 * params.m_ho * h * h);

  FdEigenpairs out;
  out.h = h;
  out.x.resize(n);
  std::vector<double> diag(n), sub(n);
  for (int i = 0; i < n; ++i) {
    const double x = -grid.half_width + (i + 1) * h;
    out.x[i] = x;
    diag[i] = 2.0 * kin + 0.5 * params.m_ho * params.omega * params.omega * x * x;
    sub[i] = -kin;
  }

  const char jobz = 'V', range = 'I';
  const double vl = 0.0, vu = 0.0;
  const int il = 1, iu = count, ldz = n;
  const double abstol = 0.0;
  int m = 0, info = 0;
  std::vector<double> w(n), z(static_cast<std::size_t>(n) * count);
  std::vector<double> work(5 * n);
  std::vector<int> iwork(5 * n), ifail(n);
  dstevx_(&jobz, &range, &n, diag.data(), sub.data(), &vl, &vu, &il, &iu,
          &abstol, &m, w.data(), z.data(), &ldz, work.data(), iwork.data(),
          ifail.data(), &info);
  if (info != 0 || m != count)
    throw StepFailureError("dstevx failed with info " + std::to_string(info));

  out.values.assign(w.begin(), w.begin() + count);
  out.vectors.resize(count);
  for (int k = 0; k < count; ++k) {
    out.vectors[k].assign(z.begin() + static_cast<std::size_t>(k) * n,
                          z.begin() + static_cast<std::size_t>(k + 1) * n);
    // fix an overall sign so results are reproducible bit for bit
    double lead = 0.0;
    for (double v : out.vectors[k])
      if (std::abs(v) > 1e-8) { lead = v; break; }
    if (lead < 0.0)
      for (double& v : out.vectors[k]) v = -v;
  }

  for (int k = 0; k < count; ++k) {
    const auto& v = out.vectors[k];
    double peak = 0.0;
    for (double val : v) peak = std::max(peak, std::abs(val));
    const double edge = std::max(std::abs(v.front()), std::abs(v.back()));
    if (edge > kBoundaryDecayTol * peak) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "grid too small: eigenstate %d has boundary amplitude "
                    "%.3e of peak (tolerance %.1e)",
                    k, edge / peak, kBoundaryDecayTol);
      throw GridTooSmallError(msg);
    }
  }
  return out;
}

}  // namespace

double classical_energy(const KSState& ks, const OscillatorParams& params) {
  const double s2 = norm_sq4(ks.s);
  const double sdot2 = norm_sq4(ks.sdot);
  return 0.5 * params.m_ho * sdot2 +
         0.5 * params.m_ho * params.omega * params.omega * s2;
}

std::vector<double> fd_eigenvalues_1d(const GridSpec& grid,
                                      const OscillatorParams& params,
                                      int count) {
  return fd_eigenpairs(grid, params, count).values;
}

std::vector<double> fd_eigenvector_1d(const GridSpec& grid,
                                      const OscillatorParams& params, int k) {
  if (k < 0) throw PreconditionError("eigenstate index must be >= 0");
  return fd_eigenpairs(grid, params, k + 1).vectors[k];
}

std::int64_t oscillator_degeneracy(int n, int dims) {
  if (n < 0) throw PreconditionError("level index must be >= 0");
  // C(n + dims - 1, dims - 1)
  std::int64_t num = 1, den = 1;
  for (int i = 1; i < dims; ++i) {
    num *= n + i;
    den *= i;
  }
  return num / den;
}

SpectrumResult spectrum_4d(const GridSpec& grid, const OscillatorParams& params,
                           int n_max) {
  if (n_max < 0) throw PreconditionError("n_max must be >= 0");
  const auto one_d = fd_eigenvalues_1d(grid, params, n_max + 1);

  SpectrumResult result;
  result.grid = grid;
  result.levels.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    auto& level = result.levels[n];
    level.n = n;
    level.analytic_energy = params.omega * (n + params.dims / 2.0);
    level.degeneracy = 0;
    double sum = 0.0;
    // all ordered multi-indices (k1..k4) with sum n
    for (int k1 = 0; k1 <= n; ++k1)
      for (int k2 = 0; k2 + k1 <= n; ++k2)
        for (int k3 = 0; k3 + k2 + k1 <= n; ++k3) {
          const int k4 = n - k1 - k2 - k3;
          sum += one_d[k1] + one_d[k2] + one_d[k3] + one_d[k4];
          ++level.degeneracy;
        }
    level.numeric_energy = sum / static_cast<double>(level.degeneracy);
    level.residual = level.numeric_energy - level.analytic_energy;
  }
  result.claim_comparison = result.levels[0].numeric_energy - 1.0;
  return result;
}

double uncertainty_product_1d(const GridSpec& grid,
                              const OscillatorParams& params, int k) {
  if (k < 0) throw PreconditionError("eigenstate index must be >= 0");
  const auto pairs = fd_eigenpairs(grid, params, k + 1);
  const auto& v = pairs.vectors[k];
  const int n = static_cast<int>(v.size());
  const double h = pairs.h;

  double norm = 0.0;
  for (double val : v) norm += val * val;
  norm *= h;
  const double scale = 1.0 / std::sqrt(norm);

  double mean_x = 0.0, mean_x2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = scale * v[i];
    mean_x += p * p * pairs.x[i] * h;
    mean_x2 += p * p * pairs.x[i] * pairs.x[i] * h;
  }
  const double var_x = mean_x2 - mean_x * mean_x;

  // momentum variance from forward differences, walls included as zeros;
  // <p> vanishes for a real eigenfunction
  double p2 = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double cur = (i < n) ? scale * v[i] : 0.0;
    const double d = (cur - prev) / h;
    p2 += d * d * h;
    prev = cur;
  }
  return std::sqrt(var_x * p2);
}

double mass_time_bound(double delta_m, UnitSystem units) {
  if (!(delta_m > 0.0)) throw std::domain_error("delta_m must be positive");
  if (units == UnitSystem::geometric) return 1.0 / (2.0 * delta_m);
  constexpr double hbar = 1.054571817e-34;  // J s
  constexpr double c = 299792458.0;         // m/s
  return hbar / (2.0 * c * c * delta_m);
}

}  // namespace ksgeo
