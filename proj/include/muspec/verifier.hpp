#pragma once

#include <vector>

#include <Eigen/Dense>

#include "muspec/spectrum.hpp"

namespace muspec {

/// Certified enclosures for the extreme eigenvalues of a Hermitian matrix.
/// The Gershgorin sides (min_lower, max_upper) are rigorous up to the entry
/// error budget; the estimates are Rayleigh quotients from power iteration,
/// which bracket from the inside: min_lower <= eig_min <= min_estimate and
/// max_estimate <= eig_max <= max_upper.
struct EigBounds {
  double min_lower = 0.0;
  double min_estimate = 0.0;
  double max_estimate = 0.0;
  double max_upper = 0.0;
  double min_residual = 0.0;
  double max_residual = 0.0;
};

struct GramReport {
  int size = 0;
  Eigen::MatrixXcd gram;       // G(i,j) = mu-hat(freq_i - freq_j)
  Eigen::MatrixXd entry_err;   // certified per-entry absolute error
  double schur_c = 0.0;        // exact Schur constant of the finite truncation
  double schur_tail = 0.0;     // certified bound for the infinite spectrum
  EigBounds eig;
  double bessel_bound = 0.0;   // 1 + schur_tail
  double riesz_lower = 0.0;    // sqrt of the certified eig_min lower bound
  double riesz_upper = 0.0;    // sqrt of the certified eig_max upper bound
  bool riesz_ok = false;
  double worst_pair_violation = 0.0;  // max over pairs of |G| - rho^d, clipped at 0
};

struct BeurlingWindow {
  int center_index = -1;  // -1 means the origin
  int log2_h = 0;
  long long count = 0;
  double normalized = 0.0;  // count / h^r
};

struct BeurlingEstimate {
  double r = 0.0;
  double density_r = 0.0;  // normalized count at the top dyadic scale
  std::vector<BeurlingWindow> windows;  // best window per scale
};

struct DimWitness {
  int level = 0;
  long long q_n = 0;
  double log2_radius = 0.0;
  long long count = 0;
  long long required = 0;
  bool ok = false;
};

struct DimLowerReport {
  double dim_bound = 0.0;      // ln 2 / (2 k p ln ||S||), certified ||S|| bound
  double s_norm_upper = 0.0;
  std::vector<DimWitness> witnesses;
};

/// Gram matrix of the exponentials (matrix and entry errors only).
/// Hermitian by construction; diagonal exactly 1. Throws TooLarge above
/// max_size points.
GramReport gram_matrix(const IfsSpec& spec, const std::vector<SpectrumPoint>& points, double tol,
                       int max_size = 2048);

/// Max over pairs of |mu-hat(lambda - lambda')| - rho^{d(lambda, lambda')}.
/// Nonpositive up to tol-level noise when the decay lemma holds.
double pairwise_decay_audit(const IfsSpec& spec, const Spectrum& spectrum, double tol);

EigBounds eig_bounds(const Eigen::MatrixXcd& gram, const Eigen::MatrixXd& entry_err);

/// Full certificate: Gram, exact Schur constant, infinite tail bound,
/// eigenvalue enclosures, decay audit. riesz_ok iff the tail is < 1 and the
/// certified eigenvalue lower bound is positive.
GramReport riesz_certificate(const IfsSpec& spec, const Spectrum& spectrum, double tol);

/// Window-count scan behind the upper Beurling density: centers {0} and the
/// points themselves, dyadic h up to the set's diameter. density_r is the
/// normalized count at the largest scale (the limsup proxy); the per-scale
/// table is returned for inspection.
BeurlingEstimate beurling_density(const std::vector<SpectrumPoint>& points, double r);

/// ln 2 / (2 k p ln ||S||) plus the (radius, count) witnesses on a built
/// truncation: at least 2^{q_n} points inside radius D ||S||^{2 k q_n p}.
DimLowerReport dim_lower_bound(const DigitSystem& ds, int k, const IfsSpec& spec,
                               const Spectrum* witness = nullptr);

/// Negative control: top Gram eigenvalue of {3^0, ..., 3^{n-1}} prefixes for
/// the Cantor-3 measure, for prefix sizes 2..n. The reported sequence keeps
/// growing, consistent with {3^n} not being a Bessel spectrum.
std::vector<double> cantor_3n_demo(int n, double tol);

/// The Cantor-3 spec (R=3, B={0,2}, uniform weights), validated.
IfsSpec cantor3_spec();

}  // namespace muspec
