#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "muspec/common.hpp"

namespace muspec {

/// An affine iterated function system tau_b(x) = R^{-1}(x + b) with integer
/// data, together with the digit weights of its invariant measure mu.
/// S = R^T drives all frequency-side computations.
struct IfsSpec {
  int dim = 0;
  Eigen::MatrixXi R;
  std::vector<Eigen::VectorXi> digits;  // B; must contain 0
  std::vector<double> probs;            // p_b, same order as digits
  Eigen::MatrixXi S;                    // cached R^T, set by validate_ifs
};

/// A complex value with a certified absolute error bound.
struct CertifiedComplex {
  std::complex<double> value;
  double err = 0.0;
};

/// Checks all structural invariants (expansiveness, 0 in B, probability
/// weights) and caches S = R^T. Throws NonExpansive / MissingZeroDigit /
/// BadProbabilities / BadDigits.
IfsSpec validate_ifs(IfsSpec raw);

/// The symbol m(x) = sum_b p_b e^{2 pi i b.x}. Z^d-periodic, |m| <= 1.
std::complex<double> symbol_m(const IfsSpec& spec, const Eigen::VectorXd& x);

/// Global Lipschitz constant of m: L = 2 pi sum_b p_b ||b||.
double lipschitz_m(const IfsSpec& spec);

/// Certified upper bound on ||S^{-1}||_2 via sqrt(||.||_1 ||.||_inf) on the
/// exact rational inverse. Throws NotContractive when the bound is >= 1
/// (the message reports which powers of S^{-1} do contract, if any).
double contraction_upper(const IfsSpec& spec);

/// Certified upper bound on ||S||_2, same interpolation bound.
double expansion_upper(const IfsSpec& spec);

/// Certified upper bound on ||R^{-1}||_2 (used for attractor radii).
double contraction_upper_r(const IfsSpec& spec);

/// mu-hat(x) = prod_{k>=1} m(S^{-k} x), truncated so the certified tail
/// error stays within tol. The integer-frequency overload reduces each
/// S^{-k} lambda modulo Z^d exactly, so it stays accurate for frequencies
/// of any size.
CertifiedComplex mu_hat(const IfsSpec& spec, const Eigen::VectorXd& x, double tol);
CertifiedComplex mu_hat(const IfsSpec& spec, const BigVec& freq, double tol);

/// Monte Carlo draws from mu via x = sum_{j<=depth} R^{-j} b_j.
/// Deterministic for a fixed seed.
std::vector<Eigen::VectorXd> sample_measure(const IfsSpec& spec, int count, int depth,
                                            std::uint64_t seed);

/// Content hash of (dim, R, B, p); certificates carry it so a stored
/// artifact can be matched against the spec it was computed for.
std::string spec_hash(const IfsSpec& spec);

namespace detail {
/// Shared truncation-depth rule: smallest K with
/// L * ||x|| * c^{K+1} / (1 - c) <= tail_budget, in log space.
long long mu_hat_depth(double log2_norm_x, double lipschitz, double c, double tail_budget);
}  // namespace detail

}  // namespace muspec
