#pragma once

#include <vector>

#include "muspec/common.hpp"
#include "muspec/ifs.hpp"

namespace muspec {

/// A certified digit system (p, A, rho): two nonzero integer digits (0 is the
/// implicit third letter) that are incongruent mod S^p Z^d and whose symbol
/// values stay below rho on the whole perturbation ball the decay lemma
/// needs. Amplified systems keep the base certificate alongside the
/// materialized repeated digits, so rho = base_rho^amplification can always
/// be re-audited from scratch.
struct DigitSystem {
  int p = 0;                  // effective scaling exponent (base_p * amplification)
  std::vector<BigVec> A;      // materialized digits, 0 excluded
  double rho = 1.0;           // certified block decay constant
  double M = 0.0;             // max ||S^{-p}(a - a')|| over distinct a, a' in A u {0}
  double ball_radius = 0.0;   // M c^p / (1 - c^p)
  int amplification = 1;
  int base_p = 0;
  std::vector<BigVec> base_A;
  double base_rho = 1.0;

  /// Cheap identity tag for MixedSystems checks on spectrum points.
  std::uint64_t tag() const;
};

struct SearchBudget {
  double grid_spacing = 0.05;       // unit-cube grid for the witness points x0, x1
  double unimodular_margin = 0.05;  // exclusion margin around {x : b.x in Z for all b}
  int delta_stages = 4;             // delta' schedule: 0.3, 0.2, 0.1, then halving
  int max_pairs_per_stage = 10000;
  int max_amplification = 64;
  double pad_target = 0.02;         // Lipschitz padding budget L*h*sqrt(d)/2
};

/// True iff all distinct a, a' in A u {0} satisfy a - a' not in S^p Z^d.
/// Exact integer arithmetic (adjugate/determinant divisibility).
bool check_incongruence(const Eigen::MatrixXi& S, int p, const std::vector<BigVec>& A);

/// Smallest p >= 1 with 4 c^p / (1 - c^p) < delta, for the certified c.
int min_p_for_delta(const IfsSpec& spec, double delta);

/// Certified sup bound on |m(S^{-p}(a-a') + x)| over all required digit
/// differences and the ball ||x|| <= M c^p/(1-c^p): grid evaluation plus
/// Lipschitz padding. Throws CertificationFailed when the bound reaches 1
/// (or when the digits are congruent mod S^p Z^d).
/// grid_scale < 1 refines the grid (used by independent re-audits).
double certify_rho(const IfsSpec& spec, int p, const std::vector<BigVec>& A,
                   double grid_scale = 1.0, double pad_target = 0.02);

/// Search for a certified two-digit system with rho <= rho_target, amplifying
/// the best certified candidate as needed. Deterministic for a fixed budget.
DigitSystem find_digit_system(const IfsSpec& spec, double rho_target,
                              const SearchBudget& budget = {});

/// Digit repetition: p -> p*l, each digit a -> sum_j S^{p j} a, rho -> rho^l.
/// The block metric counts each repeated digit as one symbol.
DigitSystem amplify(const DigitSystem& ds, int l, const IfsSpec& spec);

}  // namespace muspec
