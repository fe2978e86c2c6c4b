#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "muspec/codes.hpp"
#include "muspec/digits.hpp"
#include "muspec/ifs.hpp"

namespace muspec {

/// One frequency lambda = a_0 + S^p a_1 + ... + S^{p r} a_r, kept together
/// with its digit word. Symbols index A u {0}: 0 is the zero digit,
/// t >= 1 means A[t-1].
struct SpectrumPoint {
  BigVec freq;
  std::vector<std::uint8_t> word;
  int level = 0;
  std::uint64_t ds_tag = 0;
};

/// A finite truncation of the concatenated spectrum Lambda, with the
/// schedule and the certified infinite Schur tail bound attached.
struct Spectrum {
  std::vector<SpectrumPoint> points;
  DigitSystem ds;
  int k = 0;
  std::vector<long long> q;  // q_1..q_N
  int levels = 0;
  long long per_level_cap = 0;
  double schur_tail = 0.0;  // upper bound on the infinite-Lambda Schur constant
  std::string spec_hash;
};

/// Exact base-S^p radix evaluation of a digit word.
BigVec encode_word(std::span<const std::uint8_t> word, const DigitSystem& ds,
                   const Eigen::MatrixXi& S);

/// Block Hamming distance after zero-padding; requires both points to come
/// from the same digit system (MixedSystems otherwise).
int word_metric(const SpectrumPoint& a, const SpectrumPoint& b);

/// Exact finite Schur constant: max over lambda of sum rho^{d(lambda, .)}.
double schur_constant(const std::vector<SpectrumPoint>& points, const DigitSystem& ds);

/// sum_{r=1}^{r_terms} (4 rho)^{q_r} plus the certified geometric remainder
/// (4 rho)^{q_{r_terms+1}} / (1 - 4 rho); needs q to hold r_terms+1 entries.
/// Throws Divergent when 4 rho >= 1.
double schur_tail(double rho, const std::vector<long long>& q, int r_terms);

/// Tail bound for the infinite spectrum over any schedule that starts with
/// q_prefix and keeps doubling: extends the schedule until the terms vanish.
double schur_tail_extended(double rho, std::vector<long long> q_prefix);

/// q_n = q1 * 2^{n-1} (saturating); always satisfies the schedule invariant.
std::vector<long long> doubling_schedule(int q1, int terms);

/// Minimal q1 whose doubling schedule brings the Schur tail below 1.
int choose_q1(double rho);

/// Throws ScheduleViolation unless q_1 + ... + q_{n-1} + 1 <= q_n for all n.
void validate_schedule(const std::vector<long long>& q);

/// Build the level-N truncation: per level n, gv_greedy(k q_n, q_n, 2^{q_n})
/// mapped onto the alphabet A, then all concatenations, lexicographically
/// first per_level_cap points per level.
Spectrum build_spectrum(const IfsSpec& spec, const DigitSystem& ds, int k, int n_levels,
                        const std::vector<long long>& q, long long per_level_cap);

}  // namespace muspec
