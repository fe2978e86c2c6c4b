#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace muspec {

using BigInt = boost::multiprecision::cpp_int;
using BigVec = std::vector<BigInt>;
using BigMat = std::vector<std::vector<BigInt>>;  // row-major, square

// ---------------------------------------------------------------------------
// Error taxonomy. Every named failure mode of the pipeline carries one of
// these codes so the CLI can map failures onto stable exit codes.
// ---------------------------------------------------------------------------

enum class Errc {
  NonExpansive,
  MissingZeroDigit,
  BadProbabilities,
  BadDigits,
  TolUnreachable,
  NotContractive,
  CertificationFailed,
  SearchExhausted,
  RhoTooLarge,
  ScheduleViolation,
  Divergent,
  UnknownDigit,
  MixedSystems,
  TooLarge,
  Unreachable,
  BadInput,
  HashMismatch,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// ---------------------------------------------------------------------------
// Exact integer linear algebra on small square matrices. Entries are
// arbitrary-precision; dimensions stay tiny (the lattice dimension d).
// ---------------------------------------------------------------------------

BigMat bm_identity(int d);
BigMat bm_from_eigen(const Eigen::MatrixXi& m);
BigMat bm_mul(const BigMat& a, const BigMat& b);
BigVec bm_apply(const BigMat& a, const BigVec& v);
BigMat bm_pow(const BigMat& a, long long e);
BigInt bm_det(BigMat a);                 // Bareiss fraction-free elimination
BigMat bm_adjugate(const BigMat& a);     // adj(A) = det(A) * A^{-1}, exact

BigVec bv_zero(int d);
BigVec bv_sub(const BigVec& a, const BigVec& b);
BigVec bv_neg(const BigVec& a);
bool bv_is_zero(const BigVec& a);
BigVec bv_from_eigen(const Eigen::VectorXi& v);

// Nearest-integer division, ties away from zero. Exact for any sign of b != 0.
BigInt round_div(const BigInt& a, const BigInt& b);

// log2 of |x| with a guaranteed direction (upper bound rounds up, lower
// rounds down); -inf for x == 0. Used for magnitude reasoning on integers
// far beyond double range.
double log2_abs_upper(const BigInt& x);
double log2_abs_lower(const BigInt& x);

// Upper bound on log2 of the Euclidean norm of v; -inf for the zero vector.
double log2_norm_upper(const BigVec& v);

// FNV-1a over a byte string; the pipeline's cheap content hash.
std::uint64_t fnv1a64(const std::string& bytes);
std::string to_hex(std::uint64_t v);

}  // namespace muspec
