#include "muspec/common.hpp"

#include <limits>

namespace muspec {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonExpansive: return "NonExpansive";
    case Errc::MissingZeroDigit: return "MissingZeroDigit";
    case Errc::BadProbabilities: return "BadProbabilities";
    case Errc::BadDigits: return "BadDigits";
    case Errc::TolUnreachable: return "TolUnreachable";
    case Errc::NotContractive: return "NotContractive";
    case Errc::CertificationFailed: return "CertificationFailed";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::RhoTooLarge: return "RhoTooLarge";
    case Errc::ScheduleViolation: return "ScheduleViolation";
    case Errc::Divergent: return "Divergent";
    case Errc::UnknownDigit: return "UnknownDigit";
    case Errc::MixedSystems: return "MixedSystems";
    case Errc::TooLarge: return "TooLarge";
    case Errc::Unreachable: return "Unreachable";
    case Errc::BadInput: return "BadInput";
    case Errc::HashMismatch: return "HashMismatch";
  }
  return "Unknown";
}

BigMat bm_identity(int d) {
  BigMat m(d, BigVec(d, 0));
  for (int i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

BigMat bm_from_eigen(const Eigen::MatrixXi& e) {
  const int d = static_cast<int>(e.rows());
  BigMat m(d, BigVec(e.cols(), 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < e.cols(); ++j) m[i][j] = e(i, j);
  return m;
}

BigMat bm_mul(const BigMat& a, const BigMat& b) {
  const int d = static_cast<int>(a.size());
  BigMat r(d, BigVec(d, 0));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      if (a[i][k] == 0) continue;
      for (int j = 0; j < d; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

BigVec bm_apply(const BigMat& a, const BigVec& v) {
  const int d = static_cast<int>(a.size());
  BigVec r(d, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) r[i] += a[i][j] * v[j];
  return r;
}

BigMat bm_pow(const BigMat& a, long long e) {
  BigMat base = a;
  BigMat r = bm_identity(static_cast<int>(a.size()));
  while (e > 0) {
    if (e & 1) r = bm_mul(r, base);
    e >>= 1;
    if (e) base = bm_mul(base, base);
  }
  return r;
}

BigInt bm_det(BigMat a) {
  const int d = static_cast<int>(a.size());
  if (d == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < d - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < d; ++i)
        if (a[i][k] != 0) { piv = i; break; }
      if (piv < 0) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < d; ++i)
      for (int j = k + 1; j < d; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign > 0 ? a[d - 1][d - 1] : -a[d - 1][d - 1];
}

BigMat bm_adjugate(const BigMat& a) {
  const int d = static_cast<int>(a.size());
  if (d == 1) return bm_identity(1);
  BigMat adj(d, BigVec(d, 0));
  BigMat minor(d - 1, BigVec(d - 1, 0));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      for (int r = 0, mr = 0; r < d; ++r) {
        if (r == i) continue;
        for (int c = 0, mc = 0; c < d; ++c) {
          if (c == j) continue;
          minor[mr][mc++] = a[r][c];
        }
        ++mr;
      }
      BigInt cof = bm_det(minor);
      if ((i + j) & 1) cof = -cof;
      adj[j][i] = cof;  // transpose of the cofactor matrix
    }
  return adj;
}

BigVec bv_zero(int d) { return BigVec(d, 0); }

BigVec bv_sub(const BigVec& a, const BigVec& b) {
  BigVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

BigVec bv_neg(const BigVec& a) {
  BigVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

bool bv_is_zero(const BigVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

BigVec bv_from_eigen(const Eigen::VectorXi& v) {
  BigVec r(v.size());
  for (int i = 0; i < v.size(); ++i) r[i] = v(i);
  return r;
}

BigInt round_div(const BigInt& a, const BigInt& b) {
  BigInt bb = b < 0 ? BigInt(-b) : b;
  BigInt aa = b < 0 ? BigInt(-a) : a;
  BigInt q, r;
  boost::multiprecision::divide_qr(aa, bb, q, r);
  // r has the sign of aa; shift toward the nearest integer.
  if (2 * r >= bb) ++q;
  if (2 * r <= -bb) --q;
  return q;
}

double log2_abs_upper(const BigInt& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  BigInt a = x < 0 ? BigInt(-x) : x;
  const long long bits = static_cast<long long>(boost::multiprecision::msb(a));  // floor(log2 a)
  long long shift = bits - 62;
  if (shift < 0) shift = 0;
  const std::uint64_t top = static_cast<std::uint64_t>(a >> shift);
  // +1 on the truncated mantissa makes this an upper bound; 1e-12 covers the
  // rounding of log2 itself.
  return std::log2(static_cast<double>(top) + 1.0) + static_cast<double>(shift) + 1e-12;
}
double log2_abs_lower(const BigInt& x) {
  if (x == 0) return -std::numeric_limits<double>::infinity();
  BigInt a = x < 0 ? BigInt(-x) : x;
  // floor(log2 a) is always a valid lower bound.
  return static_cast<double>(boost::multiprecision::msb(a));
}

double log2_norm_upper(const BigVec& v) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& x : v) best = std::max(best, log2_abs_upper(x));
  if (!std::isfinite(best)) return best;
  return best + 0.5 * std::log2(static_cast<double>(v.size()));
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace muspec
