#include "muspec/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace muspec {

namespace {

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;
constexpr long long kMaxFactors = 1000000;  // cap on infinite-product truncation depth

// Conservative upward rounding for certified quantities.
inline double round_up(double v) { return v * (1.0 + 1e-12) + 1e-300; }

double interp_norm_bound(const BigMat& m, const BigInt& denom) {
  const int d = static_cast<int>(m.size());
  BigInt n1 = 0, ninf = 0;
  for (int j = 0; j < d; ++j) {
    BigInt col = 0;
    for (int i = 0; i < d; ++i) col += abs(m[i][j]);
    n1 = std::max(n1, col);
  }
  for (int i = 0; i < d; ++i) {
    BigInt row = 0;
    for (int j = 0; j < d; ++j) row += abs(m[i][j]);
    ninf = std::max(ninf, row);
  }
  const long double num =
      sqrtl(n1.convert_to<long double>() * ninf.convert_to<long double>());
  const long double den = abs(denom).convert_to<long double>();
  return round_up(static_cast<double>(num / den));
}

std::complex<long double> symbol_m_ld(const IfsSpec& spec, const long double* x) {
  std::complex<long double> acc(0.0L, 0.0L);
  for (size_t bi = 0; bi < spec.digits.size(); ++bi) {
    long double dot = 0.0L;
    for (int i = 0; i < spec.dim; ++i) dot += static_cast<long double>(spec.digits[bi](i)) * x[i];
    const long double th = kTwoPiL * remainderl(dot, 1.0L);
    const long double p = static_cast<long double>(spec.probs[bi]);
    acc += std::complex<long double>(p * cosl(th), p * sinl(th));
  }
  return acc;
}

}  // namespace

IfsSpec validate_ifs(IfsSpec raw) {
  if (raw.dim < 1 || raw.R.rows() != raw.dim || raw.R.cols() != raw.dim)
    throw Error(Errc::BadInput, "R must be a d x d matrix with d >= 1");
  if (raw.digits.size() < 2) throw Error(Errc::BadDigits, "need at least two digits in B");
  bool has_zero = false;
  for (const auto& b : raw.digits) {
    if (b.size() != raw.dim) throw Error(Errc::BadDigits, "digit dimension mismatch");
    if (b.isZero()) has_zero = true;
  }
  if (!has_zero) throw Error(Errc::MissingZeroDigit, "0 must be an element of B");
  for (size_t i = 0; i < raw.digits.size(); ++i)
    for (size_t j = i + 1; j < raw.digits.size(); ++j)
      if (raw.digits[i] == raw.digits[j]) throw Error(Errc::BadDigits, "duplicate digit in B");

  if (raw.probs.empty())
    raw.probs.assign(raw.digits.size(), 1.0 / static_cast<double>(raw.digits.size()));
  if (raw.probs.size() != raw.digits.size())
    throw Error(Errc::BadProbabilities, "one weight per digit required");
  double sum = 0.0;
  for (double p : raw.probs) {
    if (!(p > 0.0)) throw Error(Errc::BadProbabilities, "weights must be positive");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(Errc::BadProbabilities, "weights must sum to 1 within 1e-12");

  raw.S = raw.R.transpose();

  // Expansive iff some power of S^{-1} certifiably contracts. The
  // sqrt(l1 * linf) bound is transpose-invariant, so testing S covers R.
  const BigMat adj = bm_adjugate(bm_from_eigen(raw.S));
  const BigInt det = bm_det(bm_from_eigen(raw.S));
  if (det == 0) throw Error(Errc::NonExpansive, "R is singular");
  BigMat power = bm_identity(raw.dim);
  BigInt det_pow = 1;
  bool contracts = false;
  for (int m = 1; m <= 64; ++m) {
    power = bm_mul(power, adj);
    det_pow *= det;
    if (interp_norm_bound(power, det_pow) < 1.0) {
      contracts = true;
      break;
    }
  }
  if (!contracts)
    throw Error(Errc::NonExpansive, "no power of R^{-1} certifiably contracts (m <= 64)");
  return raw;
}

std::complex<double> symbol_m(const IfsSpec& spec, const Eigen::VectorXd& x) {
  std::vector<long double> xl(spec.dim);
  for (int i = 0; i < spec.dim; ++i) xl[i] = static_cast<long double>(x(i));
  const auto v = symbol_m_ld(spec, xl.data());
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

double lipschitz_m(const IfsSpec& spec) {
  double s = 0.0;
  for (size_t i = 0; i < spec.digits.size(); ++i)
    s += spec.probs[i] * spec.digits[i].cast<double>().norm();
  return 2.0 * std::numbers::pi * s;
}

double contraction_upper(const IfsSpec& spec) {
  const BigMat adj = bm_adjugate(bm_from_eigen(spec.S));
  const BigInt det = bm_det(bm_from_eigen(spec.S));
  if (det == 0) throw Error(Errc::NotContractive, "S is singular");
  const double c = interp_norm_bound(adj, det);
  if (c < 1.0) return c;
  // Report which powers (if any) do contract, for diagnosis.
  BigMat power = adj;
  BigInt det_pow = det;
  for (int m = 2; m <= 64; ++m) {
    power = bm_mul(power, adj);
    det_pow *= det;
    if (interp_norm_bound(power, det_pow) < 1.0) {
      std::ostringstream os;
      os << "certified ||S^-1|| bound is " << c << " >= 1; the first contracting power is m=" << m
         << " (the construction needs a one-step contraction factor)";
      throw Error(Errc::NotContractive, os.str());
    }
  }
  throw Error(Errc::NotContractive, "no certified contraction found for powers m <= 64");
}

double expansion_upper(const IfsSpec& spec) {
  return interp_norm_bound(bm_from_eigen(spec.S), BigInt(1));
}

double contraction_upper_r(const IfsSpec& spec) {
  const BigMat adj = bm_adjugate(bm_from_eigen(spec.R));
  const BigInt det = bm_det(bm_from_eigen(spec.R));
  if (det == 0) throw Error(Errc::NotContractive, "R is singular");
  const double c = interp_norm_bound(adj, det);
  if (c >= 1.0) throw Error(Errc::NotContractive, "certified ||R^-1|| bound is >= 1");
  return c;
}

namespace detail {

long long mu_hat_depth(double log2_norm_x, double lipschitz, double c, double tail_budget) {
  if (!std::isfinite(log2_norm_x)) return 0;  // x == 0: every factor is m(0) = 1
  if (lipschitz <= 0.0) return 0;
  // (K+1) log2(1/c) >= log2(L ||x|| / (budget (1-c)))
  const double rhs =
      std::log2(lipschitz) + log2_norm_x - std::log2(tail_budget) - std::log2(1.0 - c);
  const double steps = rhs / std::log2(1.0 / c);
  if (steps <= 0.0) return 0;
  if (steps > static_cast<double>(kMaxFactors))
    throw Error(Errc::TolUnreachable, "truncation depth exceeds the configured cap");
  return static_cast<long long>(std::ceil(steps));
}

}  // namespace detail

namespace {

// Shared product evaluator. The current value of S^{-k} x is carried as an
// exact integer vector N plus a small long-double remainder, so m can be
// evaluated accurately no matter how large the original frequency was.
CertifiedComplex mu_hat_core(const IfsSpec& spec, BigVec n, std::vector<long double> frac,
                             double tol) {
  if (!(tol > 0.0)) throw Error(Errc::BadInput, "tol must be positive");
  const int d = spec.dim;
  const double c = contraction_upper(spec);
  const double lip = lipschitz_m(spec);

  double frac_norm2 = 0.0;
  for (int i = 0; i < d; ++i) frac_norm2 += static_cast<double>(frac[i] * frac[i]);
  double log2_norm = log2_norm_upper(n);
  const double log2_frac = 0.5 * std::log2(frac_norm2 + 1e-300);
  if (std::isfinite(log2_norm) || frac_norm2 > 0.0)
    log2_norm = std::max(log2_norm, log2_frac) + 1.0;  // ||N|| + ||frac|| <= 2 max

  const double tail_budget = tol / 2.0;
  const long long depth = detail::mu_hat_depth(log2_norm, lip, c, tail_budget);

  // Per-factor rounding allowance for the long-double state (see the error
  // model in the tests): division remainder, matvec, and m evaluation.
  const double per_factor =
      4.0 * (1e-17 * (1.0 + lip) + lip * std::sqrt(static_cast<double>(d)) * 5e-19 *
                                       (1.0 + std::sqrt(static_cast<double>(d))) / (1.0 - c));
  if (per_factor * static_cast<double>(depth) > tol / 2.0)
    throw Error(Errc::TolUnreachable, "rounding allowance exceeds tol at this depth");

  const BigMat adj = bm_adjugate(bm_from_eigen(spec.S));
  const BigInt det = bm_det(bm_from_eigen(spec.S));
  const long double det_ld = det.convert_to<long double>();
  std::vector<long double> sinv(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) sinv[static_cast<size_t>(i) * d + j] = adj[i][j].convert_to<long double>() / det_ld;

  std::complex<long double> prod(1.0L, 0.0L);
  BigVec u(d), nn(d);
  std::vector<long double> nf(d);
  long long steps = 0;
  double tail_err = 0.0;
  bool early = false;

  for (long long k = 1; k <= depth; ++k) {
    const bool n_zero = bv_is_zero(n);
    if (n_zero) {
      // Pure fractional phase: just contract.
      for (int i = 0; i < d; ++i) {
        long double acc = 0.0L;
        for (int j = 0; j < d; ++j) acc += sinv[static_cast<size_t>(i) * d + j] * frac[j];
        nf[i] = acc;
      }
      frac = nf;
    } else {
      u = bm_apply(adj, n);
      for (int i = 0; i < d; ++i) {
        nn[i] = round_div(u[i], det);
        const BigInt rem = u[i] - nn[i] * det;
        long double acc = rem.convert_to<long double>() / det_ld;
        for (int j = 0; j < d; ++j) acc += sinv[static_cast<size_t>(i) * d + j] * frac[j];
        // Move whole units into the integer channel to keep frac small.
        const long double shift = roundl(acc);
        nn[i] += BigInt(static_cast<long long>(shift));
        nf[i] = acc - shift;
      }
      n = nn;
      frac = nf;
    }
    prod *= symbol_m_ld(spec, frac.data());
    ++steps;

    if (bv_is_zero(n)) {
      long double norm2 = 0.0L;
      for (int i = 0; i < d; ++i) norm2 += frac[i] * frac[i];
      const double bound = lip * static_cast<double>(sqrtl(norm2)) * c / (1.0 - c);
      if (bound <= tail_budget) {
        tail_err = bound;
        early = true;
        break;
      }
    }
  }
  if (!early) {
    // Tail bound at full depth, evaluated in log space.
    if (std::isfinite(log2_norm) && lip > 0.0) {
      const double log2_tail = std::log2(lip) + log2_norm +
                               static_cast<double>(depth + 1) * std::log2(c) -
                               std::log2(1.0 - c);
      tail_err = std::exp2(log2_tail);
    }
  }
  const double err =
      steps == 0 ? tail_err : tail_err + per_factor * static_cast<double>(steps) + 1e-16;
  return {{static_cast<double>(prod.real()), static_cast<double>(prod.imag())}, err};
}

}  // namespace

CertifiedComplex mu_hat(const IfsSpec& spec, const Eigen::VectorXd& x, double tol) {
  BigVec n(spec.dim);
  std::vector<long double> frac(spec.dim);
  for (int i = 0; i < spec.dim; ++i) {
    const double r = std::round(x(i));
    n[i] = BigInt(r);
    frac[i] = static_cast<long double>(x(i)) - static_cast<long double>(r);
  }
  return mu_hat_core(spec, std::move(n), std::move(frac), tol);
}

CertifiedComplex mu_hat(const IfsSpec& spec, const BigVec& freq, double tol) {
  return mu_hat_core(spec, freq, std::vector<long double>(spec.dim, 0.0L), tol);
}

std::string spec_hash(const IfsSpec& spec) {
  std::ostringstream os;
  os << "v1|" << spec.dim << '|';
  for (int i = 0; i < spec.dim; ++i)
    for (int j = 0; j < spec.dim; ++j) os << spec.R(i, j) << ',';
  os << '|';
  for (const auto& b : spec.digits) {
    for (int i = 0; i < spec.dim; ++i) os << b(i) << ',';
    os << ';';
  }
  os << '|';
  os.precision(17);
  for (double p : spec.probs) os << p << ',';
  return to_hex(fnv1a64(os.str()));
}

std::vector<Eigen::VectorXd> sample_measure(const IfsSpec& spec, int count, int depth,
                                            std::uint64_t seed) {
  if (count < 1) throw Error(Errc::BadInput, "count must be >= 1");
  if (depth < 1) throw Error(Errc::BadInput, "depth must be >= 1");
  const int d = spec.dim;

  const BigMat adj = bm_adjugate(bm_from_eigen(spec.R));
  const BigInt det = bm_det(bm_from_eigen(spec.R));
  Eigen::MatrixXd rinv(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      rinv(i, j) = static_cast<double>(adj[i][j].convert_to<long double>() /
                                       det.convert_to<long double>());

  std::vector<double> cum(spec.probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < spec.probs.size(); ++i) {
    acc += spec.probs[i];
    cum[i] = acc;
  }
  cum.back() = 1.0;

  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  std::vector<int> draws(depth);
  for (int s = 0; s < count; ++s) {
    for (int j = 0; j < depth; ++j) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      draws[j] = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
      if (draws[j] >= static_cast<int>(cum.size())) draws[j] = static_cast<int>(cum.size()) - 1;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    for (int j = depth - 1; j >= 0; --j)
      x = rinv * (x + spec.digits[draws[j]].cast<double>());
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace muspec
