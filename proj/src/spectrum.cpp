#include "muspec/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace muspec {

BigVec encode_word(std::span<const std::uint8_t> word, const DigitSystem& ds,
                   const Eigen::MatrixXi& S) {
  const int d = static_cast<int>(S.rows());
  const BigMat sp = bm_pow(bm_from_eigen(S), ds.p);
  BigVec acc = bv_zero(d);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    acc = bm_apply(sp, acc);
    const std::uint8_t sym = *it;
    if (sym > ds.A.size()) throw Error(Errc::UnknownDigit, "symbol " + std::to_string(sym));
    if (sym > 0)
      for (int i = 0; i < d; ++i) acc[i] += ds.A[sym - 1][i];
  }
  return acc;
}

int word_metric(const SpectrumPoint& a, const SpectrumPoint& b) {
  if (a.ds_tag != b.ds_tag)
    throw Error(Errc::MixedSystems, "points come from different digit systems");
  const size_t n = std::max(a.word.size(), b.word.size());
  int dist = 0;
  for (size_t i = 0; i < n; ++i) {
    const std::uint8_t x = i < a.word.size() ? a.word[i] : 0;
    const std::uint8_t y = i < b.word.size() ? b.word[i] : 0;
    if (x != y) ++dist;
  }
  return dist;
}

double schur_constant(const std::vector<SpectrumPoint>& points, const DigitSystem& ds) {
  double best = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    double row = 0.0;
    for (size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      row += std::pow(ds.rho, word_metric(points[i], points[j]));
    }
    best = std::max(best, row);
  }
  return best;
}

double schur_tail(double rho, const std::vector<long long>& q, int r_terms) {
  const double x = 4.0 * rho;
  if (x >= 1.0) throw Error(Errc::Divergent, "4 rho >= 1, the Schur tail diverges");
  if (r_terms < 1 || static_cast<int>(q.size()) < r_terms + 1)
    throw Error(Errc::BadInput, "need q_1..q_{r_terms+1}");
  validate_schedule(q);
  double sum = 0.0;
  for (int r = 0; r < r_terms; ++r) sum += std::pow(x, static_cast<double>(q[r]));
  // The q_r are strictly increasing integers, so the terms beyond r_terms are
  // dominated by the full geometric series from q_{r_terms+1}.
  sum += std::pow(x, static_cast<double>(q[r_terms])) / (1.0 - x);
  return sum;
}

double schur_tail_extended(double rho, std::vector<long long> q_prefix) {
  if (4.0 * rho >= 1.0) throw Error(Errc::Divergent, "4 rho >= 1, the Schur tail diverges");
  int r_terms = static_cast<int>(q_prefix.size());
  while (r_terms < 96 &&
         std::pow(4.0 * rho, static_cast<double>(q_prefix.back())) > 1e-18) {
    q_prefix.push_back(q_prefix.back() >= (1ll << 61) ? q_prefix.back() : 2 * q_prefix.back());
    ++r_terms;
  }
  q_prefix.push_back(q_prefix.back() >= (1ll << 61) ? q_prefix.back() : 2 * q_prefix.back());
  return schur_tail(rho, q_prefix, r_terms);
}

std::vector<long long> doubling_schedule(int q1, int terms) {
  if (q1 < 1 || terms < 1) throw Error(Errc::BadInput, "q1 and terms must be >= 1");
  std::vector<long long> q(terms);
  q[0] = q1;
  for (int i = 1; i < terms; ++i)
    q[i] = q[i - 1] >= (1ll << 61) ? q[i - 1] : 2 * q[i - 1];
  return q;
}

int choose_q1(double rho) {
  if (4.0 * rho >= 1.0) throw Error(Errc::Divergent, "4 rho >= 1");
  for (int q1 = 1; q1 <= 1000000; ++q1) {
    if (schur_tail(rho, doubling_schedule(q1, 41), 40) < 1.0) return q1;
  }
  throw Error(Errc::BadInput, "no q1 found");
}

void validate_schedule(const std::vector<long long>& q) {
  if (q.empty() || q[0] < 1) throw Error(Errc::ScheduleViolation, "q_1 must be >= 1");
  long long prefix = q[0];
  for (size_t n = 1; n < q.size(); ++n) {
    if (prefix + 1 > q[n])
      throw Error(Errc::ScheduleViolation,
                  "q_1 + ... + q_{n-1} + 1 <= q_n fails at n = " + std::to_string(n + 1));
    if (prefix < (1ll << 61)) prefix += q[n];
  }
}

Spectrum build_spectrum(const IfsSpec& spec, const DigitSystem& ds, int k, int n_levels,
                        const std::vector<long long>& q, long long per_level_cap) {
  if (n_levels < 1) throw Error(Errc::BadInput, "levels must be >= 1");
  if (!(ds.rho < 0.25)) throw Error(Errc::RhoTooLarge, "need rho < 1/4, have " + std::to_string(ds.rho));
  if (k < min_k0()) throw Error(Errc::BadInput, "k must be >= k0 = " + std::to_string(min_k0()));
  if (static_cast<int>(q.size()) < n_levels) throw Error(Errc::BadInput, "schedule shorter than levels");
  if (ds.A.size() != 2) throw Error(Errc::BadInput, "the construction uses exactly two digits");
  if (per_level_cap < 1) throw Error(Errc::BadInput, "per_level_cap must be >= 1");
  validate_schedule(q);

  Spectrum out;
  out.ds = ds;
  out.k = k;
  out.q.assign(q.begin(), q.begin() + n_levels);
  out.levels = n_levels;
  out.per_level_cap = per_level_cap;
  out.spec_hash = spec_hash(spec);
  const std::uint64_t tag = ds.tag();

  // Codebooks, truncated to what the capped enumeration can reach. The
  // lexicographic-first points of a level only ever index the
  // lexicographic-first codewords, so prefixes are enough.
  std::vector<std::vector<std::string>> books(n_levels);
  for (int n = 0; n < n_levels; ++n) {
    const long long qn = q[n];
    if (static_cast<long long>(k) * qn > 63)
      throw Error(Errc::TooLarge, "codeword length k*q_n exceeds 63 bits at level " +
                                      std::to_string(n + 1));
    const long long full = qn >= 62 ? (1ll << 62) : (1ll << qn);
    books[n] = gv_greedy(static_cast<int>(k * qn), static_cast<int>(qn),
                         std::min(full, per_level_cap))
                   .words;
  }

  for (int n = 1; n <= n_levels; ++n) {
    // Point count of the full enumeration at this level: 2^{q_1 + ... + q_n},
    // saturating well above any sane cap.
    long long bits = 0;
    for (int j = 0; j < n; ++j) bits += q[j];
    const long long full = bits >= 62 ? (1ll << 62) : (1ll << bits);
    const long long want = std::min(full, per_level_cap);

    std::vector<long long> idx(n, 0);
    for (long long emitted = 0; emitted < want; ++emitted) {
      SpectrumPoint pt;
      pt.level = n;
      pt.ds_tag = tag;
      for (int j = 0; j < n; ++j) {
        const std::string& cw = books[j][static_cast<size_t>(idx[j])];
        for (char bit : cw) pt.word.push_back(bit == '0' ? 1 : 2);
      }
      pt.freq = encode_word(pt.word, ds, spec.S);
      out.points.push_back(std::move(pt));

      int j = n - 1;
      while (j >= 0 && idx[j] + 1 >= static_cast<long long>(books[j].size())) idx[j--] = 0;
      if (j < 0) break;
      ++idx[j];
    }
  }

  // Incongruence makes encoding injective; trust but verify.
  std::vector<BigVec> freqs;
  freqs.reserve(out.points.size());
  for (const auto& p : out.points) freqs.push_back(p.freq);
  std::sort(freqs.begin(), freqs.end());
  if (std::adjacent_find(freqs.begin(), freqs.end()) != freqs.end())
    throw Error(Errc::CertificationFailed, "duplicate frequency in constructed spectrum");

  out.schur_tail = schur_tail_extended(ds.rho, out.q);
  return out;
}

}  // namespace muspec
