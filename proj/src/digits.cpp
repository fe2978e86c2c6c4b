#include "muspec/digits.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace muspec {

namespace {

std::string bv_to_string(const BigVec& v) {
  std::string s;
  for (const auto& x : v) {
    s += x.str();
    s += ',';
  }
  return s;
}

struct CertResult {
  double rho;
  double M;
  double ball;
};

double ball_radius_for(double c, int p, double m_bound) {
  const double cp = std::pow(c, p) * (1.0 + 1e-13);
  return m_bound * cp / (1.0 - cp) * (1.0 + 1e-13);
}

// All differences a - a' over distinct unordered pairs of A u {0}. One sign
// per pair suffices: |m(-y)| = |m(y)| because the weights are real.
std::vector<BigVec> difference_set(const std::vector<BigVec>& a) {
  std::vector<BigVec> all(a);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) all.push_back(bv_sub(a[i], a[j]));
  return all;
}

Eigen::VectorXd rational_apply(const BigMat& adj, const BigInt& det, const BigVec& v) {
  const int d = static_cast<int>(v.size());
  const BigVec num = bm_apply(adj, v);
  Eigen::VectorXd out(d);
  const long double den = det.convert_to<long double>();
  for (int i = 0; i < d; ++i)
    out(i) = static_cast<double>(num[i].convert_to<long double>() / den);
  return out;
}

CertResult certify_full(const IfsSpec& spec, int p, const std::vector<BigVec>& a,
                        double grid_scale, double pad_target) {
  if (p < 1) throw Error(Errc::BadInput, "p must be >= 1");
  if (!check_incongruence(spec.S, p, a))
    throw Error(Errc::CertificationFailed, "digits are congruent mod S^p Z^d");

  const int d = spec.dim;
  const double c = contraction_upper(spec);
  const double lip = lipschitz_m(spec);

  const BigMat sp = bm_pow(bm_from_eigen(spec.S), p);
  const BigMat adj = bm_adjugate(sp);
  const BigInt det = bm_det(sp);

  const std::vector<BigVec> diffs = difference_set(a);
  std::vector<Eigen::VectorXd> centers;
  double m_bound = 0.0;
  for (const auto& delta : diffs) {
    Eigen::VectorXd v = rational_apply(adj, det, delta);
    m_bound = std::max(m_bound, v.norm() * (1.0 + 1e-12));
    centers.push_back(std::move(v));
  }
  const double r = ball_radius_for(c, p, m_bound);

  double h = std::min(2.0 * pad_target / (lip * std::sqrt(static_cast<double>(d))), r / 2.0);
  h *= grid_scale;
  const long long steps = std::max<long long>(2, static_cast<long long>(std::ceil(2.0 * r / h)));
  double total = 1.0;
  for (int i = 0; i < d; ++i) total *= static_cast<double>(steps + 1);
  if (total * static_cast<double>(centers.size()) > 4e6)
    throw Error(Errc::TooLarge, "certification grid too large");
  const double h_actual = 2.0 * r / static_cast<double>(steps);
  const double pad = lip * h_actual * std::sqrt(static_cast<double>(d)) / 2.0 + 1e-13;

  double sup = 0.0;
  Eigen::VectorXd x(d);
  std::vector<long long> idx(d, 0);
  for (const auto& center : centers) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (int i = 0; i < d; ++i)
        x(i) = center(i) - r + static_cast<double>(idx[i]) * h_actual;
      sup = std::max(sup, std::abs(symbol_m(spec, x)));
      int i = d - 1;
      while (i >= 0 && idx[i] == steps) idx[i--] = 0;
      if (i < 0) break;
      ++idx[i];
    }
  }

  const double rho = sup + pad;
  if (rho >= 1.0) {
    std::ostringstream os;
    os << "certified sup " << rho << " >= 1 on the audit ball (radius " << r
       << "); digit differences touch the set where |m| = 1";
    throw Error(Errc::CertificationFailed, os.str());
  }
  return {rho, m_bound, r};
}

void set_m_ball(DigitSystem& ds, const IfsSpec& spec) {
  const double c = contraction_upper(spec);
  const BigMat sp = bm_pow(bm_from_eigen(spec.S), ds.p);
  const BigMat adj = bm_adjugate(sp);
  const BigInt det = bm_det(sp);
  double m_bound = 0.0;
  for (const auto& delta : difference_set(ds.A))
    m_bound = std::max(m_bound, rational_apply(adj, det, delta).norm() * (1.0 + 1e-12));
  ds.M = m_bound;
  ds.ball_radius = ball_radius_for(c, ds.p, m_bound);
}

}  // namespace

std::uint64_t DigitSystem::tag() const {
  std::ostringstream os;
  os << p << '|' << amplification << '|' << rho << '|';
  for (const auto& a : A) os << bv_to_string(a) << ';';
  return fnv1a64(os.str());
}

bool check_incongruence(const Eigen::MatrixXi& S, int p, const std::vector<BigVec>& A) {
  if (p < 1) throw Error(Errc::BadInput, "p must be >= 1");
  const BigMat sp = bm_pow(bm_from_eigen(S), p);
  const BigMat adj = bm_adjugate(sp);
  const BigInt det = bm_det(sp);
  for (const auto& delta : difference_set(A)) {
    // delta in S^p Z^d iff adj(S^p) delta is divisible by det(S^p).
    const BigVec y = bm_apply(adj, delta);
    bool divisible = true;
    for (const auto& yi : y)
      if (yi % det != 0) {
        divisible = false;
        break;
      }
    if (divisible) return false;
  }
  return true;
}

int min_p_for_delta(const IfsSpec& spec, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::BadInput, "delta must be in (0,1)");
  const double c = contraction_upper(spec);
  for (int p = 1; p <= 1000000; ++p) {
    const double cp = std::pow(c, p);
    if (4.0 * cp / (1.0 - cp) < delta) return p;
  }
  throw Error(Errc::BadInput, "no p found (contraction too weak)");
}

double certify_rho(const IfsSpec& spec, int p, const std::vector<BigVec>& A, double grid_scale,
                   double pad_target) {
  return certify_full(spec, p, A, grid_scale, pad_target).rho;
}

namespace {

// Lower bound on the distance from x to the unimodular set {y : b.y in Z}:
// for any b != 0, dist(x, S1) >= dist(b.x, Z)/||b||.
double s1_distance_lb(const IfsSpec& spec, const Eigen::VectorXd& x) {
  double best = 0.0;
  for (const auto& b : spec.digits) {
    if (b.isZero()) continue;
    const double dot = b.cast<double>().dot(x);
    const double frac = std::abs(dot - std::round(dot));
    best = std::max(best, frac / b.cast<double>().norm());
  }
  return best;
}

struct Candidate {
  double score;
  BigInt sumsq;
  BigVec a0, a1;
};

BigInt bv_sumsq(const BigVec& v) {
  BigInt s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

}  // namespace

DigitSystem find_digit_system(const IfsSpec& spec, double rho_target, const SearchBudget& budget) {
  if (!(rho_target > 0.0 && rho_target < 1.0))
    throw Error(Errc::BadInput, "rho_target must be in (0,1)");
  const int d = spec.dim;

  // Grid of the unit cube, filtered away from the unimodular set.
  std::vector<Eigen::VectorXd> nodes;
  {
    const double g = budget.grid_spacing;
    const long long per_axis = static_cast<long long>(std::floor(2.0 / g)) + 1;
    std::vector<long long> idx(d, 0);
    Eigen::VectorXd x(d);
    while (true) {
      for (int i = 0; i < d; ++i) x(i) = -1.0 + static_cast<double>(idx[i]) * g;
      if (x.norm() <= 1.0 + 1e-12 && s1_distance_lb(spec, x) >= budget.unimodular_margin)
        nodes.push_back(x);
      int i = d - 1;
      while (i >= 0 && idx[i] == per_axis - 1) idx[i--] = 0;
      if (i < 0) break;
      ++idx[i];
    }
  }

  double delta = 0.3;
  bool have_best = false;
  DigitSystem best;
  std::string near_miss;

  for (int stage = 0; stage < budget.delta_stages; ++stage) {
    const int p = min_p_for_delta(spec, delta);
    const BigMat sp = bm_pow(bm_from_eigen(spec.S), p);
    const BigMat adj = bm_adjugate(sp);
    const BigInt det = bm_det(sp);
    std::vector<std::vector<long double>> sp_ld(d, std::vector<long double>(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) sp_ld[i][j] = sp[i][j].convert_to<long double>();

    auto round_image = [&](const Eigen::VectorXd& x) {
      BigVec a(d);
      for (int i = 0; i < d; ++i) {
        long double acc = 0.0L;
        for (int j = 0; j < d; ++j) acc += sp_ld[i][j] * static_cast<long double>(x(j));
        a[i] = BigInt(roundl(acc));
      }
      return a;
    };

    // Note: ||x - S^{-p} round(S^p x)|| <= c^p sqrt(d)/2 < delta sqrt(d)/8,
    // so the lemma's delta'-proximity condition holds by construction.
    std::set<std::pair<BigVec, BigVec>> seen;
    std::vector<Candidate> cands;
    for (size_t i = 0; i < nodes.size(); ++i) {
      for (size_t j = i + 1; j < nodes.size(); ++j) {
        if (s1_distance_lb(spec, nodes[i] - nodes[j]) < budget.unimodular_margin) continue;
        BigVec a0 = round_image(nodes[i]);
        BigVec a1 = round_image(nodes[j]);
        if (bv_is_zero(a0) || bv_is_zero(a1) || a0 == a1) continue;
        if (a1 < a0) std::swap(a0, a1);
        // The negated pair certifies identically; keep one representative.
        BigVec n0 = bv_neg(a0), n1 = bv_neg(a1);
        if (n1 < n0) std::swap(n0, n1);
        if (std::make_pair(n0, n1) < std::make_pair(a0, a1)) {
          a0 = n0;
          a1 = n1;
        }
        if (!seen.insert({a0, a1}).second) continue;

        double score = 0.0;
        for (const auto& delta_vec :
             {a0, a1, bv_sub(a0, a1)})
          score = std::max(score,
                           std::abs(symbol_m(spec, rational_apply(adj, det, delta_vec))));
        cands.push_back({score, bv_sumsq(a0) + bv_sumsq(a1), std::move(a0), std::move(a1)});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
      if (x.score != y.score) return x.score < y.score;
      if (x.sumsq != y.sumsq) return x.sumsq < y.sumsq;
      if (x.a0 != y.a0) return x.a0 < y.a0;
      return x.a1 < y.a1;
    });
    if (static_cast<int>(cands.size()) > budget.max_pairs_per_stage)
      cands.resize(budget.max_pairs_per_stage);

    for (const auto& cand : cands) {
      const std::vector<BigVec> a{cand.a0, cand.a1};
      if (!check_incongruence(spec.S, p, a)) continue;
      CertResult res;
      try {
        res = certify_full(spec, p, a, 1.0, budget.pad_target);
      } catch (const Error& e) {
        if (e.code() == Errc::CertificationFailed) {
          if (near_miss.empty())
            near_miss = "best uncertified candidate: p=" + std::to_string(p) + " A={" +
                        bv_to_string(cand.a0) + " " + bv_to_string(cand.a1) +
                        "} score=" + std::to_string(cand.score);
          continue;
        }
        throw;
      }
      const BigInt sumsq = bv_sumsq(cand.a0) + bv_sumsq(cand.a1);
      bool take = !have_best;
      if (have_best) {
        const BigInt best_sumsq = bv_sumsq(best.A[0]) + bv_sumsq(best.A[1]);
        take = res.rho < best.rho ||
               (res.rho == best.rho &&
                (sumsq < best_sumsq ||
                 (sumsq == best_sumsq && std::make_pair(cand.a0, cand.a1) <
                                             std::make_pair(best.A[0], best.A[1]))));
      }
      if (take) {
        best.p = p;
        best.A = a;
        best.rho = res.rho;
        best.M = res.M;
        best.ball_radius = res.ball;
        best.amplification = 1;
        best.base_p = p;
        best.base_A = a;
        best.base_rho = res.rho;
        have_best = true;
      }
    }

    delta = stage == 0 ? 0.2 : (stage == 1 ? 0.1 : delta / 2.0);
  }

  if (!have_best)
    throw Error(Errc::SearchExhausted,
                "no certified digit system within budget" +
                    (near_miss.empty() ? std::string() : "; " + near_miss));

  if (best.rho > rho_target) {
    int l = 1;
    while (std::pow(best.base_rho, l) > rho_target) {
      ++l;
      if (l > budget.max_amplification)
        throw Error(Errc::SearchExhausted, "amplification cap reached before rho_target");
    }
    best = amplify(best, l, spec);
  }
  return best;
}

DigitSystem amplify(const DigitSystem& ds, int l, const IfsSpec& spec) {
  if (l < 1) throw Error(Errc::BadInput, "amplification factor must be >= 1");
  if (l == 1) return ds;
  DigitSystem out = ds;
  const BigMat sp = bm_pow(bm_from_eigen(spec.S), ds.p);
  out.A.clear();
  for (const auto& a : ds.A) {
    BigVec acc = a;  // Horner over sum_{j<l} S^{p j} a
    for (int j = 1; j < l; ++j) {
      acc = bm_apply(sp, acc);
      for (int i = 0; i < spec.dim; ++i) acc[i] += a[i];
    }
    out.A.push_back(std::move(acc));
  }
  out.p = ds.p * l;
  out.amplification = ds.amplification * l;
  out.rho = std::pow(ds.base_rho, out.amplification);
  if (!check_incongruence(spec.S, out.p, out.A))
    throw Error(Errc::CertificationFailed, "amplified digits lost incongruence");
  set_m_ball(out, spec);
  return out;
}

}  // namespace muspec
