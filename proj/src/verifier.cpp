#include "muspec/verifier.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace muspec {

namespace {

Eigen::MatrixXcd gram_from_freqs(const IfsSpec& spec, const std::vector<BigVec>& freqs,
                                 double tol, Eigen::MatrixXd* entry_err) {
  const int n = static_cast<int>(freqs.size());
  Eigen::MatrixXcd g(n, n);
  if (entry_err) entry_err->setZero(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const CertifiedComplex v = mu_hat(spec, bv_sub(freqs[i], freqs[j]), tol);
      g(i, j) = v.value;
      g(j, i) = std::conj(v.value);
      if (entry_err) {
        (*entry_err)(i, j) = v.err;
        (*entry_err)(j, i) = v.err;
      }
    }
  }
  return g;
}

struct PowerOutcome {
  double rayleigh = 0.0;
  double residual = 0.0;
};

// Power iteration on the PSD shift `b`, Rayleigh quotient reported on `g`.
PowerOutcome power_rayleigh(const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& g,
                            Eigen::VectorXcd v) {
  v.normalize();
  for (int it = 0; it < 320; ++it) {
    Eigen::VectorXcd w = b * v;
    const double norm = w.norm();
    if (norm < 1e-250) break;  // b annihilates v; any unit vector is optimal
    w /= norm;
    const double delta = (w - v).norm();
    v = w;
    if (delta < 1e-15 && it > 4) break;
  }
  PowerOutcome out;
  out.rayleigh = (v.adjoint() * (g * v))(0).real();
  out.residual = (g * v - out.rayleigh * v).norm();
  return out;
}

Eigen::VectorXcd start_vector(int n, bool alternating) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    const double ramp = 1.0 + 1e-6 * static_cast<double>(i);
    v(i) = alternating && (i & 1) ? -ramp : ramp;
  }
  return v;
}

}  // namespace

GramReport gram_matrix(const IfsSpec& spec, const std::vector<SpectrumPoint>& points, double tol,
                       int max_size) {
  if (static_cast<int>(points.size()) > max_size)
    throw Error(Errc::TooLarge, std::to_string(points.size()) + " points exceed the Gram cap " +
                                    std::to_string(max_size));
  if (points.empty()) throw Error(Errc::BadInput, "empty point set");
  std::vector<BigVec> freqs;
  freqs.reserve(points.size());
  for (const auto& p : points) freqs.push_back(p.freq);
  GramReport rep;
  rep.size = static_cast<int>(points.size());
  rep.gram = gram_from_freqs(spec, freqs, tol, &rep.entry_err);
  return rep;
}

EigBounds eig_bounds(const Eigen::MatrixXcd& gram, const Eigen::MatrixXd& entry_err) {
  const int n = static_cast<int>(gram.rows());
  if (n < 1) throw Error(Errc::BadInput, "empty matrix");
  EigBounds eb;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < n; ++i) {
    double rad = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) rad += std::abs(gram(i, j));
      if (entry_err.size()) rad += entry_err(i, j);
    }
    lo = std::min(lo, gram(i, i).real() - rad);
    hi = std::max(hi, gram(i, i).real() + rad);
  }
  eb.min_lower = lo;
  eb.max_upper = hi;

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd b_max = gram - lo * id;  // PSD, dominant eig = eig_max - lo
  const Eigen::MatrixXcd b_min = hi * id - gram;  // PSD, dominant eig = hi - eig_min
  eb.max_estimate = -std::numeric_limits<double>::infinity();
  eb.min_estimate = std::numeric_limits<double>::infinity();
  for (bool alt : {false, true}) {
    const PowerOutcome pmax = power_rayleigh(b_max, gram, start_vector(n, alt));
    if (pmax.rayleigh > eb.max_estimate) {
      eb.max_estimate = pmax.rayleigh;
      eb.max_residual = pmax.residual;
    }
    const PowerOutcome pmin = power_rayleigh(b_min, gram, start_vector(n, alt));
    if (pmin.rayleigh < eb.min_estimate) {
      eb.min_estimate = pmin.rayleigh;
      eb.min_residual = pmin.residual;
    }
  }
  return eb;
}

double pairwise_decay_audit(const IfsSpec& spec, const Spectrum& spectrum, double tol) {
  double worst = -std::numeric_limits<double>::infinity();
  const auto& pts = spectrum.points;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const int d = word_metric(pts[i], pts[j]);
      const double g = std::abs(mu_hat(spec, bv_sub(pts[i].freq, pts[j].freq), tol).value);
      worst = std::max(worst, g - std::pow(spectrum.ds.rho, d));
    }
  return worst;
}

GramReport riesz_certificate(const IfsSpec& spec, const Spectrum& spectrum, double tol) {
  GramReport rep = gram_matrix(spec, spectrum.points, tol);
  rep.eig = eig_bounds(rep.gram, rep.entry_err);
  rep.schur_c = schur_constant(spectrum.points, spectrum.ds);
  rep.schur_tail = schur_tail_extended(spectrum.ds.rho, spectrum.q);
  rep.bessel_bound = 1.0 + rep.schur_tail;

  double worst = 0.0;
  const auto& pts = spectrum.points;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const int d = word_metric(pts[i], pts[j]);
      worst = std::max(worst, std::abs(rep.gram(i, j)) - std::pow(spectrum.ds.rho, d));
    }
  rep.worst_pair_violation = std::max(0.0, worst);

  rep.riesz_ok = rep.schur_tail < 1.0 && rep.eig.min_lower > 0.0;
  rep.riesz_lower = std::sqrt(std::max(0.0, rep.eig.min_lower));
  rep.riesz_upper = std::sqrt(std::max(0.0, rep.eig.max_upper));
  return rep;
}

BeurlingEstimate beurling_density(const std::vector<SpectrumPoint>& points, double r) {
  if (points.empty()) throw Error(Errc::BadInput, "empty point set");
  if (!(r > 0.0)) throw Error(Errc::BadInput, "r must be positive");
  const int d = static_cast<int>(points[0].freq.size());
  const int n = static_cast<int>(points.size());

  // Diameter of the set in the sup norm, and the dyadic scale covering it.
  int t_max = 0;
  for (int i = 0; i < d; ++i) {
    BigInt lo = points[0].freq[i], hi = points[0].freq[i];
    for (const auto& p : points) {
      lo = std::min(lo, p.freq[i]);
      hi = std::max(hi, p.freq[i]);
    }
    const BigInt spread = hi - lo;
    if (spread > 1) {
      const int b = static_cast<int>(boost::multiprecision::msb(spread));
      const int t = (BigInt(1) << b) == spread ? b : b + 1;
      t_max = std::max(t_max, t);
    } else if (spread == 1) {
      t_max = std::max(t_max, 0);
    }
  }

  // e(c, p): smallest t with ||freq_p - center_c||_sup <= 2^t.
  auto scale_of = [&](const BigVec& center, const BigVec& freq) {
    BigInt maxabs = 0;
    for (int i = 0; i < d; ++i) maxabs = std::max(maxabs, abs(freq[i] - center[i]));
    if (maxabs <= 1) return 0;
    const int b = static_cast<int>(boost::multiprecision::msb(maxabs));
    return (BigInt(1) << b) == maxabs ? b : b + 1;
  };

  BeurlingEstimate est;
  est.r = r;
  est.windows.assign(t_max + 1, BeurlingWindow{});
  for (int t = 0; t <= t_max; ++t) est.windows[t].log2_h = t;

  std::vector<long long> hist(t_max + 2, 0);
  const BigVec origin = bv_zero(d);
  for (int c = -1; c < n; ++c) {
    const BigVec& center = c < 0 ? origin : points[c].freq;
    std::fill(hist.begin(), hist.end(), 0);
    for (const auto& p : points) {
      const int e = scale_of(center, p.freq);
      if (e <= t_max) ++hist[e];
    }
    long long cum = 0;
    for (int t = 0; t <= t_max; ++t) {
      cum += hist[t];
      if (cum > est.windows[t].count) {
        est.windows[t].count = cum;
        est.windows[t].center_index = c;
      }
    }
  }
  for (int t = 0; t <= t_max; ++t) {
    est.windows[t].normalized =
        std::exp2(std::log2(static_cast<double>(std::max<long long>(est.windows[t].count, 0))) -
                  r * static_cast<double>(t));
    if (est.windows[t].count == 0) est.windows[t].normalized = 0.0;
  }
  est.density_r = est.windows[t_max].normalized;
  return est;
}

DimLowerReport dim_lower_bound(const DigitSystem& ds, int k, const IfsSpec& spec,
                               const Spectrum* witness) {
  DimLowerReport rep;
  rep.s_norm_upper = expansion_upper(spec);
  rep.dim_bound = std::log(2.0) / (2.0 * static_cast<double>(k) * static_cast<double>(ds.p) *
                                   std::log(rep.s_norm_upper));
  if (!witness) return rep;

  double log2_ca = 0.0;
  for (const auto& a : ds.A) log2_ca = std::max(log2_ca, log2_norm_upper(a));
  const double log2_s = std::log2(rep.s_norm_upper);
  const double x = static_cast<double>(ds.p) * log2_s;
  // log2(s^p - 1), rounded down so the radius D s^{2kq_n p} only grows.
  const double log2_den = x <= 500.0 ? std::log2(std::exp2(x) - 1.0) : x - 1e-9;
  const double log2_d_const = log2_ca - log2_den;

  for (int n = 1; n <= witness->levels; ++n) {
    DimWitness w;
    w.level = n;
    w.q_n = witness->q[n - 1];
    w.log2_radius = log2_d_const + 2.0 * static_cast<double>(k) * static_cast<double>(w.q_n) *
                                       static_cast<double>(ds.p) * log2_s;
    w.required = w.q_n >= 62 ? std::numeric_limits<long long>::max() : (1ll << w.q_n);
    for (const auto& p : witness->points)
      if (log2_norm_upper(p.freq) <= w.log2_radius) ++w.count;
    w.ok = w.count >= w.required;
    rep.witnesses.push_back(w);
  }
  return rep;
}

IfsSpec cantor3_spec() {
  IfsSpec s;
  s.dim = 1;
  s.R = Eigen::MatrixXi::Constant(1, 1, 3);
  s.digits = {Eigen::VectorXi::Zero(1), Eigen::VectorXi::Constant(1, 2)};
  s.probs = {0.5, 0.5};
  return validate_ifs(std::move(s));
}

std::vector<double> cantor_3n_demo(int n, double tol) {
  if (n < 2) throw Error(Errc::BadInput, "need n >= 2");
  const IfsSpec spec = cantor3_spec();
  std::vector<BigVec> freqs;
  BigInt v = 1;
  for (int i = 0; i < n; ++i, v *= 3) freqs.push_back(BigVec{v});
  const Eigen::MatrixXcd g = gram_from_freqs(spec, freqs, tol, nullptr);
  std::vector<double> tops;
  for (int m = 2; m <= n; ++m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.topLeftCorner(m, m),
                                                       Eigen::EigenvaluesOnly);
    tops.push_back(es.eigenvalues()(m - 1));
  }
  return tops;
}

}  // namespace muspec
