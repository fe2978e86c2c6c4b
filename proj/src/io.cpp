#include "muspec/io.hpp"

#include <fstream>

namespace muspec {

namespace {

Json bigvec_to_json(const BigVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

BigVec bigvec_from_json(const Json& a) {
  BigVec v;
  for (const auto& x : a) {
    if (x.is_string())
      v.emplace_back(x.get<std::string>());
    else
      v.emplace_back(x.get<long long>());
  }
  return v;
}

}  // namespace

IfsSpec ifs_from_json(const Json& j) {
  IfsSpec s;
  try {
    s.dim = j.at("dim").get<int>();
    const auto& rows = j.at("R");
    s.R.resize(s.dim, s.dim);
    for (int i = 0; i < s.dim; ++i)
      for (int c = 0; c < s.dim; ++c) s.R(i, c) = rows.at(i).at(c).get<int>();
    for (const auto& b : j.at("B")) {
      Eigen::VectorXi v(s.dim);
      if (b.is_array())
        for (int i = 0; i < s.dim; ++i) v(i) = b.at(i).get<int>();
      else if (s.dim == 1)
        v(0) = b.get<int>();
      else
        throw Error(Errc::BadInput, "digit entries must be arrays for dim > 1");
      s.digits.push_back(std::move(v));
    }
    if (j.contains("p")) s.probs = j.at("p").get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw Error(Errc::BadInput, std::string("malformed IFS spec: ") + e.what());
  }
  return validate_ifs(std::move(s));
}

IfsSpec load_ifs(const std::string& path) { return ifs_from_json(read_json(path)); }

Json ifs_to_json(const IfsSpec& spec) {
  Json j;
  j["dim"] = spec.dim;
  Json rows = Json::array();
  for (int i = 0; i < spec.dim; ++i) {
    Json row = Json::array();
    for (int c = 0; c < spec.dim; ++c) row.push_back(spec.R(i, c));
    rows.push_back(row);
  }
  j["R"] = rows;
  Json digits = Json::array();
  for (const auto& b : spec.digits) {
    Json v = Json::array();
    for (int i = 0; i < spec.dim; ++i) v.push_back(b(i));
    digits.push_back(v);
  }
  j["B"] = digits;
  j["p"] = spec.probs;
  return j;
}

Json digit_system_to_json(const DigitSystem& ds) {
  Json j;
  j["p"] = ds.p;
  Json a = Json::array();
  for (const auto& d : ds.A) a.push_back(bigvec_to_json(d));
  j["A"] = a;
  j["rho"] = ds.rho;
  j["M"] = ds.M;
  j["ball_radius"] = ds.ball_radius;
  j["amplification"] = ds.amplification;
  Json base;
  base["p"] = ds.base_p;
  Json ba = Json::array();
  for (const auto& d : ds.base_A) ba.push_back(bigvec_to_json(d));
  base["A"] = ba;
  base["rho"] = ds.base_rho;
  j["base"] = base;
  return j;
}

DigitSystem digit_system_from_json(const Json& j) {
  DigitSystem ds;
  try {
    ds.p = j.at("p").get<int>();
    for (const auto& a : j.at("A")) ds.A.push_back(bigvec_from_json(a));
    ds.rho = j.at("rho").get<double>();
    ds.M = j.at("M").get<double>();
    ds.ball_radius = j.at("ball_radius").get<double>();
    ds.amplification = j.at("amplification").get<int>();
    const auto& base = j.at("base");
    ds.base_p = base.at("p").get<int>();
    for (const auto& a : base.at("A")) ds.base_A.push_back(bigvec_from_json(a));
    ds.base_rho = base.at("rho").get<double>();
  } catch (const Json::exception& e) {
    throw Error(Errc::BadInput, std::string("malformed digit system: ") + e.what());
  }
  return ds;
}

Json spectrum_to_json(const Spectrum& sp) {
  Json j;
  j["spec_hash"] = sp.spec_hash;
  j["digit_system"] = digit_system_to_json(sp.ds);
  j["k"] = sp.k;
  j["q"] = sp.q;
  j["levels"] = sp.levels;
  j["per_level_cap"] = sp.per_level_cap;
  j["schur_tail"] = sp.schur_tail;
  Json pts = Json::array();
  for (const auto& p : sp.points) {
    Json pj;
    pj["freq"] = bigvec_to_json(p.freq);
    Json w = Json::array();
    for (auto sym : p.word) w.push_back(static_cast<int>(sym));
    pj["word"] = w;
    pj["level"] = p.level;
    pts.push_back(std::move(pj));
  }
  j["points"] = pts;
  return j;
}

Spectrum spectrum_from_json(const Json& j) {
  Spectrum sp;
  try {
    sp.spec_hash = j.at("spec_hash").get<std::string>();
    sp.ds = digit_system_from_json(j.at("digit_system"));
    sp.k = j.at("k").get<int>();
    sp.q = j.at("q").get<std::vector<long long>>();
    sp.levels = j.at("levels").get<int>();
    sp.per_level_cap = j.at("per_level_cap").get<long long>();
    sp.schur_tail = j.at("schur_tail").get<double>();
    const std::uint64_t tag = sp.ds.tag();
    for (const auto& pj : j.at("points")) {
      SpectrumPoint p;
      p.freq = bigvec_from_json(pj.at("freq"));
      for (const auto& sym : pj.at("word")) p.word.push_back(sym.get<std::uint8_t>());
      p.level = pj.at("level").get<int>();
      p.ds_tag = tag;
      sp.points.push_back(std::move(p));
    }
  } catch (const Json::exception& e) {
    throw Error(Errc::BadInput, std::string("malformed spectrum: ") + e.what());
  }
  return sp;
}

Json gram_report_to_json(const GramReport& rep, bool include_matrix) {
  Json j;
  j["size"] = rep.size;
  j["schur_c"] = rep.schur_c;
  j["schur_tail"] = rep.schur_tail;
  j["bessel_bound"] = rep.bessel_bound;
  Json eig;
  eig["min_lower"] = rep.eig.min_lower;
  eig["min_estimate"] = rep.eig.min_estimate;
  eig["max_estimate"] = rep.eig.max_estimate;
  eig["max_upper"] = rep.eig.max_upper;
  eig["min_residual"] = rep.eig.min_residual;
  eig["max_residual"] = rep.eig.max_residual;
  j["eig"] = eig;
  j["riesz_lower"] = rep.riesz_lower;
  j["riesz_upper"] = rep.riesz_upper;
  j["riesz_ok"] = rep.riesz_ok;
  j["worst_pair_violation"] = rep.worst_pair_violation;
  if (include_matrix) {
    Json m = Json::array();
    for (int i = 0; i < rep.size; ++i) {
      Json row = Json::array();
      for (int c = 0; c < rep.size; ++c)
        row.push_back(Json::array({rep.gram(i, c).real(), rep.gram(i, c).imag(),
                                   rep.entry_err.size() ? rep.entry_err(i, c) : 0.0}));
      m.push_back(std::move(row));
    }
    j["gram"] = m;
  }
  return j;
}

Json beurling_to_json(const BeurlingEstimate& est) {
  Json j;
  j["r"] = est.r;
  j["density_r"] = est.density_r;
  Json w = Json::array();
  for (const auto& win : est.windows) {
    Json wj;
    wj["center_index"] = win.center_index;
    wj["log2_h"] = win.log2_h;
    wj["count"] = win.count;
    wj["normalized"] = win.normalized;
    w.push_back(std::move(wj));
  }
  j["windows"] = w;
  return j;
}

Json dim_report_to_json(const DimLowerReport& rep) {
  Json j;
  j["dim_bound"] = rep.dim_bound;
  j["s_norm_upper"] = rep.s_norm_upper;
  Json w = Json::array();
  for (const auto& wit : rep.witnesses) {
    Json wj;
    wj["level"] = wit.level;
    wj["q_n"] = wit.q_n;
    wj["log2_radius"] = wit.log2_radius;
    wj["count"] = wit.count;
    wj["required"] = wit.required;
    wj["ok"] = wit.ok;
    w.push_back(std::move(wj));
  }
  j["witnesses"] = w;
  return j;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadInput, "cannot open " + path);
  Json j;
  in >> j;
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::BadInput, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace muspec
