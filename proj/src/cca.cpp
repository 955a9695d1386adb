// Copyright 2026 The asag authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asag/cca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>

#include "asag/error.hpp"
#include "asag/rng.hpp"
#include "asag/serial.hpp"

namespace asag {
namespace {

// Ranks profiles descending by total similarity, ties keeping input order.
std::vector<int> rank_order(const std::vector<SimilarityProfile>& profiles,
                            const std::vector<int>& keep) {
  std::vector<int> order = keep;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return profiles[a].vec().sum() > profiles[b].vec().sum();
  });
  return order;
}

// Symmetric positive semi-definite inverse square root; eigenvalues below
// a relative floor are treated as zero directions.
Eigen::MatrixXd inv_sqrt_psd(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) {
    throw Error("eigendecomposition failed in CCA whitening");
  }
  const Eigen::VectorXd& vals = es.eigenvalues();
  const double floor = std::max(vals.cwiseAbs().maxCoeff() * 1e-12, 1e-300);
  Eigen::VectorXd inv(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    inv[i] = vals[i] > floor ? 1.0 / std::sqrt(vals[i]) : 0.0;
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

PairedSamples pair_instances(const std::vector<SimilarityProfile>& src,
                             const std::vector<SimilarityProfile>& tgt,
                             std::uint64_t seed) {
  if (src.empty() || tgt.empty()) {
    throw Error("cannot pair empty profile lists");
  }
  const int n = static_cast<int>(std::min(src.size(), tgt.size()));

  auto subsample = [&](std::size_t size, const char* tag) {
    std::vector<int> keep(size);
    std::iota(keep.begin(), keep.end(), 0);
    if (static_cast<int>(size) > n) {
      Rng rng(mix_seed(seed, tag));
      keep = sample_without_replacement(rng, static_cast<int>(size), n);
    }
    return keep;
  };

  const std::vector<int> src_order =
      rank_order(src, subsample(src.size(), "subsample-source"));
  const std::vector<int> tgt_order =
      rank_order(tgt, subsample(tgt.size(), "subsample-target"));

  PairedSamples ps;
  ps.seed = seed;
  ps.source.resize(kProfileDims, n);
  ps.target.resize(kProfileDims, n);
  for (int i = 0; i < n; ++i) {
    ps.source.col(i) = src[src_order[i]].vec();
    ps.target.col(i) = tgt[tgt_order[i]].vec();
  }
  return ps;
}

CcaModel fit_cca(const PairedSamples& ps, double ridge) {
  const Eigen::Index n = ps.source.cols();
  if (n != ps.target.cols()) {
    throw Error("paired samples have unequal column counts");
  }
  if (n < 2) throw Error("CCA needs at least two paired samples");
  if (!ps.source.allFinite() || !ps.target.allFinite()) {
    throw Error("CCA input contains non-finite values");
  }
  if (ridge < 0) throw Error("ridge must be non-negative");

  CcaModel model;
  model.ridge = ridge;
  model.source_mean = ps.source.rowwise().mean();
  model.target_mean = ps.target.rowwise().mean();

  const Eigen::MatrixXd xs = ps.source.colwise() - model.source_mean;
  const Eigen::MatrixXd xt = ps.target.colwise() - model.target_mean;
  const double scale = 1.0 / static_cast<double>(n - 1);
  const Eigen::MatrixXd s_ss = xs * xs.transpose() * scale;
  const Eigen::MatrixXd s_tt = xt * xt.transpose() * scale;
  const Eigen::MatrixXd s_st = xs * xt.transpose() * scale;

  const Eigen::Index ds = s_ss.rows();
  const Eigen::Index dt = s_tt.rows();
  const Eigen::MatrixXd ws =
      inv_sqrt_psd(s_ss + ridge * Eigen::MatrixXd::Identity(ds, ds));
  const Eigen::MatrixXd wt =
      inv_sqrt_psd(s_tt + ridge * Eigen::MatrixXd::Identity(dt, dt));

  const Eigen::MatrixXd m = ws * s_st * wt;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const Eigen::VectorXd& sigma = svd.singularValues();
  int k = 0;
  while (k < sigma.size() && sigma[k] > 1e-8) ++k;
  // k may legitimately be zero for degenerate inputs (constant columns);
  // projections are then empty and a downstream classifier sees bias only.

  model.source_proj = ws * svd.matrixU().leftCols(k);
  model.target_proj = wt * svd.matrixV().leftCols(k);
  model.correlations =
      sigma.head(k).cwiseMin(1.0).cwiseMax(0.0);

  // Unit variance of each projected component on the training data.
  for (int c = 0; c < k; ++c) {
    const double var_s =
        model.source_proj.col(c).dot(s_ss * model.source_proj.col(c));
    const double var_t =
        model.target_proj.col(c).dot(s_tt * model.target_proj.col(c));
    if (var_s > 1e-300) model.source_proj.col(c) /= std::sqrt(var_s);
    if (var_t > 1e-300) model.target_proj.col(c) /= std::sqrt(var_t);
  }
  return model;
}

namespace {

Eigen::VectorXd project(const Eigen::MatrixXd& proj, const Eigen::VectorXd& mean,
                        const Eigen::VectorXd& v, const char* side) {
  if (v.size() != proj.rows()) {
    throw Error(std::string("projection dimension mismatch on the ") + side +
                " side: got " + std::to_string(v.size()) + ", expected " +
                std::to_string(proj.rows()));
  }
  if (!v.allFinite()) throw Error("projection input is not finite");
  return proj.transpose() * (v - mean);
}

}  // namespace

Eigen::VectorXd project_source(const CcaModel& m, const Eigen::VectorXd& v) {
  return project(m.source_proj, m.source_mean, v, "source");
}

Eigen::VectorXd project_target(const CcaModel& m, const Eigen::VectorXd& v) {
  return project(m.target_proj, m.target_mean, v, "target");
}

std::string render_cca(const CcaModel& m) {
  nlohmann::json j;
  j["format"] = "asag-cca";
  j["version"] = 1;
  j["ridge"] = double_to_hex(m.ridge);
  j["source_mean"] = vector_to_json(m.source_mean);
  j["target_mean"] = vector_to_json(m.target_mean);
  j["correlations"] = vector_to_json(m.correlations);
  j["source_proj"] = matrix_to_json(m.source_proj);
  j["target_proj"] = matrix_to_json(m.target_proj);
  return j.dump(2) + "\n";
}

CcaModel parse_cca(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("bad CCA model file: ") + e.what());
  }
  if (j.value("format", "") != "asag-cca" || j.value("version", 0) != 1) {
    throw Error("not an asag-cca v1 model file");
  }
  CcaModel m;
  m.ridge = double_from_hex(j.at("ridge").get<std::string>());
  m.source_mean = vector_from_json(j.at("source_mean"));
  m.target_mean = vector_from_json(j.at("target_mean"));
  m.correlations = vector_from_json(j.at("correlations"));
  m.source_proj = matrix_from_json(j.at("source_proj"));
  m.target_proj = matrix_from_json(j.at("target_proj"));
  return m;
}

void save_cca(const CcaModel& m, const std::string& path) {
  write_text_file(path, render_cca(m));
}

CcaModel load_cca(const std::string& path) {
  return parse_cca(read_text_file(path));
}

}  // namespace asag
