#include "volnet/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "volnet/error.hpp"
#include "volnet/random.hpp"

namespace volnet {

namespace {

// Per-lag coefficient matrices A_1..A_span with RV_t = c + sum_l A_l RV_{t-l}.
std::vector<Eigen::MatrixXd> lag_matrices(const HybridModel& model) {
  const auto K = static_cast<Eigen::Index>(model.size());
  const int span = model.lags.span();
  std::vector<Eigen::MatrixXd> a(static_cast<std::size_t>(span), Eigen::MatrixXd::Zero(K, K));
  const std::array<int, 3> windows{model.lags.daily, model.lags.weekly, model.lags.monthly};
  const auto spread = [&](Eigen::Index i, Eigen::Index j, int h, double coef) {
    const int w = windows[static_cast<std::size_t>(h)];
    for (int l = 0; l < w; ++l) a[static_cast<std::size_t>(l)](i, j) += coef / w;
  };
  for (Eigen::Index i = 0; i < K; ++i) {
    const auto& own = model.own[static_cast<std::size_t>(i)];
    spread(i, i, 0, own.beta_d);
    spread(i, i, 1, own.beta_w);
    spread(i, i, 2, own.beta_m);
    for (Eigen::Index j = 0; j < K; ++j) {
      if (j == i) continue;
      for (int h = 0; h < 3; ++h) {
        spread(i, j, h,
               model.cross_coef(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                static_cast<Horizon>(h)));
      }
    }
  }
  return a;
}

Eigen::MatrixXd innovation_factor(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::kInvalidArgument, "innovation covariance is not positive semidefinite");
  }
  return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

}  // namespace

HybridModel true_model(const SyntheticSpec& spec) {
  const std::size_t K = spec.assets.size();
  const auto k = static_cast<Eigen::Index>(K);
  validate(spec.lags);
  if (K == 0 || spec.own.size() != K) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic spec needs one own-coefficient set per asset");
  }
  if (spec.innovation_cov.rows() != k || spec.innovation_cov.cols() != k) {
    throw Error(ErrorCode::kInvalidArgument, "innovation covariance must be K x K");
  }
  HybridModel model;
  model.assets = spec.assets;
  model.lags = spec.lags;
  model.own = spec.own;
  model.cross.assign(K, Eigen::VectorXd::Zero(3 * (k - 1)));
  model.cross_intercept.assign(K, 0.0);
  model.selected_lambda.assign(K, 0.0);
  model.residual_cov = spec.innovation_cov;
  for (const auto& e : spec.edges) {
    if (e.source >= K || e.target >= K || e.source == e.target) {
      throw Error(ErrorCode::kInvalidArgument, "planted edge has invalid endpoints");
    }
    model.cross[e.target](HybridModel::cross_index(e.target, e.source, e.horizon)) = e.value;
  }
  const Eigen::VectorXd mean =
      spectral_radius(model) < 1.0 ? unconditional_mean(model) : Eigen::VectorXd::Zero(k);
  model.seed_history = mean.transpose().replicate(spec.lags.span(), 1);
  return model;
}

double spectral_radius(const HybridModel& model) {
  const auto a = lag_matrices(model);
  const auto K = static_cast<Eigen::Index>(model.size());
  const auto span = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(K * span, K * span);
  for (Eigen::Index l = 0; l < span; ++l) companion.block(0, l * K, K, K) = a[static_cast<std::size_t>(l)];
  if (span > 1) companion.block(K, 0, K * (span - 1), K * (span - 1)).setIdentity();
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(companion, false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::VectorXd unconditional_mean(const HybridModel& model) {
  const auto K = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXd total = Eigen::MatrixXd::Identity(K, K);
  for (const auto& a : lag_matrices(model)) total -= a;
  Eigen::VectorXd c(K);
  for (Eigen::Index i = 0; i < K; ++i) {
    c(i) = model.own[static_cast<std::size_t>(i)].intercept +
           model.cross_intercept[static_cast<std::size_t>(i)];
  }
  return total.partialPivLu().solve(c);
}

RvPanel generate_synthetic_panel(const SyntheticSpec& spec) {
  if (spec.length < 1) throw Error(ErrorCode::kInvalidArgument, "synthetic length must be >= 1");
  if (spec.burn_in < 0) throw Error(ErrorCode::kInvalidArgument, "burn_in must be >= 0");
  HybridModel model = true_model(spec);
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (!(persistence(model.own[i]) < 1.0)) {
      throw Error(ErrorCode::kExplosiveSpec, spec.assets[i] + ": persistence >= 1");
    }
  }
  if (!(spectral_radius(model) < 1.0)) {
    throw Error(ErrorCode::kExplosiveSpec, "system spectral radius >= 1");
  }

  const Eigen::MatrixXd factor = innovation_factor(spec.innovation_cov);
  const auto K = static_cast<Eigen::Index>(model.size());
  const Eigen::Index span = spec.lags.span();
  const Eigen::Index steps = spec.burn_in + spec.length;
  Eigen::MatrixXd path(span + steps, K);
  path.topRows(span) = model.seed_history.cwiseMax(spec.floor);

  Rng rng(spec.seed);
  Eigen::VectorXd z(K);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (Eigen::Index k = 0; k < K; ++k) z(k) = rng.normal();
    Eigen::VectorXd next = predict_one_step(model, path.middleRows(t, span)) + factor * z;
    path.row(span + t) = next.cwiseMax(spec.floor).transpose();
  }

  RvPanel out;
  out.assets = spec.assets;
  out.values = path.bottomRows(spec.length);
  out.dates.reserve(static_cast<std::size_t>(spec.length));
  Date d = spec.start.is_weekend() ? spec.start.next_weekday() : spec.start;
  for (Eigen::Index t = 0; t < spec.length; ++t) {
    out.dates.push_back(d);
    d = d.next_weekday();
  }
  return out;
}

}  // namespace volnet
