#include "volnet/jirf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "volnet/error.hpp"
#include "volnet/parallel.hpp"

namespace volnet {

namespace {

constexpr double kMaxCondition = 1e12;

double condition_number(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

void check_stable(const HybridModel& model) {
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double phi = persistence(model.own[i]);
    if (!(phi < kExplosivePersistence)) {
      throw Error(ErrorCode::kExplosiveModel,
                  model.assets[i] + ": persistence " + std::to_string(phi) + " >= " +
                      std::to_string(kExplosivePersistence));
    }
  }
}

const Eigen::MatrixXd& seed_or_default(const HybridModel& model, const Eigen::MatrixXd* seed) {
  const Eigen::MatrixXd& history = seed != nullptr ? *seed : model.seed_history;
  if (history.rows() < model.lags.span() || history.cols() != static_cast<Eigen::Index>(model.size())) {
    throw Error(ErrorCode::kHistoryTooShort, "seed history must have at least " +
                                                 std::to_string(model.lags.span()) +
                                                 " rows and one column per asset");
  }
  return history;
}

// Forward path: rows [0, span) are the seed, row span + h is step h.
Eigen::MatrixXd run_path(const HybridModel& model, const Eigen::MatrixXd& seed, int steps,
                         const Eigen::VectorXd* impulse, bool clamp, std::size_t* clamped) {
  const Eigen::Index span = model.lags.span();
  Eigen::MatrixXd path(span + steps, seed.cols());
  path.topRows(span) = seed.bottomRows(span);
  for (Eigen::Index h = 0; h < steps; ++h) {
    Eigen::VectorXd next = predict_one_step(model, path.middleRows(h, span));
    if (h == 0 && impulse != nullptr) next += *impulse;
    if (clamp) {
      for (Eigen::Index k = 0; k < next.size(); ++k) {
        if (next(k) < 0.0) {
          next(k) = 0.0;
          if (clamped != nullptr) ++*clamped;
        }
      }
    }
    path.row(span + h) = next.transpose();
  }
  if (!path.allFinite()) throw Error(ErrorCode::kNonFiniteSimulation, "simulated path diverged");
  return path.bottomRows(steps);
}

}  // namespace

std::vector<std::size_t> resolve_members(std::span<const std::string> assets,
                                         const ShockGroup& group) {
  if (group.members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "shock group '" + group.name + "' is empty");
  }
  std::vector<std::size_t> out;
  for (const auto& member : group.members) {
    const auto it = std::find(assets.begin(), assets.end(), member);
    if (it == assets.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "shock group '" + group.name + "': unknown asset '" + member + "'");
    }
    const auto index = static_cast<std::size_t>(it - assets.begin());
    if (std::find(out.begin(), out.end(), index) != out.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "shock group '" + group.name + "': duplicate asset '" + member + "'");
    }
    out.push_back(index);
  }
  return out;
}

Eigen::VectorXd joint_shock(const Eigen::Ref<const Eigen::MatrixXd>& sigma,
                            std::span<const std::size_t> members, ShockMode mode) {
  const Eigen::Index K = sigma.rows();
  if (sigma.cols() != K) throw Error(ErrorCode::kInvalidArgument, "covariance must be square");
  if (members.empty()) throw Error(ErrorCode::kInvalidArgument, "shock group is empty");
  for (std::size_t m : members) {
    if (static_cast<Eigen::Index>(m) >= K) {
      throw Error(ErrorCode::kInvalidArgument, "shock member out of range");
    }
  }

  Eigen::VectorXd shock = Eigen::VectorXd::Zero(K);
  if (mode == ShockMode::kLeadConditioned) {
    const auto lead = static_cast<Eigen::Index>(members.front());
    const double var = sigma(lead, lead);
    const double sd = std::sqrt(std::max(var, 0.0));
    shock(lead) = sd;
    for (std::size_t m : members.subspan(1)) {
      const auto j = static_cast<Eigen::Index>(m);
      shock(j) = var > 0.0 ? sigma(j, lead) / var * sd : 0.0;
    }
    return shock;
  }

  const auto s = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd sigma_ss(s, s);
  Eigen::VectorXd pinned(s);
  for (Eigen::Index a = 0; a < s; ++a) {
    const auto ia = static_cast<Eigen::Index>(members[static_cast<std::size_t>(a)]);
    pinned(a) = std::sqrt(std::max(sigma(ia, ia), 0.0));
    for (Eigen::Index b = 0; b < s; ++b) {
      sigma_ss(a, b) = sigma(ia, static_cast<Eigen::Index>(members[static_cast<std::size_t>(b)]));
    }
    shock(ia) = pinned(a);
  }
  if (s == K) return shock;

  if (condition_number(sigma_ss) > kMaxCondition) {
    const double ridge = 1e-10 * sigma_ss.trace();
    sigma_ss.diagonal().array() += ridge;
    if (condition_number(sigma_ss) > kMaxCondition) {
      throw Error(ErrorCode::kSingularSubmatrix, "shocked block of the covariance is singular");
    }
  }
  const Eigen::VectorXd weights = sigma_ss.ldlt().solve(pinned);
  for (Eigen::Index j = 0; j < K; ++j) {
    if (std::find(members.begin(), members.end(), static_cast<std::size_t>(j)) != members.end()) {
      continue;
    }
    double value = 0.0;
    for (Eigen::Index a = 0; a < s; ++a) {
      value += sigma(j, static_cast<Eigen::Index>(members[static_cast<std::size_t>(a)])) * weights(a);
    }
    shock(j) = value;
  }
  return shock;
}

JirfPath simulate_jirf(const HybridModel& model, const Eigen::Ref<const Eigen::VectorXd>& shock,
                       int horizon, const Eigen::MatrixXd* seed_history) {
  if (horizon < 0) throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 0");
  if (shock.size() != static_cast<Eigen::Index>(model.size())) {
    throw Error(ErrorCode::kLengthMismatch, "shock length differs from model assets");
  }
  check_stable(model);
  const Eigen::MatrixXd& seed = seed_or_default(model, seed_history);
  const Eigen::VectorXd impulse = shock;

  const Eigen::MatrixXd baseline = run_path(model, seed, horizon + 1, nullptr, false, nullptr);
  const Eigen::MatrixXd shocked = run_path(model, seed, horizon + 1, &impulse, false, nullptr);
  JirfPath out;
  out.responses = shocked - baseline;
  out.responses.row(0) = impulse.transpose();
  return out;
}

Eigen::MatrixXd simulate_levels(const HybridModel& model,
                                const Eigen::Ref<const Eigen::MatrixXd>& seed_history, int steps,
                                const Eigen::VectorXd* impulse, std::size_t* clamped) {
  if (steps < 0) throw Error(ErrorCode::kInvalidArgument, "steps must be >= 0");
  const Eigen::MatrixXd seed = seed_history;
  seed_or_default(model, &seed);
  return run_path(model, seed, steps, impulse, true, clamped);
}

std::vector<JirfPath> compute_jirfs(const HybridModel& model, std::span<const ShockGroup> groups,
                                    int horizon, ShockMode mode) {
  std::vector<JirfPath> out(groups.size());
  parallel_for(groups.size(), [&](std::size_t g) {
    const auto members = resolve_members(model.assets, groups[g]);
    const Eigen::VectorXd shock = joint_shock(model.residual_cov, members, mode);
    out[g] = simulate_jirf(model, shock, horizon);
    out[g].group = groups[g].name;
  });
  return out;
}

}  // namespace volnet
