#include "cnr/bootstrap.hpp"

#include <cmath>
#include <mutex>
#include <ostream>
#include <string>

#include "cnr/errors.hpp"
#include "cnr/parallel.hpp"
#include "cnr/stats.hpp"

namespace cnr {

SimulationFactors make_simulation_factors(const CovariateFieldParams& theta_x,
                                          const SlmmParams& slmm,
                                          const LocationSet& locs_s,
                                          const LocationSet& locs_stilde) {
  theta_x.validate(locs_s.metric());
  SimulationFactors f;
  const LocationSet locs_all = concat(locs_stilde, locs_s);
  const Eigen::MatrixXd all_dists = pairwise_distances(locs_all);
  f.chol_joint.reserve(theta_x.marginals.size());
  for (const auto& m : theta_x.marginals)
    f.chol_joint.push_back(
        cholesky(matern_cov_from_distances(all_dists, m.matern)));
  f.chol_r_lower = cholesky(theta_x.cross.r).lower;

  MaternParams rho_matern{slmm.sigma2_rho, slmm.nu_rho, slmm.alpha_rho, 0.0};
  f.chol_sigma_rho = cholesky(
      matern_cov_from_distances(pairwise_distances(locs_s), rho_matern));
  return f;
}

SimulatedData simulate_dataset_with_factors(
    const SimulationFactors& factors, const CovariateFieldParams& theta_x,
    const Eigen::VectorXd& beta, const DesignRule& design_rule,
    const LocationSet& locs_s, const LocationSet& locs_stilde,
    RngStream& rng) {
  const int k = theta_x.n_covariates();
  const auto m = static_cast<Eigen::Index>(locs_stilde.size());
  const auto n = static_cast<Eigen::Index>(locs_s.size());
  if (factors.chol_sigma_rho.dim() != n ||
      static_cast<int>(factors.chol_joint.size()) != k ||
      factors.chol_joint.front().dim() != m + n)
    throw std::invalid_argument("simulate: factors do not match the locations");
  if (!(factors.tau_eps >= 0.0))
    throw std::invalid_argument("simulate: negative residual variance");

  // Covariates: column k of W is sum_j C_R(k,j) z_j, so the K columns carry
  // cross-correlation R while each x_k = mu_k + L_k w_k keeps its marginal.
  Eigen::MatrixXd z(m + n, k);
  for (int j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < m + n; ++i) z(i, j) = rng.normal();
  const Eigen::MatrixXd w = z * factors.chol_r_lower.transpose();

  SimulatedData out;
  out.x_tilde.resize(m, k);
  out.x_s_hidden.resize(n, k);
  for (int j = 0; j < k; ++j) {
    const Eigen::VectorXd xj =
        (factors.chol_joint[static_cast<std::size_t>(j)]
             .lower.triangularView<Eigen::Lower>() *
         w.col(j))
            .array() +
        theta_x.marginals[static_cast<std::size_t>(j)].mu;
    out.x_tilde.col(j) = xj.head(m);
    out.x_s_hidden.col(j) = xj.tail(n);
  }

  Eigen::VectorXd rho(n);
  for (Eigen::Index i = 0; i < n; ++i) rho(i) = rng.normal();
  rho = factors.chol_sigma_rho.lower.triangularView<Eigen::Lower>() * rho;

  const double eps_sd = std::sqrt(factors.tau_eps);
  Eigen::VectorXd eps(n);
  for (Eigen::Index i = 0; i < n; ++i) eps(i) = eps_sd * rng.normal();

  const Eigen::MatrixXd b = design_matrix_from_rule(out.x_s_hidden, design_rule);
  if (b.cols() != beta.size())
    throw std::invalid_argument("simulate: beta length does not match the design rule");
  out.y = b * beta + rho + eps;
  return out;
}

SimulatedData simulate_dataset(const CovariateFieldParams& theta_x,
                               const SlmmParams& slmm,
                               const Eigen::VectorXd& beta,
                               const DesignRule& design_rule,
                               const LocationSet& locs_s,
                               const LocationSet& locs_stilde, RngStream& rng) {
  const SimulationFactors factors =
      make_simulation_factors(theta_x, slmm, locs_s, locs_stilde);
  return simulate_dataset_with_factors(factors, theta_x, beta, design_rule,
                                       locs_s, locs_stilde, rng);
}

BiasCorrectedSpatialParams bias_correct(
    const SlmmParams& original, const Eigen::MatrixXd& replicate_estimates) {
  if (replicate_estimates.cols() != 3)
    throw std::invalid_argument("bias_correct: expected T x 3 replicate matrix");
  if (replicate_estimates.rows() < 1)
    throw std::invalid_argument("bias_correct: no replicates");
  if ((replicate_estimates.array() <= 0.0).any())
    throw numeric_error("bias_correct: nonpositive replicate estimate");

  const Eigen::RowVector3d mean_log =
      replicate_estimates.array().log().colwise().mean();
  auto bc = [&](double orig, int col) {
    return std::exp(2.0 * std::log(orig) - mean_log(col));
  };
  BiasCorrectedSpatialParams out;
  out.sigma2_rho_bc = bc(original.sigma2_rho, 0);
  out.alpha_rho_bc = bc(original.alpha_rho, 1);
  out.tau_eps_bc = bc(original.tau_eps, 2);
  out.nu_rho = original.nu_rho;
  return out;
}

std::pair<double, double> percentile_interval(const Eigen::VectorXd& draws,
                                              double level) {
  if (draws.size() < 2)
    throw std::invalid_argument("percentile_interval: need at least two draws");
  if (!(level > 0.0) || level > 1.0)
    throw std::invalid_argument("percentile_interval: level outside (0, 1]");
  std::vector<double> v(draws.data(), draws.data() + draws.size());
  const double a = (1.0 - level) / 2.0;
  return {quantile_type7(v, a), quantile_type7(v, 1.0 - a)};
}

PhaseResult run_bootstrap_phase(const LocationSet& locs_s,
                                const LocationSet& locs_stilde,
                                const PhaseSettings& settings, int t_replicates,
                                std::uint64_t master_seed,
                                std::string_view phase_tag,
                                FailurePolicy policy, int n_threads,
                                std::ostream* diag) {
  if (t_replicates < 1)
    throw std::invalid_argument("bootstrap phase: T must be >= 1");
  const int k = settings.gen_theta_x.n_covariates();
  const auto p = settings.beta.size();

  const SimulationFactors factors = make_simulation_factors(
      settings.gen_theta_x, settings.gen_slmm, locs_s, locs_stilde);

  struct Slot {
    bool ok = false;
    std::string what;
    Eigen::VectorXd beta;
    Eigen::Vector3d spatial;
    std::vector<Eigen::VectorXd> smoothers;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(t_replicates));
  std::mutex diag_mutex;

  auto one_replicate = [&](std::size_t t) {
    Slot& slot = slots[t];
    RngStream rng(master_seed, phase_tag, static_cast<std::uint64_t>(t));
    try {
      const SimulatedData sim = simulate_dataset_with_factors(
          factors, settings.gen_theta_x, settings.beta,
          settings.generator_rule, locs_s, locs_stilde, rng);
      MisalignedDataset d{locs_s, sim.y, locs_stilde, sim.x_tilde, {}};
      // Replicate refits choose their own knots from their own predictions.
      const CnrFit refit =
          cnr_fit(d, settings.refit_specs, settings.refit_options);

      const double alpha_t = refit.slmm.params.alpha_rho;
      if (settings.alpha_guard_ref > 0.0 &&
          (alpha_t > 1e3 * settings.alpha_guard_ref ||
           alpha_t < 1e-3 * settings.alpha_guard_ref))
        throw numeric_error("extreme range parameter (alpha = " +
                            std::to_string(alpha_t) + ")");

      slot.beta = refit.slmm.params.beta;
      slot.spatial << refit.slmm.params.sigma2_rho, alpha_t,
          refit.slmm.params.tau_eps;
      if (settings.collect_smoothers) {
        slot.smoothers.resize(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j)
          slot.smoothers[static_cast<std::size_t>(j)] = conditional_smoother(
              refit.slmm, j, settings.smoother_grids[static_cast<std::size_t>(j)],
              settings.smoother_c);
      }
      slot.ok = true;
    } catch (const error& e) {
      slot.what = e.what();
      if (policy == FailurePolicy::Abort) throw;
    }
  };

  parallel_for(static_cast<std::size_t>(t_replicates), one_replicate,
               n_threads);

  int n_ok = 0;
  for (const auto& s : slots) n_ok += s.ok ? 1 : 0;
  if (n_ok == 0)
    throw numeric_error("bootstrap phase '" + std::string(phase_tag) +
                        "': every replicate failed");

  PhaseResult out;
  out.n_dropped = t_replicates - n_ok;
  out.beta_draws.resize(n_ok, p);
  out.spatial_draws.resize(n_ok, 3);
  if (settings.collect_smoothers) {
    out.smoother_draws.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
      out.smoother_draws[static_cast<std::size_t>(j)].resize(
          n_ok, settings.smoother_grids[static_cast<std::size_t>(j)].size());
  }
  int row = 0;
  for (std::size_t t = 0; t < slots.size(); ++t) {
    const Slot& s = slots[t];
    if (!s.ok) {
      if (diag) {
        std::lock_guard<std::mutex> lock(diag_mutex);
        *diag << "bootstrap[" << phase_tag << "] replicate " << t
              << " dropped: " << s.what << "\n";
      }
      continue;
    }
    out.beta_draws.row(row) = s.beta;
    out.spatial_draws.row(row) = s.spatial;
    for (std::size_t j = 0; j < s.smoothers.size(); ++j)
      out.smoother_draws[j].row(row) = s.smoothers[j];
    ++row;
  }
  if (diag && out.n_dropped > 0)
    *diag << "bootstrap[" << phase_tag << "]: dropped " << out.n_dropped
          << " of " << t_replicates << " replicates\n";
  return out;
}

BootstrapResult run_bootstrap(const MisalignedDataset& data, const CnrFit& fit,
                              const std::vector<BasisSpec>& specs,
                              const CnrOptions& opts,
                              const BootstrapConfig& cfg) {
  data.validate();
  if (cfg.t_prelim < 2 || cfg.t_second < 2)
    throw std::invalid_argument("bootstrap: T must be >= 2");
  if (cfg.diag && (cfg.t_prelim < 50 || cfg.t_second < 50))
    *cfg.diag << "bootstrap: T below 50; intervals will be noisy\n";

  const int k = data.k();
  PhaseSettings settings;
  settings.gen_theta_x = fit.theta_x;
  settings.gen_slmm = fit.slmm.params;
  settings.beta = fit.slmm.params.beta;
  settings.generator_rule =
      DesignRule{fit.slmm.design.specs, fit.slmm.design.knots};
  settings.refit_specs = specs;
  settings.refit_options = opts;
  settings.alpha_guard_ref = fit.slmm.params.alpha_rho;

  BootstrapResult result;
  result.bc_params = {fit.slmm.params.sigma2_rho, fit.slmm.params.alpha_rho,
                      fit.slmm.params.tau_eps, fit.slmm.params.nu_rho};

  // Preliminary bootstrap: generation under the uncorrected spatial
  // parameters, used to bias-correct them.
  if (cfg.variant != BootstrapVariant::Unadjusted) {
    const PhaseResult prelim = run_bootstrap_phase(
        data.locs_response, data.locs_covariates, settings, cfg.t_prelim,
        cfg.master_seed, "prelim", cfg.failure_policy, cfg.n_threads, cfg.diag);
    result.n_dropped += prelim.n_dropped;
    result.spatial_draws = prelim.spatial_draws;
    result.prelim_beta_draws = prelim.beta_draws;
    result.bc_params = bias_correct(fit.slmm.params, prelim.spatial_draws);
    result.beta_bc = 2.0 * fit.slmm.params.beta -
                     prelim.beta_draws.colwise().mean().transpose();
  }

  // Secondary bootstrap: intervals and bands.
  PhaseSettings second = settings;
  second.gen_slmm.sigma2_rho = result.bc_params.sigma2_rho_bc;
  second.gen_slmm.alpha_rho = result.bc_params.alpha_rho_bc;
  second.gen_slmm.tau_eps = result.bc_params.tau_eps_bc;
  if (cfg.variant == BootstrapVariant::NonCrossCorrelated)
    second.gen_theta_x.cross.r =
        Eigen::MatrixXd::Identity(k, k);

  if (cfg.make_bands) {
    second.collect_smoothers = true;
    second.smoother_c = fit.theta_x.means();
    second.smoother_grids.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      const double lo = fit.x_hat.col(j).minCoeff();
      const double hi = fit.x_hat.col(j).maxCoeff();
      second.smoother_grids[static_cast<std::size_t>(j)] =
          Eigen::VectorXd::LinSpaced(cfg.band_grid_size, lo, hi);
    }
  }

  const PhaseResult ph2 = run_bootstrap_phase(
      data.locs_response, data.locs_covariates, second, cfg.t_second,
      cfg.master_seed, "second", cfg.failure_policy, cfg.n_threads, cfg.diag);
  result.n_dropped += ph2.n_dropped;
  result.beta_draws = ph2.beta_draws;
  if (cfg.variant == BootstrapVariant::Unadjusted)
    result.spatial_draws = ph2.spatial_draws;

  const auto p = fit.slmm.params.beta.size();
  result.intervals.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j)
    result.intervals.push_back(
        percentile_interval(result.beta_draws.col(j), cfg.level));

  if (cfg.make_bands) {
    const double a = (1.0 - cfg.level) / 2.0;
    result.bands.resize(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      SmootherBand& band = result.bands[static_cast<std::size_t>(j)];
      band.grid = second.smoother_grids[static_cast<std::size_t>(j)];
      band.fit = conditional_smoother(fit.slmm, j, band.grid, second.smoother_c);
      const auto& draws = ph2.smoother_draws[static_cast<std::size_t>(j)];
      band.lo.resize(band.grid.size());
      band.hi.resize(band.grid.size());
      for (Eigen::Index g = 0; g < band.grid.size(); ++g) {
        std::vector<double> col(draws.col(g).data(),
                                draws.col(g).data() + draws.rows());
        band.lo(g) = quantile_type7(col, a);
        band.hi(g) = quantile_type7(col, 1.0 - a);
      }
    }
  }
  return result;
}

}  // namespace cnr
