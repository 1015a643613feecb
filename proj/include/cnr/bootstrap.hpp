#ifndef CNR_BOOTSTRAP_HPP
#define CNR_BOOTSTRAP_HPP

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "cnr/pipeline.hpp"
#include "cnr/rng.hpp"

namespace cnr {

enum class BootstrapVariant { Proposed, Unadjusted, NonCrossCorrelated };
enum class FailurePolicy { DropAndWarn, Abort };

struct BootstrapConfig {
  int t_prelim = 250;
  int t_second = 250;
  BootstrapVariant variant = BootstrapVariant::Proposed;
  std::uint64_t master_seed = 0;
  FailurePolicy failure_policy = FailurePolicy::DropAndWarn;
  double level = 0.95;         // confidence level for intervals and bands
  bool make_bands = true;
  int band_grid_size = 50;
  int n_threads = 1;
  std::ostream* diag = nullptr;  // progress and replicate-drop reports
};

// Log-scale bias-corrected spatial covariance parameters; positivity holds
// by construction. nu_rho is never estimated, so it carries the fixed value.
struct BiasCorrectedSpatialParams {
  double sigma2_rho_bc = 0.0;
  double alpha_rho_bc = 0.0;
  double tau_eps_bc = 0.0;
  double nu_rho = 0.5;
};

struct SmootherBand {
  Eigen::VectorXd grid;
  Eigen::VectorXd fit;  // original-fit smoother on the grid
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct BootstrapResult {
  // Replicate draws from the phase that feeds the intervals (the secondary
  // bootstrap; the only phase under the Unadjusted variant). Rows are kept
  // replicates in replicate-index order.
  Eigen::MatrixXd beta_draws;
  // Preliminary-phase draws of (sigma2_rho, alpha_rho, tau_eps).
  Eigen::MatrixXd spatial_draws;
  // Preliminary-phase coefficient draws; empty under Unadjusted.
  Eigen::MatrixXd prelim_beta_draws;
  BiasCorrectedSpatialParams bc_params;
  std::vector<std::pair<double, double>> intervals;  // per coefficient
  std::vector<SmootherBand> bands;                   // per covariate
  // 2 beta_hat - mean of preliminary draws; zero-cost point bias correction.
  Eigen::VectorXd beta_bc;
  int n_dropped = 0;
};

struct SimulatedData {
  Eigen::VectorXd y;
  Eigen::MatrixXd x_tilde;    // M x K, the observed side
  Eigen::MatrixXd x_s_hidden; // N x K, true covariates at the response
                              // locations; treated as unobserved downstream
};

// Factorizations reused across replicates of a fixed generating law.
struct SimulationFactors {
  std::vector<CholeskyFactor> chol_joint;  // per covariate, over (obs, resp)
  Eigen::MatrixXd chol_r_lower;            // K x K
  CholeskyFactor chol_sigma_rho;           // N x N
  double tau_eps = 0.0;
};

SimulationFactors make_simulation_factors(const CovariateFieldParams& theta_x,
                                          const SlmmParams& slmm,
                                          const LocationSet& locs_s,
                                          const LocationSet& locs_stilde);

/* One synthetic misaligned dataset: covariates drawn from the joint
 * generalized Kronecker law over (obs, resp) locations, then
 * y = B beta + rho + eps with B built from the true simulated covariates at
 * the response locations under the supplied design rule. */
SimulatedData simulate_dataset(const CovariateFieldParams& theta_x,
                               const SlmmParams& slmm,
                               const Eigen::VectorXd& beta,
                               const DesignRule& design_rule,
                               const LocationSet& locs_s,
                               const LocationSet& locs_stilde, RngStream& rng);

// Same, with precomputed factors (hot path inside bootstrap phases).
SimulatedData simulate_dataset_with_factors(
    const SimulationFactors& factors, const CovariateFieldParams& theta_x,
    const Eigen::VectorXd& beta, const DesignRule& design_rule,
    const LocationSet& locs_s, const LocationSet& locs_stilde, RngStream& rng);

/* exp{2 log(theta_hat) - mean_t log(theta_hat^(t))} applied to sigma2_rho,
 * alpha_rho and tau_eps independently. replicate_estimates is T x 3 in that
 * column order; every entry must be positive. */
BiasCorrectedSpatialParams bias_correct(
    const SlmmParams& original, const Eigen::MatrixXd& replicate_estimates);

// Equal-tailed empirical interval from the type-7 quantiles of the draws.
std::pair<double, double> percentile_interval(const Eigen::VectorXd& draws,
                                              double level);

// Generator settings plus refit configuration for one bootstrap phase.
struct PhaseSettings {
  CovariateFieldParams gen_theta_x;
  SlmmParams gen_slmm;         // spatial covariance used by the generator
  Eigen::VectorXd beta;        // coefficients used by the generator
  DesignRule generator_rule;   // original basis and knots
  std::vector<BasisSpec> refit_specs;
  CnrOptions refit_options;    // replicate refits recompute their own knots
  double alpha_guard_ref = 0.0;  // drop replicates with alpha_rho outside
                                 // [1e-3, 1e3] x this reference; 0 disables
  bool collect_smoothers = false;
  std::vector<Eigen::VectorXd> smoother_grids;  // per covariate
  Eigen::VectorXd smoother_c;                   // conditioning values
};

struct PhaseResult {
  Eigen::MatrixXd beta_draws;     // kept replicates x p
  Eigen::MatrixXd spatial_draws;  // kept replicates x 3
  std::vector<Eigen::MatrixXd> smoother_draws;  // per covariate
  int n_dropped = 0;
};

// Runs T generate-and-refit replicates on independent streams
// (master_seed, phase_tag, t); dropping one replicate never shifts the
// draws of any other.
PhaseResult run_bootstrap_phase(const LocationSet& locs_s,
                                const LocationSet& locs_stilde,
                                const PhaseSettings& settings, int t_replicates,
                                std::uint64_t master_seed,
                                std::string_view phase_tag,
                                FailurePolicy policy, int n_threads,
                                std::ostream* diag);

/* The full two-phase procedure around an existing fit: a preliminary
 * bootstrap bias-corrects the spatial covariance parameters on the log
 * scale, then a secondary bootstrap generated under the corrected values
 * yields percentile intervals and smoother bands. The Unadjusted variant
 * skips the preliminary phase; the NonCrossCorrelated variant replaces the
 * estimated cross-correlation matrix with the identity in the secondary
 * generator. */
BootstrapResult run_bootstrap(const MisalignedDataset& data, const CnrFit& fit,
                              const std::vector<BasisSpec>& specs,
                              const CnrOptions& opts,
                              const BootstrapConfig& cfg);

}  // namespace cnr

#endif  // CNR_BOOTSTRAP_HPP
