#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metroflow {

/// (p,d,q)(P,D,Q)_S. Bounds: d + D <= 3, p,q <= 5, P,Q <= 2, S >= 1.
struct SarimaOrder {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int S = 1;

    void validate() const;
    int arma_parameters() const { return p + q + P + Q; }
    /// Lags consumed by differencing.
    int differencing_lags() const { return d + S * D; }
    std::string to_string() const;
    bool operator==(const SarimaOrder&) const = default;
};

/**
 * Fitted phi(B) Phi(B^S) (Y_t - mu) = theta(B) Theta(B^S) e_t with
 * Y_t = (1-B)^d (1-B^S)^D X_t. Polynomials use the minus-sign convention
 * phi(z) = 1 - phi_1 z - ..., theta(z) = 1 - theta_1 z - ..., and likewise for the
 * seasonal ones. mu is zero unless d + D = 0.
 */
struct SarimaModel {
    SarimaOrder order;
    std::vector<double> phi;
    std::vector<double> theta;
    std::vector<double> seasonal_phi;
    std::vector<double> seasonal_theta;
    double intercept = 0.0;
    bool has_intercept = false;
    double sigma2 = 0.0;
    double loglik = 0.0;
    double aicc = 0.0;
    std::size_t n_effective = 0;
    /// Residuals before this index of the differenced series are conditioned to zero.
    std::size_t condition_offset = 0;
    /// Tail of the training series: p + S P + d + S D values.
    std::vector<double> last_observations;
    /// Tail of the training residuals: q + S Q values.
    std::vector<double> last_residuals;
};

/// Seasonal differencing D times, then ordinary differencing d times.
std::vector<double> difference(std::span<const double> series, int d, int D, int S);

/// Inverse of `difference` given the first d + S D values of the original series.
std::vector<double> integrate(std::span<const double> differenced, std::span<const double> initial, int d, int D,
                              int S);

struct SarimaFitOptions {
    std::uint64_t seed = 0;
    /// Overrides the default conditioning offset p + S P (used to compare
    /// candidates on a common sample during order search).
    std::optional<std::size_t> condition_offset;
    int max_evals = 0; ///< 0 selects 600 * (number of parameters + 1).
};

/**
 * Conditional-sum-of-squares fit. Each polynomial is parametrized through
 * its partial autocorrelations (0.999 tanh of the free variables, then the
 * Durbin-Levinson recursion), so the result is stationary and invertible by
 * construction. Nelder-Mead is run once and then restarted from a seeded
 * perturbation of the best point; the better run is kept.
 *
 * Throws DataError when the differenced series is shorter than
 * 10 (p+q+P+Q+1) and NumericalError when neither run converges.
 */
SarimaModel fit_sarima(std::span<const double> series, const SarimaOrder& order, const SarimaFitOptions& options = {});

enum class OrderSearch { stepwise, grid };

struct OrderSearchOptions {
    int max_p = 5, max_q = 5, max_P = 2, max_Q = 2;
    OrderSearch mode = OrderSearch::stepwise;
    int max_models = 94;
    /// Cap on p + q + P + Q in the exhaustive search.
    int max_order = 5;
    /// Candidates with an AR or MA root closer to the unit circle than this
    /// modulus are discarded as unusable (their inverse roots exceed 1 / min_root_modulus).
    double min_root_modulus = 1.01;
    std::uint64_t seed = 0;
    /// Seasonal differencing when the lag-S autocorrelation exceeds this.
    double seasonal_acf_threshold = 0.9;
    /// Ordinary differencing while var(diff w) / var(w) falls below this.
    double variance_ratio_threshold = 0.2;
};

struct OrderSelection {
    SarimaOrder order;
    SarimaModel model;
    int models_tried = 0;
};

/// Chooses D, then d, then minimizes AICc over (p,q,P,Q) by stepwise or exhaustive search.
OrderSelection select_order(std::span<const double> series, int S, const OrderSearchOptions& options = {});

/// Differencing orders chosen by the heuristics above.
std::pair<int, int> select_differencing(std::span<const double> series, int S, const OrderSearchOptions& options = {});

/// h-step forecasts from the stored training tails. Throws DataError("horizon too long") for h > 10 S.
std::vector<double> forecast_sarima(const SarimaModel& model, int h);

/**
 * h-step forecasts after the end of `history` with fixed coefficients; the
 * residual recursion is rerun over `history` so no refit happens.
 */
std::vector<double> forecast_sarima_from(const SarimaModel& model, std::span<const double> history, int h);

/// Same model with its tails recomputed from `history`.
SarimaModel with_history(const SarimaModel& model, std::span<const double> history);

/// One-step-ahead in-sample predictions: values[i] predicts series[first + i].
struct OneStepPredictions {
    std::size_t first = 0;
    std::vector<double> values;
};

OneStepPredictions sarima_one_step(const SarimaModel& model, std::span<const double> series);

/// Largest reciprocal-root modulus of 1 - c_1 z - ... - c_n z^n (0 for an empty polynomial).
double max_inverse_root(const std::vector<double>& coeffs);

/// True when all four polynomials have roots outside the unit circle by `margin`.
bool is_stationary_invertible(const SarimaModel& model, double margin = 1e-6);

void save_sarima(std::ostream& out, const SarimaModel& model);
SarimaModel load_sarima(std::istream& in);

} // namespace metroflow
