#include "metroflow/sarima/sarima.hpp"

#include "metroflow/core/error.hpp"
#include "metroflow/core/rng.hpp"
#include "metroflow/core/stats.hpp"
#include "metroflow/sarima/nelder_mead.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace metroflow {

namespace {

constexpr double kPacfBound = 0.999;

struct Lag {
    std::size_t lag;
    double coef;
};

/// Product (1 - sum a_i z^i)(1 - sum b_j z^{jS}) expressed as 1 - sum c_l z^l; returns the nonzero c_l.
std::vector<Lag> product_terms(const std::vector<double>& a, const std::vector<double>& b, int S) {
    const std::size_t len = a.size() + b.size() * static_cast<std::size_t>(S) + 1;
    std::vector<double> pa(a.size() + 1, 0.0), poly(len, 0.0);
    pa[0] = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) pa[i + 1] = -a[i];
    for (std::size_t i = 0; i < pa.size(); ++i) poly[i] += pa[i];
    for (std::size_t j = 0; j < b.size(); ++j) {
        const std::size_t shift = (j + 1) * static_cast<std::size_t>(S);
        for (std::size_t i = 0; i < pa.size(); ++i) poly[i + shift] -= b[j] * pa[i];
    }
    std::vector<Lag> out;
    for (std::size_t l = 1; l < len; ++l) {
        if (poly[l] != 0.0) out.push_back({l, -poly[l]});
    }
    return out;
}

/// (1-B)^d (1-B^S)^D = 1 + sum delta_i B^i, as (lag, delta_i) pairs.
std::vector<Lag> differencing_terms(int d, int D, int S) {
    std::vector<double> poly{1.0};
    auto multiply = [&poly](std::size_t lag) {
        std::vector<double> next(poly.size() + lag, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + lag] -= poly[i];
        }
        poly = std::move(next);
    };
    for (int i = 0; i < D; ++i) multiply(static_cast<std::size_t>(S));
    for (int i = 0; i < d; ++i) multiply(1);
    std::vector<Lag> out;
    for (std::size_t l = 1; l < poly.size(); ++l) {
        if (poly[l] != 0.0) out.push_back({l, poly[l]});
    }
    return out;
}

std::vector<double> pacf_to_coefficients(std::span<const double> raw) {
    std::vector<double> coeffs;
    coeffs.reserve(raw.size());
    std::vector<double> prev;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const double r = kPacfBound * std::tanh(raw[k]);
        prev = coeffs;
        for (std::size_t j = 0; j < k; ++j) coeffs[j] = prev[j] - r * prev[k - 1 - j];
        coeffs.push_back(r);
    }
    return coeffs;
}

struct Polynomials {
    std::vector<Lag> ar;
    std::vector<Lag> ma;
    std::size_t max_ar_lag = 0;
    std::size_t max_ma_lag = 0;
};

Polynomials polynomials_of(const SarimaModel& m) {
    Polynomials out;
    out.ar = product_terms(m.phi, m.seasonal_phi, m.order.S);
    out.ma = product_terms(m.theta, m.seasonal_theta, m.order.S);
    out.max_ar_lag = static_cast<std::size_t>(m.order.p + m.order.S * m.order.P);
    out.max_ma_lag = static_cast<std::size_t>(m.order.q + m.order.S * m.order.Q);
    return out;
}

/// CSS residuals of the mean-adjusted differenced series w; zero before `offset`.
std::vector<double> css_residuals(std::span<const double> w, const Polynomials& poly, std::size_t offset) {
    std::vector<double> e(w.size(), 0.0);
    for (std::size_t t = offset; t < w.size(); ++t) {
        double pred = 0.0;
        for (const auto& term : poly.ar) pred += term.coef * w[t - term.lag];
        for (const auto& term : poly.ma) {
            if (term.lag <= t) pred -= term.coef * e[t - term.lag];
        }
        e[t] = w[t] - pred;
    }
    return e;
}

std::vector<double> tail(std::span<const double> v, std::size_t len) {
    len = std::min(len, v.size());
    return {v.end() - static_cast<std::ptrdiff_t>(len), v.end()};
}

/// Forecast recursion given recent w, residual and X histories (oldest first).
std::vector<double> forecast_core(const SarimaModel& model, std::vector<double> w, std::vector<double> e,
                                  std::vector<double> x, int h) {
    const Polynomials poly = polynomials_of(model);
    const auto delta = differencing_terms(model.order.d, model.order.D, model.order.S);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(h));
    for (int step = 0; step < h; ++step) {
        double pred = 0.0;
        for (const auto& term : poly.ar) {
            if (term.lag <= w.size()) pred += term.coef * w[w.size() - term.lag];
        }
        for (const auto& term : poly.ma) {
            if (term.lag <= e.size()) pred -= term.coef * e[e.size() - term.lag];
        }
        w.push_back(pred);
        e.push_back(0.0);
        double xv = pred + model.intercept;
        for (const auto& term : delta) {
            if (term.lag <= x.size()) xv -= term.coef * x[x.size() - term.lag];
        }
        x.push_back(xv);
        out.push_back(xv);
    }
    return out;
}

void check_horizon(const SarimaModel& model, int h) {
    if (h < 1) throw DataError("sarima: horizon must be at least 1");
    if (h > 10 * model.order.S) throw DataError("horizon too long");
}

double information_penalty(int k, std::size_t n) {
    const auto nd = static_cast<double>(n);
    if (nd - k - 1 <= 0) return std::numeric_limits<double>::infinity();
    return 2.0 * k + 2.0 * k * (k + 1) / (nd - k - 1);
}

void write_vector(std::ostream& out, const char* key, const std::vector<double>& v) {
    out << key << '=';
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        out << (i ? " " : "") << buf;
    }
    out << '\n';
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) out.push_back(std::stod(tok));
    return out;
}

} // namespace

void SarimaOrder::validate() const {
    if (p < 0 || d < 0 || q < 0 || P < 0 || D < 0 || Q < 0) throw DataError("sarima: orders must be nonnegative");
    if (S < 1) throw DataError("sarima: seasonal period must be positive");
    if (d + D > 3) throw DataError("sarima: d + D must not exceed 3");
    if (p > 5 || q > 5) throw DataError("sarima: p and q must not exceed 5");
    if (P > 2 || Q > 2) throw DataError("sarima: P and Q must not exceed 2");
}

std::string SarimaOrder::to_string() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%d,%d,%d)(%d,%d,%d)_%d", p, d, q, P, D, Q, S);
    return buf;
}

std::vector<double> difference(std::span<const double> series, int d, int D, int S) {
    if (d < 0 || D < 0 || S < 1) throw DataError("difference: invalid orders");
    const std::size_t lags = static_cast<std::size_t>(d) + static_cast<std::size_t>(S) * static_cast<std::size_t>(D);
    if (series.size() <= lags) throw DataError("difference: series too short");
    std::vector<double> cur(series.begin(), series.end());
    for (int i = 0; i < D; ++i) {
        std::vector<double> next(cur.size() - static_cast<std::size_t>(S));
        for (std::size_t t = 0; t < next.size(); ++t) next[t] = cur[t + static_cast<std::size_t>(S)] - cur[t];
        cur = std::move(next);
    }
    for (int i = 0; i < d; ++i) {
        std::vector<double> next(cur.size() - 1);
        for (std::size_t t = 0; t < next.size(); ++t) next[t] = cur[t + 1] - cur[t];
        cur = std::move(next);
    }
    return cur;
}

std::vector<double> integrate(std::span<const double> differenced, std::span<const double> initial, int d, int D,
                              int S) {
    const std::size_t lags = static_cast<std::size_t>(d) + static_cast<std::size_t>(S) * static_cast<std::size_t>(D);
    if (initial.size() != lags) throw DataError("integrate: need exactly d + S*D initial values");
    const auto delta = differencing_terms(d, D, S);
    std::vector<double> x(initial.begin(), initial.end());
    x.reserve(lags + differenced.size());
    for (const double y : differenced) {
        double v = y;
        for (const auto& term : delta) v -= term.coef * x[x.size() - term.lag];
        x.push_back(v);
    }
    return x;
}

double max_inverse_root(const std::vector<double>& coeffs) {
    std::size_t n = coeffs.size();
    while (n > 0 && coeffs[n - 1] == 0.0) --n;
    if (n == 0) return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) companion(0, static_cast<Eigen::Index>(i)) = coeffs[i];
    for (std::size_t i = 1; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary_invertible(const SarimaModel& model, double margin) {
    const double limit = 1.0 / (1.0 + margin);
    for (const auto* poly : {&model.phi, &model.theta, &model.seasonal_phi, &model.seasonal_theta}) {
        if (max_inverse_root(*poly) >= limit) return false;
    }
    return true;
}

SarimaModel fit_sarima(std::span<const double> series, const SarimaOrder& order, const SarimaFitOptions& options) {
    order.validate();
    for (const double v : series) {
        if (!std::isfinite(v)) throw DataError("sarima: series contains non-finite values");
    }
    const std::vector<double> y = difference(series, order.d, order.D, order.S);
    const std::size_t min_len = 10 * static_cast<std::size_t>(order.arma_parameters() + 1);
    if (y.size() < min_len) {
        throw DataError("sarima: differenced series has " + std::to_string(y.size()) + " points, " + order.to_string() +
                        " needs " + std::to_string(min_len));
    }

    SarimaModel model;
    model.order = order;
    model.has_intercept = order.d + order.D == 0;
    const std::size_t max_ar = static_cast<std::size_t>(order.p + order.S * order.P);
    const std::size_t offset = std::max(options.condition_offset.value_or(max_ar), max_ar);
    if (offset + 1 >= y.size()) throw DataError("sarima: conditioning offset leaves no data");
    const std::size_t n_eff = y.size() - offset;

    const double y_mean = mean(y);
    const double y_var = variance(y);
    const double y_scale = y_var > 0.0 ? std::sqrt(y_var) : 1.0;

    const auto np = static_cast<std::size_t>(order.p), nq = static_cast<std::size_t>(order.q);
    const auto nP = static_cast<std::size_t>(order.P), nQ = static_cast<std::size_t>(order.Q);
    const std::size_t n_params = np + nq + nP + nQ + (model.has_intercept ? 1 : 0);

    std::vector<double> w(y.size());
    auto unpack = [&](std::span<const double> raw, SarimaModel& m) {
        std::size_t at = 0;
        m.phi = pacf_to_coefficients(raw.subspan(at, np));
        at += np;
        m.theta = pacf_to_coefficients(raw.subspan(at, nq));
        at += nq;
        m.seasonal_phi = pacf_to_coefficients(raw.subspan(at, nP));
        at += nP;
        m.seasonal_theta = pacf_to_coefficients(raw.subspan(at, nQ));
        at += nQ;
        m.intercept = m.has_intercept ? y_mean + y_scale * raw[at] : 0.0;
    };
    auto css_of = [&](const SarimaModel& m) {
        for (std::size_t t = 0; t < y.size(); ++t) w[t] = y[t] - m.intercept;
        const auto e = css_residuals(w, polynomials_of(m), offset);
        double css = 0.0;
        for (std::size_t t = offset; t < e.size(); ++t) css += e[t] * e[t];
        return css;
    };
    SarimaModel scratch = model;
    const optim::Objective objective = [&](std::span<const double> raw) {
        unpack(raw, scratch);
        const double css = css_of(scratch);
        return 0.5 * static_cast<double>(n_eff) * std::log(std::max(css / static_cast<double>(n_eff), 1e-300));
    };

    optim::NelderMeadOptions nm;
    nm.max_evals = options.max_evals > 0 ? options.max_evals : 600 * static_cast<int>(n_params + 1);
    const auto first = optim::nelder_mead(objective, std::vector<double>(n_params, 0.0), nm);
    std::vector<double> restart = first.x;
    Rng rng(options.seed);
    std::normal_distribution<double> jitter(0.0, 0.3);
    for (auto& v : restart) v += jitter(rng);
    const auto second = optim::nelder_mead(objective, restart, nm);
    if (!first.converged && !second.converged) {
        throw NumericalError("sarima: Nelder-Mead did not converge for " + order.to_string() + " after restart (" +
                             std::to_string(first.evaluations) + " + " + std::to_string(second.evaluations) +
                             " evaluations, objective " + format_double(std::min(first.value, second.value)) + ")");
    }
    const auto& best = second.value < first.value ? second : first;

    unpack(best.x, model);
    const double css = css_of(model);
    const std::vector<double> e = css_residuals(w, polynomials_of(model), offset);
    model.n_effective = n_eff;
    model.condition_offset = offset;
    model.sigma2 = css / static_cast<double>(n_eff);
    if (!(model.sigma2 > 0.0) || !std::isfinite(model.sigma2)) {
        throw NumericalError("sarima: degenerate innovation variance for " + order.to_string());
    }
    model.loglik = -0.5 * static_cast<double>(n_eff) * (std::log(2.0 * std::numbers::pi * model.sigma2) + 1.0);
    const int k = static_cast<int>(n_params) + 1;
    model.aicc = -2.0 * model.loglik + information_penalty(k, n_eff);
    model.last_observations = tail(series, max_ar + static_cast<std::size_t>(order.differencing_lags()));
    model.last_residuals = tail(e, static_cast<std::size_t>(order.q + order.S * order.Q));
    return model;
}

std::pair<int, int> select_differencing(std::span<const double> series, int S, const OrderSearchOptions& options) {
    int D = 0;
    if (S > 1 && series.size() > static_cast<std::size_t>(2 * S) &&
        autocorrelation(series, static_cast<std::size_t>(S)) > options.seasonal_acf_threshold) {
        D = 1;
    }
    std::vector<double> w = D ? difference(series, 0, 1, S) : std::vector<double>(series.begin(), series.end());
    int d = 0;
    while (d < 2 && w.size() > 3) {
        const double v = variance(w);
        if (v <= 0.0) break;
        std::vector<double> dw = difference(w, 1, 0, 1);
        if (variance(dw) / v >= options.variance_ratio_threshold) break;
        w = std::move(dw);
        ++d;
    }
    return {d, D};
}

OrderSelection select_order(std::span<const double> series, int S, const OrderSearchOptions& options) {
    if (S < 1) throw DataError("select_order: seasonal period must be positive");
    const auto [d, D] = select_differencing(series, S, options);
    const bool seasonal = S > 1;
    const int max_P = seasonal ? std::min(options.max_P, 2) : 0;
    const int max_Q = seasonal ? std::min(options.max_Q, 2) : 0;
    const int max_p = std::min(options.max_p, 5);
    const int max_q = std::min(options.max_q, 5);
    const std::size_t common_offset = static_cast<std::size_t>(max_p + S * max_P);

    using Key = std::tuple<int, int, int, int>;
    std::map<Key, std::optional<SarimaModel>> tried;
    auto evaluate = [&](Key key) -> const std::optional<SarimaModel>& {
        auto it = tried.find(key);
        if (it != tried.end()) return it->second;
        const auto [p, q, P, Q] = key;
        SarimaOrder order{p, d, q, P, D, Q, S};
        std::optional<SarimaModel> fitted;
        try {
            SarimaFitOptions fit_opts;
            fit_opts.seed = derive_seed(options.seed, tried.size());
            fit_opts.condition_offset = common_offset;
            SarimaModel m = fit_sarima(series, order, fit_opts);
            if (!is_stationary_invertible(m, options.min_root_modulus - 1.0)) throw DataError("near unit root");
            fitted = std::move(m);
        } catch (const DataError&) {
        } catch (const NumericalError&) {
        }
        return tried.emplace(key, std::move(fitted)).first->second;
    };
    auto in_box = [&](const Key& k) {
        const auto [p, q, P, Q] = k;
        return p >= 0 && q >= 0 && P >= 0 && Q >= 0 && p <= max_p && q <= max_q && P <= max_P && Q <= max_Q;
    };

    std::optional<Key> best_key;
    double best_aicc = std::numeric_limits<double>::infinity();
    auto consider = [&](Key k) {
        if (!in_box(k) || static_cast<int>(tried.size()) >= options.max_models) return false;
        const bool fresh = !tried.contains(k);
        const auto& m = evaluate(k);
        if (fresh && m && m->aicc < best_aicc) {
            best_aicc = m->aicc;
            best_key = k;
            return true;
        }
        return false;
    };

    if (options.mode == OrderSearch::grid) {
        for (int p = 0; p <= max_p; ++p)
            for (int q = 0; q <= max_q; ++q)
                for (int P = 0; P <= max_P; ++P)
                    for (int Q = 0; Q <= max_Q; ++Q) {
                        const Key k{p, q, P, Q};
                        if (p + q + P + Q > options.max_order) continue;
                        const auto& m = evaluate(k);
                        if (m && m->aicc < best_aicc) {
                            best_aicc = m->aicc;
                            best_key = k;
                        }
                    }
    } else {
        const int sP = seasonal ? 1 : 0;
        for (const Key& k : {Key{2, 2, sP, sP}, Key{0, 0, 0, 0}, Key{1, 0, sP, 0}, Key{0, 1, 0, sP}}) {
            Key clipped{std::min(std::get<0>(k), max_p), std::min(std::get<1>(k), max_q),
                        std::min(std::get<2>(k), max_P), std::min(std::get<3>(k), max_Q)};
            consider(clipped);
        }
        bool improved = best_key.has_value();
        while (improved) {
            improved = false;
            const auto [p, q, P, Q] = *best_key;
            const Key neighbours[] = {
                {p - 1, q, P, Q},         {p + 1, q, P, Q},         {p, q - 1, P, Q},         {p, q + 1, P, Q},
                {p - 1, q - 1, P, Q},     {p + 1, q + 1, P, Q},     {p, q, P - 1, Q},         {p, q, P + 1, Q},
                {p, q, P, Q - 1},         {p, q, P, Q + 1},         {p, q, P - 1, Q - 1},     {p, q, P + 1, Q + 1},
            };
            for (const auto& k : neighbours) {
                if (consider(k)) {
                    improved = true;
                    break;
                }
            }
        }
    }
    if (!best_key) throw NumericalError("select_order: every candidate model failed to fit");
    OrderSelection out;
    out.model = *tried.at(*best_key);
    out.order = out.model.order;
    out.models_tried = static_cast<int>(tried.size());
    return out;
}

std::vector<double> forecast_sarima(const SarimaModel& model, int h) {
    check_horizon(model, h);
    const auto nd = static_cast<std::size_t>(model.order.differencing_lags());
    std::vector<double> w;
    if (model.last_observations.size() > nd) {
        w = difference(model.last_observations, model.order.d, model.order.D, model.order.S);
        for (auto& v : w) v -= model.intercept;
    }
    return forecast_core(model, std::move(w), model.last_residuals, model.last_observations, h);
}

SarimaModel with_history(const SarimaModel& model, std::span<const double> history) {
    const auto nd = static_cast<std::size_t>(model.order.differencing_lags());
    const Polynomials poly = polynomials_of(model);
    if (history.size() <= nd + poly.max_ar_lag) throw DataError("sarima: history too short");
    std::vector<double> w = difference(history, model.order.d, model.order.D, model.order.S);
    for (auto& v : w) v -= model.intercept;
    const std::size_t offset = std::min(model.condition_offset, w.size());
    const std::vector<double> e = css_residuals(w, poly, std::max(offset, poly.max_ar_lag));
    SarimaModel out = model;
    out.last_observations = tail(history, poly.max_ar_lag + nd);
    out.last_residuals = tail(e, poly.max_ma_lag);
    return out;
}

std::vector<double> forecast_sarima_from(const SarimaModel& model, std::span<const double> history, int h) {
    check_horizon(model, h);
    return forecast_sarima(with_history(model, history), h);
}

OneStepPredictions sarima_one_step(const SarimaModel& model, std::span<const double> series) {
    const auto nd = static_cast<std::size_t>(model.order.differencing_lags());
    const Polynomials poly = polynomials_of(model);
    std::vector<double> w = difference(series, model.order.d, model.order.D, model.order.S);
    for (auto& v : w) v -= model.intercept;
    const std::size_t offset = std::max(std::min(model.condition_offset, w.size()), poly.max_ar_lag);
    const std::vector<double> e = css_residuals(w, poly, offset);
    OneStepPredictions out;
    out.first = nd + offset;
    for (std::size_t i = offset; i < w.size(); ++i) out.values.push_back(series[nd + i] - e[i]);
    return out;
}

void save_sarima(std::ostream& out, const SarimaModel& m) {
    out << "# metroflow sarima model\n";
    out << "p=" << m.order.p << "\nd=" << m.order.d << "\nq=" << m.order.q << '\n';
    out << "P=" << m.order.P << "\nD=" << m.order.D << "\nQ=" << m.order.Q << "\nS=" << m.order.S << '\n';
    write_vector(out, "phi", m.phi);
    write_vector(out, "theta", m.theta);
    write_vector(out, "seasonal_phi", m.seasonal_phi);
    write_vector(out, "seasonal_theta", m.seasonal_theta);
    out << "has_intercept=" << (m.has_intercept ? 1 : 0) << '\n';
    out << "intercept=" << format_double(m.intercept) << '\n';
    out << "sigma2=" << format_double(m.sigma2) << '\n';
    out << "loglik=" << format_double(m.loglik) << '\n';
    out << "aicc=" << format_double(m.aicc) << '\n';
    out << "n_effective=" << m.n_effective << '\n';
    out << "condition_offset=" << m.condition_offset << '\n';
    write_vector(out, "last_observations", m.last_observations);
    write_vector(out, "last_residuals", m.last_residuals);
}

SarimaModel load_sarima(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError("sarima model: malformed line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto get = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw DataError(std::string("sarima model: missing key '") + key + "'");
        return it->second;
    };
    try {
        SarimaModel m;
        m.order = {std::stoi(get("p")), std::stoi(get("d")), std::stoi(get("q")), std::stoi(get("P")),
                   std::stoi(get("D")), std::stoi(get("Q")), std::stoi(get("S"))};
        m.order.validate();
        m.phi = parse_vector(get("phi"));
        m.theta = parse_vector(get("theta"));
        m.seasonal_phi = parse_vector(get("seasonal_phi"));
        m.seasonal_theta = parse_vector(get("seasonal_theta"));
        m.has_intercept = get("has_intercept") == "1";
        m.intercept = std::stod(get("intercept"));
        m.sigma2 = std::stod(get("sigma2"));
        m.loglik = std::stod(get("loglik"));
        m.aicc = std::stod(get("aicc"));
        m.n_effective = std::stoul(get("n_effective"));
        m.condition_offset = std::stoul(get("condition_offset"));
        m.last_observations = parse_vector(get("last_observations"));
        m.last_residuals = parse_vector(get("last_residuals"));
        if (m.phi.size() != static_cast<std::size_t>(m.order.p) || m.theta.size() != static_cast<std::size_t>(m.order.q) ||
            m.seasonal_phi.size() != static_cast<std::size_t>(m.order.P) ||
            m.seasonal_theta.size() != static_cast<std::size_t>(m.order.Q)) {
            throw DataError("sarima model: coefficient counts do not match orders");
        }
        return m;
    } catch (const std::invalid_argument&) {
        throw DataError("sarima model: malformed number");
    } catch (const std::out_of_range&) {
        throw DataError("sarima model: number out of range");
    }
}

} // namespace metroflow
