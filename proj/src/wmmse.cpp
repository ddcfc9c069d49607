#include "fran/wmmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace fran {

void WmmseProblem::validate() const
{
    const std::size_t K = ues.size();
    for (const auto& u : ues) {
        if (u.cross.size() != K)
            throw std::invalid_argument("WmmseProblem: cross-gain row has the wrong length");
        if (!(u.p_max > 0.0) || u.gamma < 0.0 || u.rate_weight < 0.0 || u.power_cost < 0.0)
            throw std::invalid_argument("WmmseProblem: bad UE parameters");
        if (!(u.noise > 0.0) || !(u.signal > 0.0))
            throw std::invalid_argument("WmmseProblem: signal and noise terms must be positive");
        if (u.node >= static_cast<int>(node_budget.size()))
            throw std::invalid_argument("WmmseProblem: node without budget");
    }
    if (!(kappa >= 0.0) || max_iterations < 1)
        throw std::invalid_argument("WmmseProblem: bad stopping rule");
}

namespace {

double received_power(const WmmseProblem& problem, const std::vector<double>& q, std::size_t k)
{
    const auto& u = problem.ues[k];
    double total = u.noise;
    for (std::size_t j = 0; j < problem.size(); ++j)
        total += u.cross[j] * q[j] * q[j];
    return total;
}

double interference_plus_noise(const WmmseProblem& problem, const std::vector<double>& p, std::size_t k)
{
    const auto& u = problem.ues[k];
    double total = u.noise;
    for (std::size_t j = 0; j < problem.size(); ++j)
        if (j != k)
            total += u.cross[j] * p[j];
    return total;
}

} // namespace

double wmmse_sinr(const WmmseProblem& problem, const std::vector<double>& q, std::size_t k)
{
    const auto& u = problem.ues[k];
    double interference = u.noise;
    for (std::size_t j = 0; j < problem.size(); ++j)
        if (j != k)
            interference += u.cross[j] * q[j] * q[j];
    return u.signal * u.signal * q[k] * q[k] / interference;
}

std::vector<double> wmmse_rates(const WmmseProblem& problem, const std::vector<double>& q)
{
    std::vector<double> r(problem.size());
    for (std::size_t k = 0; k < problem.size(); ++k)
        r[k] = spectral_rate(wmmse_sinr(problem, q, k), problem.rate);
    return r;
}

double wmmse_pmr(const WmmseProblem& problem, const std::vector<double>& q)
{
    double value = 0.0;
    for (std::size_t k = 0; k < problem.size(); ++k) {
        const auto& u = problem.ues[k];
        value += u.power_cost * q[k] * q[k];
        if (u.rate_weight > 0.0)
            value -= u.rate_weight * std::log1p(wmmse_sinr(problem, q, k));
    }
    return value;
}

double mse(const WmmseProblem& problem, const WmmseState& state, std::size_t k)
{
    const double uk = state.u[k];
    return uk * uk * received_power(problem, state.q, k) - 2.0 * uk * problem.ues[k].signal * state.q[k] + 1.0;
}

double optimal_receiver(const WmmseProblem& problem, const WmmseState& state, std::size_t k)
{
    return problem.ues[k].signal * state.q[k] / received_power(problem, state.q, k);
}

double optimal_weight(double e)
{
    if (!(e > 0.0) || !std::isfinite(e))
        throw NumericError("optimal_weight: MSE must be positive and finite");
    return 1.0 / e;
}

double wmmse_objective(const WmmseProblem& problem, const WmmseState& state)
{
    double value = 0.0;
    for (std::size_t k = 0; k < problem.size(); ++k) {
        const auto& u = problem.ues[k];
        value += u.power_cost * state.q[k] * state.q[k];
        if (u.rate_weight > 0.0)
            value += u.rate_weight * (state.w[k] * mse(problem, state, k) - std::log(state.w[k]) - 1.0);
    }
    return value;
}

std::vector<double> compute_charges(const WmmseProblem& problem, const std::vector<double>& q)
{
    const auto r = wmmse_rates(problem, q);
    std::vector<double> c(problem.size(), 0.0);
    for (std::size_t k = 0; k < problem.size(); ++k)
        if (problem.ues[k].node >= 0)
            c[k] = problem.ues[k].fixed_load + problem.mu1_per_bit * r[k];
    return c;
}

bool compute_budget_holds(const WmmseProblem& problem, const std::vector<double>& charges)
{
    std::vector<double> load(problem.node_budget.size(), 0.0);
    for (std::size_t k = 0; k < problem.size(); ++k)
        if (problem.ues[k].node >= 0)
            load[problem.ues[k].node] += charges[k];
    for (std::size_t m = 0; m < load.size(); ++m)
        if (load[m] > problem.node_budget[m] * (1.0 + 1e-9) + 1e-12)
            return false;
    return true;
}

bool qos_holds(const WmmseProblem& problem, const std::vector<double>& q, double rel_tol)
{
    for (std::size_t k = 0; k < problem.size(); ++k) {
        const double gamma = problem.ues[k].gamma;
        if (gamma > 0.0 && wmmse_sinr(problem, q, k) < gamma * (1.0 - rel_tol))
            return false;
    }
    return true;
}

namespace {

// Cone constraints written in normalized power x = P / P^max:
//   A x >= 1 for every constrained UE. Unconstrained UEs have no row.
struct QosRows
{
    std::vector<std::size_t> index;  // problem UE of each row
    Eigen::MatrixXd A;               // rows x K
};

QosRows qos_rows(const WmmseProblem& problem)
{
    QosRows rows;
    const std::size_t K = problem.size();
    for (std::size_t k = 0; k < K; ++k)
        if (problem.ues[k].gamma > 0.0)
            rows.index.push_back(k);
    rows.A.setZero(static_cast<Eigen::Index>(rows.index.size()), static_cast<Eigen::Index>(K));
    for (std::size_t r = 0; r < rows.index.size(); ++r) {
        const auto& u = problem.ues[rows.index[r]];
        const double scale = u.gamma * u.noise;
        for (std::size_t j = 0; j < K; ++j) {
            const double pmax = problem.ues[j].p_max;
            if (j == rows.index[r])
                rows.A(r, j) = u.signal * u.signal * pmax / scale;
            else
                rows.A(r, j) = -u.gamma * u.cross[j] * pmax / scale;
        }
    }
    return rows;
}

// Least normalized point of the cone constraints plus a strictly interior
// direction. Empty when the constraints cannot be met with unbounded power.
struct QosGeometry
{
    Eigen::VectorXd x_min;
    Eigen::VectorXd interior;
};

std::optional<QosGeometry> qos_geometry(const WmmseProblem& problem, const QosRows& rows)
{
    const Eigen::Index K = static_cast<Eigen::Index>(problem.size());
    QosGeometry g;
    g.x_min = Eigen::VectorXd::Zero(K);
    g.interior = Eigen::VectorXd::Ones(K);
    const Eigen::Index R = static_cast<Eigen::Index>(rows.index.size());
    if (R == 0)
        return g;

    Eigen::MatrixXd acc(R, R);
    Eigen::VectorXd rest_push(R);
    for (Eigen::Index r = 0; r < R; ++r) {
        double push = 1.0;
        for (Eigen::Index j = 0; j < K; ++j) {
            bool constrained = std::find(rows.index.begin(), rows.index.end(), static_cast<std::size_t>(j))
                               != rows.index.end();
            if (!constrained)
                push -= rows.A(r, j);
        }
        rest_push(r) = push;
        for (Eigen::Index c = 0; c < R; ++c)
            acc(r, c) = rows.A(r, static_cast<Eigen::Index>(rows.index[c]));
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(acc);
    Eigen::VectorXd xc = lu.solve(Eigen::VectorXd::Ones(R));
    Eigen::VectorXd yc = lu.solve(rest_push);
    if (!xc.allFinite() || !yc.allFinite())
        return std::nullopt;
    // A Z-matrix with a positive solution of A x = 1 is a non-singular M-matrix,
    // so x_min is the least feasible point.
    for (Eigen::Index r = 0; r < R; ++r)
        if (!(xc(r) > 0.0) || !(yc(r) > 0.0))
            return std::nullopt;
    for (Eigen::Index r = 0; r < R; ++r) {
        g.x_min(static_cast<Eigen::Index>(rows.index[r])) = xc(r);
        g.interior(static_cast<Eigen::Index>(rows.index[r])) = yc(r);
    }
    return g;
}

struct BarrierProblem
{
    Eigen::VectorXd lin;    // coefficient of x_k
    Eigen::VectorXd root;   // coefficient of -sqrt(x_k)
    const Eigen::MatrixXd* A = nullptr;
};

double barrier_value(const BarrierProblem& bp, const Eigen::VectorXd& x, double t)
{
    double f = 0.0;
    double barrier = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        if (!(x(k) > 0.0) || !(x(k) < 1.0))
            return std::numeric_limits<double>::infinity();
        f += bp.lin(k) * x(k) - bp.root(k) * std::sqrt(x(k));
        barrier -= std::log(x(k)) + std::log1p(-x(k));
    }
    if (bp.A->rows() > 0) {
        Eigen::VectorXd slack = (*bp.A) * x - Eigen::VectorXd::Ones(bp.A->rows());
        for (Eigen::Index r = 0; r < slack.size(); ++r) {
            if (!(slack(r) > 0.0))
                return std::numeric_limits<double>::infinity();
            barrier -= std::log(slack(r));
        }
    }
    return t * f + barrier;
}

// Log-barrier Newton method for min lin.x - root.sqrt(x) on the box (0,1)
// intersected with A x > 1.
Eigen::VectorXd solve_barrier(const BarrierProblem& bp, Eigen::VectorXd x)
{
    const Eigen::Index K = x.size();
    const Eigen::Index R = bp.A->rows();
    const double constraints = static_cast<double>(2 * K + R);
    constexpr double gap_tol = 1e-10;
    constexpr double growth = 50.0;

    for (double t = 1.0;; t *= growth) {
        for (int newton = 0; newton < 60; ++newton) {
            Eigen::VectorXd grad(K);
            Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(K, K);
            for (Eigen::Index k = 0; k < K; ++k) {
                const double xk = x(k);
                const double sq = std::sqrt(xk);
                grad(k) = t * (bp.lin(k) - bp.root(k) / (2.0 * sq)) - 1.0 / xk + 1.0 / (1.0 - xk);
                hess(k, k) = t * bp.root(k) / (4.0 * xk * sq) + 1.0 / (xk * xk) + 1.0 / ((1.0 - xk) * (1.0 - xk));
            }
            if (R > 0) {
                Eigen::VectorXd slack = (*bp.A) * x - Eigen::VectorXd::Ones(R);
                for (Eigen::Index r = 0; r < R; ++r) {
                    const Eigen::VectorXd a = bp.A->row(r).transpose();
                    grad -= a / slack(r);
                    hess.noalias() += a * a.transpose() / (slack(r) * slack(r));
                }
            }
            Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
            Eigen::VectorXd step = -ldlt.solve(grad);
            if (!step.allFinite())
                throw NumericError("power_step: Newton system is singular");
            const double decrement = -grad.dot(step);
            if (decrement / 2.0 <= 1e-10)
                break;

            // Largest step that keeps the iterate strictly inside the domain.
            double s = 1.0;
            for (Eigen::Index k = 0; k < K; ++k) {
                if (step(k) < 0.0)
                    s = std::min(s, -0.99 * x(k) / step(k));
                else if (step(k) > 0.0)
                    s = std::min(s, 0.99 * (1.0 - x(k)) / step(k));
            }
            if (R > 0) {
                const Eigen::VectorXd slack = (*bp.A) * x - Eigen::VectorXd::Ones(R);
                const Eigen::VectorXd rate = (*bp.A) * step;
                for (Eigen::Index r = 0; r < R; ++r)
                    if (rate(r) < 0.0)
                        s = std::min(s, -0.99 * slack(r) / rate(r));
            }
            const double phi = barrier_value(bp, x, t);
            Eigen::VectorXd trial = x + s * step;
            while (barrier_value(bp, trial, t) > phi - 0.25 * s * decrement) {
                s *= 0.5;
                if (s < 1e-12)
                    break;
                trial = x + s * step;
            }
            if (s < 1e-12)
                break;
            x = trial;
        }
        if (constraints / t < gap_tol)
            break;
    }
    return x;
}

} // namespace

std::optional<std::vector<double>> min_qos_powers(const WmmseProblem& problem)
{
    const auto rows = qos_rows(problem);
    const auto geometry = qos_geometry(problem, rows);
    if (!geometry)
        return std::nullopt;
    std::vector<double> p(problem.size());
    for (std::size_t k = 0; k < problem.size(); ++k) {
        const double x = geometry->x_min(static_cast<Eigen::Index>(k));
        if (x > 1.0 + 1e-12)
            return std::nullopt;
        p[k] = std::min(x, 1.0) * problem.ues[k].p_max;
    }
    return p;
}

PowerStepResult power_step(const WmmseProblem& problem, const WmmseState& state)
{
    PowerStepResult result;
    const std::size_t K = problem.size();
    if (!state.c_tilde.empty() && !compute_budget_holds(problem, state.c_tilde)) {
        result.reason = "compute budget violated by the previous iterate";
        return result;
    }

    // Surrogate in P: sum_k D_k P_k - b_k sqrt(P_k), separable and convex.
    Eigen::VectorXd D = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k)
        D(k) = problem.ues[k].power_cost;
    for (std::size_t i = 0; i < K; ++i) {
        const auto& ui = problem.ues[i];
        if (ui.rate_weight <= 0.0)
            continue;
        const double coeff = ui.rate_weight * state.w[i] * state.u[i] * state.u[i];
        for (std::size_t k = 0; k < K; ++k)
            D(k) += coeff * ui.cross[k];
        b(i) += 2.0 * ui.rate_weight * state.w[i] * state.u[i] * ui.signal;
    }

    // The box-constrained minimizer solves the step whenever it already meets the cones.
    std::vector<double> box(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double cap = std::sqrt(problem.ues[k].p_max);
        if (b(k) <= 0.0)
            box[k] = 0.0;
        else if (D(k) <= 0.0)
            box[k] = cap;
        else
            box[k] = std::min(b(k) / (2.0 * D(k)), cap);
    }
    if (qos_holds(problem, box, 0.0)) {
        result.q = std::move(box);
        result.feasible = true;
        return result;
    }

    const auto rows = qos_rows(problem);
    const auto geometry = qos_geometry(problem, rows);
    if (!geometry) {
        result.reason = "QoS cone constraints are infeasible";
        return result;
    }
    double headroom = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
        const double x = geometry->x_min(static_cast<Eigen::Index>(k));
        if (x > 1.0 + 1e-12) {
            result.reason = "QoS cone constraints exceed the power caps";
            return result;
        }
        headroom = std::min(headroom, (1.0 - x) / geometry->interior(static_cast<Eigen::Index>(k)));
    }

    Eigen::VectorXd x;
    if (headroom <= 1e-12) {
        // The feasible set collapses onto the least point.
        x = geometry->x_min.cwiseMin(1.0);
    } else {
        BarrierProblem bp;
        bp.lin.resize(static_cast<Eigen::Index>(K));
        bp.root.resize(static_cast<Eigen::Index>(K));
        double scale = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double pmax = problem.ues[k].p_max;
            bp.lin(k) = D(k) * pmax;
            bp.root(k) = std::max(b(k), 0.0) * std::sqrt(pmax);
            scale = std::max(scale, std::abs(bp.lin(k)) + bp.root(k));
        }
        if (scale > 0.0) {
            bp.lin /= scale;
            bp.root /= scale;
        }
        bp.A = &rows.A;
        Eigen::VectorXd x0 = geometry->x_min + 0.5 * headroom * geometry->interior;
        x = solve_barrier(bp, x0);
    }

    result.q.resize(K);
    for (std::size_t k = 0; k < K; ++k)
        result.q[k] = std::sqrt(std::clamp(x(static_cast<Eigen::Index>(k)), 0.0, 1.0) * problem.ues[k].p_max);
    result.feasible = true;
    return result;
}

std::optional<std::vector<double>> initial_amplitudes(const WmmseProblem& problem)
{
    std::vector<double> floor(problem.size());
    for (std::size_t k = 0; k < problem.size(); ++k)
        floor[k] = problem.ues[k].p_max / 4.0;
    return lifted_amplitudes(problem, floor);
}

std::optional<std::vector<double>> warm_start_amplitudes(const WmmseProblem& problem)
{
    std::vector<double> floor(problem.size());
    for (std::size_t k = 0; k < problem.size(); ++k) {
        const auto& u = problem.ues[k];
        if (u.rate_weight > 0.0 && u.power_cost > 0.0) {
            const double gain = u.signal * u.signal / u.noise;
            floor[k] = std::clamp(u.rate_weight / u.power_cost - 1.0 / gain, 0.0, u.p_max);
        } else if (u.rate_weight > 0.0) {
            floor[k] = u.p_max;
        }
    }
    return lifted_amplitudes(problem, floor);
}

std::optional<std::vector<double>> lifted_amplitudes(const WmmseProblem& problem, const std::vector<double>& floor)
{
    const std::size_t K = problem.size();
    // p <- max(floor, T(p)) rises monotonically to the least QoS-feasible point above the floor.
    std::vector<double> p = floor;
    bool settled = false;
    for (int it = 0; it < 2000 && !settled; ++it) {
        settled = true;
        std::vector<double> next(K);
        for (std::size_t k = 0; k < K; ++k) {
            const auto& u = problem.ues[k];
            double need = 0.0;
            if (u.gamma > 0.0)
                need = u.gamma * interference_plus_noise(problem, p, k) / (u.signal * u.signal) * (1.0 + 1e-10);
            next[k] = std::max(floor[k], need);
            if (std::abs(next[k] - p[k]) > 1e-13 * std::max(p[k], 1e-30))
                settled = false;
        }
        p = std::move(next);
        bool capped = false;
        for (std::size_t k = 0; k < K; ++k)
            capped = capped || p[k] > problem.ues[k].p_max;
        if (capped) {
            settled = false;
            break;
        }
    }

    std::vector<double> q(K);
    if (settled) {
        for (std::size_t k = 0; k < K; ++k)
            q[k] = std::sqrt(p[k]);
        if (qos_holds(problem, q))
            return q;
    }
    auto least = min_qos_powers(problem);
    if (!least)
        return std::nullopt;
    for (std::size_t k = 0; k < K; ++k)
        q[k] = std::sqrt(std::min((*least)[k] * (1.0 + 1e-9), problem.ues[k].p_max));
    return q;
}

namespace {

void refresh_receivers(const WmmseProblem& problem, WmmseState& state)
{
    const std::size_t K = problem.size();
    state.u.assign(K, 0.0);
    state.w.assign(K, 1.0);
    for (std::size_t k = 0; k < K; ++k) {
        state.u[k] = optimal_receiver(problem, state, k);
        state.w[k] = optimal_weight(mse(problem, state, k));
    }
}

} // namespace

BcdResult bcd_solve(const WmmseProblem& problem, std::optional<std::vector<double>> initial_q)
{
    problem.validate();
    BcdResult result;
    const std::size_t K = problem.size();

    std::optional<std::vector<double>> start = initial_q ? initial_q : initial_amplitudes(problem);
    if (!start) {
        result.reason = "QoS cone constraints are infeasible";
        return result;
    }
    if (start->size() != K)
        throw std::invalid_argument("bcd_solve: initial amplitudes do not match the problem");
    if (!compute_budget_holds(problem, compute_charges(problem, *start))) {
        auto least = min_qos_powers(problem);
        if (least) {
            for (std::size_t k = 0; k < K; ++k)
                (*start)[k] = std::sqrt(std::min((*least)[k] * (1.0 + 1e-9), problem.ues[k].p_max));
        }
        if (!least || !compute_budget_holds(problem, compute_charges(problem, *start))) {
            result.reason = "compute budget cannot be met at the least QoS powers";
            result.state.q = *start;
            result.power.resize(K);
            for (std::size_t k = 0; k < K; ++k)
                result.power[k] = (*start)[k] * (*start)[k];
            result.pmr = wmmse_pmr(problem, *start);
            return result;
        }
    }

    WmmseState state;
    state.q = *start;
    state.pmr = wmmse_pmr(problem, state.q);
    result.pmr_history.push_back(state.pmr);
    result.feasible = true;
    {
        WmmseState probe = state;
        refresh_receivers(problem, probe);
        result.objective_history.push_back(wmmse_objective(problem, probe));
    }

    for (int it = 1; it <= problem.max_iterations; ++it) {
        const std::vector<double> cached_q = state.q;
        const double cached_pmr = state.pmr;

        refresh_receivers(problem, state);
        state.c_tilde = compute_charges(problem, state.q);
        result.last_step = state;

        PowerStepResult step = power_step(problem, state);
        if (!step.feasible) {
            result.reason = step.reason;
            break;
        }
        // Keep the previous amplitudes when the solver's answer is no better on
        // the surrogate; the previous point is feasible for this step.
        if (qos_holds(problem, cached_q)) {
            WmmseState trial = state;
            trial.q = step.q;
            if (wmmse_objective(problem, trial) > wmmse_objective(problem, state)) {
                step.q = cached_q;
                ++result.safeguard_hits;
            }
        }

        state.q = step.q;
        state.pmr = wmmse_pmr(problem, state.q);
        if (!compute_budget_holds(problem, compute_charges(problem, state.q))) {
            state.q = cached_q;
            state.pmr = cached_pmr;
            result.stopped_by_budget = true;
            result.converged = true;
            break;
        }
        result.pmr_history.push_back(state.pmr);
        {
            WmmseState probe = state;
            refresh_receivers(problem, probe);
            result.objective_history.push_back(wmmse_objective(problem, probe));
        }
        result.iterations = it;
        if (std::abs(state.pmr - cached_pmr) <= problem.kappa * std::abs(cached_pmr)) {
            result.converged = true;
            break;
        }
    }

    refresh_receivers(problem, state);
    state.c_tilde = compute_charges(problem, state.q);
    result.pmr = state.pmr;
    result.power.resize(K);
    for (std::size_t k = 0; k < K; ++k)
        result.power[k] = state.q[k] * state.q[k];
    result.state = std::move(state);
    return result;
}

} // namespace fran
