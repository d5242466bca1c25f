#include "peoa/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace peoa {

namespace {

struct BestTracker {
    Vector point;
    double value;

    void offer(std::span<const double> x, double v) {
        if (v < value) {
            value = v;
            point.assign(x.begin(), x.end());
        }
    }
};

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Forward differences, stepping backwards at an upper bound. Returns false
// when the budget ran out before every component was probed.
bool fd_gradient(BudgetedFunction& fn, const Territory& terr, const Vector& x, double fx, Vector& grad,
                 BestTracker& best) {
    const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    Vector probe = x;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double h = root_eps * std::max(1.0, std::fabs(x[j]));
        if (x[j] + h > terr.upper[j]) h = -h;
        probe[j] = x[j] + h;
        const double hv = probe[j] - x[j];
        if (hv == 0.0) {
            grad[j] = 0.0;
            probe[j] = x[j];
            continue;
        }
        const auto fp = fn(probe);
        if (!fp) return false;
        best.offer(probe, *fp);
        grad[j] = (*fp - fx) / hv;
        probe[j] = x[j];
    }
    return true;
}

Vector project(Vector x, const Territory& terr) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], terr.lower[j], terr.upper[j]);
    return x;
}

LocalResult finish(const BestTracker& best, const BudgetedFunction& fn) {
    return {best.point, best.value, fn.used()};
}

}  // namespace

std::optional<double> BudgetedFunction::operator()(std::span<const double> x) {
    if (!has_budget()) return std::nullopt;
    ++used_;
    return fn_(x);
}

Territory territory(const Eagle& best, const SearchSpace& space, double rho) {
    Territory t;
    t.y_size = std::max(rho * space.min_width(), 1.0);
    const std::size_t dim = space.dimension();
    t.lower.resize(dim);
    t.upper.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        t.lower[j] = std::max(space.lower[j], best.position[j] - t.y_size);
        t.upper[j] = std::min(space.upper[j], best.position[j] + t.y_size);
    }
    t.start = best.position;
    return t;
}

LocalResult CompassSearch::minimize(BudgetedFunction& fn, const Territory& terr, double start_value) const {
    return compass_search(fn, terr, start_value, initial_step_fraction_ * terr.y_size);
}

LocalResult compass_search(BudgetedFunction& fn, const Territory& terr, double start_value, double initial_step) {
    BestTracker best{terr.start, start_value};
    Vector x = terr.start;
    double fx = start_value;
    double step = initial_step;
    const double min_step = kLocalStepTolerance * terr.y_size;
    const std::size_t dim = x.size();
    std::vector<int> preferred(dim, 1);

    while (step >= min_step && fn.has_budget()) {
        bool improved = false;
        for (std::size_t j = 0; j < dim && fn.has_budget(); ++j) {
            for (int attempt = 0; attempt < 2; ++attempt) {
                const int sign = attempt == 0 ? preferred[j] : -preferred[j];
                const double moved = std::clamp(x[j] + sign * step, terr.lower[j], terr.upper[j]);
                if (moved == x[j]) continue;
                const double saved = x[j];
                x[j] = moved;
                const auto fy = fn(x);
                if (!fy) {
                    x[j] = saved;
                    return finish(best, fn);
                }
                if (*fy < fx) {
                    fx = *fy;
                    best.offer(x, fx);
                    preferred[j] = sign;
                    improved = true;
                    break;
                }
                x[j] = saved;
            }
        }
        if (!improved) step *= 0.5;
    }
    return finish(best, fn);
}

LocalResult ProjectedQuasiNewton::minimize(BudgetedFunction& fn, const Territory& terr, double start_value) const {
    return projected_quasi_newton(fn, terr, start_value, nullptr);
}

LocalResult projected_quasi_newton(BudgetedFunction& fn, const Territory& terr, double start_value,
                                   double* last_step) {
    if (last_step) *last_step = 0.0;
    BestTracker best{terr.start, start_value};
    const std::size_t dim = terr.start.size();
    Vector x = terr.start;
    double fx = start_value;
    Vector g(dim), g_new(dim), d(dim), s(dim), y(dim);
    std::vector<double> h(dim * dim, 0.0);
    auto reset_h = [&](double scale) {
        std::fill(h.begin(), h.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) h[i * dim + i] = scale;
    };
    reset_h(1.0);
    bool h_scaled = false;

    if (!fd_gradient(fn, terr, x, fx, g, best)) return finish(best, fn);

    const double min_step = kLocalStepTolerance * terr.y_size;
    for (int iter = 0; fn.has_budget(); ++iter) {
        std::vector<bool> active(dim);
        for (std::size_t j = 0; j < dim; ++j)
            active[j] = (x[j] <= terr.lower[j] && g[j] > 0.0) || (x[j] >= terr.upper[j] && g[j] < 0.0);

        for (std::size_t i = 0; i < dim; ++i) {
            double acc = 0.0;
            if (!active[i])
                for (std::size_t k = 0; k < dim; ++k)
                    if (!active[k]) acc -= h[i * dim + k] * g[k];
            d[i] = acc;
        }
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            reset_h(1.0);
            h_scaled = false;
            for (std::size_t j = 0; j < dim; ++j) d[j] = active[j] ? 0.0 : -g[j];
            slope = dot(g, d);
            if (!(slope < 0.0)) break;
        }

        const double d_norm = std::sqrt(dot(d, d));
        double t = std::min(1.0, terr.y_size / d_norm);
        bool accepted = false;
        Vector xt;
        double ft = 0.0;
        for (int ls = 0; ls < 60 && fn.has_budget(); ++ls, t *= 0.5) {
            xt = x;
            for (std::size_t j = 0; j < dim; ++j) xt[j] += t * d[j];
            xt = project(std::move(xt), terr);
            for (std::size_t j = 0; j < dim; ++j) s[j] = xt[j] - x[j];
            if (std::sqrt(dot(s, s)) < min_step) break;
            const auto fv = fn(xt);
            if (!fv) break;
            best.offer(xt, *fv);
            if (*fv < fx && *fv <= fx + 1e-4 * dot(g, s)) {
                ft = *fv;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;

        if (!fd_gradient(fn, terr, xt, ft, g_new, best)) break;
        for (std::size_t j = 0; j < dim; ++j) y[j] = g_new[j] - g[j];
        const double sy = dot(s, y);
        if (sy > 1e-10 * std::sqrt(dot(s, s) * dot(y, y))) {
            if (!h_scaled) {
                reset_h(sy / dot(y, y));
                h_scaled = true;
            }
            // H <- (I - r s y^T) H (I - r y s^T) + r s s^T
            const double r = 1.0 / sy;
            Vector hy(dim, 0.0);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t k = 0; k < dim; ++k) hy[i] += h[i * dim + k] * y[k];
            const double yhy = dot(y, hy);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t k = 0; k < dim; ++k)
                    h[i * dim + k] += -r * (hy[i] * s[k] + s[i] * hy[k]) + (r * r * yhy + r) * s[i] * s[k];
        }
        if (last_step) *last_step = std::sqrt(dot(s, s));
        x = std::move(xt);
        fx = ft;
        g.swap(g_new);
    }
    return finish(best, fn);
}

LocalResult HybridLocalSearch::minimize(BudgetedFunction& fn, const Territory& terr, double start_value) const {
    double last_step = 0.0;
    LocalResult first = projected_quasi_newton(fn, terr, start_value, &last_step);
    if (!fn.has_budget()) return first;
    Territory polish = terr;
    polish.start = first.best_point;
    // Poll at the scale the descent reached instead of starting coarse again.
    const double coarse = 0.1 * terr.y_size;
    const double step = last_step > 0.0 ? std::min(coarse, last_step) : coarse;
    LocalResult second = compass_search(fn, polish, first.best_value, step);
    second.evals_consumed = fn.used();
    return second;
}

const LocalMinimizer& default_local_minimizer() {
    static const HybridLocalSearch instance;
    return instance;
}

LocalResult local_minimize(const Objective& obj, const Territory& terr, double start_value, std::uint64_t budget,
                           EvalCounter& counter, const LocalMinimizer& method, const EvalObserver& observer) {
    const std::uint64_t allowed = std::min(budget, counter.remaining());
    BudgetedFunction fn(
        [&](std::span<const double> x) {
            const double v = evaluate(obj, x, counter);
            if (observer) observer(x, v);
            return v;
        },
        allowed);
    LocalResult result = method.minimize(fn, terr, start_value);
    result.evals_consumed = fn.used();
    return result;
}

Vector warm_start_rule(const std::optional<Eagle>& prev_best, const std::optional<LocalResult>& prev_local,
                       const Eagle& current_best) {
    if (prev_best && prev_local && prev_best->position == current_best.position) return prev_local->best_point;
    return current_best.position;
}

}  // namespace peoa
