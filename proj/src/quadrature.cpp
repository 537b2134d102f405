#include "penrose/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "penrose/util.hpp"

namespace penrose {

namespace {

GaussLegendre compute_gl(int order) {
    // Newton iteration on the Legendre recurrence; standard and machine-accurate.
    GaussLegendre rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Orthonormal frame whose first column is `axis`.
Matrix axis_frame(const Vector& axis) {
    const int n = static_cast<int>(axis.size());
    Matrix frame = Matrix::Zero(n, n);
    frame.col(0) = axis.normalized();
    int next = 1;
    for (int k = 0; k < n && next < n; ++k) {
        Vector v = Vector::Zero(n);
        v(k) = 1.0;
        for (int j = 0; j < next; ++j) v -= frame.col(j).dot(v) * frame.col(j);
        if (v.norm() > 1e-8) frame.col(next++) = v.normalized();
    }
    if (next != n) throw std::runtime_error("axis_frame: degenerate axis");
    return frame;
}

}  // namespace

const GaussLegendre& GaussLegendre::get(int order) {
    if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
    return it->second;
}

double integrate_panel(const std::function<double(double)>& fn, double a, double b, int order) {
    const auto& gl = GaussLegendre::get(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < order; ++i) sum += gl.weights[i] * fn(mid + half * gl.nodes[i]);
    return sum * half;
}

double integrate_panels(const std::function<double(double)>& fn, const std::vector<double>& breaks,
                        int order) {
    if (breaks.size() < 2) throw std::invalid_argument("integrate_panels: need >= 2 breakpoints");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        sum += integrate_panel(fn, breaks[i], breaks[i + 1], order);
    return sum;
}

SphereRule SphereRule::build(int n, int order) {
    Vector axis = Vector::Zero(n);
    axis(0) = 1.0;
    return build(n, order, axis, {});
}

SphereRule SphereRule::build(int n, int order, const Vector& axis,
                             const std::vector<double>& polar_splits) {
    if (n < 2) throw std::invalid_argument("SphereRule: n must be >= 2");
    if (order < 2) throw std::invalid_argument("SphereRule: order must be >= 2");

    std::vector<double> breaks{0.0};
    for (double s : polar_splits)
        if (s > 1e-12 && s < M_PI - 1e-12) breaks.push_back(s);
    breaks.push_back(M_PI);
    std::sort(breaks.begin(), breaks.end());

    // Nodes per angular coordinate: theta_1 gets panels from `breaks`, the
    // remaining polar angles a single panel, phi a 2*order panel on [0, 2pi].
    struct Angle {
        std::vector<double> t, w;  // node values and weights (measure factor applied later)
    };
    std::vector<Angle> angles(n - 1);
    const auto& gl = GaussLegendre::get(order);
    const auto& gl_phi = GaussLegendre::get(2 * order);

    auto fill_panel = [&](Angle& ang, double a, double b, const GaussLegendre& g) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            ang.t.push_back(mid + half * g.nodes[i]);
            ang.w.push_back(half * g.weights[i]);
        }
    };

    for (int k = 0; k < n - 2; ++k) {
        if (k == 0) {
            for (std::size_t p = 0; p + 1 < breaks.size(); ++p)
                fill_panel(angles[k], breaks[p], breaks[p + 1], gl);
        } else {
            fill_panel(angles[k], 0.0, M_PI, gl);
        }
    }
    fill_panel(angles[n - 2], 0.0, 2.0 * M_PI, gl_phi);

    const Matrix frame = axis_frame(axis);
    SphereRule rule;

    // Tensor product in a fixed lexicographic order.
    std::vector<std::size_t> idx(n - 1, 0);
    for (;;) {
        double weight = 1.0;
        Vector local = Vector::Zero(n);
        double sin_prod = 1.0;
        for (int k = 0; k < n - 1; ++k) {
            const double t = angles[k].t[idx[k]];
            weight *= angles[k].w[idx[k]];
            if (k < n - 2) {
                // measure factor sin^{n-2-k}(theta_{k+1})
                weight *= std::pow(std::sin(t), n - 2 - k);
                local(k) = sin_prod * std::cos(t);
                sin_prod *= std::sin(t);
            } else {
                local(n - 2) = sin_prod * std::cos(t);
                local(n - 1) = sin_prod * std::sin(t);
            }
        }
        rule.points.push_back(frame * local);
        rule.weights.push_back(weight);

        int k = n - 2;
        for (; k >= 0; --k) {
            if (++idx[k] < angles[k].t.size()) break;
            idx[k] = 0;
        }
        if (k < 0) break;
    }
    return rule;
}

int default_sphere_order(int n) {
    if (n <= 3) return 24;
    if (n == 4) return 16;
    if (n == 5) return 10;
    return 8;
}

double integrate_sphere(const SphereRule& rule, const std::function<double(const Vector&)>& fn) {
    const std::size_t count = rule.points.size();
    std::vector<double> values(count);
    parallel_for(count, [&](std::size_t i) { values[i] = fn(rule.points[i]); });
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += rule.weights[i] * values[i];
    return sum;
}

}  // namespace penrose
