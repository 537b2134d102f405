#include "penrose/reflection.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>

#include "penrose/geometry.hpp"
#include "penrose/util.hpp"

namespace penrose {

namespace {

// Invert u_m at |t| by Newton with a bisection guard; tolerance 1e-12.
double invert_profile(const SchwarzschildProfile& p, double t_abs, const std::vector<int>& index) {
    if (t_abs == 0.0) return p.r_m;
    const double rpp0 = (p.n - 2) * std::pow(p.r_m, p.n - 3) / (4.0 * p.m);
    double rho = p.r_m + 0.5 * rpp0 * t_abs * t_abs;  // parabolic first guess
    double lo = p.r_m, hi = std::max(2.0 * rho, p.r_m * 4.0);
    while (profile_jet(p, hi).u < t_abs) hi *= 2.0;
    for (int iter = 0; iter < 100; ++iter) {
        rho = std::min(std::max(rho, lo), hi);
        if (rho <= p.r_m * (1.0 + kNearHorizonGap)) rho = p.r_m * (1.0 + 2.0 * kNearHorizonGap);
        const ProfileJet pj = profile_jet(p, rho);
        const double res = pj.u - t_abs;
        if (std::abs(res) < 1e-12) return rho;
        if (res > 0)
            hi = rho;
        else
            lo = rho;
        const double step = res / pj.u_prime;
        double next = rho - step;
        if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
        rho = next;
    }
    throw ChartError("horizon chart root find did not converge", index);
}

}  // namespace

HorizonChart::HorizonChart(const SchwarzschildProfile& profile, Eigen::VectorXd base_point,
                           double half_width, double h)
    : profile_(profile), base_point_(std::move(base_point)), half_width_(half_width), h_(h) {
    if (!(half_width > 0.0) || !(h > 0.0))
        throw std::invalid_argument("HorizonChart: half_width and h must be > 0");
    if (!(half_width < profile.r_m / 2.0))
        throw std::invalid_argument("HorizonChart: half_width must be < r_m / 2");
    if (base_point_.size() != profile.n)
        throw std::invalid_argument("HorizonChart: base point dimension mismatch");
    if (std::abs(base_point_.norm() - profile.r_m) > 1e-9 * profile.r_m)
        throw std::invalid_argument("HorizonChart: base point must lie on the horizon sphere");

    k_ = std::max(2, static_cast<int>(std::floor(half_width / h + 1e-12)));
    extent_ = 2 * k_ + 1;
    half_width_ = k_ * h;

    const int n = profile_.n;
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= extent_;
    values_.resize(total);

    // rho depends only on |y_n|; solve once per vertical level, then each grid
    // value follows from the projection equation.
    std::vector<double> rho_level(extent_);
    for (int j = -k_; j <= k_; ++j)
        rho_level[j + k_] = invert_profile(profile_, std::abs(j * h_), {j});

    std::vector<int> index(n, -k_);
    for (std::size_t flat = 0; flat < total; ++flat) {
        double tang2 = 0.0;
        for (int d = 0; d < n - 1; ++d) tang2 += (index[d] * h_) * (index[d] * h_);
        const double rho = rho_level[index[n - 1] + k_];
        const double arg = rho * rho - tang2;
        if (!(arg > 0.0)) throw ChartError("chart point outside the doubled surface", index);
        values_[flat] = std::sqrt(arg) - profile_.r_m;
        for (int d = n - 1; d >= 0; --d) {
            if (++index[d] <= k_) break;
            index[d] = -k_;
        }
    }
}

std::size_t HorizonChart::flat_index(const std::vector<int>& index) const {
    const int n = profile_.n;
    if (static_cast<int>(index.size()) != n)
        throw std::invalid_argument("HorizonChart: index dimension mismatch");
    std::size_t flat = 0;
    for (int d = 0; d < n; ++d) {
        if (index[d] < -k_ || index[d] > k_)
            throw std::out_of_range("HorizonChart: grid index out of range");
        flat = flat * extent_ + (index[d] + k_);
    }
    return flat;
}

double HorizonChart::value(const std::vector<int>& index) const { return values_[flat_index(index)]; }

double HorizonChart::value_at(const Eigen::VectorXd& y) const {
    const int n = profile_.n;
    if (y.size() != n) throw std::invalid_argument("HorizonChart: point dimension mismatch");
    const double rho = invert_profile(profile_, std::abs(y(n - 1)), {});
    const double tang2 = y.head(n - 1).squaredNorm();
    const double arg = rho * rho - tang2;
    if (!(arg > 0.0)) throw ChartError("chart point outside the doubled surface", {});
    return std::sqrt(arg) - profile_.r_m;
}

double HorizonChart::rho(double t) const { return invert_profile(profile_, std::abs(t), {}); }

double HorizonChart::rho_prime(double t) const {
    if (t == 0.0) return 0.0;
    const double r = rho(t);
    const double gap = std::pow(r, profile_.n - 2) - 2.0 * profile_.m;
    return (t > 0 ? 1.0 : -1.0) * std::sqrt(gap / (2.0 * profile_.m));
}

double HorizonChart::rho_double_prime(double t) const {
    const double r = rho(t);
    return (profile_.n - 2) * std::pow(r, profile_.n - 3) / (4.0 * profile_.m);
}

Jet HorizonChart::closed_form_jet(const Eigen::VectorXd& y) const {
    const int n = profile_.n;
    if (y.size() != n) throw std::invalid_argument("HorizonChart: point dimension mismatch");
    const double t = y(n - 1);
    const double rho_t = rho(t), drho = rho_prime(t), ddrho = rho_double_prime(t);
    const Eigen::VectorXd ya = y.head(n - 1);
    const double big_r = std::sqrt(rho_t * rho_t - ya.squaredNorm());

    Jet jet;
    jet.dim = n;
    jet.grad = Eigen::VectorXd::Zero(n);
    jet.grad.head(n - 1) = -ya / big_r;
    jet.grad(n - 1) = rho_t * drho / big_r;

    jet.hess = Eigen::MatrixXd::Zero(n, n);
    const double r3 = big_r * big_r * big_r;
    for (int a = 0; a < n - 1; ++a) {
        for (int b = 0; b < n - 1; ++b)
            jet.hess(a, b) = -(a == b ? 1.0 : 0.0) / big_r - ya(a) * ya(b) / r3;
        jet.hess(a, n - 1) = jet.hess(n - 1, a) = ya(a) * rho_t * drho / r3;
    }
    jet.hess(n - 1, n - 1) =
        (drho * drho + rho_t * ddrho) / big_r - (rho_t * drho) * (rho_t * drho) / r3;
    return jet;
}

double HorizonChart::exact_u_nn_on_gamma0(double y_alpha_norm) const {
    const double rpp0 = rho_double_prime(0.0);
    const double big_r = std::sqrt(profile_.r_m * profile_.r_m - y_alpha_norm * y_alpha_norm);
    return profile_.r_m * rpp0 / big_r;
}

Jet HorizonChart::fd_jet(const std::vector<int>& index) const {
    const int n = profile_.n;
    const double h = h_;
    auto shifted = [&](int d, int delta) {
        std::vector<int> idx = index;
        idx[d] += delta;
        return value(idx);
    };
    auto shifted2 = [&](int d1, int delta1, int d2, int delta2) {
        std::vector<int> idx = index;
        idx[d1] += delta1;
        idx[d2] += delta2;
        return value(idx);
    };

    Jet jet;
    jet.dim = n;
    jet.grad = Eigen::VectorXd::Zero(n);
    jet.hess = Eigen::MatrixXd::Zero(n, n);
    const double u0 = value(index);

    // One-sided stencils in y_n on Gamma_0 (the doubled surface is only C^{1,1}
    // a priori); centered stencils elsewhere.
    const bool on_gamma0 = index[n - 1] == 0;
    const int side = index[n - 1] > 0 ? 1 : (index[n - 1] < 0 ? -1 : 1);

    for (int d = 0; d < n; ++d) {
        const bool one_sided = (d == n - 1) && on_gamma0;
        if (one_sided) {
            jet.grad(d) = (-3.0 * u0 + 4.0 * shifted(d, side) - shifted(d, 2 * side)) /
                          (2.0 * h * side);
            jet.hess(d, d) = (u0 - 2.0 * shifted(d, side) + shifted(d, 2 * side)) / (h * h);
        } else {
            jet.grad(d) = (shifted(d, 1) - shifted(d, -1)) / (2.0 * h);
            jet.hess(d, d) = (shifted(d, 1) - 2.0 * u0 + shifted(d, -1)) / (h * h);
        }
    }
    for (int d1 = 0; d1 < n; ++d1) {
        for (int d2 = d1 + 1; d2 < n; ++d2) {
            double mixed;
            if (d2 == n - 1 && on_gamma0) {
                // centered in d1, one-sided in y_n
                auto un = [&](int delta1) {
                    return (-3.0 * shifted(d1, delta1) + 4.0 * shifted2(d1, delta1, d2, side) -
                            shifted2(d1, delta1, d2, 2 * side)) /
                           (2.0 * h * side);
                };
                mixed = (un(1) - un(-1)) / (2.0 * h);
            } else {
                mixed = (shifted2(d1, 1, d2, 1) - shifted2(d1, 1, d2, -1) -
                         shifted2(d1, -1, d2, 1) + shifted2(d1, -1, d2, -1)) /
                        (4.0 * h * h);
            }
            jet.hess(d1, d2) = jet.hess(d2, d1) = mixed;
        }
    }
    return jet;
}

void HorizonChart::write_csv(std::ostream& os) const {
    const int n = profile_.n;
    for (int d = 0; d < n; ++d) os << 'y' << (d + 1) << ',';
    os << "u\n";
    std::vector<int> index(n, -k_);
    for (std::size_t flat = 0; flat < values_.size(); ++flat) {
        for (int d = 0; d < n; ++d) os << format_double(index[d] * h_) << ',';
        os << format_double(values_[flat]) << '\n';
        for (int d = n - 1; d >= 0; --d) {
            if (++index[d] <= k_) break;
            index[d] = -k_;
        }
    }
}

HorizonChart build_doubled_chart(const SchwarzschildProfile& profile,
                                 const Eigen::VectorXd& base_point, double half_width, double h) {
    return HorizonChart(profile, base_point, half_width, h);
}

MatchingReport second_derivative_matching(const HorizonChart& chart) {
    const int n = chart.n();
    const int k = (chart.points_per_axis() - 1) / 2;
    const double h = chart.step();
    MatchingReport report;

    std::vector<int> index(n, 0);
    // Walk the Gamma_0 grid (y_n = 0) keeping two steps of room in y_n.
    std::vector<int> tang(n - 1, -k);
    for (;;) {
        for (int d = 0; d < n - 1; ++d) index[d] = tang[d];
        index[n - 1] = 0;
        auto at = [&](int jn) {
            std::vector<int> idx = index;
            idx[n - 1] = jn;
            return chart.value(idx);
        };
        const double u0 = at(0);
        const double upp_plus = (u0 - 2.0 * at(1) + at(2)) / (h * h);
        const double upp_minus = (u0 - 2.0 * at(-1) + at(-2)) / (h * h);
        const double un_plus = (-3.0 * u0 + 4.0 * at(1) - at(2)) / (2.0 * h);
        const double un_minus = (3.0 * u0 - 4.0 * at(-1) + at(-2)) / (2.0 * h);

        const bool base = std::all_of(tang.begin(), tang.end(), [](int v) { return v == 0; });
        if (base) {
            report.u_nn_plus = upp_plus;
            report.u_nn_minus = upp_minus;
            report.jump_base = std::abs(upp_plus - upp_minus);
        }
        report.max_jump_gamma0 = std::max(report.max_jump_gamma0, std::abs(upp_plus - upp_minus));
        report.max_first_derivative_jump =
            std::max(report.max_first_derivative_jump, std::abs(un_plus - un_minus));

        // Mixed u_{alpha n} from each side, centered in alpha.
        for (int a = 0; a < n - 1; ++a) {
            if (tang[a] + 1 > k || tang[a] - 1 < -k) continue;
            auto un_side = [&](int da, int sign) {
                std::vector<int> idx = index;
                idx[a] += da;
                auto at2 = [&](int jn) {
                    std::vector<int> idx2 = idx;
                    idx2[n - 1] = jn;
                    return chart.value(idx2);
                };
                return (-3.0 * at2(0) + 4.0 * at2(sign) - at2(2 * sign)) / (2.0 * h * sign);
            };
            const double man_plus = (un_side(1, 1) - un_side(-1, 1)) / (2.0 * h);
            const double man_minus = (un_side(1, -1) - un_side(-1, -1)) / (2.0 * h);
            report.max_mixed_jump = std::max(report.max_mixed_jump, std::abs(man_plus - man_minus));
        }

        int d = n - 2;
        for (; d >= 0; --d) {
            if (++tang[d] <= k) break;
            tang[d] = -k;
        }
        if (d < 0) break;
    }
    return report;
}

MatchingStudy second_derivative_matching_study(const SchwarzschildProfile& profile, double h0,
                                               int levels, int half_width_steps) {
    MatchingStudy study;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(profile.n);
    p(0) = profile.r_m;
    double h = h0;
    for (int level = 0; level < levels; ++level) {
        const HorizonChart chart(profile, p, half_width_steps * h, h);
        const int n = profile.n;
        const int k = (chart.points_per_axis() - 1) / 2;
        double err = 0.0;
        std::vector<int> index(n, 0);
        for (int j = -k + 0; j <= k; ++j) {  // walk one tangential axis across Gamma_0
            index[0] = j;
            index[n - 1] = 0;
            auto at = [&](int jn) {
                std::vector<int> idx = index;
                idx[n - 1] = jn;
                return chart.value(idx);
            };
            if (k < 2) break;
            const double upp_plus = (at(0) - 2.0 * at(1) + at(2)) / (h * h);
            const double upp_minus = (at(0) - 2.0 * at(-1) + at(-2)) / (h * h);
            const double exact = chart.exact_u_nn_on_gamma0(std::abs(j * h));
            err = std::max({err, std::abs(upp_plus - exact), std::abs(upp_minus - exact)});
        }
        index[0] = 0;
        const MatchingReport rep = second_derivative_matching(chart);
        study.h_values.push_back(h);
        study.estimate_errors.push_back(err);
        study.jumps.push_back(rep.max_jump_gamma0);
        h /= 2.0;
    }
    for (std::size_t i = 0; i + 1 < study.estimate_errors.size(); ++i)
        study.observed_orders.push_back(
            std::log2(study.estimate_errors[i] / study.estimate_errors[i + 1]));
    return study;
}

DecompositionTerms decomposition_from_jet(const Jet& jet) {
    const int n = jet.dim;
    const double w2 = 1.0 + jet.grad.squaredNorm();
    const double w = std::sqrt(w2);

    const Eigen::MatrixXd b = jet.hess / w;
    const Eigen::VectorXd hg = jet.hess * jet.grad;
    const Eigen::MatrixXd c = -(jet.grad * hg.transpose()) / (w2 * w);

    DecompositionTerms t;
    for (int a = 0; a < n - 1; ++a) t.sum_u_alpha_alpha += jet.hess(a, a);
    t.d = t.sum_u_alpha_alpha / w2;

    double sum_uan2 = 0.0;
    for (int a = 0; a < n - 1; ++a) sum_uan2 += jet.hess(a, n - 1) * jet.hess(a, n - 1);
    double s2_b_tangential = 0.0;
    for (int a = 0; a < n - 1; ++a)
        for (int bb = a + 1; bb < n - 1; ++bb)
            s2_b_tangential += b(a, a) * b(bb, bb) - b(a, bb) * b(a, bb);
    t.e = -sum_uan2 / w2 + s2_b_tangential;

    // Exact bilinear invariants; for symmetric C these reduce to the
    // sum-of-minors forms S_2(B,C) = sum(B_ii C_jj + B_jj C_ii - 2 B_ij C_ij)
    // and S_2(C) = sum(C_ii C_jj - C_ij^2).
    const double s2_bc = b.trace() * c.trace() - (b * c).trace();
    const double s2_c = 0.5 * (c.trace() * c.trace() - (c * c).trace());
    t.f = s2_bc + s2_c;

    t.u_nn = jet.hess(n - 1, n - 1);
    t.residual = t.d * t.u_nn + t.e + t.f;
    t.division_hazard = std::abs(t.d) < 1e-8;
    return t;
}

DecompositionTerms decomposition_terms(const HorizonChart& chart, const Eigen::VectorXd& y,
                                       bool use_closed_form) {
    if (use_closed_form) return decomposition_from_jet(chart.closed_form_jet(y));
    // snap to the nearest grid point
    const int n = chart.n();
    std::vector<int> index(n);
    for (int d = 0; d < n; ++d) index[d] = static_cast<int>(std::lround(y(d) / chart.step()));
    return decomposition_from_jet(chart.fd_jet(index));
}

DecompositionTerms decomposition_terms_at_grid(const HorizonChart& chart,
                                               const std::vector<int>& index) {
    return decomposition_from_jet(chart.fd_jet(index));
}

std::string to_json(const DecompositionTerms& t) {
    nlohmann::ordered_json j;
    j["D"] = t.d;
    j["E"] = t.e;
    j["F"] = t.f;
    j["u_nn"] = t.u_nn;
    j["residual"] = t.residual;
    j["sum_u_alpha_alpha"] = t.sum_u_alpha_alpha;
    j["division_hazard"] = t.division_hazard;
    return j.dump(2);
}

}  // namespace penrose
