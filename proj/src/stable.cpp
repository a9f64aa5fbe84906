#include "lsvwip/stable.hpp"

#include "lsvwip/parallel.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

namespace lsvwip {

void StableLaw::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("StableLaw: alpha must lie in (1,2)");
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("StableLaw: c must be positive and finite");
    if (skew_sign != 1 && skew_sign != -1) throw ValidationError("StableLaw: skew_sign must be +1 or -1");
}

StableLaw from_lsv_params(double gamma, double phi_at_zero, double h_half) {
    if (!(gamma > 0.5 && gamma < 1.0)) throw DomainError("from_lsv_params: gamma must lie in (1/2, 1)");
    if (phi_at_zero == 0.0) throw HypothesisError("from_lsv_params: the limit theorem requires phi(0) != 0");
    if (!(h_half > 0.0) || !std::isfinite(h_half)) throw ValidationError("from_lsv_params: h(1/2) must be positive");
    StableLaw law;
    law.alpha = 1.0 / gamma;
    // Gamma(1 - alpha) < 0 and cos(pi alpha / 2) < 0 on (1,2), so the product is positive.
    law.c = 0.25 * h_half * std::pow(law.alpha * std::abs(phi_at_zero), law.alpha) * std::tgamma(1.0 - law.alpha) *
            std::cos(std::numbers::pi * law.alpha / 2.0);
    law.skew_sign = phi_at_zero > 0.0 ? 1 : -1;
    if (!(law.c > 0.0)) throw NumericError("from_lsv_params: scale constant is not positive");
    return law;
}

std::complex<double> cf(const StableLaw& law, double t) {
    if (t == 0.0) return {1.0, 0.0};
    const double sgn = t > 0.0 ? 1.0 : -1.0;
    const double mod = law.c * std::pow(std::abs(t), law.alpha);
    const double k = std::tan(std::numbers::pi * law.alpha / 2.0);
    return std::exp(std::complex<double>(-mod, mod * law.skew_sign * sgn * k));
}

double sample(const StableLaw& law, Rng& rng) {
    constexpr double pi = std::numbers::pi;
    const double a = law.alpha;
    const double beta = static_cast<double>(law.skew_sign);
    const double k = std::tan(pi * a / 2.0);
    const double B = std::atan(beta * k) / a;
    const double S = std::pow(1.0 + beta * beta * k * k, 1.0 / (2.0 * a));
    const double V = pi * (rng.uniform_open() - 0.5);
    const double W = rng.exponential();
    const double X = S * std::sin(a * (V + B)) / std::pow(std::cos(V), 1.0 / a) *
                     std::pow(std::cos(V - a * (V + B)) / W, (1.0 - a) / a);
    return law.sigma() * X;
}

std::vector<double> sample_many(const StableLaw& law, std::size_t count, std::uint64_t seed, Stream stream) {
    std::vector<double> out(count);
    for_each_task(Exec::Parallel, count, [&](std::uint64_t i) {
        Rng rng = Rng::for_task(seed, stream, i);
        out[i] = sample(law, rng);
    });
    return out;
}

double cdf(const StableLaw& law, double x, double tol) {
    if (!(tol > 0.0)) throw ValidationError("cdf: tol must be positive");
    // Gil-Pelaez in the standardized variable z = x / sigma:
    //   F(x) = 1/2 - (1/pi) int_0^inf exp(-s^a) sin(beta k s^a - z s) / s ds.
    // The integrand is dominated by exp(-s^a) / s on [1, inf), so truncating where
    // exp(-s^a) < tol / 10 keeps the tail below tol.
    constexpr double pi = std::numbers::pi;
    const double a = law.alpha;
    const double bk = law.skew_sign * std::tan(pi * a / 2.0);
    const double z = x / law.sigma();
    const double s_max = std::max(1.0, std::pow(std::log(10.0 / tol), 1.0 / a));
    const auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double sa = std::pow(s, a);
        return std::exp(-sa) * std::sin(bk * sa - z * s) / s;
    };

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double total = 0.0;
    double err_total = 0.0;
    const auto panel = [&](double lo, double hi, unsigned max_depth) {
        double err = 0.0;
        total += GK::integrate(f, lo, hi, max_depth, 1e-10, &err);
        err_total += err;
    };
    double lo = 0.0;
    while (lo < s_max) {
        // About half an oscillation per panel.
        const double freq = std::abs(z) + std::abs(bk) * a * std::pow(std::max(lo, 1e-3), a - 1.0) + 1.0;
        const double hi = std::min(s_max, lo + std::min(0.5, pi / (2.0 * freq)));
        if (lo == 0.0) {
            // The integrand behaves like bk s^(a-1) - z near 0; that cusp defeats a single
            // Kronrod panel, so [0, hi] is split geometrically towards 0 and the last
            // sliver [0, eps] is integrated from the leading-order expansion. Each graded
            // panel spans a factor of two, where one Kronrod pass is already accurate.
            constexpr int kGradedPanels = 40;
            double right = hi;
            for (int j = 0; j < kGradedPanels; ++j) {
                panel(right / 2.0, right, 0);
                right /= 2.0;
            }
            total += bk * std::pow(right, a) / a - z * right;
        } else {
            panel(lo, hi, 10);
        }
        lo = hi;
    }
    if (!std::isfinite(total) || err_total > tol)
        throw NumericError("cdf: quadrature error estimate " + std::to_string(err_total) + " exceeds tol at x=" +
                           std::to_string(x));
    return std::clamp(0.5 - total / pi, 0.0, 1.0);
}

CdfTable::CdfTable(const StableLaw& law, double z_max, std::size_t points, double tol)
    : law_(law), sigma_(law.sigma()), u_max_(std::asinh(z_max)), step_(0.0), tol_(tol), values_(points) {
    law.validate();
    if (!(z_max > 0.0) || points < 2) throw ValidationError("CdfTable: need z_max > 0 and at least 2 points");
    step_ = 2.0 * u_max_ / static_cast<double>(points - 1);
    for_each_task(Exec::Parallel, points, [&](std::uint64_t i) {
        const double u = -u_max_ + step_ * static_cast<double>(i);
        values_[i] = cdf(law_, sigma_ * std::sinh(u), tol_);
    });
    // Enforce monotonicity against sub-tolerance quadrature noise.
    for (std::size_t i = 1; i < values_.size(); ++i) values_[i] = std::max(values_[i], values_[i - 1]);
}

double CdfTable::lo() const noexcept { return -sigma_ * std::sinh(u_max_); }
double CdfTable::hi() const noexcept { return sigma_ * std::sinh(u_max_); }

double CdfTable::operator()(double x) const {
    const double u = std::asinh(x / sigma_);
    if (u < -u_max_ || u > u_max_) return cdf(law_, x, tol_);
    const double pos = (u + u_max_) / step_;
    const auto i = std::min(values_.size() - 2, static_cast<std::size_t>(pos));
    const double w = pos - static_cast<double>(i);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

void LevyPathConfig::validate() const {
    if (!(T > 0.0) || !(grid_step > 0.0) || grid_step > T)
        throw ValidationError("LevyPathConfig: need 0 < grid_step <= T");
    const double cells = T / grid_step;
    if (std::abs(cells - std::round(cells)) > 1e-9 * std::max(1.0, cells))
        throw ValidationError("LevyPathConfig: grid_step must divide T");
}

StepPath sample_levy_path(const StableLaw& law, const LevyPathConfig& config, Rng& rng) {
    config.validate();
    const auto cells = static_cast<std::size_t>(std::llround(config.T / config.grid_step));
    const double scale = std::pow(config.grid_step, 1.0 / law.alpha);
    std::vector<double> b(cells);
    std::vector<double> v(cells);
    double w = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        w += scale * sample(law, rng);
        b[i] = std::min(config.T, config.grid_step * static_cast<double>(i + 1));
        v[i] = w;
    }
    b.back() = config.T;
    return StepPath(config.T, 0.0, std::move(b), std::move(v));
}

StableLaw rescale_full_system(const StableLaw& law, double mean_return) {
    if (!(mean_return > 0.0) || !std::isfinite(mean_return))
        throw ValidationError("rescale_full_system: mean_return must be positive");
    StableLaw out = law;
    out.c = law.c / mean_return;
    return out;
}

StableLaw lift_to_induced_system(const StableLaw& law, double mean_return) {
    if (!(mean_return > 0.0) || !std::isfinite(mean_return))
        throw ValidationError("lift_to_induced_system: mean_return must be positive");
    StableLaw out = law;
    out.c = law.c * mean_return;
    return out;
}

}  // namespace lsvwip
