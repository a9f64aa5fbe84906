#include "lsvwip/maps.hpp"

#include "lsvwip/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lsvwip {

MapSpec::MapSpec(MapKind kind, double gamma)
    : kind_(kind), gamma_(gamma), two_pow_gamma_(std::pow(2.0, gamma)) {}

MapSpec MapSpec::lsv(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError("MapSpec: gamma must lie strictly inside (0,1)");
    return MapSpec(MapKind::LSV, gamma);
}

double lsv_map(const MapSpec& spec, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("lsv_map: x outside [0,1]");
    return spec(x);
}

std::vector<double> orbit(const MapSpec& spec, double x0, std::uint64_t n) {
    std::vector<double> out;
    out.reserve(n);
    iterate_orbit(spec, x0, n, [&](double x) { out.push_back(x); });
    return out;
}

// ---------------------------------------------------------------------------

ObservableSpec::ObservableSpec(ObservableFamily family, double a, double b, double eta)
    : family_(family), a_(a), b_(b), eta_(eta) {}

ObservableSpec ObservableSpec::affine(double a, double b) {
    return ObservableSpec(ObservableFamily::Affine, a, b, 1.0);
}

ObservableSpec ObservableSpec::power(double a, double b, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("power observable: eta must lie in (0,1]");
    return ObservableSpec(ObservableFamily::Power, a, b, eta);
}

ObservableSpec ObservableSpec::with_indicator(IndicatorTerm term) const {
    if (!(term.left < term.right)) throw ValidationError("indicator term: left must be < right");
    ObservableSpec out = *this;
    out.indicators_.push_back(term);
    return out;
}

ObservableSpec ObservableSpec::with_centering(double offset, CenteringRecord record) const {
    ObservableSpec out = *this;
    out.offset_ = offset;
    out.record_ = record;
    return out;
}

double ObservableSpec::holder_exponent() const noexcept {
    if (b_ == 0.0) return 1.0;
    return family_ == ObservableFamily::Affine ? 1.0 : eta_;
}

std::vector<double> ObservableSpec::pieces() const {
    std::vector<double> pts{0.0, 1.0};
    for (const auto& t : indicators_) {
        if (t.left > 0.0 && t.left < 1.0) pts.push_back(t.left);
        if (t.right > 0.0 && t.right < 1.0) pts.push_back(t.right);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double ObservableSpec::left_limit_on_piece(double lo, double hi) const noexcept {
    // Indicators are constant on [lo, hi), so their contribution is read at lo.
    return smooth(hi) + indicator_sum(lo) - offset_;
}

double ObservableSpec::sup_norm() const {
    const auto pts = pieces();
    double sup = std::abs((*this)(1.0));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        sup = std::max(sup, std::abs((*this)(pts[i])));
        sup = std::max(sup, std::abs(left_limit_on_piece(pts[i], pts[i + 1])));
    }
    return sup;
}

double ObservableSpec::sign_radius() const {
    const double v0 = value_at_zero();
    if (v0 == 0.0) return 0.0;
    const auto keeps = [v0](double v) { return v0 > 0.0 ? v > 0.0 : v < 0.0; };
    const auto pts = pieces();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i];
        const double hi = pts[i + 1];
        if (!keeps((*this)(lo))) return lo;
        if (keeps(left_limit_on_piece(lo, hi))) continue;
        // The smooth part is monotone, so the sign changes once inside [lo, hi).
        const double ind = indicator_sum(lo) - offset_;
        double a = lo;
        double b = hi;
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            const double m = 0.5 * (a + b);
            if (keeps(smooth(m) + ind))
                a = m;
            else
                b = m;
        }
        return a;
    }
    return 1.0;
}

std::string ObservableSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (family_ == ObservableFamily::Affine)
        os << "affine(a=" << a_ << ", b=" << b_ << ")";
    else
        os << "power(a=" << a_ << ", b=" << b_ << ", eta=" << eta_ << ")";
    for (const auto& t : indicators_)
        os << " + " << t.weight << "*1[" << t.left << "," << t.right << ")";
    if (offset_ != 0.0) os << " - " << offset_;
    return os.str();
}

double birkhoff_sum(const MapSpec& spec, const ObservableSpec& obs, double x0, std::uint64_t n) {
    double s = 0.0;
    iterate_orbit(spec, x0, n, [&](double x) { s += obs(x); });
    return s;
}

ObservableSpec calibrate_centering(const MapSpec& spec, const ObservableSpec& obs,
                                   std::uint64_t orbit_length, std::uint64_t burn_in,
                                   std::uint64_t chains, std::uint64_t seed) {
    if (chains == 0 || orbit_length < chains)
        throw ValidationError("calibrate_centering: need orbit_length >= chains >= 1");
    const std::uint64_t per_chain = orbit_length / chains;
    std::vector<double> sums(chains, 0.0);
    const auto raw = obs.with_centering(0.0, {});

    for_each_task(Exec::Parallel, chains, [&](std::uint64_t c) {
        Rng rng = Rng::for_task(seed, Stream::Centering, c);
        double x = rng.uniform();
        for (std::uint64_t k = 0; k < burn_in; ++k) x = spec(x);
        double s = 0.0;
        for (std::uint64_t k = 0; k < per_chain; ++k) {
            s += raw(x);
            x = spec(x);
        }
        sums[c] = s;
    });
    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    const double offset = total / static_cast<double>(per_chain * chains);
    return obs.with_centering(offset, CenteringRecord{per_chain * chains, burn_in, chains, seed});
}

// ---------------------------------------------------------------------------

DensitySpec::DensitySpec(DensityFamily family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {}

DensitySpec DensitySpec::uniform() { return DensitySpec(DensityFamily::Uniform, {}); }

DensitySpec DensitySpec::polynomial(std::vector<double> coefficients) {
    DensitySpec d(DensityFamily::Polynomial, std::move(coefficients));
    d.validate();
    return d;
}

DensitySpec DensitySpec::histogram(std::vector<double> heights) {
    DensitySpec d(DensityFamily::Histogram, std::move(heights));
    d.validate();
    return d;
}

double DensitySpec::density(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    switch (family_) {
        case DensityFamily::Uniform:
            return 1.0;
        case DensityFamily::Polynomial: {
            double v = 0.0;
            for (auto it = params_.rbegin(); it != params_.rend(); ++it) v = v * x + *it;
            return v;
        }
        case DensityFamily::Histogram: {
            const auto m = params_.size();
            const auto i = std::min<std::size_t>(m - 1, static_cast<std::size_t>(x * static_cast<double>(m)));
            return params_[i];
        }
    }
    return 0.0;
}

double DensitySpec::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    switch (family_) {
        case DensityFamily::Uniform:
            return x;
        case DensityFamily::Polynomial: {
            double v = 0.0;
            for (std::size_t k = params_.size(); k-- > 0;)
                v = v * x + params_[k] / static_cast<double>(k + 1);
            return v * x;
        }
        case DensityFamily::Histogram: {
            const double m = static_cast<double>(params_.size());
            const auto full = static_cast<std::size_t>(x * m);
            double acc = 0.0;
            for (std::size_t i = 0; i < full; ++i) acc += params_[i] / m;
            if (full < params_.size()) acc += params_[full] * (x - static_cast<double>(full) / m);
            return acc;
        }
    }
    return 0.0;
}

void DensitySpec::validate() const {
    if (family_ == DensityFamily::Uniform) return;
    if (params_.empty()) throw ValidationError("density: empty parameter list");
    for (double p : params_)
        if (!std::isfinite(p)) throw ValidationError("density: non-finite parameter");
    if (family_ == DensityFamily::Histogram) {
        for (double h : params_)
            if (h < 0.0) throw ValidationError("histogram density: negative height");
    } else {
        constexpr int grid = 4096;
        for (int i = 0; i <= grid; ++i)
            if (density(static_cast<double>(i) / grid) < -1e-12)
                throw ValidationError("polynomial density: negative on [0,1]");
    }
    double total = 0.0;
    if (family_ == DensityFamily::Polynomial) {
        for (std::size_t k = 0; k < params_.size(); ++k) total += params_[k] / static_cast<double>(k + 1);
    } else {
        for (double h : params_) total += h;
        total /= static_cast<double>(params_.size());
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError("density: does not integrate to 1");
}

std::string DensitySpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (family_) {
        case DensityFamily::Uniform: os << "uniform"; break;
        case DensityFamily::Polynomial: os << "polynomial"; break;
        case DensityFamily::Histogram: os << "histogram"; break;
    }
    if (!params_.empty()) {
        os << "[";
        for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
        os << "]";
    }
    return os.str();
}

double sample_initial(const DensitySpec& density, Rng& rng) {
    const double u = rng.uniform();
    if (density.family() == DensityFamily::Uniform) return u;
    // Inverse CDF by bisection: the CDF is continuous and nondecreasing on [0,1].
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (density.cdf(mid) < u)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

double DensityEstimate::at(double x) const {
    if (x < 0.0 || x > 1.0) return 0.0;
    auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), x);
    auto i = static_cast<std::size_t>(std::distance(bin_edges.begin(), it));
    i = std::clamp<std::size_t>(i, 1, masses.size()) - 1;
    return masses[i] / (bin_edges[i + 1] - bin_edges[i]);
}

double DensityEstimate::mass_between(double lo, double hi) const {
    double total = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double l = std::max(lo, bin_edges[i]);
        const double r = std::min(hi, bin_edges[i + 1]);
        if (r > l) total += masses[i] * (r - l) / (bin_edges[i + 1] - bin_edges[i]);
    }
    return total;
}

DensityEstimate estimate_invariant_density(const MapSpec& spec, std::uint64_t n, std::uint64_t bins,
                                           std::uint64_t burn_in, std::uint64_t seed) {
    if (bins < 2 || n == 0) throw ValidationError("estimate_invariant_density: need bins >= 2 and n >= 1");
    const std::uint64_t even_bins = bins + (bins % 2);
    std::vector<std::uint64_t> counts(even_bins, 0);
    Rng rng = Rng::for_task(seed, Stream::Density, 0);
    double x = rng.uniform();
    for (std::uint64_t k = 0; k < burn_in; ++k) x = spec(x);
    const double scale = static_cast<double>(even_bins);
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto i = std::min<std::uint64_t>(even_bins - 1, static_cast<std::uint64_t>(x * scale));
        ++counts[i];
        x = spec(x);
    }

    DensityEstimate est;
    est.sample_count = n;
    est.low_quality = n < 1000 * even_bins;
    est.bin_edges.resize(even_bins + 1);
    for (std::uint64_t i = 0; i <= even_bins; ++i) est.bin_edges[i] = static_cast<double>(i) / scale;
    est.masses.resize(even_bins);
    for (std::uint64_t i = 0; i < even_bins; ++i)
        est.masses[i] = static_cast<double>(counts[i]) / static_cast<double>(n);

    const std::uint64_t mid = even_bins / 2;  // bin [1/2, 1/2 + w)
    est.h_half = static_cast<double>(counts[mid - 1] + counts[mid]) / static_cast<double>(n) * scale / 2.0;
    return est;
}

// ---------------------------------------------------------------------------

std::vector<double> preimage_sequence(const MapSpec& spec, std::size_t k) {
    if (k == 0) throw ValidationError("preimage_sequence: k must be >= 1");
    std::vector<double> xs;
    xs.reserve(k);
    xs.push_back(0.5);
    for (std::size_t n = 1; n < k; ++n) {
        const double target = xs.back();
        // Bracket [0, target]: left_branch(0) = 0 < target <= left_branch(target).
        double lo = 0.0;
        double hi = target;
        while (hi - lo > 1e-14 * std::max(target, 1e-300) && hi - lo > 0.0) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (spec.left_branch(mid) < target)
                lo = mid;
            else
                hi = mid;
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 3; ++it) {
            const double step = (spec.left_branch(x) - target) / spec.left_branch_derivative(x);
            const double next = x - step;
            if (!(next > 0.0 && next < target)) break;
            x = next;
        }
        if (!(x > 0.0 && x < target) || std::abs(spec.left_branch(x) - target) > 1e-12)
            throw NumericError("preimage_sequence: root finder did not converge");
        xs.push_back(x);
    }
    return xs;
}

}  // namespace lsvwip
