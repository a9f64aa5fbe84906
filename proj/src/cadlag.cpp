#include "lsvwip/cadlag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsvwip {

// ---------------------------------------------------------------------------
// StepPath

StepPath::StepPath(double domain_end, double initial_value, std::vector<double> breakpoints,
                   std::vector<double> values, double domain_start)
    : start_(domain_start),
      end_(domain_end),
      initial_(initial_value),
      breaks_(std::move(breakpoints)),
      values_(std::move(values)) {
    if (!std::isfinite(start_) || !std::isfinite(end_) || !(end_ > start_))
        throw ValidationError("StepPath: need finite domain with start < T");
    if (!std::isfinite(initial_)) throw ValidationError("StepPath: non-finite initial value");
    if (breaks_.size() != values_.size())
        throw ValidationError("StepPath: breakpoints and values differ in length");
    double prev = start_;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        if (!(breaks_[i] > prev) || breaks_[i] > end_)
            throw ValidationError("StepPath: breakpoints must be strictly increasing in (start, T]");
        if (!std::isfinite(values_[i])) throw ValidationError("StepPath: non-finite value");
        prev = breaks_[i];
    }
}

StepPath StepPath::constant(double domain_end, double value, double domain_start) {
    return StepPath(domain_end, value, {}, {}, domain_start);
}

double StepPath::operator()(double t) const noexcept {
    // Index of the last breakpoint <= t.
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    if (it == breaks_.begin()) return initial_;
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double StepPath::left_limit(double t) const noexcept {
    const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
    if (it == breaks_.begin()) return initial_;
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

std::size_t StepPath::jump_count() const noexcept {
    std::size_t count = 0;
    double prev = initial_;
    for (double v : values_) {
        if (v != prev) ++count;
        prev = v;
    }
    return count;
}

StepPath StepPath::simplified() const {
    std::vector<double> b;
    std::vector<double> v;
    double prev = initial_;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        if (values_[i] == prev) continue;
        b.push_back(breaks_[i]);
        v.push_back(values_[i]);
        prev = values_[i];
    }
    return StepPath(end_, initial_, std::move(b), std::move(v), start_);
}

// ---------------------------------------------------------------------------

CompletedGraph completed_graph(const StepPath& g) {
    CompletedGraph out;
    out.vertices.push_back({g.domain_start(), g.initial_value()});
    double prev = g.initial_value();
    const auto& b = g.breakpoints();
    const auto& v = g.values();
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (v[i] == prev) continue;
        out.vertices.push_back({b[i], prev});
        out.vertices.push_back({b[i], v[i]});
        prev = v[i];
    }
    const GraphVertex last{g.domain_end(), prev};
    if (!(out.vertices.back() == last)) out.vertices.push_back(last);
    return out;
}

const char* to_string(MetricKind kind) noexcept { return kind == MetricKind::J1 ? "J1" : "M1"; }

MetricKind parse_metric_kind(const std::string& tag) {
    if (tag == "J1" || tag == "j1") return MetricKind::J1;
    if (tag == "M1" || tag == "m1") return MetricKind::M1;
    throw ValidationError("unknown metric tag '" + tag + "' (expected J1 or M1)");
}

namespace {

void require_same_domain(const StepPath& g1, const StepPath& g2, const char* who) {
    if (g1.domain_start() != g2.domain_start() || g1.domain_end() != g2.domain_end())
        throw ValidationError(std::string(who) + ": paths live on different domains");
}

struct Interval {
    double lo = 1.0;
    double hi = 0.0;
    bool empty() const noexcept { return lo > hi; }
    static Interval none() noexcept { return {}; }
};

// Parameters u in [0,1] with |a + u (b - a) - p|_inf <= eps.
Interval free_interval(const GraphVertex& p, const GraphVertex& a, const GraphVertex& b,
                       double eps) noexcept {
    Interval out{0.0, 1.0};
    const auto clip = [&](double pa, double aa, double ba) {
        const double d = ba - aa;
        if (d == 0.0) {
            if (std::abs(aa - pa) > eps) out = Interval::none();
            return;
        }
        double u1 = (pa - eps - aa) / d;
        double u2 = (pa + eps - aa) / d;
        if (u1 > u2) std::swap(u1, u2);
        out.lo = std::max(out.lo, u1);
        out.hi = std::min(out.hi, u2);
    };
    clip(p.time, a.time, b.time);
    if (!out.empty()) clip(p.value, a.value, b.value);
    return out;
}

double linf(const GraphVertex& a, const GraphVertex& b) noexcept {
    return std::max(std::abs(a.time - b.time), std::abs(a.value - b.value));
}

// Reachable part of an edge's free interval, entering from the perpendicular side
// (anything goes) or from the parallel side starting at `from_lo`.
Interval propagate(const Interval& free, const Interval& perpendicular, const Interval& parallel) noexcept {
    if (free.empty()) return Interval::none();
    if (!perpendicular.empty()) return free;
    if (!parallel.empty()) {
        Interval r{std::max(free.lo, parallel.lo), free.hi};
        return r.empty() ? Interval::none() : r;
    }
    return Interval::none();
}

// Frechet decision for two monotone-in-time polylines under the L_inf point metric.
// Cells whose time ranges are more than eps apart have empty free space, so only a
// band of cells per column is visited.
bool frechet_within(const std::vector<GraphVertex>& P, const std::vector<GraphVertex>& Q, double eps) {
    const std::size_t n = P.size() - 1;
    const std::size_t m = Q.size() - 1;
    if (linf(P.front(), Q.front()) > eps || linf(P.back(), Q.back()) > eps) return false;

    std::vector<double> qt(Q.size());
    for (std::size_t j = 0; j < Q.size(); ++j) qt[j] = Q[j].time;
    const double slack = 1e-12 * (1.0 + std::abs(qt.back()) + eps);

    const auto band = [&](std::size_t i) {
        const double a0 = P[i].time - eps - slack;
        const double a1 = P[i + 1].time + eps + slack;
        // first j with qt[j+1] >= a0
        std::size_t jlo = static_cast<std::size_t>(std::lower_bound(qt.begin() + 1, qt.end(), a0) - qt.begin()) - 1;
        // last j with qt[j] <= a1
        std::size_t jhi = static_cast<std::size_t>(std::upper_bound(qt.begin(), qt.end(), a1) - qt.begin());
        jhi = std::min(jhi, m) - 1;
        return std::pair<std::size_t, std::size_t>(jlo, jhi);
    };

    // Left edges of column 0: P stays at its first vertex while Q advances.
    auto [jlo, jhi] = band(0);
    if (jlo > jhi || jlo != 0) return false;
    std::vector<Interval> left(jhi - jlo + 1);
    {
        bool open = true;
        for (std::size_t j = jlo; j <= jhi && open; ++j) {
            const Interval f = free_interval(P[0], Q[j], Q[j + 1], eps);
            if (f.empty() || f.lo > 0.0) break;
            left[j - jlo] = f;
            open = f.hi >= 1.0;
        }
    }
    Interval row0_bottom{};  // reachable part of (Q vertex 0) x (P segment i)
    bool row0_open = true;

    std::vector<Interval> right;
    for (std::size_t i = 0; i < n; ++i) {
        if (row0_open) {
            const Interval f = free_interval(Q[0], P[i], P[i + 1], eps);
            if (!f.empty() && f.lo <= 0.0) {
                row0_bottom = f;
                row0_open = f.hi >= 1.0;
            } else {
                row0_bottom = Interval::none();
                row0_open = false;
            }
        } else {
            row0_bottom = Interval::none();
        }

        right.assign(jhi - jlo + 1, Interval::none());
        Interval bottom = (jlo == 0) ? row0_bottom : Interval::none();
        bool any = false;
        for (std::size_t j = jlo; j <= jhi; ++j) {
            const Interval& l = left[j - jlo];
            const Interval fr = free_interval(P[i + 1], Q[j], Q[j + 1], eps);
            const Interval ft = free_interval(Q[j + 1], P[i], P[i + 1], eps);
            const Interval r = propagate(fr, bottom, l);
            const Interval t = propagate(ft, l, bottom);
            right[j - jlo] = r;
            any = any || !r.empty() || !t.empty();
            if (i + 1 == n && j + 1 == m) return (!r.empty() && r.hi >= 1.0) || (!t.empty() && t.hi >= 1.0);
            bottom = t;
        }
        if (!any) return false;
        if (i + 1 == n) return false;  // column n-1 did not reach row m-1

        const auto [nlo, nhi] = band(i + 1);
        if (nlo > nhi) return false;
        std::vector<Interval> next(nhi - nlo + 1, Interval::none());
        for (std::size_t j = std::max(nlo, jlo); j <= std::min(nhi, jhi); ++j) next[j - nlo] = right[j - jlo];
        left.swap(next);
        jlo = nlo;
        jhi = nhi;
    }
    return false;
}

struct JumpList {
    std::vector<double> times;   // s_1..s_n
    std::vector<double> levels;  // v_0..v_n
};

JumpList jumps_of(const StepPath& g) {
    JumpList out;
    out.levels.push_back(g.initial_value());
    const auto& b = g.breakpoints();
    const auto& v = g.values();
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (v[i] == out.levels.back()) continue;
        out.times.push_back(b[i]);
        out.levels.push_back(v[i]);
    }
    return out;
}

template <class Decide>
MetricResult bisect(const StepPath& g1, const StepPath& g2, double tol, Decide&& within) {
    if (!(tol > 0.0)) throw ValidationError("metric tolerance must be positive");
    const double uniform = uniform_distance(g1, g2);
    if (g1.jump_count() == 0 || g2.jump_count() == 0) return {uniform, uniform, tol};

    double lo = std::max(std::abs(g1.initial_value() - g2.initial_value()),
                         std::abs(g1.final_value() - g2.final_value()));
    double hi = uniform;
    // The identity reparametrization witnesses `uniform`; allow for rounding in the
    // free-space arithmetic before declaring failure.
    int bumps = 0;
    while (!within(hi)) {
        if (++bumps > 8) throw NumericError("metric bisection: uniform distance not certified feasible");
        hi = hi * (1.0 + 1e-12) + 1e-15;
    }
    if (lo > hi) lo = hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (within(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi, tol};
}

}  // namespace

double uniform_distance(const StepPath& g1, const StepPath& g2) {
    require_same_domain(g1, g2, "uniform_distance");
    double d = std::abs(g1.initial_value() - g2.initial_value());
    const auto& b1 = g1.breakpoints();
    const auto& b2 = g2.breakpoints();
    const auto& v1 = g1.values();
    const auto& v2 = g2.values();
    std::size_t i = 0;
    std::size_t j = 0;
    double x1 = g1.initial_value();
    double x2 = g2.initial_value();
    while (i < b1.size() || j < b2.size()) {
        const double t1 = i < b1.size() ? b1[i] : std::numeric_limits<double>::infinity();
        const double t2 = j < b2.size() ? b2[j] : std::numeric_limits<double>::infinity();
        const double t = std::min(t1, t2);
        if (t1 == t) x1 = v1[i++];
        if (t2 == t) x2 = v2[j++];
        d = std::max(d, std::abs(x1 - x2));
    }
    return d;
}

bool m1_within(const StepPath& g1, const StepPath& g2, double eps) {
    require_same_domain(g1, g2, "m1_within");
    if (eps < 0.0) return false;
    const auto P = completed_graph(g1);
    const auto Q = completed_graph(g2);
    return frechet_within(P.vertices, Q.vertices, eps);
}

bool j1_within(const StepPath& g1, const StepPath& g2, double eps) {
    require_same_domain(g1, g2, "j1_within");
    if (eps < 0.0) return false;
    const JumpList a = jumps_of(g1);
    const JumpList b = jumps_of(g2);
    const double T = g1.domain_end();
    const double start = g1.domain_start();
    const std::size_t n1 = a.times.size();
    const std::size_t n2 = b.times.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    const auto close = [eps](double x, double y) { return std::abs(x - y) <= eps; };
    // Latest admissible time for state (i, j): before g2's next jump, or T.
    const auto limit = [&](std::size_t j) { return j < n2 ? b.times[j] : T; };

    if (!close(a.levels[0], b.levels[0])) return false;

    // best[i][j]: earliest time at which i jumps of g1 (relocated) and j jumps of g2
    // have occurred with every intermediate level pair within eps.
    std::vector<double> prev(n2 + 1, inf);
    std::vector<double> cur(n2 + 1, inf);
    for (std::size_t i = 0; i <= n1; ++i) {
        for (std::size_t j = 0; j <= n2; ++j) {
            double best = inf;
            if (i == 0 && j == 0) best = start;
            if (close(a.levels[i], b.levels[j])) {
                if (i > 0 && prev[j] < inf) {
                    // Relocate g1's i-th jump to tau in [s - eps, s + eps], after the current time.
                    const double s = a.times[i - 1];
                    double lo = std::max(prev[j], s - eps);
                    double hi = std::min({s + eps, limit(j), T});
                    if (s == T) lo = std::max(lo, T);
                    // A jump before T relocates strictly before T, so it cannot follow
                    // a state that was entered at T.
                    const bool order_ok = s == T || prev[j] < T;
                    if (lo <= hi && order_ok) best = std::min(best, lo);
                }
                if (j > 0 && cur[j - 1] < inf) {
                    // g2's j-th jump happens before g1's next jump.
                    const double u = b.times[j - 1];
                    // g1's next jump must be relocatable after u (and only a jump at T
                    // can come after a jump at T).
                    const bool next_ok = i == n1 || (u == T ? a.times[i] == T : a.times[i] + eps >= u);
                    if (cur[j - 1] <= u && next_ok) best = std::min(best, u);
                }
                if (i > 0 && j > 0 && prev[j - 1] < inf) {
                    // Both jumps at the same time.
                    const double s = a.times[i - 1];
                    const double u = b.times[j - 1];
                    // lambda(T) = T: a jump at T pairs only with a jump at T.
                    const bool at_end_ok = (s == T) == (u == T);
                    if (prev[j - 1] <= u && std::abs(s - u) <= eps && at_end_ok) best = std::min(best, u);
                }
            }
            cur[j] = best;
        }
        std::swap(prev, cur);
        std::fill(cur.begin(), cur.end(), inf);
    }
    return prev[n2] < inf;
}

MetricResult j1_distance(const StepPath& g1, const StepPath& g2, double tol) {
    require_same_domain(g1, g2, "j1_distance");
    const StepPath a = g1.simplified();
    const StepPath b = g2.simplified();
    return bisect(a, b, tol, [&](double eps) { return j1_within(a, b, eps); });
}

MetricResult m1_distance(const StepPath& g1, const StepPath& g2, double tol) {
    require_same_domain(g1, g2, "m1_distance");
    const auto P = completed_graph(g1).vertices;
    const auto Q = completed_graph(g2).vertices;
    return bisect(g1, g2, tol, [&](double eps) { return eps >= 0.0 && frechet_within(P, Q, eps); });
}

MetricResult distance(MetricKind kind, const StepPath& g1, const StepPath& g2, double tol) {
    return kind == MetricKind::J1 ? j1_distance(g1, g2, tol) : m1_distance(g1, g2, tol);
}

InfiniteDistance dist_infinite(const StepPath& g1, const StepPath& g2, MetricKind kind,
                               const QuadratureParams& quad) {
    if (!(quad.t_max > 0.0) || quad.panels < 2 || quad.panels % 2 != 0 || !(quad.inner_tol > 0.0))
        throw ValidationError("dist_infinite: need t_max > 0, an even panel count >= 2 and inner_tol > 0");
    if (g1.domain_start() != 0.0 || g2.domain_start() != 0.0)
        throw ValidationError("dist_infinite: paths must start at 0");
    if (g1.domain_end() < quad.t_max || g2.domain_end() < quad.t_max)
        throw ValidationError("dist_infinite: paths must extend to t_max");

    const std::size_t N = quad.panels;
    const double h = quad.t_max / static_cast<double>(N);
    std::vector<double> f(N + 1);
    f[0] = std::min(1.0, std::abs(g1.initial_value() - g2.initial_value()));
    for (std::size_t k = 1; k <= N; ++k) {
        const double t = k == N ? quad.t_max : h * static_cast<double>(k);
        const auto r = distance(kind, restrict(g1, 0.0, t), restrict(g2, 0.0, t), quad.inner_tol);
        f[k] = std::exp(-t) * std::min(1.0, r.upper);
    }
    double fine = 0.5 * (f[0] + f[N]);
    for (std::size_t k = 1; k < N; ++k) fine += f[k];
    fine *= h;
    double coarse = 0.5 * (f[0] + f[N]);
    for (std::size_t k = 2; k < N; k += 2) coarse += f[k];
    coarse *= 2.0 * h;
    return {fine, std::abs(fine - coarse) / 3.0, std::exp(-quad.t_max)};
}

StepPath restrict(const StepPath& g, double t1, double t2) {
    if (!(t1 >= g.domain_start() && t1 < t2 && t2 <= g.domain_end()))
        throw ValidationError("restrict: need start <= t1 < t2 <= T");
    const auto& b = g.breakpoints();
    const auto& v = g.values();
    const auto first = std::upper_bound(b.begin(), b.end(), t1);
    const auto last = std::upper_bound(b.begin(), b.end(), t2);
    std::vector<double> nb(first, last);
    std::vector<double> nv(v.begin() + (first - b.begin()), v.begin() + (last - b.begin()));
    return StepPath(t2, g(t1), std::move(nb), std::move(nv), t1);
}

double sup_functional(const StepPath& g) noexcept {
    double s = g.initial_value();
    for (double v : g.values()) s = std::max(s, v);
    return s;
}

double max_jump(const StepPath& g) noexcept {
    double m = 0.0;
    double prev = g.initial_value();
    for (double v : g.values()) {
        m = std::max(m, std::abs(v - prev));
        prev = v;
    }
    return m;
}

}  // namespace lsvwip
