#include "rsfem/modal_solution.hpp"

#include "rsfem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace rsfem {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double sqrt2 = std::numbers::sqrt2;

// |c_j| <= C j^-s for all j
struct Decay {
    double C = 0.0;
    double s = 0.0;
};

Decay coefficient_decay(const InitialDatum& v)
{
    if (const auto* st = std::get_if<Step>(&v)) {
        (void)st;
        return {2.0 * sqrt2 / pi, 1.0};
    }
    if (std::holds_alternative<Dirac>(v)) {
        return {sqrt2, 0.0};
    }
    if (std::holds_alternative<Step2D>(v)) {
        return {2.0 * sqrt2 / pi, 1.0};
    }
    if (const auto* c = std::get_if<CustomNodal>(&v)) {
        double jumps = 0.0;
        for (std::size_t i = 1; i + 1 < c->x.size(); ++i) {
            const double sl = (c->values[i] - c->values[i - 1]) / (c->x[i] - c->x[i - 1]);
            const double sr = (c->values[i + 1] - c->values[i]) / (c->x[i + 1] - c->x[i]);
            jumps += std::abs(sr - sl);
        }
        const double ends = std::abs(c->values.front()) + std::abs(c->values.back());
        if (ends > 0.0) {
            return {sqrt2 * (ends / pi + jumps / (pi * pi)), 1.0};
        }
        return {sqrt2 * jumps / (pi * pi), 2.0};
    }
    return {0.0, 0.0};
}

// Closed form of w = A^{-1} v and w' for the step and Dirac data.
std::pair<double, double> green_part(const InitialDatum& v, double x)
{
    if (const auto* s = std::get_if<Step>(&v)) {
        const double c = s->cut;
        if (x <= c) {
            return {-0.5 * x * x + (c - 0.5 * c * c) * x, -x + c - 0.5 * c * c};
        }
        return {0.5 * c * c * (1.0 - x), -0.5 * c * c};
    }
    const double x0 = std::get<Dirac>(v).location;
    if (x <= x0) {
        return {x * (1.0 - x0), 1.0 - x0};
    }
    return {x0 * (1.0 - x), -x0};
}

// Sample sup over (0, eps_top] of |g|, on a geometric grid, with a margin.
template <class G>
double sampled_sup(G&& g, double eps_top)
{
    double m = 0.0;
    double e = eps_top;
    for (int i = 0; i <= 8; ++i, e *= 0.5) {
        m = std::max(m, std::abs(g(e)));
    }
    return 1.25 * m;
}

std::vector<double> unique_sorted(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || x - out.back() > 1e-14) {
            out.push_back(x);
        }
    }
    return out;
}

std::size_t index_of(const std::vector<double>& grid, double x)
{
    auto it = std::lower_bound(grid.begin(), grid.end(), x - 1e-14);
    return static_cast<std::size_t>(it - grid.begin());
}

} // namespace

ModalSolution::ModalSolution(InitialDatum v, double alpha, double gamma, ModalOptions opts)
    : v_(std::move(v)), alpha_(alpha), gamma_(gamma), opts_(opts)
{
    validate_datum(v_);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0,1)");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidArgument("gamma must be positive");
    }
    dim_ = datum_dimension(v_);
}

double ModalSolution::datum_norm() const
{
    return rsfem::datum_norm(v_);
}

ModalSnapshot ModalSolution::exact_at(double t) const
{
    if (!(t > 0.0)) {
        throw InvalidArgument("exact solution requested at t <= 0");
    }
    return at(ModeFactor::exact(alpha_, gamma_, t));
}

ModalSnapshot ModalSolution::at(const ModeFactor& factor) const
{
    if (factor.alpha() != alpha_ || factor.gamma() != gamma_) {
        throw InvalidArgument("mode factor parameters differ from the modal solution's");
    }
    const ModeFactorTable table(factor);
    return dim_ == 1 ? build_1d(table) : build_2d(table);
}

ModalSnapshot ModalSolution::build_1d(const ModeFactorTable& table) const
{
    ModalSnapshot snap;
    snap.datum_ = v_;
    snap.dim_ = 1;
    snap.t_ = table.factor().time();

    if (const auto* s = std::get_if<SmoothSine>(&v_)) {
        snap.J_ = s->mode;
        snap.amp_.assign(static_cast<std::size_t>(s->mode), 0.0);
        const double lam = std::pow(s->mode * pi, 2);
        snap.amp_.back() = datum_coefficient(v_, s->mode) * table.value(lam);
        snap.l2_norm_ = std::abs(snap.amp_.back());
        return snap;
    }

    const bool limit = table.factor().has_limit();
    snap.subtract_ = opts_.subtract_singular && limit &&
                     (std::holds_alternative<Step>(v_) || std::holds_alternative<Dirac>(v_));
    snap.limit_ = table.limit();
    const Decay d = coefficient_decay(v_);

    auto bounds = [&](int J) -> std::pair<double, double> {
        const double eps_top = 1.0 / std::pow((J + 1) * pi, 2);
        const double Jd = J;
        const double s = d.s;
        if (snap.subtract_) {
            const double g0 = snap.limit_;
            const double B = sampled_sup([&](double e) { return (table.scaled(e) - g0) / e; }, eps_top);
            return {B * d.C / std::pow(pi, 4) * std::sqrt(std::pow(Jd, -2 * s - 7) / (2 * s + 7)),
                    B * d.C / std::pow(pi, 3) * std::sqrt(std::pow(Jd, -2 * s - 5) / (2 * s + 5))};
        }
        const double A = sampled_sup([&](double e) { return table.scaled(e); }, eps_top);
        if (limit) {
            return {A * d.C / (pi * pi) * std::sqrt(std::pow(Jd, -2 * s - 3) / (2 * s + 3)),
                    A * d.C / pi * std::sqrt(std::pow(Jd, -2 * s - 1) / (2 * s + 1))};
        }
        // factor bounded but not decaying in lambda
        const double inf = std::numeric_limits<double>::infinity();
        const double l2 = s > 0.5 ? A * d.C * std::sqrt(std::pow(Jd, 1 - 2 * s) / (2 * s - 1)) : inf;
        const double h1 = s > 1.5 ? A * d.C * pi * std::sqrt(std::pow(Jd, 3 - 2 * s) / (2 * s - 3)) : inf;
        return {l2, h1};
    };

    int J = 8;
    std::pair<double, double> b = bounds(J);
    while (b.first > opts_.l2_tol || b.second > opts_.h1_tol) {
        if (J >= opts_.max_modes_1d) {
            std::ostringstream os;
            os << "modal series for " << datum_name(v_) << " with " << table.factor().describe()
               << " needs more than " << opts_.max_modes_1d << " modes (tail bounds L2 " << b.first << ", H1 "
               << b.second << ")";
            throw TruncationFailure(os.str(), std::max(b.first / opts_.l2_tol, b.second / opts_.h1_tol));
        }
        J = std::min(opts_.max_modes_1d, static_cast<int>(std::ceil(J * 1.25)) + 1);
        b = bounds(J);
    }
    snap.J_ = J;
    snap.l2_bound_ = b.first;
    snap.h1_bound_ = b.second;

    snap.amp_.assign(static_cast<std::size_t>(J), 0.0);
    double norm2 = 0.0;
    for (int j = 1; j <= J; ++j) {
        const double c = datum_coefficient(v_, j);
        if (std::abs(c) <= 1e-14 * std::max(d.C, 1.0)) {
            continue;
        }
        const double lam = std::pow(j * pi, 2);
        const double f = table.value(lam);
        norm2 += c * c * f * f;
        snap.amp_[static_cast<std::size_t>(j - 1)] = snap.subtract_ ? c * (f - snap.limit_ / lam) : c * f;
    }
    snap.l2_norm_ = std::sqrt(norm2);
    return snap;
}

ModalSnapshot ModalSolution::build_2d(const ModeFactorTable& table) const
{
    ModalSnapshot snap;
    snap.datum_ = v_;
    snap.dim_ = 2;
    snap.t_ = table.factor().time();
    if (!table.factor().has_limit()) {
        throw TruncationFailure("2D modal series needs a factor that decays in lambda; " +
                                    table.factor().describe() + " does not",
                                std::numeric_limits<double>::infinity());
    }
    const double cut = std::get<Step2D>(v_).cut;
    const Decay d = coefficient_decay(v_);

    auto bounds = [&](int J) -> std::pair<double, double> {
        const double eps_top = 1.0 / (pi * pi * ((J + 1.0) * (J + 1.0) + 1.0));
        const double A = sampled_sup([&](double e) { return table.scaled(e); }, eps_top);
        const double Jd = J;
        return {A * d.C / (pi * pi) * std::sqrt((1.0 + cut) * std::pow(Jd, -5.0) / 5.0),
                A * d.C / pi * std::sqrt((1.0 + cut) * std::pow(Jd, -3.0) / 3.0)};
    };
    const int cap = opts_.max_modes_2d;
    std::vector<double> cx(static_cast<std::size_t>(cap));
    std::vector<double> cy(static_cast<std::size_t>(cap));
    for (int j = 1; j <= cap; ++j) {
        cx[j - 1] = datum_coefficient(Step{cut}, j);
        cy[j - 1] = datum_coefficient(Step{1.0}, j);
    }
    const double lambda0 = table.lambda0();
    std::unordered_map<long long, double> direct;
    auto amplitude = [&](int j, int k) {
        if (std::abs(cx[j - 1]) < 1e-14 || std::abs(cy[k - 1]) < 1e-14) {
            return 0.0;
        }
        const long long n = static_cast<long long>(j) * j + static_cast<long long>(k) * k;
        const double lam = static_cast<double>(n) * pi * pi;
        double f;
        if (lam < lambda0) {
            auto it = direct.find(n);
            if (it == direct.end()) {
                it = direct.emplace(n, table.value(lam)).first;
            }
            f = it->second;
        } else {
            f = table.value(lam);
        }
        return cx[j - 1] * cy[k - 1] * f;
    };

    // Squared L2 and H1 norms of the retained square [1, J]^2, extended band
    // by band as J grows; used for the relative acceptance of a tail bound.
    int counted = 0;
    double l2sq = 0.0;
    double h1sq = 0.0;
    auto extend_norms = [&](int J) {
        for (int j = 1; j <= J; ++j) {
            for (int k = (j > counted ? 1 : counted + 1); k <= J; ++k) {
                const double a = amplitude(j, k);
                l2sq += a * a;
                h1sq += a * a * pi * pi * (static_cast<double>(j) * j + static_cast<double>(k) * k);
            }
        }
        counted = J;
    };
    auto accepted = [&](int J, const std::pair<double, double>& b) {
        if (b.first <= opts_.l2_tol_2d && b.second <= opts_.h1_tol_2d) {
            return true;
        }
        if (opts_.rel_tol_2d <= 0.0) {
            return false;
        }
        extend_norms(J);
        return b.first <= std::max(opts_.l2_tol_2d, opts_.rel_tol_2d * std::sqrt(l2sq)) &&
               b.second <= std::max(opts_.h1_tol_2d, opts_.rel_tol_2d * std::sqrt(h1sq));
    };

    int J = 8;
    std::pair<double, double> b = bounds(J);
    while (!accepted(J, b)) {
        if (J >= cap) {
            std::ostringstream os;
            os << "2D modal series with " << table.factor().describe() << " needs more than " << cap
               << " modes per direction (tail bounds L2 " << b.first << ", H1 " << b.second << ")";
            throw TruncationFailure(os.str(), std::max(b.first / opts_.l2_tol_2d, b.second / opts_.h1_tol_2d));
        }
        J = std::min(cap, static_cast<int>(std::ceil(J * 1.25)) + 1);
        b = bounds(J);
    }
    snap.J_ = J;
    snap.l2_bound_ = b.first;
    snap.h1_bound_ = b.second;

    snap.amp_.assign(static_cast<std::size_t>(J) * J, 0.0);
    double norm2 = 0.0;
    for (int j = 1; j <= J; ++j) {
        for (int k = 1; k <= J; ++k) {
            const double a = amplitude(j, k);
            snap.amp_[static_cast<std::size_t>(j - 1) * J + (k - 1)] = a;
            norm2 += a * a;
        }
    }
    snap.l2_norm_ = std::sqrt(norm2);
    return snap;
}

std::vector<double> ModalSnapshot::break_points() const
{
    if (const auto* s = std::get_if<Step>(&datum_)) {
        return {s->cut};
    }
    if (const auto* dd = std::get_if<Dirac>(&datum_)) {
        return {dd->location};
    }
    return {};
}

void ModalSnapshot::evaluate(std::span<const Point> points, std::span<double> values,
                             std::span<Point> gradients) const
{
    if (values.size() != points.size() || gradients.size() != points.size()) {
        throw InvalidArgument("ModalSnapshot::evaluate: output spans must match the point count");
    }
    if (dim_ == 1) {
        evaluate_1d(points, values, gradients);
    } else {
        evaluate_2d(points, values, gradients);
    }
}

void ModalSnapshot::evaluate_1d(std::span<const Point> points, std::span<double> values,
                                std::span<Point> gradients) const
{
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double x = points[p][0];
        const double th = pi * x;
        const double c1 = std::cos(th);
        const double s1 = std::sin(th);
        double cj = c1;
        double sj = s1;
        double u = 0.0;
        double du = 0.0;
        for (int j = 1; j <= J_; ++j) {
            const double a = amp_[static_cast<std::size_t>(j - 1)];
            u += a * sj;
            du += a * j * cj;
            if ((j & 255) == 0) {
                cj = std::cos((j + 1) * th);
                sj = std::sin((j + 1) * th);
            } else {
                const double cn = cj * c1 - sj * s1;
                sj = sj * c1 + cj * s1;
                cj = cn;
            }
        }
        u *= sqrt2;
        du *= sqrt2 * pi;
        if (subtract_) {
            const auto [w, dw] = green_part(datum_, x);
            u += limit_ * w;
            du += limit_ * dw;
        }
        values[p] = u;
        gradients[p] = {du, 0.0};
    }
}

void ModalSnapshot::evaluate_2d(std::span<const Point> points, std::span<double> values,
                                std::span<Point> gradients) const
{
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(points.size());
    ys.reserve(points.size());
    for (const Point& p : points) {
        xs.push_back(p[0]);
        ys.push_back(p[1]);
    }
    xs = unique_sorted(std::move(xs));
    ys = unique_sorted(std::move(ys));
    const auto J = static_cast<std::size_t>(J_);

    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < J; ++j) {
        bool rj = false;
        bool cj = false;
        for (std::size_t k = 0; k < J; ++k) {
            rj = rj || amp_[j * J + k] != 0.0;
            cj = cj || amp_[k * J + j] != 0.0;
        }
        if (rj) {
            rows.push_back(j);
        }
        if (cj) {
            cols.push_back(j);
        }
    }

    // Q[iy][r] = sum_k amp(row r, k) 2 sin(k pi y), dQ likewise with the y-derivative
    const std::size_t R = rows.size();
    std::vector<double> Q(ys.size() * R, 0.0);
    std::vector<double> dQ(ys.size() * R, 0.0);
    std::vector<double> sk(cols.size());
    std::vector<double> ck(cols.size());
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double wk = static_cast<double>(cols[c] + 1) * pi;
            sk[c] = 2.0 * std::sin(wk * ys[iy]);
            ck[c] = 2.0 * wk * std::cos(wk * ys[iy]);
        }
        for (std::size_t r = 0; r < R; ++r) {
            const double* a = &amp_[rows[r] * J];
            double q = 0.0;
            double dq = 0.0;
            for (std::size_t c = 0; c < cols.size(); ++c) {
                const double ac = a[cols[c]];
                q += ac * sk[c];
                dq += ac * ck[c];
            }
            Q[iy * R + r] = q;
            dQ[iy * R + r] = dq;
        }
    }

    std::vector<double> sx(xs.size() * R);
    std::vector<double> cx(xs.size() * R);
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        for (std::size_t r = 0; r < R; ++r) {
            const double wj = static_cast<double>(rows[r] + 1) * pi;
            sx[ix * R + r] = std::sin(wj * xs[ix]);
            cx[ix * R + r] = wj * std::cos(wj * xs[ix]);
        }
    }

    for (std::size_t p = 0; p < points.size(); ++p) {
        const std::size_t ix = index_of(xs, points[p][0]);
        const std::size_t iy = index_of(ys, points[p][1]);
        const double* s = &sx[ix * R];
        const double* c = &cx[ix * R];
        const double* q = &Q[iy * R];
        const double* dq = &dQ[iy * R];
        double u = 0.0;
        double ux = 0.0;
        double uy = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
            u += s[r] * q[r];
            ux += c[r] * q[r];
            uy += s[r] * dq[r];
        }
        values[p] = u;
        gradients[p] = {ux, uy};
    }
}

std::pair<double, Point> ModalSnapshot::at(const Point& x) const
{
    double v = 0.0;
    Point g{0.0, 0.0};
    evaluate(std::span<const Point>(&x, 1), std::span<double>(&v, 1), std::span<Point>(&g, 1));
    return {v, g};
}

std::pair<double, Point> exact_solution(const ModalSolution& ms, const Point& x, double t)
{
    const ModalSnapshot snap = ms.exact_at(t);
    return snap.at(x);
}

ErrorNorms error_norms(const FemSpace& space, std::span<const double> numeric, const ModalSolution& exact,
                       double t)
{
    if (!(t > 0.0)) {
        throw InvalidArgument("error_norms: t must be positive");
    }
    const ModalSnapshot snap = exact.exact_at(t);
    return error_norms(space, numeric, snap, exact.datum_norm());
}

} // namespace rsfem
