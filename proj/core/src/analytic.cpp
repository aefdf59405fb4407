#include "ulix/analytic.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace ulix {

namespace {

constexpr int kMaxSeriesTerms = 400;
constexpr int kMaxAgmIters = 300;
constexpr int kMaxReduceIters = 20000;

int mod2(const Int& n) {
    Int r = n % 2;
    return static_cast<int>(r < 0 ? r + 2 : r);
}

Complex cpow4(const Complex& z) {
    Complex z2 = z * z;
    return z2 * z2;
}

// Theta constants and theta values at the nome of a reduced tau.
struct ThetaBasis {
    Complex q;         // e^{i pi tau}
    Complex q_quarter; // e^{i pi tau / 4}
    Complex t2, t3, t4;
    Real eps;

    ThetaBasis(const Complex& tau_std, const Real& pi_v, const Real& eps_) : eps(eps_) {
        Complex ipit = cplx(-pi_v * tau_std.imag(), pi_v * tau_std.real());
        q = exp(ipit);
        q_quarter = exp(ipit / 4);

        Complex s3(Real(1), Real(0)), s4(Real(1), Real(0)), s2(Real(1), Real(0));
        Complex q2 = q * q;
        Complex qn2 = q;               // q^{n^2},    n = 1
        Complex qodd = q;              // q^{2n-1},   n = 1
        Complex qnn(Real(1), Real(0)); // q^{n(n+1)}, n = 0
        Complex qeven = q2;            // q^{2n},     n = 1
        for (int n = 1; n < kMaxSeriesTerms; ++n) {
            s3 += 2 * qn2;
            if (n % 2 == 0) s4 += 2 * qn2; else s4 -= 2 * qn2;
            qnn = qnn * qeven;
            s2 += qnn;
            if (abs(qn2) < eps && abs(qnn) < eps) break;
            qodd = qodd * q2;
            qn2 = qn2 * qodd;
            qeven = qeven * q2;
        }
        t3 = s3;
        t4 = s4;
        t2 = 2 * q_quarter * s2;
    }

    // theta_1..theta_4 at argument v (= pi z), z reduced near the origin cell.
    std::array<Complex, 4> at(const Complex& v) const {
        Complex w = exp(cplx(-v.imag(), v.real())); // e^{iv}
        Complex winv = 1 / w;
        Complex w2 = w * w, w2inv = winv * winv;
        Complex q2 = q * q;

        Complex th1(Real(0), Real(0)), th2(Real(0), Real(0));
        Complex th3(Real(1), Real(0)), th4(Real(1), Real(0));

        // odd-index part: sum_{n>=0} q^{n(n+1)} (w^{2n+1} -/+ w^{-(2n+1)})
        Complex A(Real(1), Real(0)); // q^{n(n+1)}
        Complex B = w, C = winv;     // w^{2n+1}, w^{-(2n+1)}
        Complex qeven = q2;          // q^{2(n+1)}
        int sign = 1;
        for (int n = 0; n < kMaxSeriesTerms; ++n) {
            Complex tb = A * B, tc = A * C;
            th2 += tb + tc;
            if (sign > 0) th1 += tb - tc; else th1 -= tb - tc;
            if (n > 1 && abs(tb) < eps && abs(tc) < eps) break;
            A = A * qeven;
            qeven = qeven * q2;
            B = B * w2;
            C = C * w2inv;
            sign = -sign;
        }
        th1 = th1 * q_quarter * cplx(Real(0), Real(-1));
        th2 = th2 * q_quarter;

        // even-index part: sum_{n>=1} q^{n^2} (w^{2n} + w^{-2n})
        Complex qn2 = q;  // q^{n^2}
        Complex qodd = q; // q^{2n-1}
        Complex D = w2, E = w2inv;
        sign = -1;
        for (int n = 1; n < kMaxSeriesTerms; ++n) {
            Complex td = qn2 * D, te = qn2 * E;
            th3 += td + te;
            if (sign > 0) th4 += td + te; else th4 -= td + te;
            if (n > 1 && abs(td) < eps && abs(te) < eps) break;
            qodd = qodd * q2;
            qn2 = qn2 * qodd;
            D = D * w2;
            E = E * w2inv;
            sign = -sign;
        }
        return {th1, th2, th3, th4};
    }
};

// Half-period labels in (Z/2)^2: 1 <-> (1,0) [z=1/2], 2 <-> (1,1)
// [z=(1+tau)/2], 3 <-> (0,1) [z=tau/2].
int label_of(int p, int q) {
    if (p == 1 && q == 0) return 1;
    if (p == 1 && q == 1) return 2;
    if (p == 0 && q == 1) return 3;
    throw Error("internal: degenerate half-period label");
}

} // namespace

Complex moebius(const Unimodular& g, const Complex& tau) {
    Complex num = to_real(g.a) * tau + cplx(to_real(g.b));
    Complex den = to_real(g.c) * tau + cplx(to_real(g.d));
    return num / den;
}

const std::array<Unimodular, 6>& gamma2_coset_reps() {
    static const std::array<Unimodular, 6> reps = {
        Unimodular::identity(),
        Unimodular::S(),
        Unimodular::T(),
        Unimodular::S() * Unimodular::T(),
        Unimodular::T() * Unimodular::S(),
        Unimodular::S() * Unimodular::T() * Unimodular::S(),
    };
    return reps;
}

std::pair<PeriodPoint, Unimodular> reduce_to_fundamental(const Complex& tau_raw,
                                                         const PrecisionContext& ctx) {
    ctx.activate();
    if (!(tau_raw.imag() > 0))
        throw ValidationError("reduce_to_fundamental requires Im(tau) > 0");
    Complex t = tau_raw;
    Unimodular g = Unimodular::identity();
    Real half("0.5");
    for (int iter = 0; iter < kMaxReduceIters; ++iter) {
        Int n = round_to_int(t.real());
        if (n != 0) {
            t = t - cplx(to_real(n));
            g = Unimodular::T(-n) * g;
        }
        if (abs2(t) < 1) {
            t = -1 / t;
            g = Unimodular::S() * g;
            continue;
        }
        if (t.real() > half) { t = t - cplx(Real(1)); g = Unimodular::T(-1) * g; }
        else if (t.real() < -half) { t = t + cplx(Real(1)); g = Unimodular::T(1) * g; }
        PeriodPoint out{t, DomainTag::StandardSL2Z, Unimodular::identity()};
        return {out, g};
    }
    throw PrecisionExhausted("fundamental-domain reduction did not terminate");
}

Complex reduce_to_parallelogram(const Complex& z, const Complex& tau) {
    Real y = z.imag() / tau.imag();
    Real x = z.real() - y * tau.real();
    x = x - floor(x);
    y = y - floor(y);
    return cplx(x) + cplx(y) * tau;
}

Complex carlson_rf(Complex x, Complex y, Complex z, const PrecisionContext& ctx) {
    ctx.activate();
    Real tol = ctx.pow10(-long(ctx.certify_digits) / 6 - 2);
    Complex mu = (x + y + z) / 3;
    for (int iter = 0; iter < 500; ++iter) {
        mu = (x + y + z) / 3;
        Real err = abs(1 - x / mu);
        err = std::max(err, abs(1 - y / mu));
        err = std::max(err, abs(1 - z / mu));
        if (err < tol) break;
        Complex sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
        Complex lam = sx * sy + sy * sz + sz * sx;
        x = (x + lam) / 4;
        y = (y + lam) / 4;
        z = (z + lam) / 4;
    }
    Complex X = 1 - x / mu, Y = 1 - y / mu, Z = 1 - z / mu;
    Complex E2 = X * Y + Y * Z + Z * X;
    Complex E3 = X * Y * Z;
    Complex series = 1 - E2 / 10 + E3 / 14 + E2 * E2 / 24 - 3 * E2 * E3 / 44;
    return series / sqrt(mu);
}

namespace {

// Evaluation frame for one tau: reduction to the standard domain, theta
// basis there, and the weight/label transport back. Reused across repeated
// evaluations at the same tau.
struct AnalyticView {
    Complex tau;
    Complex tau_std;
    Unimodular g; // g * tau = tau_std
    Complex m;    // c tau + d
    Real pi_v;
    std::optional<ThetaBasis> theta;
    std::array<Complex, 4> e_std{}; // labels 1..3 at tau_std
    int perm[4] = {0, 0, 0, 0};     // label at tau -> label at tau_std

    AnalyticView(const PeriodPoint& tp, const PrecisionContext& ctx) : tau(tp.tau) {
        ctx.activate();
        if (!(tau.imag() > 0))
            throw ValidationError("tau must lie in the upper half-plane");
        auto [red, gamma] = reduce_to_fundamental(tau, ctx);
        tau_std = red.tau;
        g = gamma;
        m = to_real(g.c) * tau + cplx(to_real(g.d));
        pi_v = 4 * atan(Real(1));
        theta.emplace(tau_std, pi_v, ctx.pow10(-long(ctx.certify_digits) - 10));

        Real p2 = pi_v * pi_v;
        Complex t2_4 = cpow4(theta->t2), t3_4 = cpow4(theta->t3), t4_4 = cpow4(theta->t4);
        e_std[1] = p2 / 3 * (t3_4 + t4_4);
        e_std[2] = p2 / 3 * (t2_4 - t4_4);
        e_std[3] = -p2 / 3 * (t2_4 + t3_4);

        auto transport = [&](int p, int q) {
            Int pp = p * g.a - q * g.b;
            Int qq = q * g.d - p * g.c;
            return label_of(mod2(pp), mod2(qq));
        };
        perm[1] = transport(1, 0);
        perm[2] = transport(1, 1);
        perm[3] = transport(0, 1);
    }

    Complex e(int i) const { return e_std[perm[i]] / (m * m); }

    HalfPeriodValues half_period_values() const { return {e(1), e(2), e(3)}; }

    Complex lambda() const {
        return (e_std[perm[2]] - e_std[perm[1]]) / (e_std[perm[3]] - e_std[perm[1]]);
    }

    Real lattice_distance(const Complex& z) const {
        Complex zs = z / m;
        Real y = zs.imag() / tau_std.imag();
        Real x = zs.real() - y * tau_std.real();
        Real xf = centered_frac(x), yf = centered_frac(y);
        Real best(-1);
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy) {
                Complex cand = cplx(xf + dx) + cplx(yf + dy) * tau_std;
                Real d = abs(cand);
                if (best < 0 || d < best) best = d;
            }
        return best * abs(m);
    }

    std::pair<Complex, Complex> p_pp(const Complex& z) const {
        Complex zs = z / m;
        Real y = zs.imag() / tau_std.imag();
        Real x = zs.real() - y * tau_std.real();
        Complex zc = cplx(centered_frac(x)) + cplx(centered_frac(y)) * tau_std;
        Complex v = pi_v * zc;
        auto th = theta->at(v);
        Complex num = theta->t2 * theta->t3 * th[3];
        Complex ratio = num / th[0];
        Complex p_std = e_std[3] + pi_v * pi_v * ratio * ratio;
        Complex c0 = theta->t2 * theta->t3 * theta->t4;
        Complex pp_std = -2 * pi_v * pi_v * pi_v * c0 * c0 *
                         th[1] * th[2] * th[3] / (th[0] * th[0] * th[0]);
        return {p_std / (m * m), pp_std / (m * m * m)};
    }
};

} // namespace

HalfPeriodValues half_periods(const PeriodPoint& tau, const PrecisionContext& ctx) {
    AnalyticView view(tau, ctx);
    HalfPeriodValues hp = view.half_period_values();
    Real scale = std::max(Real(1), abs(hp.e1));
    if (abs(hp.e1 + hp.e2 + hp.e3) > ctx.working_tol() * scale)
        throw PrecisionExhausted("half-period sum check failed");
    return hp;
}

std::pair<Complex, Complex> weierstrass_p(const Complex& z, const PeriodPoint& tau,
                                          const PrecisionContext& ctx) {
    AnalyticView view(tau, ctx);
    Real pole_radius = ctx.pow10(-long(ctx.working_digits) / 4);
    if (view.lattice_distance(z) < pole_radius)
        throw PoleAtLatticePoint("z is within the pole exclusion radius of the lattice");
    return view.p_pp(z);
}

Complex legendre_lambda(const PeriodPoint& tau, const PrecisionContext& ctx) {
    AnalyticView view(tau, ctx);
    return view.lambda();
}

namespace {

Complex complex_agm(Complex a, Complex b, const PrecisionContext& ctx) {
    Real tol = ctx.pow10(4 - long(ctx.certify_digits));
    Real prev(-1);
    for (int iter = 0; iter < kMaxAgmIters; ++iter) {
        Complex mean = (a + b) / 2;
        Complex root = sqrt(a * b);
        // "right choice": the square root closer to the running mean
        if (abs(mean - root) > abs(mean + root)) root = -root;
        a = mean;
        b = root;
        Real gap = abs(a - b);
        Real scale = abs(a);
        if (gap <= tol * scale) return a;
        // quadratic convergence has stalled at the rounding floor
        if (prev >= 0 && gap >= prev && gap <= sqrt(tol) * scale) return a;
        prev = gap;
    }
    throw PrecisionExhausted("AGM did not converge");
}

} // namespace

PeriodPoint period_from_lambda(const Complex& lambda, const PrecisionContext& ctx,
                               const PeriodOptions& opts) {
    ctx.activate();
    Real d0 = abs(lambda), d1 = abs(lambda - 1);
    if (d0 < opts.exclusion_radius || d1 < opts.exclusion_radius)
        throw DegenerateLambda("lambda within exclusion radius of {0,1}");
    if (d0 > opts.magnitude_cap || 1 / std::min(d0, d1) > opts.magnitude_cap)
        throw DegenerateLambda("lambda beyond configured magnitude cap");

    Complex one(Real(1), Real(0));
    Complex m_lam = complex_agm(one, sqrt(lambda), ctx);
    Complex m_com = complex_agm(one, sqrt(1 - lambda), ctx);
    Complex tau_raw = imag_unit() * m_lam / m_com;

    std::vector<Complex> candidates{tau_raw, -tau_raw, conj(tau_raw), -conj(tau_raw)};

    Real tol = ctx.working_tol();
    Real scale = std::max(Real(1), abs(lambda));
    for (const Complex& cand : candidates) {
        if (!(cand.imag() > 0)) continue;
        auto [reduced, gamma] = reduce_to_fundamental(cand, ctx);
        const Unimodular* best = nullptr;
        Real best_err(-1);
        Complex best_tau;
        for (const Unimodular& rep : gamma2_coset_reps()) {
            Complex tau_rep = rep.is_identity() ? reduced.tau : moebius(rep, reduced.tau);
            PeriodPoint probe = PeriodPoint::unreduced(tau_rep);
            AnalyticView view(probe, ctx);
            Real err = abs(view.lambda() - lambda);
            if (best == nullptr || err < best_err) {
                best = &rep;
                best_err = err;
                best_tau = tau_rep;
            }
        }
        if (best != nullptr && best_err < tol * scale) {
            DomainTag tag = best->is_identity() ? DomainTag::StandardSL2Z : DomainTag::SixFoldB;
            return PeriodPoint{best_tau, tag, *best};
        }
    }
    throw PrecisionExhausted("period_from_lambda: no coset representative matched lambda");
}

std::array<Complex, 3> parametrize_point(const EllipticLogarithm& zl,
                                         const PrecisionContext& ctx) {
    AnalyticView view(zl.tau, ctx);
    Real pole_radius = ctx.pow10(-long(ctx.working_digits) / 4);
    if (view.lattice_distance(zl.z) < pole_radius)
        return {cplx(Real(0)), cplx(Real(1)), cplx(Real(0))};
    auto [p, pp] = view.p_pp(zl.z);
    Complex e1 = view.e(1), e3 = view.e(3);
    Complex d = e3 - e1;
    Complex s = sqrt(d);
    Complex xi = (p - e1) / d;
    Complex eta = pp / (2 * s * s * s);
    return {xi, eta, cplx(Real(1))};
}

EllipticLogarithm elliptic_log(const std::array<Complex, 3>& point, const Complex& lambda,
                               const PeriodPoint& tau, const PrecisionContext& ctx) {
    AnalyticView view(tau, ctx);

    Real big = std::max({abs(point[0]), abs(point[1]), abs(point[2])});
    if (big == 0) throw NotOnCurve("point [0:0:0] is not projective");
    if (abs(point[2]) < ctx.working_tol() * big)
        return {cplx(Real(0)), tau};

    Complex xi = point[0] / point[2];
    Complex eta = point[1] / point[2];
    Complex cubic = xi * (xi - 1) * (xi - lambda);
    Real curve_scale = std::max(Real(1), abs(cubic) + abs(eta * eta));
    if (abs(eta * eta - cubic) > ctx.working_tol() * curve_scale)
        throw NotOnCurve("point does not satisfy the Legendre cubic");

    Complex e1 = view.e(1), e2 = view.e(2), e3 = view.e(3);
    Complex d = e3 - e1;
    Complex s = sqrt(d);
    Complex p_target = e1 + d * xi;
    Complex pp_target = 2 * s * s * s * eta;

    Real half_tol = ctx.pow10(-long(ctx.working_digits) / 2);
    Complex L = view.lambda();

    if (abs(eta) < half_tol) {
        Complex z;
        if (abs(xi) < half_tol) z = cplx(Real("0.5"));
        else if (abs(xi - 1) < half_tol) z = view.tau / 2;
        else if (abs(xi - L) < half_tol) z = (1 + view.tau) / 2;
        else throw NotOnCurve("eta = 0 but xi is not a two-torsion abscissa");
        return {reduce_to_parallelogram(z, view.tau), tau};
    }

    Real p_scale = std::max(Real(1), abs(p_target));
    Real pp_scale = std::max(Real(1), abs(pp_target));
    Real accept = ctx.accept_tol();
    Real newton_floor = ctx.pow10(-long(ctx.certify_digits) + 8);

    auto polish = [&](Complex z) -> std::optional<Complex> {
        for (int it = 0; it < 60; ++it) {
            auto [p, pp] = view.p_pp(z);
            Real err = abs(p - p_target);
            if (err <= newton_floor * p_scale) break;
            if (abs(pp) < newton_floor) return std::nullopt;
            z = z - (p - p_target) / pp;
        }
        auto [p, pp] = view.p_pp(z);
        if (abs(pp - pp_target) > abs(pp + pp_target)) {
            z = -z;
            auto res = view.p_pp(z);
            p = res.first;
            pp = res.second;
        }
        if (abs(p - p_target) > accept * p_scale) return std::nullopt;
        if (abs(pp - pp_target) > accept * pp_scale) return std::nullopt;
        return reduce_to_parallelogram(z, view.tau);
    };

    Complex seed = carlson_rf(p_target - e1, p_target - e2, p_target - e3, ctx);
    if (auto z = polish(seed)) return {*z, tau};
    if (auto z = polish(conj(seed))) return {*z, tau};

    const int grid = 24;
    std::vector<std::pair<Real, Complex>> ranked;
    ranked.reserve(grid * grid);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            Complex z = cplx(Real(2 * i + 1) / (2 * grid)) +
                        cplx(Real(2 * j + 1) / (2 * grid)) * view.tau;
            if (view.lattice_distance(z) < Real("0.01")) continue;
            auto [p, pp] = view.p_pp(z);
            ranked.emplace_back(abs(p - p_target), z);
        }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    for (std::size_t k = 0; k < ranked.size() && k < 6; ++k)
        if (auto z = polish(ranked[k].second)) return {*z, tau};

    throw PrecisionExhausted("elliptic_log did not converge");
}

JSeriesValue j_from_q_series(const PeriodPoint& tau, std::size_t terms,
                             const PrecisionContext& ctx) {
    return j_from_q_series_raw(tau.tau, terms, ctx);
}

Complex j_from_half_periods(const HalfPeriodValues& hp) {
    Complex g2 = hp.g2(), g3 = hp.g3();
    Complex g2cube = g2 * g2 * g2;
    return 1728 * g2cube / (g2cube - 27 * g3 * g3);
}

Complex j_of_tau(const Complex& tau, const PrecisionContext& ctx) {
    ctx.activate();
    auto [reduced, gamma] = reduce_to_fundamental(tau, ctx);
    Real im = reduced.tau.imag();
    double imd = im.convert_to<double>();
    double digits = double(ctx.certify_digits) + 15;
    std::size_t terms = 24;
    while (terms < 4000) {
        double t = double(terms + 1);
        double tail_log10 =
            (-2 * 3.14159265358979 * imd * t + 4 * 3.14159265358979 * std::sqrt(t)) / 2.302585;
        if (tail_log10 < -digits) break;
        terms += 16;
    }
    return j_from_q_series_raw(reduced.tau, terms, ctx).value;
}

} // namespace ulix
