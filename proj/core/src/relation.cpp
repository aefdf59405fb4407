#include "ulix/relation.hpp"

#include <algorithm>

#include "ulix/lll.hpp"

namespace ulix {

Int RelationWitness::max_coefficient() const {
    Int m = 0;
    for (const Int& v : a) m = std::max(m, abs(v));
    for (const Int& v : b) m = std::max(m, abs(v));
    return m;
}

Real kappa_bound(const LogConfiguration& cfg, const Complex& rho) {
    Real t1 = abs(cfg.tau1.tau);
    Real t2 = cfg.w.empty() ? Real(0) : abs(cfg.tau2.tau);
    Real s = Real(int(cfg.z.size())) * (1 + t1) +
             abs(cfg.alpha) * Real(int(cfg.w.size())) * (1 + t2);
    s *= (1 + abs(rho));
    return s * (1 + (1 + t1) / cfg.tau1.tau.imag()) + 1;
}

namespace {

Complex combination_value(const LogConfiguration& cfg, const std::vector<Int>& a,
                          const std::vector<Int>& b, const Complex& rho, const Int& g1,
                          const Int& g2) {
    Complex acc(Real(0), Real(0));
    std::size_t m = cfg.z.size(), n = cfg.w.size();
    for (std::size_t i = 0; i < m; ++i) {
        Complex coeff = cplx(to_real(a[i])) + to_real(b[i]) * rho;
        acc += coeff * cfg.z[i].z;
    }
    for (std::size_t j = 0; j < n; ++j) {
        Complex coeff = cplx(to_real(a[m + j])) + to_real(b[m + j]) * rho;
        acc += coeff * cfg.alpha * cfg.w[j].z;
    }
    return acc - cplx(to_real(g1)) - to_real(g2) * cfg.tau1.tau;
}

struct Candidate {
    std::vector<Int> a, b;
    Int g1, g2;
    Int maxcoef;
};

bool candidate_less(const Candidate& l, const Candidate& r) {
    if (l.maxcoef != r.maxcoef) return l.maxcoef < r.maxcoef;
    if (l.a != r.a) return l.a < r.a;
    if (l.b != r.b) return l.b < r.b;
    if (l.g1 != r.g1) return l.g1 < r.g1;
    return l.g2 < r.g2;
}

} // namespace

std::optional<RelationWitness> find_relation(const LogConfiguration& cfg, const Complex& rho,
                                             const Real& T, const PrecisionContext& ctx) {
    ctx.activate();
    const std::size_t m = cfg.z.size(), n = cfg.w.size();
    if (m + n < 1) throw ValidationError("find_relation requires m + n >= 1");
    if (T < 1) throw ValidationError("find_relation requires T >= 1");
    const bool with_rho = !(rho == Complex(Real(0), Real(0)));

    std::vector<Complex> logs;
    logs.reserve(m + n);
    for (const auto& zi : cfg.z) logs.push_back(zi.z);
    for (const auto& wj : cfg.w) logs.push_back(cfg.alpha * wj.z);

    std::vector<Complex> xs;
    xs.reserve(2 * (m + n) + 2);
    for (const auto& l : logs) xs.push_back(l);
    if (with_rho)
        for (const auto& l : logs) xs.push_back(rho * l);
    xs.push_back(-cplx(Real(1)));
    xs.push_back(-cfg.tau1.tau);

    auto raw = integer_relation_candidates(xs, ctx, 8, 3);

    Real accept = ctx.accept_tol();
    Real reject = ctx.reject_tol();
    Int T_int = floor_to_int(T);
    Real kappa = kappa_bound(cfg, rho);
    Real t4 = T * T * T * T;
    Int gamma_cap = floor_to_int(kappa * t4) + 1;

    std::vector<Candidate> accepted;
    bool ambiguous = false;
    const std::size_t blocks = m + n;
    for (const auto& v : raw) {
        Candidate cand;
        cand.a.assign(v.begin(), v.begin() + blocks);
        if (with_rho)
            cand.b.assign(v.begin() + blocks, v.begin() + 2 * blocks);
        else
            cand.b.assign(blocks, Int(0));
        std::size_t base = with_rho ? 2 * blocks : blocks;
        cand.g1 = v[base];
        cand.g2 = v[base + 1];

        Int maxcoef = 0;
        for (const Int& x : cand.a) maxcoef = std::max(maxcoef, abs(x));
        for (const Int& x : cand.b) maxcoef = std::max(maxcoef, abs(x));
        cand.maxcoef = maxcoef;
        if (maxcoef == 0) continue; // (a, b) must be nonzero
        if (maxcoef > T_int) continue;
        if (abs(cand.g1) > gamma_cap || abs(cand.g2) > gamma_cap) continue;

        Real coeff_scale = to_real(maxcoef) * Real(int(blocks)) + abs(cand.g1) + abs(cand.g2);
        Real scale = std::max(Real(1), abs(cfg.tau1.tau)) * std::max(Real(1), coeff_scale);
        Real residual = abs(combination_value(cfg, cand.a, cand.b, rho, cand.g1, cand.g2));
        if (residual < accept * scale) {
            accepted.push_back(std::move(cand));
        } else if (residual < reject * scale) {
            ambiguous = true;
        }
    }

    if (accepted.empty()) {
        if (ambiguous)
            throw PrecisionExhausted("relation residual in the accept/reject gap");
        return std::nullopt;
    }
    auto best = *std::min_element(accepted.begin(), accepted.end(), candidate_less);
    RelationWitness w;
    w.a = std::move(best.a);
    w.b = std::move(best.b);
    w.gamma1 = best.g1;
    w.gamma2 = best.g2;
    w.rho = rho;
    w.residual = abs(combination_value(cfg, w.a, w.b, rho, w.gamma1, w.gamma2));
    w.T_used = T;
    return w;
}

namespace {

std::optional<CurvePoint> reconstruct_exact_point(const std::array<Complex, 3>& coords,
                                                  const LegendreParam& lambda,
                                                  const PrecisionContext& ctx) {
    if (!lambda.is_exact()) return std::nullopt;
    Real big = std::max({abs(coords[0]), abs(coords[1]), abs(coords[2])});
    if (abs(coords[2]) < ctx.working_tol() * big)
        return CurvePoint::infinity(lambda);
    Complex xi = coords[0] / coords[2];
    Complex eta = coords[1] / coords[2];
    Real tol = ctx.pow10(-long(ctx.certify_digits) / 2);
    if (abs(xi.imag()) > tol || abs(eta.imag()) > tol) return std::nullopt;
    Int cap = pow(Int(10), unsigned(ctx.certify_digits / 4));
    Rat x, y;
    if (!reconstruct_rational(xi.real(), cap, tol, x)) return std::nullopt;
    if (!reconstruct_rational(eta.real(), cap, tol, y)) return std::nullopt;
    if (y * y != legendre_rhs(x, lambda.rat())) return std::nullopt;
    return CurvePoint::exact(x, y, lambda);
}

} // namespace

bool certify_relation(const LogConfiguration& cfg, const RelationWitness& witness,
                      const PrecisionContext& ctx, const CertificationData* exact_data) {
    ctx.activate();
    const std::size_t m = cfg.z.size(), n = cfg.w.size();
    if (witness.a.size() != m + n || witness.b.size() != m + n)
        throw ValidationError("witness length does not match the configuration");

    Real residual =
        abs(combination_value(cfg, witness.a, witness.b, witness.rho, witness.gamma1,
                              witness.gamma2));
    Real coeff_scale = to_real(witness.max_coefficient()) * Real(int(m + n)) +
                       abs(witness.gamma1) + abs(witness.gamma2);
    Real scale = std::max(Real(1), abs(cfg.tau1.tau)) * std::max(Real(1), coeff_scale);
    if (residual > ctx.certify_tol() * scale) return false;

    const bool rho_zero = witness.rho == Complex(Real(0), Real(0));
    if (exact_data == nullptr || !rho_zero) return true;
    if (!exact_data->lambda1.is_exact()) return true;
    for (const auto& p : exact_data->p_points)
        if (!p.is_exact()) return true;

    // algebraic replay over the exact group law
    CurvePoint sum = CurvePoint::infinity(exact_data->lambda1);
    for (std::size_t i = 0; i < m && i < exact_data->p_points.size(); ++i)
        sum = add(sum, scalar_mul(witness.a[i], exact_data->p_points[i], ctx), ctx);
    for (std::size_t j = 0; j < n && j < exact_data->q_points.size(); ++j) {
        if (witness.a[m + j] == 0) continue;
        EllipticLogarithm image =
            map_point_analytic(cfg.w[j], exact_data->isogeny, cfg.tau1, ctx);
        auto coords = parametrize_point(image, ctx);
        auto exact_img = reconstruct_exact_point(coords, exact_data->lambda1, ctx);
        if (!exact_img) return true; // fiber not rational; analytic check stands
        sum = add(sum, scalar_mul(witness.a[m + j], *exact_img, ctx), ctx);
    }
    return sum.is_infinity();
}

ZTable count_zt_hits(const std::vector<LogConfiguration>& samples, const Complex& rho,
                     const std::vector<Real>& T_grid, const PrecisionContext& ctx) {
    ctx.activate();
    for (std::size_t i = 1; i < T_grid.size(); ++i)
        if (!(T_grid[i - 1] < T_grid[i]))
            throw ValidationError("T grid must be strictly ascending");
    for (const Real& t : T_grid)
        if (t < 1) throw ValidationError("T grid entries must be >= 1");

    ZTable table;
    table.T_grid = T_grid;
    table.counts.assign(T_grid.size(), 0);
    for (std::size_t ti = 0; ti < T_grid.size(); ++ti) {
        Int bound = floor_to_int(T_grid[ti]);
        std::size_t hits = 0;
        for (const auto& sample : samples) {
            LogConfiguration cfg = sample;
            if (!cfg.w.empty()) {
                auto mat = find_isogeny_matrix_entry_bounded(cfg.tau1, cfg.tau2, bound, ctx);
                if (!mat) continue;
                cfg.alpha = mat->alpha; // C tau1 + D in this orientation
            } else {
                // tau2 = tau1 with the identity matrix satisfies the bound
                cfg.alpha = Complex(Real(1), Real(0));
            }
            std::optional<RelationWitness> w;
            try {
                w = find_relation(cfg, rho, T_grid[ti], ctx);
            } catch (const PrecisionExhausted&) {
                continue;
            }
            if (w && certify_relation(cfg, *w, ctx)) ++hits;
        }
        table.counts[ti] = hits;
    }
    return table;
}

} // namespace ulix
