#include "ulix/scan.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "ulix/version.hpp"

namespace ulix {

namespace {

// J as a pair of polynomials: 256 (x^2-x+1)^3 and x^2 (x-1)^2
const Poly& j_numerator_poly() {
    static const Poly p = [] {
        Poly q({Rat(1), Rat(-1), Rat(1)});
        return Rat(256) * q.pow(3);
    }();
    return p;
}

const Poly& j_denominator_poly() {
    static const Poly p = [] {
        Poly x = Poly::variable();
        Poly xm1({Rat(-1), Rat(1)});
        return x * x * xm1 * xm1;
    }();
    return p;
}

RationalFunction j_of_map(const RationalFunction& f) {
    RationalFunction num = RationalFunction::compose(j_numerator_poly(), f);
    RationalFunction den = RationalFunction::compose(j_denominator_poly(), f);
    return num / den;
}

Rat eval_j(const Rat& lambda) { return j_invariant(lambda); }

bool excluded_parameter(const CurveSpec& spec, const Rat& t) {
    if (spec.lambda_map.has_pole_at(t) || spec.mu_map.has_pole_at(t)) return true;
    Rat lam = spec.lambda_map.eval(t);
    Rat mu = spec.mu_map.eval(t);
    return lam == 0 || lam == 1 || mu == 0 || mu == 1;
}

std::optional<Rat> rational_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    if (r == 0) return Rat(0);
    Int p = Int(numerator(r)), q = Int(denominator(r));
    Int sp = sqrt(p), sq = sqrt(q);
    if (sp * sp != p || sq * sq != q) return std::nullopt;
    return Rat(sp, sq);
}

struct SectionPoint {
    std::array<Complex, 3> coords;
    std::optional<CurvePoint> exact;
};

SectionPoint section_point(const Section& sec, const Rat& t, const Rat& lambda,
                           const PrecisionContext& ctx) {
    ctx.activate();
    Rat x = sec.x.eval(t);
    Rat rhs = x * (x - 1) * (x - lambda);
    SectionPoint out;
    if (auto y = rational_sqrt(rhs)) {
        Rat ysigned = sec.sign > 0 ? *y : -*y;
        LegendreParam parent = LegendreParam::exact(lambda);
        out.exact = CurvePoint::exact(x, ysigned, parent);
        out.coords = out.exact->coords();
        return out;
    }
    Complex xc = to_complex(x);
    Complex yc = sqrt(to_complex(rhs));
    if (sec.sign < 0) yc = -yc;
    out.coords = {xc, yc, cplx(Real(1))};
    return out;
}

Rat h1_of(const Rat& t) {
    Int p = abs(Int(numerator(t))), q = Int(denominator(t));
    return Rat(p > q ? p : q);
}

} // namespace

AsymmetryReport asymmetry_check(const CurveSpec& spec) {
    const bool l_const = spec.lambda_map.is_constant();
    const bool m_const = spec.mu_map.is_constant();
    if (l_const && m_const)
        throw ConstantMapDegenerate("both coordinate maps are constant");

    AsymmetryReport rep;
    RationalFunction jl = l_const ? RationalFunction() : j_of_map(spec.lambda_map);
    RationalFunction jm = m_const ? RationalFunction() : j_of_map(spec.mu_map);
    int raw_x = l_const ? 0 : jl.map_degree();
    int raw_y = m_const ? 0 : jm.map_degree();

    int d = 1;
    if (!l_const && !m_const) {
        // fibration degree of t -> (J(lambda), J(mu)) from specialized fiber
        // counts at generic parameters
        std::vector<int> counts;
        const Rat samples[] = {Rat(17, 5), Rat(-23, 7), Rat(41, 3), Rat(29, 11), Rat(-31, 13)};
        for (const Rat& t : samples) {
            if (counts.size() >= 3) break;
            if (spec.lambda_map.has_pole_at(t) || spec.mu_map.has_pole_at(t)) continue;
            try {
                Rat v1 = jl.eval(t), v2 = jm.eval(t);
                Poly f1 = (jl - RationalFunction::constant(v1)).num();
                Poly f2 = (jm - RationalFunction::constant(v2)).num();
                Poly g = Poly::gcd(f1, f2);
                if (g.degree() >= 1) counts.push_back(g.degree());
            } catch (const ValidationError&) {
                continue;
            }
        }
        if (counts.size() < 3)
            throw ValidationError("could not sample generic fibers for the asymmetry check");
        d = counts[0];
        for (int c : counts) d = std::gcd(d, c);
        if (d < 1) d = 1;
        if (raw_x % d != 0 || raw_y % d != 0) d = 1;
    }

    rep.deg_x = l_const ? 0 : raw_x / d;
    rep.deg_y = m_const ? 0 : raw_y / d;
    rep.fibration_degree = d;
    rep.asymmetric = rep.deg_x != rep.deg_y;
    return rep;
}

namespace {

std::optional<Complex> side_rho(const RationalFunction& map, const PeriodPoint& tau,
                                const PrecisionContext& ctx) {
    // case (iii): a constant coordinate with complex multiplication
    if (!map.is_constant()) return std::nullopt;
    auto cm = detect_cm(tau, Int(100000), ctx);
    if (!cm) return std::nullopt;
    return cm->rho0;
}

} // namespace

GenericityReport genericity_check(const CurveSpec& spec, const ScanConfig& config) {
    const PrecisionContext& ctx = config.precision;
    ctx.activate();
    PeriodOptions popts;
    popts.exclusion_radius = config.exclusion_radius;

    GenericityReport rep;
    std::mt19937_64 rng(config.seed ^ 0x5851f42d4c957f2dull);
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 1000);

    int attempts = 0;
    while (rep.samples.size() < 3 && attempts++ < 500) {
        long p = num(rng), q = den(rng);
        if (std::gcd(std::abs(p), q) != 1) continue;
        Rat t(p, q);
        if (excluded_parameter(spec, t)) continue;
        bool section_pole = false;
        for (const auto& s : spec.p_sections) section_pole |= s.x.has_pole_at(t);
        for (const auto& s : spec.q_sections) section_pole |= s.x.has_pole_at(t);
        if (section_pole) continue;

        GenericitySample sample;
        sample.t = t;
        try {
            Rat lam = spec.lambda_map.eval(t), mu = spec.mu_map.eval(t);
            PeriodPoint tau1 = period_from_lambda(to_complex(lam), ctx, popts);
            PeriodPoint tau2 = period_from_lambda(to_complex(mu), ctx, popts);

            auto witness = find_isogeny_matrix(tau1, tau2, Int(config.n_max), ctx);
            sample.isogeny_free = !witness.has_value();

            auto side_free = [&](const std::vector<Section>& sections, const Rat& param,
                                 const PeriodPoint& tau,
                                 const RationalFunction& map) -> bool {
                if (sections.empty()) return true;
                LogConfiguration cfg;
                cfg.tau1 = tau;
                for (const auto& sec : sections) {
                    SectionPoint pt = section_point(sec, t, param, ctx);
                    cfg.z.push_back(elliptic_log(pt.coords, to_complex(param), tau, ctx));
                }
                Complex rho(Real(0), Real(0));
                if (auto r = side_rho(map, tau, ctx)) rho = *r;
                auto rel = find_relation(cfg, rho, to_real(config.t_relation), ctx);
                return !rel.has_value();
            };
            sample.p_relation_free = side_free(spec.p_sections, lam, tau1, spec.lambda_map);
            sample.q_relation_free = side_free(spec.q_sections, mu, tau2, spec.mu_map);
        } catch (const Error& e) {
            sample.note = e.what();
        }
        rep.samples.push_back(std::move(sample));
    }
    rep.passed = rep.samples.size() == 3 &&
                 std::all_of(rep.samples.begin(), rep.samples.end(), [](const auto& s) {
                     return s.isogeny_free && s.p_relation_free && s.q_relation_free &&
                            s.note.empty();
                 });
    return rep;
}

std::vector<Rat> enumerate_parameters(int h1_max) {
    if (h1_max < 1) return {};
    std::vector<Rat> out;
    for (long h = 1; h <= h1_max; ++h) {
        std::vector<Rat> layer;
        // |p| = h, 1 <= q <= h
        for (long q = 1; q <= h; ++q) {
            if (std::gcd(h, q) != 1) continue;
            layer.emplace_back(-h, q);
            layer.emplace_back(h, q);
        }
        // q = h, |p| < h
        for (long p = -(h - 1); p <= h - 1; ++p) {
            if (std::gcd(std::abs(p), h) != 1) continue;
            if (p == 0 && h != 1) continue;
            layer.emplace_back(p, h);
        }
        if (h == 1) layer.emplace_back(0, 1);
        std::sort(layer.begin(), layer.end(), [](const Rat& a, const Rat& b) {
            if (numerator(a) != numerator(b)) return numerator(a) < numerator(b);
            return denominator(a) < denominator(b);
        });
        layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

std::vector<Rat> enumerate_parameters(const CurveSpec& spec, int h1_max) {
    std::vector<Rat> out;
    for (const Rat& t : enumerate_parameters(h1_max))
        if (!excluded_parameter(spec, t)) out.push_back(t);
    return out;
}

namespace {

struct PointOutcome {
    std::vector<std::pair<unsigned, Rat>> hits;
    std::optional<Finding> finding;
    std::optional<SkipEntry> skip;
};

PointOutcome scan_point(const CurveSpec& spec, const ScanConfig& config, const Rat& t0,
                        const std::vector<const ModularPolynomial*>& phis,
                        const std::optional<Complex>& const_side_rho_lambda) {
    const PrecisionContext& ctx = config.precision;
    PointOutcome out;

    Rat lam = spec.lambda_map.eval(t0);
    Rat mu = spec.mu_map.eval(t0);
    Rat j1 = eval_j(lam), j2 = eval_j(mu);

    std::vector<unsigned> levels;
    for (const ModularPolynomial* phi : phis) {
        if (phi->eval(j2, j1) == 0) {
            levels.push_back(phi->level);
            out.hits.emplace_back(phi->level, t0);
        }
    }
    if (levels.empty()) return out;

    try {
        PeriodOptions popts;
        popts.exclusion_radius = config.exclusion_radius;
        PeriodPoint tau1 = period_from_lambda(to_complex(lam), ctx, popts);
        PeriodPoint tau2 = period_from_lambda(to_complex(mu), ctx, popts);

        auto witness = find_isogeny_matrix(tau1, tau2, Int(config.n_max), ctx);
        if (!witness) {
            out.skip = SkipEntry{t0, "isogeny matrix not recovered at the detected level"};
            return out;
        }

        LogConfiguration cfg;
        cfg.tau1 = tau1;
        cfg.tau2 = tau2;
        cfg.alpha = witness->transport_multiplier(tau1.tau);

        CertificationData cert;
        cert.lambda1 = LegendreParam::exact(lam);
        cert.isogeny = *witness;
        bool all_p_exact = true;

        for (const auto& sec : spec.p_sections) {
            SectionPoint pt = section_point(sec, t0, lam, ctx);
            cfg.z.push_back(elliptic_log(pt.coords, to_complex(lam), tau1, ctx));
            if (pt.exact) cert.p_points.push_back(*pt.exact);
            else all_p_exact = false;
        }
        for (const auto& sec : spec.q_sections) {
            SectionPoint pt = section_point(sec, t0, mu, ctx);
            cfg.w.push_back(elliptic_log(pt.coords, to_complex(mu), tau2, ctx));
            if (pt.exact) cert.q_points.push_back(*pt.exact);
        }

        Complex rho(Real(0), Real(0));
        if (const_side_rho_lambda) {
            rho = *const_side_rho_lambda;
        } else if (spec.mu_map.is_constant()) {
            // constant CM side forces coefficients in the lambda-side order
            if (auto cm = detect_cm(tau1, Int(100000), ctx)) rho = cm->rho0;
        }

        auto rel = find_relation(cfg, rho, to_real(config.t_relation), ctx);
        if (!rel) return out; // isogeny hit without a bounded relation

        bool use_exact = all_p_exact && cert.p_points.size() == spec.m() &&
                         cert.q_points.size() == spec.n();
        bool certified = certify_relation(cfg, *rel, ctx, use_exact ? &cert : nullptr);
        if (!certified) {
            out.skip = SkipEntry{t0, "relation failed certification"};
            return out;
        }

        Finding f;
        f.t0 = t0;
        f.lambda0 = lam;
        f.mu0 = mu;
        f.phi_level = levels.front();
        f.isogeny = *witness;
        f.relation = *rel;
        f.h_lambda = weil_height_rational(lam).value;
        f.h_mu = weil_height_rational(mu).value;
        for (const auto& p : cert.p_points) f.hhat_p.push_back(neron_tate(p, ctx));
        f.bounds.n0 = witness->N;
        f.bounds.tau1_abs = abs(tau1.tau);
        f.bounds.tau2_abs = abs(tau2.tau);
        f.bounds.coeff_max = rel->max_coefficient();
        {
            auto [red, g] = reduce_to_fundamental(tau1.tau, ctx);
            Real two_pi = 8 * atan(Real(1));
            Real growth = exp(two_pi * red.tau.imag());
            Real jabs = abs(j_of_tau(red.tau, ctx));
            f.bounds.tau_height_margin = 2079 + jabs - growth;
        }
        f.certified = true;
        out.finding = f;
    } catch (const Error& e) {
        out.skip = SkipEntry{t0, e.what()};
    }
    return out;
}

} // namespace

ScanResult scan(const CurveSpec& spec, const ScanConfig& config) {
    const PrecisionContext& ctx = config.precision;
    ctx.activate();

    ScanResult res;
    res.spec_name = spec.name;
    res.asymmetry = asymmetry_check(spec);
    res.asymmetry_overridden = !res.asymmetry.asymmetric && config.override_asymmetry;
    if (!res.asymmetry.asymmetric && !config.override_asymmetry)
        throw AsymmetryRefused("curve is not asymmetric; pass the override to scan anyway");

    res.genericity = genericity_check(spec, config);
    if (!res.genericity.passed)
        throw GenericityRefused("genericity hypotheses failed at the sampled parameters");

    std::vector<const ModularPolynomial*> phis;
    for (unsigned n = 1; n <= config.n_max; ++n)
        phis.push_back(&modular_polynomial(n, ctx));

    // case (iii) with constant lambda: rho is fixed across the scan
    std::optional<Complex> rho_const;
    if (spec.lambda_map.is_constant()) {
        PeriodOptions popts;
        popts.exclusion_radius = config.exclusion_radius;
        Rat lam0 = spec.lambda_map.eval(Rat(0));
        PeriodPoint tau1 = period_from_lambda(to_complex(lam0), ctx, popts);
        if (auto cm = detect_cm(tau1, Int(100000), ctx)) rho_const = cm->rho0;
    }

    std::vector<Rat> params = enumerate_parameters(spec, config.h1_max);
    std::vector<PointOutcome> outcomes(params.size());

    unsigned threads = std::max(1u, config.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < params.size(); ++i)
            outcomes[i] = scan_point(spec, config, params[i], phis, rho_const);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                ctx.activate();
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= params.size()) break;
                    outcomes[i] = scan_point(spec, config, params[i], phis, rho_const);
                }
            });
        for (auto& th : pool) th.join();
    }

    for (auto& o : outcomes) {
        for (auto& [level, t] : o.hits) res.hits_by_level[level].push_back(t);
        if (o.finding) res.findings.push_back(std::move(*o.finding));
        if (o.skip) res.skip_list.push_back(std::move(*o.skip));
    }
    std::sort(res.findings.begin(), res.findings.end(), [](const Finding& a, const Finding& b) {
        Rat ha = h1_of(a.t0), hb = h1_of(b.t0);
        if (ha != hb) return ha < hb;
        return a.t0 < b.t0;
    });
    return res;
}

Poly isogeny_locus_oracle(const CurveSpec& spec, unsigned n, const PrecisionContext& ctx) {
    if (spec.lambda_map.is_constant() && spec.mu_map.is_constant())
        throw ConstantMapDegenerate("oracle needs a non-constant coordinate");
    const ModularPolynomial& phi = modular_polynomial(n, ctx);
    const unsigned d = phi.degree;

    RationalFunction jl = j_of_map(spec.lambda_map);
    RationalFunction jm = j_of_map(spec.mu_map);
    const Poly& p1 = jl.num();
    const Poly& q1 = jl.den();
    const Poly& p2 = jm.num();
    const Poly& q2 = jm.den();

    std::vector<Poly> pow_p1(d + 1), pow_q1(d + 1), pow_p2(d + 1), pow_q2(d + 1);
    pow_p1[0] = pow_q1[0] = pow_p2[0] = pow_q2[0] = Poly::constant(Rat(1));
    for (unsigned i = 1; i <= d; ++i) {
        pow_p1[i] = pow_p1[i - 1] * p1;
        pow_q1[i] = pow_q1[i - 1] * q1;
        pow_p2[i] = pow_p2[i - 1] * p2;
        pow_q2[i] = pow_q2[i - 1] * q2;
    }

    Poly acc;
    for (unsigned i = 0; i <= d; ++i)
        for (unsigned j = 0; j <= d; ++j) {
            const Int& c = phi.coeff(i, j);
            if (c == 0) continue;
            Poly term = Rat(c) * (pow_p1[i] * pow_q1[d - i] * pow_p2[j] * pow_q2[d - j]);
            acc = acc + term;
        }
    if (acc.is_zero()) return acc;
    auto ints = acc.primitive_integer_coeffs();
    std::vector<Rat> coeffs(ints.size());
    for (std::size_t i = 0; i < ints.size(); ++i) coeffs[i] = Rat(ints[i]);
    return Poly(std::move(coeffs));
}

namespace {

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

nlohmann::ordered_json finding_json(const Finding& f) {
    nlohmann::ordered_json j;
    j["t0"] = rat_str(f.t0);
    j["lambda0"] = rat_str(f.lambda0);
    j["mu0"] = rat_str(f.mu0);
    j["level"] = f.phi_level;
    j["isogeny"] = {{"A", f.isogeny.A.str()},   {"B", f.isogeny.B.str()},
                    {"C", f.isogeny.C.str()},   {"D", f.isogeny.D.str()},
                    {"N", f.isogeny.N.str()},   {"alpha", format_complex(f.isogeny.alpha, 30)}};
    nlohmann::ordered_json rel;
    nlohmann::ordered_json avec = nlohmann::ordered_json::array();
    for (const auto& x : f.relation.a) avec.push_back(x.str());
    nlohmann::ordered_json bvec = nlohmann::ordered_json::array();
    for (const auto& x : f.relation.b) bvec.push_back(x.str());
    rel["a"] = avec;
    rel["b"] = bvec;
    rel["gamma1"] = f.relation.gamma1.str();
    rel["gamma2"] = f.relation.gamma2.str();
    rel["rho"] = format_complex(f.relation.rho, 30);
    rel["residual"] = format_real(f.relation.residual, 10);
    rel["T"] = format_real(f.relation.T_used, 10);
    j["relation"] = rel;
    nlohmann::ordered_json hts;
    hts["h_lambda"] = format_real(f.h_lambda, 30);
    hts["h_mu"] = format_real(f.h_mu, 30);
    nlohmann::ordered_json hh = nlohmann::ordered_json::array();
    for (const auto& h : f.hhat_p) {
        nlohmann::ordered_json e;
        e["value"] = format_real(h.value, 30);
        e["error_bound"] = format_real(h.error_bound, 10);
        hh.push_back(e);
    }
    hts["hhat_p"] = hh;
    j["heights"] = hts;
    nlohmann::ordered_json b;
    b["N0"] = f.bounds.n0.str();
    b["tau1_abs"] = format_real(f.bounds.tau1_abs, 20);
    b["tau2_abs"] = format_real(f.bounds.tau2_abs, 20);
    b["coeff_max"] = f.bounds.coeff_max.str();
    b["tau_height_margin"] = format_real(f.bounds.tau_height_margin, 20);
    j["bounds"] = b;
    j["certified"] = f.certified;
    return j;
}

} // namespace

void emit_findings(const ScanResult& result, const ScanConfig& config, OutputFormat format,
                   std::ostream& os) {
    nlohmann::ordered_json header;
    header["tool"] = "ulix";
    header["version"] = ULIX_VERSION;
    header["spec"] = result.spec_name;
    header["config"] = {{"h1_max", config.h1_max},
                        {"n_max", config.n_max},
                        {"t_relation", config.t_relation.str()},
                        {"working_digits", config.precision.working_digits},
                        {"certify_digits", config.precision.certify_digits},
                        {"threads", config.threads},
                        {"override_asymmetry", config.override_asymmetry}};
    header["seed"] = config.seed;
    header["asymmetry"] = {{"deg_x", result.asymmetry.deg_x},
                           {"deg_y", result.asymmetry.deg_y},
                           {"asymmetric", result.asymmetry.asymmetric},
                           {"overridden", result.asymmetry_overridden}};
    header["findings"] = result.findings.size();

    if (format == OutputFormat::Json) {
        os << header.dump() << "\n";
        for (const auto& f : result.findings) os << finding_json(f).dump() << "\n";
        return;
    }

    // CSV: header comment line, then fixed columns
    os << "# " << header.dump() << "\n";
    os << "t0,lambda0,mu0,level,N,A,B,C,D,a,b,gamma1,gamma2,rho,residual,h_lambda,h_mu,"
          "coeff_max,certified\n";
    for (const auto& f : result.findings) {
        auto join = [](const std::vector<Int>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) s += ";";
                s += v[i].str();
            }
            return s;
        };
        os << rat_str(f.t0) << "," << rat_str(f.lambda0) << "," << rat_str(f.mu0) << ","
           << f.phi_level << "," << f.isogeny.N.str() << "," << f.isogeny.A.str() << ","
           << f.isogeny.B.str() << "," << f.isogeny.C.str() << "," << f.isogeny.D.str() << ","
           << join(f.relation.a) << "," << join(f.relation.b) << ","
           << f.relation.gamma1.str() << "," << f.relation.gamma2.str() << ","
           << format_complex(f.relation.rho, 20) << ","
           << format_real(f.relation.residual, 10) << "," << format_real(f.h_lambda, 20) << ","
           << format_real(f.h_mu, 20) << "," << f.bounds.coeff_max.str() << ","
           << (f.certified ? "true" : "false") << "\n";
    }
}

} // namespace ulix
