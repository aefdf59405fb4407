#include "ulix/curve_spec.hpp"

#include <cctype>
#include <random>

#include <nlohmann/json.hpp>

namespace ulix {

namespace {

// recursive-descent parser over + - * / ^ ( ) t and integer literals
struct ExprParser {
    const std::string& s;
    std::size_t pos = 0;

    explicit ExprParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool accept(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }

    [[noreturn]] void fail(const std::string& reason) { throw ParseError(pos, reason); }

    RationalFunction parse() {
        RationalFunction r = expression();
        skip_ws();
        if (pos != s.size()) fail("unexpected trailing input");
        return r;
    }

    RationalFunction expression() {
        RationalFunction acc = term();
        while (true) {
            if (accept('+')) acc = acc + term();
            else if (accept('-')) acc = acc - term();
            else return acc;
        }
    }

    RationalFunction term() {
        RationalFunction acc = factor();
        while (true) {
            if (accept('*')) acc = acc * factor();
            else if (accept('/')) {
                RationalFunction d = factor();
                if (d.is_zero()) fail("division by zero");
                acc = acc / d;
            } else
                return acc;
        }
    }

    RationalFunction factor() {
        skip_ws();
        if (accept('-')) return RationalFunction::constant(Rat(0)) - factor();
        if (accept('+')) return factor();
        RationalFunction base = atom();
        if (accept('^')) {
            skip_ws();
            bool neg = accept('-');
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (pos == start) fail("exponent must be an integer literal");
            int e = std::stoi(s.substr(start, pos - start));
            return base.pow(neg ? -e : e);
        }
        return base;
    }

    RationalFunction atom() {
        skip_ws();
        if (pos >= s.size()) fail("unexpected end of expression");
        if (accept('(')) {
            RationalFunction inner = expression();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        char c = s[pos];
        if (c == 't') {
            ++pos;
            return RationalFunction::variable();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            return RationalFunction::constant(Rat(Int(s.substr(start, pos - start))));
        }
        fail("expected a number, 't', or '('");
    }
};

Rat random_rational(std::mt19937_64& rng, long hmax) {
    std::uniform_int_distribution<long> num(-hmax, hmax);
    std::uniform_int_distribution<long> den(1, hmax);
    for (int i = 0; i < 64; ++i) {
        long p = num(rng), q = den(rng);
        if (std::gcd(std::abs(p), q) != 1) continue;
        if (std::max(std::abs(p), q) > hmax) continue;
        return Rat(p, q);
    }
    return Rat(1, 3);
}

} // namespace

RationalFunction parse_rational_function(const std::string& text) {
    ExprParser parser(text);
    return parser.parse();
}

CurveSpec parse_spec(const std::string& document, unsigned long seed) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.byte, "invalid JSON");
    }
    auto require = [&](const char* key) {
        if (!doc.contains(key))
            throw ValidationError(std::string("missing field \"") + key + "\"");
    };
    require("name");
    require("lambda");
    require("mu");
    require("p_sections");
    require("q_sections");

    CurveSpec spec;
    spec.name = doc["name"].get<std::string>();
    spec.lambda_map = parse_rational_function(doc["lambda"].get<std::string>());
    spec.mu_map = parse_rational_function(doc["mu"].get<std::string>());

    auto parse_sections = [&](const nlohmann::json& arr) {
        std::vector<Section> out;
        for (const auto& item : arr) {
            if (!item.contains("x"))
                throw ValidationError("section missing \"x\"");
            Section sec;
            sec.x = parse_rational_function(item["x"].get<std::string>());
            std::string sign = item.value("sign", "+");
            if (sign == "+") sec.sign = +1;
            else if (sign == "-") sec.sign = -1;
            else throw ValidationError("section sign must be \"+\" or \"-\"");
            out.push_back(std::move(sec));
        }
        return out;
    };
    spec.p_sections = parse_sections(doc["p_sections"]);
    spec.q_sections = parse_sections(doc["q_sections"]);

    if (spec.lambda_map.is_constant() && spec.mu_map.is_constant())
        throw ValidationError("lambda and mu must not both be constant");
    if (spec.p_sections.empty() && spec.q_sections.empty())
        throw ValidationError("at least one section is required");

    // sections must define curve points at generic parameters
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    int checked = 0;
    for (int attempt = 0; attempt < 200 && checked < 3; ++attempt) {
        Rat t = random_rational(rng, 50);
        try {
            if (spec.lambda_map.has_pole_at(t) || spec.mu_map.has_pole_at(t)) continue;
            Rat lam = spec.lambda_map.eval(t);
            Rat mu = spec.mu_map.eval(t);
            if (lam == 0 || lam == 1 || mu == 0 || mu == 1) continue;
            for (const auto& sec : spec.p_sections)
                if (sec.x.has_pole_at(t))
                    throw ValidationError("p-section has a pole at a generic parameter");
            for (const auto& sec : spec.q_sections)
                if (sec.x.has_pole_at(t))
                    throw ValidationError("q-section has a pole at a generic parameter");
            ++checked;
        } catch (const ValidationError&) {
            throw;
        }
    }
    if (checked < 3)
        throw ValidationError("could not find generic parameters for section checks");
    return spec;
}

std::string spec_to_json(const CurveSpec& spec) {
    nlohmann::ordered_json doc;
    doc["name"] = spec.name;
    doc["lambda"] = spec.lambda_map.str();
    doc["mu"] = spec.mu_map.str();
    auto dump_sections = [](const std::vector<Section>& secs) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& s : secs) {
            nlohmann::ordered_json item;
            item["x"] = s.x.str();
            item["sign"] = s.sign > 0 ? "+" : "-";
            arr.push_back(item);
        }
        return arr;
    };
    doc["p_sections"] = dump_sections(spec.p_sections);
    doc["q_sections"] = dump_sections(spec.q_sections);
    return doc.dump();
}

} // namespace ulix
