#include "fpgame/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fpg {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::string array17(const std::vector<double>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt17(v[i]);
    }
    out += "]";
    return out;
}

}  // namespace

std::string to_json(const CollusionChannel& c) {
    std::ostringstream os;
    os << "{\"k\":" << c.k() << ",\"p\":" << array17(c.probs()) << "}";
    return os.str();
}

std::string to_json(const FiniteSpectrumPrior& p) {
    std::ostringstream os;
    os << "{\"support\":" << array17(p.support()) << ",\"masses\":" << array17(p.masses())
       << "}";
    return os.str();
}

std::string to_json(const ContinuousPrior& p) {
    std::ostringstream os;
    switch (p.kind()) {
        case ContinuousPrior::Kind::Arcsine:
            os << "{\"kind\":\"arcsine\"}";
            break;
        case ContinuousPrior::Kind::Beta:
            os << "{\"kind\":\"beta\",\"theta\":" << fmt17(p.theta()) << "}";
            break;
        case ContinuousPrior::Kind::CustomPdf:
            os << "{\"kind\":\"custom\"}";
            break;
    }
    return os.str();
}

std::string to_json(const AnyPrior& p) {
    return std::visit([](const auto& v) { return to_json(v); }, p);
}

std::string to_json(const BoundsReport& r) {
    std::ostringstream os;
    os << "{\"k\":" << r.k << ",\"decoder\":\"" << decoder_name(r.decoder)
       << "\",\"lower_arcsine\":" << fmt17(r.lower_arcsine)
       << ",\"upper_interleaving\":" << fmt17(r.upper_interleaving)
       << ",\"asymptote\":" << fmt17(r.asymptote) << "}";
    return os.str();
}

std::string to_json(const KktReport& r) {
    std::ostringstream os;
    os << "{\"stationarity_w\":" << fmt17(r.stationarity_w)
       << ",\"equal_value_spread\":" << fmt17(r.equal_value_spread)
       << ",\"second_order_ok\":" << (r.second_order_ok ? "true" : "false")
       << ",\"stationarity_p\":" << fmt17(r.stationarity_p) << "}";
    return os.str();
}

std::string to_json(const GameSolution& s) {
    std::ostringstream os;
    os << "{\"value\":" << fmt17(s.value) << ",\"prior\":" << to_json(s.prior)
       << ",\"channel\":" << to_json(s.channel) << ",\"decoder\":\""
       << decoder_name(s.decoder) << "\",\"kkt\":" << to_json(s.kkt)
       << ",\"duality_gap\":" << fmt17(s.duality_gap) << ",\"iterations\":" << s.iterations
       << ",\"maximin\":" << fmt17(s.maximin) << ",\"minimax\":" << fmt17(s.minimax)
       << ",\"converged\":" << (s.converged ? "true" : "false") << "}";
    return os.str();
}

CollusionChannel channel_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("k") || !j.contains("p"))
        throw std::invalid_argument("channel JSON requires fields 'k' and 'p'");
    int k = j.at("k").get<int>();
    std::vector<double> p = j.at("p").get<std::vector<double>>();
    return CollusionChannel(k, std::move(p));
}

AnyPrior prior_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.contains("support")) {
        auto support = j.at("support").get<std::vector<double>>();
        auto masses = j.at("masses").get<std::vector<double>>();
        return FiniteSpectrumPrior(std::move(support), std::move(masses));
    }
    if (j.contains("kind")) {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "arcsine") return ContinuousPrior::arcsine();
        if (kind == "beta") return ContinuousPrior::beta(j.at("theta").get<double>());
        throw std::invalid_argument("prior JSON: kind '" + kind +
                                    "' is not loadable (custom pdfs have no file form)");
    }
    throw std::invalid_argument("prior JSON requires 'support'/'masses' or 'kind'");
}

AnyPrior parse_prior(const std::string& spec) {
    if (spec == "arcsine") return ContinuousPrior::arcsine();
    if (spec.rfind("beta:", 0) == 0) {
        size_t pos = 0;
        double theta;
        try {
            theta = std::stod(spec.substr(5), &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_prior: bad float after 'beta:' at position 5");
        }
        if (5 + pos != spec.size())
            throw std::invalid_argument("parse_prior: trailing characters at position " +
                                        std::to_string(5 + pos));
        return ContinuousPrior::beta(theta);
    }
    if (spec.rfind("point:", 0) == 0) {
        size_t pos = 0;
        double w;
        try {
            w = std::stod(spec.substr(6), &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_prior: bad float after 'point:' at position 6");
        }
        if (6 + pos != spec.size())
            throw std::invalid_argument("parse_prior: trailing characters at position " +
                                        std::to_string(6 + pos));
        if (!(w >= 0.0 && w <= 1.0))
            throw std::invalid_argument("parse_prior: point mass must lie in [0,1]");
        return FiniteSpectrumPrior::point_mass(w);
    }
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw std::invalid_argument("parse_prior: cannot read file " + spec.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        return prior_from_json(ss.str());
    }
    throw std::invalid_argument(
        "parse_prior: expected arcsine | beta:<float> | point:<float> | @<path>, got '" +
        spec + "'");
}

}  // namespace fpg
