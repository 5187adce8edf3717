#pragma once

#include <casimir/catalog.hpp>
#include <casimir/closure.hpp>
#include <casimir/parsing.hpp>

#include <regex>
#include <string>
#include <vector>

namespace support {

inline casimir::ClosureConfig catalog_config(const std::string& name) {
    const auto& d = casimir::catalog_entry(name).closure;
    casimir::ClosureConfig cfg;
    cfg.g_deg = d.g_deg;
    cfg.c_deg = d.c_deg;
    cfg.projective = d.projective;
    cfg.relation_c_deg = d.relation_c_deg;
    cfg.ring = d.ring_from_center ? casimir::RingKind::central_generators : casimir::RingKind::casimirs;
    return cfg;
}

inline std::vector<casimir::NCPoly> catalog_families(const std::string& name) {
    casimir::Uea U1(casimir::catalog_algebra(name), 1);
    std::vector<casimir::NCPoly> out;
    for (const auto& c : casimir::catalog_entry(name).casimirs) out.push_back(casimir::parse_ncpoly(U1, c.op));
    return out;
}

// Evaluates identities written with
//   C<r>_<copies>        intermediate Casimir of family r over a copy subset (C1_12, C2_123, C1_3)
//   K<r1r2..>_<pairs>    right-nested commutator (K11_1223 = [C1_12, C1_23], K111_131223 = [C1_13, K11_1223])
//   X<i>^[a]             generators
class Notation {
public:
    Notation(const casimir::ClosureEngine& engine, casimir::IntermediateFn build)
        : engine_(engine), build_(std::move(build)) {}

    casimir::NCPoly eval(const std::string& text) const {
        std::map<std::string, casimir::NCPoly> aliases;
        static const std::regex token(R"(\b([CK])(\d+)_(\d+)\b)");
        for (auto it = std::sregex_iterator(text.begin(), text.end(), token); it != std::sregex_iterator(); ++it) {
            const std::string name = it->str();
            if (aliases.count(name)) continue;
            aliases.emplace(name, resolve((*it)[1], (*it)[2], (*it)[3]));
        }
        return casimir::parse_ncpoly(engine_.uea(), text, 1, aliases);
    }

    bool holds(const std::string& lhs, const std::string& rhs) const { return eval(lhs) == eval(rhs); }

private:
    const casimir::ClosureEngine& engine_;
    casimir::IntermediateFn build_;

    casimir::NCPoly resolve(const std::string& kind, const std::string& fams, const std::string& digits) const {
        auto subset = [](const std::string& d) {
            casimir::CopySet S;
            for (char c : d) S.push_back(c - '0');
            return S;
        };
        if (kind == "C") return build_(engine_.uea(), std::stoi(fams) - 1, subset(digits));
        casimir::NestedLabel label;
        for (std::size_t k = 0; k < fams.size(); ++k) label.entries.emplace_back(fams[k] - '0', subset(digits.substr(2 * k, 2)));
        return engine_.value_of(label);
    }
};

}  // namespace support
