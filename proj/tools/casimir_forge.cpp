// casimir-forge: command-line front end for the Casimir closure engine.

#include <CLI11.hpp>

#include <casimir/catalog.hpp>
#include <casimir/closure.hpp>
#include <casimir/copies.hpp>
#include <casimir/invariants.hpp>
#include <casimir/io.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace casimir;

namespace {

enum Exit { kOk = 0, kDomain = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string catalog;
    std::string file;
    std::optional<int> max_degree;
    int copies = 3;
    int depth_limit = 5;
    std::optional<int> g_deg;
    std::optional<int> c_deg;
    std::optional<int> relation_c_deg;
    bool projective = false;
    bool center_reduce = false;
    bool text = false;
    std::string out;
    std::uint64_t budget_terms = 5'000'000;
};

struct Output {
    std::string body;
    int code = kOk;
};

void progress(const std::string& msg) { std::cerr << msg << std::endl; }

LieAlgebra source_algebra(const RunConfig& rc, bool check_jacobi = true) {
    if (!rc.catalog.empty()) return catalog_algebra(rc.catalog);
    return load_algebra(rc.file, check_jacobi);
}

std::string render_json(const json& j) { return j.dump(2) + "\n"; }

// Operators whose intermediate Casimirs drive `intermediates` and `close`:
// the catalog's published forms, or computed ones of degree >= 2.
std::vector<NCPoly> families(const RunConfig& rc, const LieAlgebra& L) {
    Uea U(L, 1);
    std::vector<NCPoly> out;
    if (!rc.catalog.empty() && !rc.max_degree) {
        for (const auto& c : catalog_entry(rc.catalog).casimirs) {
            NCPoly op = parse_ncpoly(U, c.op);
            out.push_back(rc.center_reduce ? U.reduce_mod_center(op) : op);
        }
        return out;
    }
    for (auto& op : casimir_operators(L, rc.max_degree.value_or(4), rc.center_reduce))
        if (op.degree() >= 2) out.push_back(std::move(op));
    return out;
}

ClosureConfig closure_config(const RunConfig& rc, const LieAlgebra& L) {
    ClosureDefaults d;
    if (!rc.catalog.empty()) d = catalog_entry(rc.catalog).closure;
    else d.ring_from_center = !L.center().empty();
    ClosureConfig cfg;
    cfg.copies = rc.copies;
    cfg.depth_limit = rc.depth_limit;
    cfg.g_deg = rc.g_deg.value_or(d.g_deg);
    cfg.c_deg = rc.c_deg.value_or(d.c_deg);
    cfg.relation_c_deg = rc.relation_c_deg.value_or(d.relation_c_deg);
    cfg.projective = rc.projective || d.projective;
    cfg.ring = d.ring_from_center ? RingKind::central_generators : RingKind::casimirs;
    cfg.budget_terms = rc.budget_terms;
    cfg.progress = progress;
    return cfg;
}

Output cmd_validate(const RunConfig& rc) {
    LieAlgebra L = source_algebra(rc, false);
    auto failures = L.validate();
    int count = L.invariant_count();
    if (rc.text) {
        std::ostringstream os;
        os << "algebra " << L.name() << ", dim " << L.dim() << "\n";
        os << "center:";
        for (int c : L.center()) os << " X" << c;
        os << "\ninvariant count " << count << "\n";
        if (failures.empty()) os << "Jacobi identity holds\n";
        for (const auto& f : failures)
            os << "Jacobi fails for (" << f.i << "," << f.j << "," << f.k << ")\n";
        return {os.str(), failures.empty() ? kOk : kDomain};
    }
    json fj = json::array();
    for (const auto& f : failures) {
        json res = json::array();
        for (const auto& t : f.residual) res.push_back({{"k", t.k}, {"coefficient", t.c.str()}});
        fj.push_back({{"triple", {f.i, f.j, f.k}}, {"residual", res}});
    }
    json j{{"algebra", L.name()},
           {"dim", L.dim()},
           {"center", L.center()},
           {"invariant_count", count},
           {"jacobi_failures", fj},
           {"valid", failures.empty()}};
    return {render_json(j), failures.empty() ? kOk : kDomain};
}

Output cmd_invariants(const RunConfig& rc) {
    LieAlgebra L = source_algebra(rc);
    int p = rc.max_degree.value_or(4);
    Uea U(L, 1, UeaOptions{rc.budget_terms});
    auto basis = polynomial_invariants(L, p);
    auto gens = all_generators(U);
    json inv = json::array();
    std::ostringstream os;
    os << "algebra " << L.name() << ", invariants up to degree " << p << "\n";
    for (const auto& F : basis.polys) {
        NCPoly op = U.symmetrize(F, 1);
        if (rc.center_reduce) op = U.reduce_mod_center(op);
        bool commutes = casimir_check(U, op, gens);
        inv.push_back({{"degree", F.total_degree()},
                       {"polynomial", F.str()},
                       {"operator", U.render(op)},
                       {"commutes", commutes}});
        os << "  degree " << F.total_degree() << ": " << F.str() << "\n    operator " << U.render(op) << "\n";
    }
    json j{{"algebra", L.name()}, {"max_degree", p}, {"invariants", inv}};
    if (!rc.catalog.empty()) {
        // published forms against the computed space, degree by degree
        auto vars = coordinate_names(L.dim());
        json cat = json::array();
        for (const auto& c : catalog_entry(rc.catalog).casimirs) {
            CommPoly F = parse_commpoly(vars, c.pattern);
            int deg = F.total_degree();
            bool in_span = false;
            if (deg <= p) {
                auto space = invariant_space(L, deg);
                auto monos = monomials_up_to(L.dim(), 1, deg);
                std::map<Exponents, int> col;
                for (int k = 0; k < static_cast<int>(monos.size()); ++k) col[monos[k]] = k;
                Echelon E(static_cast<int>(monos.size()));
                auto vec = [&](const CommPoly& q) {
                    SparseVec v;
                    for (const auto& [e, r] : q.terms()) v.emplace_back(col.at(e), r);
                    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
                    return v;
                };
                for (const auto& s : space) E.insert(vec(s));
                in_span = E.reduce(vec(F)).empty();
            }
            cat.push_back({{"polynomial", c.pattern}, {"operator", c.op}, {"in_span", in_span}});
            os << "  published " << c.pattern << (in_span ? " (in span)" : " (NOT in span)") << "\n";
        }
        j["catalog"] = cat;
    }
    return {rc.text ? os.str() : render_json(j), kOk};
}

Output cmd_intermediates(const RunConfig& rc) {
    LieAlgebra L = source_algebra(rc);
    Uea U(L, rc.copies, UeaOptions{rc.budget_terms});
    auto fams = families(rc, L);
    std::vector<NCPoly> lifted;
    for (const auto& f : fams) lifted.push_back(U.map_generators(f, VirtualCopy::copy_images(U, 1)));
    auto elems = intermediate_casimirs(U, lifted, all_subsets(rc.copies));
    json ij = json::array(), table = json::array();
    std::ostringstream os;
    os << "algebra " << L.name() << ", " << rc.copies << " copies\n";
    for (const auto& e : elems) {
        ij.push_back({{"label", e.label}, {"value", U.render(e.value)}});
        os << e.label << " = " << U.render(e.value) << "\n";
    }
    os << "nonzero commutators:\n";
    for (std::size_t a = 0; a < elems.size(); ++a)
        for (std::size_t b = a + 1; b < elems.size(); ++b) {
            NCPoly c = U.commutator(elems[a].value, elems[b].value);
            json row{{"left", elems[a].label}, {"right", elems[b].label}, {"zero", c.is_zero()}, {"terms", c.size()}};
            if (!c.is_zero()) {
                row["value"] = U.render(c);
                os << "  [" << elems[a].label << "," << elems[b].label << "]: " << c.size() << " terms\n";
            }
            table.push_back(row);
        }
    json j{{"algebra", L.name()}, {"copies", rc.copies}, {"intermediates", ij}, {"commutators", table}};
    return {rc.text ? os.str() : render_json(j), kOk};
}

Output closure_output(const RunConfig& rc, ClosureEngine& engine) {
    ClosureReport rep = engine.run();
    int code = rep.verdict == "budget-exceeded" ? kBudget : kOk;
    return {rc.text ? rep.to_text() : render_json(rep.to_json(engine.uea())), code};
}

Output cmd_close(const RunConfig& rc) {
    LieAlgebra L = source_algebra(rc);
    auto fams = families(rc, L);
    if (fams.empty()) throw ValidationError("no Casimir operators of degree >= 2 to build intermediates from");
    ClosureEngine engine(L, fams, closure_config(rc, L));
    return closure_output(rc, engine);
}

Output cmd_realization(const RunConfig& rc) {
    auto spec = realization_from_json(read_json_file(rc.file));
    json checks = json::array();
    bool all = true;
    std::ostringstream os;
    os << "realization of " << spec.algebra.name() << "\n";
    for (const auto& params : spec.parameter_sets) {
        bool ok = verify_realization(spec.algebra, spec.images(params), spec.pairs);
        all = all && ok;
        json pj = json::object();
        std::string ptxt;
        for (const auto& [k, v] : params) {
            pj[k] = v.str();
            ptxt += " " + k + "=" + v.str();
        }
        checks.push_back({{"parameters", pj}, {"valid", ok}});
        os << (ok ? "valid" : "INVALID") << (ptxt.empty() ? "" : " at" + ptxt) << "\n";
    }
    json j{{"algebra", spec.algebra.name()}, {"checks", checks}, {"valid", all}};
    return {rc.text ? os.str() : render_json(j), all ? kOk : kDomain};
}

Output cmd_virtual(const RunConfig& rc) {
    auto spec = virtual_copy_from_json(read_json_file(rc.file));
    Uea U1(spec.algebra, 1, UeaOptions{rc.budget_terms});
    VirtualCopy vc = build_virtual_copy(U1, spec);
    CommPoly pattern = parse_commpoly(coordinate_names(spec.levi.dim()), spec.pattern);
    NCPoly substituted = U1.substitute(pattern, vc.defs);
    json j{{"algebra", spec.algebra.name()},
           {"levi", spec.levi.name()},
           {"scale", U1.render(vc.scale)},
           {"embedding", true},
           {"substituted_casimir", U1.render(substituted)}};
    json rescaled = json::array();
    for (const auto& r : vc.rescaled) rescaled.push_back(U1.render(r));
    j["rescaled"] = rescaled;
    std::ostringstream os;
    os << "virtual copy of " << spec.levi.name() << " in " << spec.algebra.name() << " with scale "
       << U1.render(vc.scale) << "\n";
    os << "substituted Casimir " << U1.render(substituted) << "\n";
    if (!spec.target.empty()) {
        NCPoly target = parse_ncpoly(U1, spec.target);
        NCPoly rest = substituted - U1.multiply(vc.scale, target);
        bool central = U1.is_central_element(rest);
        j["target"] = {{"operator", U1.render(target)}, {"remainder", U1.render(rest)}, {"central", central}};
        os << "substituted - scale*target = " << U1.render(rest) << (central ? " (central)" : " (NOT central)") << "\n";
    }
    ClosureConfig cfg = closure_config(rc, spec.algebra);
    cfg.ring = RingKind::casimirs;
    cfg.g_deg = rc.g_deg.value_or(2);
    cfg.c_deg = rc.c_deg.value_or(1);
    ClosureEngine engine(spec.algebra, 1,
                         [&](const Uea& U, int, const CopySet& S) { return virtual_casimir(U, vc, pattern, S); }, cfg);
    ClosureReport rep = engine.run();
    j["closure"] = rep.to_json(engine.uea());
    os << rep.to_text();
    return {rc.text ? os.str() : render_json(j), rep.verdict == "budget-exceeded" ? kBudget : kOk};
}

Output dispatch(const RunConfig& rc) {
    bool doc_command = rc.command == "realization-check" || rc.command == "virtual-racah";
    if (doc_command && (rc.file.empty() || !rc.catalog.empty()))
        throw UsageError(rc.command + " takes --file with a definitions document");
    if (!doc_command && rc.catalog.empty() && rc.file.empty()) throw UsageError("one of --catalog or --file is required");
    if (rc.command == "validate") return cmd_validate(rc);
    if (rc.command == "invariants") return cmd_invariants(rc);
    if (rc.command == "intermediates") return cmd_intermediates(rc);
    if (rc.command == "close") return cmd_close(rc);
    if (rc.command == "realization-check") return cmd_realization(rc);
    return cmd_virtual(rc);
}

void add_common(CLI::App* sub, RunConfig& rc) {
    auto* cat = sub->add_option("--catalog", rc.catalog, "built-in algebra")->check(CLI::IsMember(catalog_names()));
    auto* file = sub->add_option("--file", rc.file, "algebra or definitions document (JSON)")->check(CLI::ExistingFile);
    cat->excludes(file);
    sub->add_option("--max-degree", rc.max_degree, "invariant degree bound")->check(CLI::PositiveNumber);
    sub->add_option("--copies", rc.copies, "number of copies")->check(CLI::Range(2, 8));
    sub->add_option("--depth-limit", rc.depth_limit, "deepest nested level to explore")->check(CLI::NonNegativeNumber);
    sub->add_option("--expr-degree", rc.g_deg, "generator degree of expressions")->check(CLI::PositiveNumber);
    sub->add_option("--central-degree", rc.c_deg, "central coefficient degree of expressions")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--relation-degree", rc.relation_c_deg, "central coefficient degree of relations")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--projective", rc.projective, "allow a central multiplier on the left");
    sub->add_flag("--center-reduce", rc.center_reduce, "drop purely central terms of Casimir operators");
    auto* js = sub->add_flag("--json", "JSON report (default)");
    auto* tx = sub->add_flag("--text", rc.text, "human-readable report");
    js->excludes(tx);
    sub->add_option("--out", rc.out, "write the report here instead of standard output");
    sub->add_option("--budget-terms", rc.budget_terms, "term cap per enveloping-algebra element")
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Casimir invariants, intermediate Casimirs and commutator closure"};
    app.require_subcommand(1);
    RunConfig rc;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"validate", "check the Jacobi identity and count invariants"},
        {"invariants", "polynomial Casimir invariants and their operators"},
        {"intermediates", "intermediate Casimirs and their commutator table"},
        {"close", "nested-commutator closure search"},
        {"realization-check", "verify a classical Poisson realization"},
        {"virtual-racah", "virtual copy of a Levi factor and its Racah closure"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, rc);
        sub->callback([&rc, name = name] { rc.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    try {
        Output out = dispatch(rc);
        if (rc.out.empty()) {
            std::cout << out.body;
        } else {
            std::ofstream f(rc.out);
            if (!f) throw UsageError("cannot write " + rc.out);
            f << out.body;
        }
        if (out.code == kBudget) std::cerr << "budget exceeded before closure was certified" << std::endl;
        return out.code;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << std::endl;
        return kBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kDomain;
    }
}
