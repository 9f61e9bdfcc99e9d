#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "forms/ainfty.hpp"

namespace forms::cli {

// exit conventions shared by every subcommand: 0 success, 1 bad input or a
// failed check, 2 usage error, 3 the requested construction does not exist on
// this topology
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTopology = 3;

struct CmdResult {
    int status = kExitOk;
    std::string out;   // human-readable report
    std::string json;  // machine-readable report (verify only)
};

// ---------------------------------------------------------------------------
// complex input
// ---------------------------------------------------------------------------

// a complex is given by its maximal simplexes: {"maximal": [[1,2,3],[2,4]]};
// every vertex must be listed once per simplex and fit in the bitmask
inline OrderedComplex complex_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("parse error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("maximal") || !doc["maximal"].is_array())
        throw std::runtime_error("parse error: expected an object with a \"maximal\" array");
    std::vector<std::vector<int>> maximal;
    for (const auto& entry : doc["maximal"]) {
        if (!entry.is_array()) throw std::runtime_error("parse error: simplex must be an array");
        std::vector<int> verts;
        for (const auto& v : entry) {
            if (!v.is_number_integer())
                throw std::runtime_error("parse error: vertex must be an integer");
            const int x = v.get<int>();
            if (x < 1 || x > 62)
                throw std::runtime_error("bad vertex " + std::to_string(x) +
                                         ": must be between 1 and 62");
            for (int y : verts)
                if (y == x)
                    throw std::runtime_error("duplicate vertex " + std::to_string(x) +
                                             " in one simplex");
            verts.push_back(x);
        }
        if (verts.empty()) throw std::runtime_error("parse error: empty simplex entry");
        maximal.push_back(std::move(verts));
    }
    if (maximal.empty()) throw std::runtime_error("parse error: no maximal simplexes");
    return OrderedComplex::from_maximal(maximal);
}

inline OrderedComplex complex_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return complex_from_json_text(buf.str());
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

inline std::string census_line(const OrderedComplex& M) {
    std::ostringstream out;
    out << M.members().size() << " simplexes: ";
    bool first = true;
    for (const auto& [dim, count] : M.counts_by_dim()) {
        if (!first) out << ", ";
        first = false;
        if (dim < 0)
            out << count << "×∅";
        else
            out << count << "×" << dim << "d";
    }
    return out.str();
}

inline CmdResult cmd_validate_text(const std::string& text) {
    try {
        const OrderedComplex M = complex_from_json_text(text);
        return {kExitOk, census_line(M) + "\n", ""};
    } catch (const std::exception& e) {
        return {kExitError, std::string("error: ") + e.what() + "\n", ""};
    }
}

inline CmdResult cmd_validate(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {kExitError, "error: cannot open " + path + "\n", ""};
    std::ostringstream buf;
    buf << in.rdbuf();
    return cmd_validate_text(buf.str());
}

// ---------------------------------------------------------------------------
// operator dumps
// ---------------------------------------------------------------------------

namespace detail {

inline Rat form_coeff(const Chain& x, Simplex s) {
    auto it = x.terms.find(Tuple::single(s));
    return it == x.terms.end() ? Rat(0) : it->second;
}

inline Rat tuple_coeff(const Chain& x, const Tuple& t) {
    auto it = x.terms.find(t);
    return it == x.terms.end() ? Rat(0) : it->second;
}

template <class Label, class Entry>
std::string matrix_dump(const std::vector<Label>& rows, const std::vector<Label>& cols,
                        const std::function<std::string(const Label&)>& label,
                        const Entry& entry) {
    std::ostringstream out;
    out << "rows:";
    for (const auto& r : rows) out << " " << label(r);
    out << "\ncols:";
    for (const auto& c : cols) out << " " << label(c);
    out << "\n";
    for (const auto& r : rows) {
        bool first = true;
        for (const auto& c : cols) {
            if (!first) out << " ";
            first = false;
            out << entry(r, c);
        }
        out << "\n";
    }
    return out.str();
}

inline std::optional<Simplex> parse_simplex(const std::string& text) {
    Simplex s = kEmptySimplex;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size() || v < 1 || v > 62) return std::nullopt;
            s |= (Simplex{1} << v);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return s;
}

}  // namespace detail

// prints the exact matrix of one operator block in the canonical basis order,
// with labeled rows and columns; "wedge" lists the nonzero products instead
inline CmdResult cmd_operator(const OrderedComplex& M, const std::string& which, int degree,
                              int grade, const std::string& sigma_text,
                              const std::string& tau_text) {
    const Calc c(M);
    const auto slabel = [](const Simplex& s) { return simplex_str(s); };
    const auto tlabel = [](const Tuple& t) { return tuple_str(t); };

    if (which == "d" || which == "del" || which == "laplace") {
        if (degree < -1 || degree > M.max_dim())
            return {kExitUsage, "usage error: no forms of degree " + std::to_string(degree) + "\n",
                    ""};
        const std::vector<Simplex> cols = M.forms_of_degree(degree);
        std::vector<Simplex> rows;
        std::function<Chain(Simplex)> image;
        if (which == "d") {
            rows = M.forms_of_degree(degree + 1);
            image = [&c](Simplex s) { return c.d_form(s); };
        } else if (which == "del") {
            rows = M.forms_of_degree(degree - 1);
            image = [&c](Simplex s) { return c.del_form(s); };
        } else {
            rows = cols;
            image = [&c](Simplex s) { return fock_laplace(c, Tuple::single(s)); };
        }
        const auto entry = [&](const Simplex& r, const Simplex& col) {
            std::ostringstream v;
            v << detail::form_coeff(image(col), r);
            return v.str();
        };
        return {kExitOk,
                detail::matrix_dump<Simplex>(rows, cols, std::function<std::string(const Simplex&)>(slabel), entry),
                ""};
    }

    if (which == "laplace-loc") {
        const auto sigma = detail::parse_simplex(sigma_text);
        const auto tau = detail::parse_simplex(tau_text);
        if (!sigma || !tau || !M.contains(*sigma) || (*tau & ~*sigma) != 0)
            return {kExitUsage, "usage error: bad --sigma/--tau block\n", ""};
        if (grade < 1 || grade > kMaxGrade)
            return {kExitUsage, "usage error: bad --grade\n", ""};
        const std::vector<Tuple> basis = enumerate_basis(M, grade, *sigma, *tau);
        if (basis.empty()) return {kExitUsage, "usage error: empty block\n", ""};
        const auto entry = [&](const Tuple& r, const Tuple& col) {
            std::ostringstream v;
            v << detail::tuple_coeff(laplace_loc(c, col), r);
            return v.str();
        };
        return {kExitOk,
                detail::matrix_dump<Tuple>(basis, basis, std::function<std::string(const Tuple&)>(tlabel), entry),
                ""};
    }

    if (which == "wedge") {
        std::ostringstream out;
        for (Simplex a : M.members())
            for (Simplex b : M.members()) {
                const Chain& w = c.wedge_pair(a, b);
                if (w.zero()) continue;
                out << simplex_str(a) << " ∧ " << simplex_str(b) << " = ";
                bool first = true;
                for (const auto& [t, cf] : w.terms) {
                    if (!first) out << " + ";
                    first = false;
                    out << cf << "·" << simplex_str(t[0]);
                }
                out << "\n";
            }
        return {kExitOk, out.str(), ""};
    }

    return {kExitUsage, "usage error: unknown operator " + which + "\n", ""};
}

inline CmdResult cmd_operator(const std::string& path, const std::string& which, int degree,
                              int grade, const std::string& sigma_text,
                              const std::string& tau_text) {
    try {
        return cmd_operator(complex_from_file(path), which, degree, grade, sigma_text, tau_text);
    } catch (const std::exception& e) {
        return {kExitError, std::string("error: ") + e.what() + "\n", ""};
    }
}

// ---------------------------------------------------------------------------
// symbolic coefficient tables
// ---------------------------------------------------------------------------

struct FormulaTerm {
    Rat coeff;
    std::vector<Simplex> args;  // one basis simplex per slot, on vertices 1..N

    bool operator==(const FormulaTerm&) const = default;
};

struct FormulaTable {
    std::string operation;
    std::vector<int> signature;
    int vertices = 0;  // N: the table lives on the closed (N-1)-simplex
    std::vector<FormulaTerm> terms;

    bool operator==(const FormulaTable&) const = default;
};

namespace detail {

// evaluates the operation on every basis tuple of the closed simplex on the
// given vertex set and keeps the coefficient of the top cell
inline std::vector<FormulaTerm> formula_terms(const std::string& op,
                                              const std::vector<int>& signature, Simplex top,
                                              const OrderedComplex& M) {
    const Calc c(M);
    Tower tw(c, Flavor::local, 4);
    const int arity = static_cast<int>(signature.size());
    const Tuple top_tuple = Tuple::single(top);

    std::vector<std::vector<Simplex>> choices(arity);
    for (int i = 0; i < arity; ++i)
        for (Simplex s : M.forms_of_degree(signature[i]))
            if ((s & ~top) == 0) choices[i].push_back(s);

    std::vector<FormulaTerm> terms;
    std::vector<int> pick(arity, 0);
    for (;;) {
        Tuple e;
        e.len = static_cast<std::uint8_t>(arity);
        Simplex cover = kEmptySimplex;
        for (int i = 0; i < arity; ++i) {
            e.s[i] = choices[i][pick[i]];
            cover |= e.s[i];
        }
        if (cover == top) {
            Chain img(1);
            if (op == "wedge")
                img = c.wedge_pair(e[0], e[1]);
            else if (op == "assoc") {
                img = wedge(c, unit_chain(Tuple::single(e[0])), c.wedge_pair(e[1], e[2]));
                img -= wedge(c, c.wedge_pair(e[0], e[1]), unit_chain(Tuple::single(e[2])));
            }
            else if (op == "m3")
                img = tw.m(3, e);
            else
                img = tw.m(4, e);
            const Rat cf = tuple_coeff(img, top_tuple);
            if (cf != 0) {
                FormulaTerm t{cf, {}};
                for (int i = 0; i < arity; ++i) t.args.push_back(e[i]);
                terms.push_back(std::move(t));
            }
        }
        int i = arity - 1;
        while (i >= 0 && pick[i] + 1 == static_cast<int>(choices[i].size())) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
    }
    return terms;
}

inline std::string monomial_str(const std::vector<Simplex>& args) {
    static const char* kVertexNames = "ijklmnopq";
    static const char* kSlotNames = "abcd";
    std::string out;
    for (size_t i = 0; i < args.size(); ++i) {
        out += kSlotNames[i];
        out += '(';
        bool first = true;
        for (int v : vertices_of(args[i])) {
            if (!first) out += ',';
            first = false;
            out += kVertexNames[v - 1];
        }
        out += ')';
    }
    return out;
}

}  // namespace detail

// builds the smallest closed simplex admitting the signature, tabulates the
// top-cell coefficients of the operation over symbolic basis cochains, and
// re-derives the table one vertex up to confirm it does not depend on the
// ambient complex
inline CmdResult cmd_formula(const std::string& op, const std::vector<int>& signature) {
    const std::map<std::string, std::pair<int, int>> ops = {
        {"wedge", {2, 0}}, {"assoc", {3, 0}}, {"m3", {3, -1}}, {"m4", {4, -2}}};
    const auto it = ops.find(op);
    if (it == ops.end()) return {kExitUsage, "usage error: unknown operation " + op + "\n", ""};
    const auto [arity, degree_shift] = it->second;
    if (static_cast<int>(signature.size()) != arity)
        return {kExitUsage,
                "usage error: " + op + " takes " + std::to_string(arity) + " degrees\n", ""};
    int out_deg = degree_shift;
    for (int d : signature) {
        if (d < 0) return {kExitUsage, "usage error: negative degree\n", ""};
        out_deg += d;
    }
    const int n_verts = out_deg + 1;
    if (n_verts < 1 || n_verts > 8)
        return {kExitUsage, "usage error: infeasible signature\n", ""};
    for (int d : signature)
        if (d > n_verts - 1) return {kExitUsage, "usage error: infeasible signature\n", ""};

    std::vector<int> base(n_verts);
    for (int i = 0; i < n_verts; ++i) base[i] = i + 1;
    const OrderedComplex M = OrderedComplex::from_maximal({base});
    Simplex top = kEmptySimplex;
    for (int v : base) top |= (Simplex{1} << v);
    const auto terms = detail::formula_terms(op, signature, top, M);

    // the same table must come out of the next closed simplex up
    std::vector<int> bigger(n_verts + 1);
    for (int i = 0; i <= n_verts; ++i) bigger[i] = i + 1;
    const OrderedComplex M2 = OrderedComplex::from_maximal({bigger});
    if (detail::formula_terms(op, signature, top, M2) != terms)
        return {kExitError, "error: table depends on the ambient complex\n", ""};

    std::ostringstream out;
    out << op << " (";
    for (size_t i = 0; i < signature.size(); ++i) out << (i ? "," : "") << signature[i];
    out << ") on " << n_verts << " vertices\n";
    if (terms.empty()) out << "0\n";
    for (const auto& t : terms) out << t.coeff << "·" << detail::monomial_str(t.args) << "\n";
    return {kExitOk, out.str(), ""};
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace detail {

inline void run_form_check(const Calc& c, std::vector<CheckResult>& checks, const char* name,
                           const std::function<Chain(const Tuple&)>& defect, int grade) {
    CheckResult res{name, grade};
    for (const Tuple& e : enumerate_basis(c.complex(), grade)) {
        ++res.basis_count;
        const Chain d = defect(e);
        if (!d.zero()) res.fail(e, d);
    }
    checks.push_back(std::move(res));
}

}  // namespace detail

// runs the whole exact invariant suite on one complex: structural identities,
// local homotopy identities, source closure, and the defining relations of
// the tower for the chosen flavor
inline CmdResult cmd_verify(const OrderedComplex& M, const std::string& label, int p_max,
                            const std::string& flavor_text) {
    Flavor flavor;
    try {
        flavor = flavor_of(flavor_text);
    } catch (const std::exception& e) {
        return {kExitUsage, std::string("usage error: ") + e.what() + "\n", ""};
    }
    if (p_max < 1 || p_max > kMaxGrade)
        return {kExitUsage, "usage error: bad --p-max\n", ""};

    const Calc c(M);
    Tower tw(c, flavor, std::max(p_max, 2));
    std::vector<CheckResult> checks;

    try {
        detail::run_form_check(
            c, checks, "d squared",
            [&](const Tuple& e) { return fock_d(c, fock_d(c, e)); }, 1);
        detail::run_form_check(
            c, checks, "del squared",
            [&](const Tuple& e) { return fock_del(c, fock_del(c, e)); }, 1);
        for (int p = 1; p <= p_max; ++p) {
            detail::run_form_check(
                c, checks, "local d squared",
                [&](const Tuple& e) { return strict_d(c, strict_d(c, e)); }, p);
            checks.push_back(verify_plusminus(c, p));
            detail::run_form_check(
                c, checks, "local K squared",
                [&](const Tuple& e) { return local_K(c, local_K(c, e)); }, p);
            CheckResult hom{"local homotopy below the top eigenvalue", p};
            for (const Tuple& e : enumerate_basis(M, p)) {
                if (!envelope(M, e.s.data(), p)) continue;
                const auto fi = free_info(M, e.s.data(), p);
                if (fi.k == fi.n) continue;
                ++hom.basis_count;
                Chain total = strict_d(c, local_K(c, e));
                total += local_K(c, strict_d(c, e));
                total -= unit_chain(e);
                if (!total.zero()) hom.fail(e, total);
            }
            checks.push_back(std::move(hom));
        }
        for (int p = 3; p <= p_max; ++p) checks.push_back(verify_consistency(tw, p));
        for (int n = 1; n <= p_max; ++n)
            for (int g = 1; g <= p_max; ++g) checks.push_back(verify_relation(tw, n, g));
    } catch (const TopologyError& e) {
        return {kExitTopology, std::string("topology error: ") + e.what() + "\n", ""};
    }

    std::ostringstream out;
    nlohmann::ordered_json report;
    report["schema"] = 1;
    report["complex"] = label;
    report["flavor"] = flavor_name(flavor);
    report["p_max"] = p_max;
    report["checks"] = nlohmann::ordered_json::array();
    int failed = 0;
    for (const CheckResult& r : checks) {
        nlohmann::ordered_json item;
        item["name"] = r.name;
        item["grade"] = r.grade;
        item["basis_count"] = r.basis_count;
        item["pass"] = r.pass;
        if (!r.pass) item["counterexample"] = r.counterexample;
        report["checks"].push_back(std::move(item));
        out << (r.pass ? "ok  " : "FAIL") << "  " << r.name << "  grade=" << r.grade
            << " basis=" << r.basis_count << "\n";
        if (!r.pass) {
            if (failed == 0) out << "      first counterexample: " << r.counterexample << "\n";
            ++failed;
        }
    }
    if (failed == 0)
        out << "all " << checks.size() << " checks passed\n";
    else
        out << failed << " of " << checks.size() << " checks failed\n";
    return {failed == 0 ? kExitOk : kExitError, out.str(), report.dump(2) + "\n"};
}

inline CmdResult cmd_verify(const std::string& path, int p_max, const std::string& flavor_text) {
    try {
        return cmd_verify(complex_from_file(path), path, p_max, flavor_text);
    } catch (const std::exception& e) {
        return {kExitError, std::string("error: ") + e.what() + "\n", ""};
    }
}

}  // namespace forms::cli
