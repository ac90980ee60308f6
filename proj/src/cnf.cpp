#include "algsat/cnf.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "algsat/diag.hpp"

namespace algsat {

namespace {

Clause normalize(Clause c) {
    std::sort(c.begin(), c.end(), [](Lit a, Lit b) {
        return lit_var(a) != lit_var(b) ? lit_var(a) < lit_var(b) : a < b;
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (size_t i = 0; i + 1 < c.size(); ++i)
        if (c[i] == -c[i + 1]) throw Error("internal: tautological clause emitted");
    return c;
}

} // namespace

std::vector<Clause> table_clauses(Var v, const std::vector<Var>& operands,
                                  const std::vector<uint8_t>& table) {
    int k = 0;
    while ((size_t(1) << k) < table.size()) ++k;
    if (table.size() != (size_t(1) << k) || size_t(k) != operands.size())
        throw Error("table_clauses: shape mismatch");

    std::vector<uint8_t> complement(table.size());
    for (size_t i = 0; i < table.size(); ++i) complement[i] = !table[i];

    Cover on = minimize_cover(table, k);
    Cover off = minimize_cover(complement, k);

    std::vector<Clause> out;
    auto emit = [&](const Cover& cov, bool polarity) {
        for (const CovCube& cube : cov.cubes) {
            Clause c;
            for (int j = 0; j < k; ++j) {
                if (!((cube.care >> j) & 1)) continue;
                bool val = (cube.value >> j) & 1;
                c.push_back(make_lit(operands[size_t(j)], !val));
            }
            c.push_back(make_lit(v, polarity));
            out.push_back(normalize(std::move(c)));
        }
    };
    emit(on, true);   // cube holds -> v
    emit(off, false); // complement cube holds -> !v
    return out;
}

TemplateCnf tseitinize(const Encoding& enc, const CnfConfig& cfg) {
    const FormulaDag& dag = enc.dag;
    TemplateCnf t;

    // reachability from outputs (cone of influence)
    std::vector<uint8_t> needed(dag.size(), cfg.prune ? 0 : 1);
    if (cfg.prune) {
        std::vector<NodeId> stack;
        for (auto& [name, id] : enc.outputs) {
            if (!needed[id]) {
                needed[id] = 1;
                stack.push_back(id);
            }
        }
        while (!stack.empty()) {
            NodeId id = stack.back();
            stack.pop_back();
            for (NodeId a : dag.node(id).operands) {
                if (!needed[a]) {
                    needed[a] = 1;
                    stack.push_back(a);
                }
            }
        }
    }

    std::vector<Var> var_of(dag.size(), 0);
    auto new_var = [&](NodeId origin) {
        t.gate_provenance.push_back(origin);
        return ++t.var_count;
    };

    // inputs first, in declaration order
    for (auto& [name, id] : enc.inputs) {
        var_of[id] = new_var(id);
        t.input_vars.push_back({name, var_of[id]});
    }

    // auxiliaries in topological node order
    for (NodeId id = 0; id < dag.size(); ++id) {
        const BoolNode& n = dag.node(id);
        if (!needed[id]) continue;
        if (n.op == Op::Const || n.op == Op::Input) continue;
        Var v = new_var(id);
        var_of[id] = v;
        auto u = [&](size_t j) { return var_of[n.operands[j]]; };
        switch (n.op) {
            case Op::Not:
                t.clauses.push_back(normalize({Lit(v), Lit(u(0))}));
                t.clauses.push_back(normalize({-Lit(v), -Lit(u(0))}));
                break;
            case Op::And: {
                Clause big{Lit(v)};
                for (size_t j = 0; j < n.operands.size(); ++j) {
                    big.push_back(-Lit(u(j)));
                    t.clauses.push_back(normalize({-Lit(v), Lit(u(j))}));
                }
                t.clauses.push_back(normalize(std::move(big)));
                break;
            }
            case Op::Or: {
                Clause big{-Lit(v)};
                for (size_t j = 0; j < n.operands.size(); ++j) {
                    big.push_back(Lit(u(j)));
                    t.clauses.push_back(normalize({Lit(v), -Lit(u(j))}));
                }
                t.clauses.push_back(normalize(std::move(big)));
                break;
            }
            case Op::Xor: {
                Var a = u(0), b = u(1);
                t.clauses.push_back(normalize({-Lit(v), Lit(a), Lit(b)}));
                t.clauses.push_back(normalize({-Lit(v), -Lit(a), -Lit(b)}));
                t.clauses.push_back(normalize({Lit(v), -Lit(a), Lit(b)}));
                t.clauses.push_back(normalize({Lit(v), Lit(a), -Lit(b)}));
                break;
            }
            case Op::Ite: {
                Var c = u(0), th = u(1), el = u(2);
                t.clauses.push_back(normalize({-Lit(v), -Lit(c), Lit(th)}));
                t.clauses.push_back(normalize({Lit(v), -Lit(c), -Lit(th)}));
                t.clauses.push_back(normalize({-Lit(v), Lit(c), Lit(el)}));
                t.clauses.push_back(normalize({Lit(v), Lit(c), -Lit(el)}));
                if (cfg.ite_extra) {
                    t.clauses.push_back(normalize({Lit(v), -Lit(th), -Lit(el)}));
                    t.clauses.push_back(normalize({-Lit(v), Lit(th), Lit(el)}));
                }
                break;
            }
            case Op::Table: {
                std::vector<Var> ops;
                for (size_t j = 0; j < n.operands.size(); ++j) ops.push_back(u(j));
                for (Clause& c : table_clauses(v, ops, dag.table(n)))
                    t.clauses.push_back(std::move(c));
                break;
            }
            default:
                throw Error("internal: unexpected node kind in tseitinize");
        }
    }

    // Outputs: every output bit gets its own variable in V (never an input
    // variable and never shared with another output), so downstream unit
    // constraints and collision links always have a dedicated handle.
    std::vector<uint8_t> used_as_output(t.var_count + 1, 0);
    for (auto& [name, id] : enc.outputs) {
        const BoolNode& n = dag.node(id);
        Var v = 0;
        if (n.op == Op::Const) {
            v = new_var(id);
            used_as_output.resize(t.var_count + 1, 0);
            t.clauses.push_back({make_lit(v, dag.const_value(id) != 0)});
        } else if (n.op == Op::Input || used_as_output[var_of[id]]) {
            Var u0 = var_of[id];
            v = new_var(id);
            used_as_output.resize(t.var_count + 1, 0);
            t.clauses.push_back(normalize({Lit(v), -Lit(u0)}));
            t.clauses.push_back(normalize({-Lit(v), Lit(u0)}));
        } else {
            v = var_of[id];
            used_as_output[v] = 1;
        }
        t.output_vars.push_back({name, v});
    }

    for (auto& [key, id] : enc.trace) {
        if (var_of[id] != 0) t.trace_vars[key] = var_of[id];
    }
    t.last_occurrence = enc.last_occurrence;
    return t;
}

Var TemplateCnf::resolve_trace(const std::string& ref) const {
    std::string base;
    int occ;
    if (!parse_trace_ref(ref, base, occ))
        throw Error("malformed trace reference '" + ref + "'");
    if (occ < 0) {
        auto it = last_occurrence.find(base);
        if (it != last_occurrence.end()) occ = it->second;
        else occ = 0;
    }
    std::string key = base + "@" + std::to_string(occ);
    auto it = trace_vars.find(key);
    if (it != trace_vars.end()) return it->second;
    std::string msg = "unknown trace point '" + ref + "'";
    std::vector<std::string> near;
    for (auto& [k, v] : trace_vars) {
        (void)v;
        if (k.compare(0, base.size(), base) == 0) {
            near.push_back(k);
            if (near.size() >= 5) break;
        }
    }
    if (near.empty()) {
        auto lo = trace_vars.lower_bound(key);
        for (int i = 0; i < 3 && lo != trace_vars.end(); ++i, ++lo) near.push_back(lo->first);
    }
    if (!near.empty()) {
        msg += "; nearest:";
        for (auto& k : near) msg += " " + k;
    }
    throw Error(msg);
}

void emit_dimacs(const TemplateCnf& t, std::ostream& os) {
    for (auto& [name, v] : t.input_vars) os << "c in " << name << ' ' << v << '\n';
    for (auto& [name, v] : t.output_vars) os << "c out " << name << ' ' << v << '\n';
    os << "p cnf " << t.var_count << ' ' << t.clauses.size() << '\n';
    for (const Clause& c : t.clauses) {
        for (Lit l : c) os << l << ' ';
        os << "0\n";
    }
}

void write_dimacs_file(const TemplateCnf& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    emit_dimacs(t, out);
}

std::string map_to_json(const TemplateCnf& t) {
    nlohmann::json j;
    j["var_count"] = t.var_count;
    auto pairs = [](const std::vector<std::pair<std::string, Var>>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto& [name, var] : v) arr.push_back({name, var});
        return arr;
    };
    j["inputs"] = pairs(t.input_vars);
    j["outputs"] = pairs(t.output_vars);
    nlohmann::json trace = nlohmann::json::object();
    for (auto& [k, v] : t.trace_vars) trace[k] = v;
    j["trace"] = trace;
    nlohmann::json occ = nlohmann::json::object();
    for (auto& [k, v] : t.last_occurrence) occ[k] = v;
    j["last_occurrence"] = occ;
    return j.dump(1) + "\n";
}

void write_map_file(const TemplateCnf& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << map_to_json(t);
}

TemplateCnf read_template(const std::string& cnf_path, const std::string& map_path) {
    TemplateCnf t;
    std::ifstream in(cnf_path);
    if (!in) throw Error("cannot open file: " + cnf_path);
    std::string line;
    size_t expected_clauses = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == 'c') continue;
        if (line[0] == 'p') {
            std::istringstream ss(line);
            std::string p, cnf;
            ss >> p >> cnf >> t.var_count >> expected_clauses;
            continue;
        }
        std::istringstream ss(line);
        Clause c;
        Lit l;
        while (ss >> l && l != 0) c.push_back(l);
        if (!c.empty()) t.clauses.push_back(std::move(c));
    }
    if (expected_clauses && t.clauses.size() != expected_clauses)
        throw Error("clause count mismatch in " + cnf_path);

    std::ifstream mf(map_path);
    if (!mf) throw Error("cannot open file: " + map_path);
    nlohmann::json j;
    mf >> j;
    t.var_count = std::max<Var>(t.var_count, j["var_count"].get<Var>());
    for (auto& e : j["inputs"]) t.input_vars.push_back({e[0].get<std::string>(), e[1].get<Var>()});
    for (auto& e : j["outputs"]) t.output_vars.push_back({e[0].get<std::string>(), e[1].get<Var>()});
    for (auto& [k, v] : j["trace"].items()) t.trace_vars[k] = v.get<Var>();
    if (j.contains("last_occurrence"))
        for (auto& [k, v] : j["last_occurrence"].items()) t.last_occurrence[k] = v.get<int>();
    return t;
}

} // namespace algsat
