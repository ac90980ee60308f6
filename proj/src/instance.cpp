#include "algsat/instance.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "algsat/diag.hpp"
#include "algsat/sema.hpp"

namespace algsat {

void Instance::assume(Lit l) {
    if (assumes(l)) return;
    if (assumes(-l))
        throw Error("conflicting assumption on variable " + std::to_string(lit_var(l)));
    if (lit_var(l) > var_count())
        throw Error("assumption variable " + std::to_string(lit_var(l)) + " out of range");
    assumptions.push_back(l);
}

bool Instance::assumes(Lit l) const {
    return std::find(assumptions.begin(), assumptions.end(), l) != assumptions.end();
}

void Instance::emit_dimacs(std::ostream& os) const {
    if (!label.empty()) os << "c instance " << label << '\n';
    for (auto& [name, v] : base->input_vars) os << "c in " << name << ' ' << v << '\n';
    for (auto& [name, v] : base->output_vars) os << "c out " << name << ' ' << v << '\n';
    size_t n_clauses = base->clauses.size() + extra_clauses.size() + assumptions.size();
    os << "p cnf " << var_count() << ' ' << n_clauses << '\n';
    for (const Clause& c : base->clauses) {
        for (Lit l : c) os << l << ' ';
        os << "0\n";
    }
    for (const Clause& c : extra_clauses) {
        for (Lit l : c) os << l << ' ';
        os << "0\n";
    }
    for (Lit l : assumptions) os << l << " 0\n";
}

void Instance::write_dimacs_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    emit_dimacs(out);
}

Instance inversion_instance(std::shared_ptr<const TemplateCnf> tpl, const BitVec& y) {
    if (y.size() != tpl->output_vars.size())
        throw Error("inversion_instance: output length " + std::to_string(y.size()) +
                    " does not match template (" + std::to_string(tpl->output_vars.size()) + ")");
    Instance inst;
    inst.base = std::move(tpl);
    inst.label = "invert";
    for (size_t i = 0; i < y.size(); ++i)
        inst.assume(make_lit(inst.base->output_vars[i].second, y[i] != 0));
    return inst;
}

namespace {

// input reference: exact name, or decimal 0-based ordinal
size_t find_input(const TemplateCnf& tpl, const std::string& ref) {
    if (!ref.empty() && std::all_of(ref.begin(), ref.end(), [](char c) { return std::isdigit(uint8_t(c)); })) {
        size_t idx = std::stoull(ref);
        if (idx >= tpl.input_vars.size())
            throw Error("input ordinal " + ref + " out of range");
        return idx;
    }
    for (size_t i = 0; i < tpl.input_vars.size(); ++i)
        if (tpl.input_vars[i].first == ref) return i;
    throw Error("unknown input variable '" + ref + "'");
}

} // namespace

Instance fix_guessing_bits(Instance inst, const std::vector<std::string>& names_or_indices,
                           const BitVec& values) {
    if (names_or_indices.size() != values.size())
        throw Error("fix_guessing_bits: name/value count mismatch");
    std::unordered_set<Var> fixed;
    for (size_t i = 0; i < names_or_indices.size(); ++i) {
        Var v = inst.base->input_vars[find_input(*inst.base, names_or_indices[i])].second;
        if (!fixed.insert(v).second)
            throw Error("duplicate guessing bit '" + names_or_indices[i] + "'");
        inst.assume(make_lit(v, values[i] != 0));
    }
    inst.label += std::to_string(names_or_indices.size());
    return inst;
}

Instance fix_guessing_bits_prefix(Instance inst, size_t k, const BitVec& x) {
    if (k > inst.base->input_vars.size() || k > x.size())
        throw Error("fix_guessing_bits_prefix: k out of range");
    std::vector<std::string> names;
    BitVec vals;
    for (size_t i = 0; i < k; ++i) {
        names.push_back(inst.base->input_vars[i].first);
        vals.push_back(x[i]);
    }
    return fix_guessing_bits(std::move(inst), names, vals);
}

// --- cubes -------------------------------------------------------------------

CubeStream::CubeStream(std::vector<Var> vars, CubeMode mode, uint64_t sample_count, uint64_t seed)
    : vars_(std::move(vars)), mode_(mode), seed_(seed) {
    size_t k = vars_.size();
    if (mode_ == CubeMode::Enumerate) {
        if (k > 40) throw Error("enumerate mode rejects decomposition sets larger than 40");
        total_ = k == 0 ? 1 : (uint64_t(1) << k);
    } else {
        if (k > 63) throw Error("decomposition set too large to sample");
        uint64_t space = k == 0 ? 1 : (uint64_t(1) << k);
        if (sample_count > space)
            throw Error("sample count exceeds cube space");
        total_ = sample_count;
        BitRng rng(seed_);
        std::unordered_set<uint64_t> chosen;
        samples_.reserve(sample_count);
        while (samples_.size() < sample_count) {
            uint64_t v = rng.next_below(space);
            if (chosen.insert(v).second) samples_.push_back(v);
        }
    }
}

std::optional<Cube> CubeStream::next() {
    if (index_ >= total_) return std::nullopt;
    uint64_t pattern = mode_ == CubeMode::Enumerate ? index_ : samples_[size_t(index_)];
    ++index_;
    Cube c;
    size_t k = vars_.size();
    c.literals.reserve(k);
    for (size_t j = 0; j < k; ++j) {
        bool value = (pattern >> (k - 1 - j)) & 1; // first variable most significant
        c.literals.push_back(make_lit(vars_[j], value));
    }
    return c;
}

void CubeStream::reset() { index_ = 0; }

CubeStream make_partition(const Instance& inst, const std::vector<std::string>& set_refs,
                          CubeMode mode, uint64_t sample_count, uint64_t seed) {
    std::vector<Var> vars;
    std::unordered_set<Var> dedup;
    for (const std::string& r : set_refs) {
        Var v = inst.base->input_vars[find_input(*inst.base, r)].second;
        if (!dedup.insert(v).second)
            throw Error("decomposition set repeats input '" + r + "'");
        vars.push_back(v);
    }
    return CubeStream(std::move(vars), mode, sample_count, seed);
}

void write_icnf(std::ostream& os, CubeStream& cubes) {
    os << "p inccnf\n";
    while (auto c = cubes.next()) {
        os << 'a';
        for (Lit l : c->literals) os << ' ' << l;
        os << " 0\n";
    }
}

std::vector<Cube> read_icnf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::vector<Cube> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != 'a') continue;
        std::istringstream ss(line.substr(1));
        Cube c;
        Lit l;
        while (ss >> l && l != 0) c.literals.push_back(l);
        out.push_back(std::move(c));
    }
    return out;
}

// --- conditions ---------------------------------------------------------------

namespace {

struct Ref {
    CopySel copy = CopySel::Both;
    std::string text; // trace ref without the copy prefix
};

Ref parse_copy_ref(const std::string& s) {
    Ref r;
    if (s.rfind("1:", 0) == 0) {
        r.copy = CopySel::First;
        r.text = s.substr(2);
    } else if (s.rfind("2:", 0) == 0) {
        r.copy = CopySel::Second;
        r.text = s.substr(2);
    } else {
        r.text = s;
    }
    return r;
}

uint32_t parse_hex32(const std::string& s, int line) {
    if (s.rfind("0x", 0) != 0 && s.rfind("0X", 0) != 0)
        throw Error("line " + std::to_string(line) + ": expected 0x-prefixed constant, got '" + s + "'");
    return uint32_t(std::stoull(s.substr(2), nullptr, 16));
}

} // namespace

std::vector<BitCondition> parse_conditions(const std::string& text) {
    std::vector<BitCondition> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::string verb;
        if (!(ss >> verb)) continue;
        BitCondition c;
        c.line = lineno;
        auto need = [&](std::string& dst) {
            if (!(ss >> dst))
                throw Error("line " + std::to_string(lineno) + ": missing field after '" + verb + "'");
        };
        if (verb == "fix") {
            std::string ref, val;
            need(ref);
            need(val);
            Ref r = parse_copy_ref(ref);
            c.kind = BitCondition::Kind::Fix;
            c.copy = r.copy;
            c.target_a = r.text;
            if (val != "0" && val != "1")
                throw Error("line " + std::to_string(lineno) + ": fix value must be 0 or 1");
            c.value = val == "1";
        } else if (verb == "fixrange") {
            std::string ref, val;
            need(ref);
            need(val);
            Ref r = parse_copy_ref(ref);
            auto lb = r.text.find("[");
            auto dots = r.text.find("..");
            auto rb = r.text.find("]", dots == std::string::npos ? 0 : dots);
            if (lb == std::string::npos || dots == std::string::npos || rb == std::string::npos)
                throw Error("line " + std::to_string(lineno) + ": fixrange needs name[lo..hi]");
            c.kind = BitCondition::Kind::FixRange;
            c.copy = r.copy;
            c.target_a = r.text.substr(0, lb) + r.text.substr(rb + 1); // name (+ optional @occ)
            c.lo = std::stoll(r.text.substr(lb + 1, dots - lb - 1));
            c.hi = std::stoll(r.text.substr(dots + 2, rb - dots - 2));
            if (c.hi < c.lo)
                throw Error("line " + std::to_string(lineno) + ": empty fixrange window");
            if (val != "0" && val != "1")
                throw Error("line " + std::to_string(lineno) + ": fixrange value must be 0 or 1");
            c.value = val == "1";
        } else if (verb == "eq") {
            std::string ra, rb2;
            need(ra);
            need(rb2);
            Ref a = parse_copy_ref(ra), b = parse_copy_ref(rb2);
            c.kind = BitCondition::Kind::Eq;
            c.copy = a.copy;
            c.copy_b = b.copy;
            c.target_a = a.text;
            c.target_b = b.text;
        } else if (verb == "diff32") {
            std::string ra, rb2, k;
            need(ra);
            need(rb2);
            need(k);
            Ref a = parse_copy_ref(ra), b = parse_copy_ref(rb2);
            c.kind = BitCondition::Kind::Diff32;
            c.copy = a.copy;
            c.copy_b = b.copy;
            c.target_a = a.text;
            c.target_b = b.text;
            c.constant = parse_hex32(k, lineno);
        } else if (verb == "free") {
            need(c.target_a);
            c.kind = BitCondition::Kind::FreeTie;
        } else if (verb == "set") {
            std::string name, hex;
            need(name);
            need(hex);
            c.kind = BitCondition::Kind::SetWord;
            c.target_a = name;
            if (hex.rfind("0x", 0) != 0 && hex.rfind("0X", 0) != 0)
                throw Error("line " + std::to_string(lineno) + ": set needs a 0x constant");
            c.hex = hex.substr(2);
        } else {
            throw Error("line " + std::to_string(lineno) + ": unknown directive '" + verb + "'");
        }
        std::string extra;
        if (ss >> extra)
            throw Error("line " + std::to_string(lineno) + ": trailing text '" + extra + "'");
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<BitCondition> parse_condition_file(const std::string& path) {
    return parse_conditions(read_text_file(path));
}

std::shared_ptr<const TemplateCnf> twin_template(const TemplateCnf& tpl) {
    auto twin = std::make_shared<TemplateCnf>();
    Var offset = tpl.var_count;
    twin->var_count = 2 * tpl.var_count;
    twin->clauses.reserve(2 * tpl.clauses.size());
    for (const Clause& c : tpl.clauses) twin->clauses.push_back(c);
    for (const Clause& c : tpl.clauses) {
        Clause shifted;
        shifted.reserve(c.size());
        for (Lit l : c) shifted.push_back(l > 0 ? l + Lit(offset) : l - Lit(offset));
        twin->clauses.push_back(std::move(shifted));
    }
    for (auto& [name, v] : tpl.input_vars) twin->input_vars.push_back({"1:" + name, v});
    for (auto& [name, v] : tpl.input_vars) twin->input_vars.push_back({"2:" + name, v + offset});
    for (auto& [name, v] : tpl.output_vars) twin->output_vars.push_back({"1:" + name, v});
    for (auto& [name, v] : tpl.output_vars) twin->output_vars.push_back({"2:" + name, v + offset});
    for (auto& [key, v] : tpl.trace_vars) {
        twin->trace_vars["1:" + key] = v;
        twin->trace_vars["2:" + key] = v + offset;
    }
    for (auto& [key, occ] : tpl.last_occurrence) {
        twin->last_occurrence["1:" + key] = occ;
        twin->last_occurrence["2:" + key] = occ;
    }
    return twin;
}

namespace {

// split "func.var[idx]" into base name and index; idx -1 when absent
void split_indexed(const std::string& s, std::string& name, int64_t& idx, std::string& occ_suffix) {
    std::string body = s;
    occ_suffix.clear();
    auto at = body.rfind('@');
    if (at != std::string::npos) {
        occ_suffix = body.substr(at);
        body.resize(at);
    }
    auto lb = body.rfind('[');
    if (lb != std::string::npos && body.back() == ']') {
        name = body.substr(0, lb);
        idx = std::stoll(body.substr(lb + 1, body.size() - lb - 2));
    } else {
        name = body;
        idx = -1;
    }
}

std::vector<std::pair<std::string, Var>> match_inputs(const TemplateCnf& tpl,
                                                      const std::string& name,
                                                      const std::string& copy_prefix) {
    auto lower = [](std::string s) {
        for (char& c : s) c = char(std::tolower(uint8_t(c)));
        return s;
    };
    std::string want = lower(copy_prefix + name);
    std::vector<std::pair<std::string, Var>> out;
    for (auto& [n, v] : tpl.input_vars) {
        std::string ln = lower(n);
        if (ln == want || ln.rfind(want + "[", 0) == 0) out.push_back({n, v});
    }
    return out;
}

std::vector<CopySel> expand_copy(CopySel sel, bool twin) {
    if (!twin) return {CopySel::Both}; // bare resolution
    if (sel == CopySel::Both) return {CopySel::First, CopySel::Second};
    return {sel};
}

std::string copy_prefix(CopySel sel, bool twin) {
    if (!twin) {
        if (sel != CopySel::Both)
            throw Error("copy prefixes are only valid for collision instances");
        return "";
    }
    return sel == CopySel::First ? "1:" : "2:";
}

Var resolve_trace_copy(const TemplateCnf& tpl, const std::string& ref, CopySel sel, bool twin) {
    return tpl.resolve_trace(copy_prefix(sel, twin) + ref);
}

// Diff32 operands name a word through the trace point of its bit 0; bits k
// follow at linear index + k with the same occurrence handling.
std::vector<Var> resolve_word(const TemplateCnf& tpl, const std::string& ref, CopySel sel,
                              bool twin) {
    std::string name, occ;
    int64_t idx;
    split_indexed(ref, name, idx, occ);
    if (idx < 0) idx = 0;
    std::vector<Var> word;
    for (int64_t k = 0; k < 32; ++k) {
        std::string bit_ref = name + "[" + std::to_string(idx + k) + "]" + occ;
        word.push_back(resolve_trace_copy(tpl, bit_ref, sel, twin));
    }
    return word;
}

void add_equality(Instance& inst, Var a, Var b) {
    if (a == b) return;
    inst.extra_clauses.push_back({Lit(a), -Lit(b)});
    inst.extra_clauses.push_back({-Lit(a), Lit(b)});
}

} // namespace

void add_mod_difference(Instance& inst, const std::vector<Var>& word_a,
                        const std::vector<Var>& word_b, uint32_t constant) {
    if (word_a.size() != word_b.size() || word_a.empty() || word_a.size() > 32)
        throw Error("add_mod_difference: word width mismatch");
    size_t w = word_a.size();
    if (constant == 0) {
        for (size_t k = 0; k < w; ++k) add_equality(inst, word_a[k], word_b[k]);
        return;
    }
    // carry: tri-state (constant / literal) threaded through a ripple adder
    // computing B = A + constant
    bool carry_const = true;
    bool carry_val = false;
    Lit carry_lit = 0;
    for (size_t k = 0; k < w; ++k) {
        Lit a = Lit(word_a[k]);
        Lit b = Lit(word_b[k]);
        bool d = (constant >> k) & 1;
        if (carry_const) {
            bool flip = d ^ carry_val;
            // b <-> a (xor flip)
            inst.extra_clauses.push_back({flip ? b : -b, flip ? a : -a});
            inst.extra_clauses.push_back({flip ? -b : b, flip ? -a : a});
            // next carry = maj(a, d, carry)
            int known = int(d) + int(carry_val);
            if (known == 2) {
                carry_const = true;
                carry_val = true;
            } else if (known == 1) {
                carry_const = false;
                carry_lit = a;
            } else {
                carry_const = true;
                carry_val = false;
            }
        } else {
            Lit c = carry_lit;
            if (!d) {
                // b <-> a xor c
                inst.extra_clauses.push_back({-b, a, c});
                inst.extra_clauses.push_back({-b, -a, -c});
                inst.extra_clauses.push_back({b, -a, c});
                inst.extra_clauses.push_back({b, a, -c});
            } else {
                // b <-> !(a xor c)
                inst.extra_clauses.push_back({b, a, c});
                inst.extra_clauses.push_back({b, -a, -c});
                inst.extra_clauses.push_back({-b, -a, c});
                inst.extra_clauses.push_back({-b, a, -c});
            }
            if (k + 1 < w) {
                Var nc = inst.fresh_var();
                Lit n = Lit(nc);
                if (!d) {
                    // nc <-> a & c
                    inst.extra_clauses.push_back({-n, a});
                    inst.extra_clauses.push_back({-n, c});
                    inst.extra_clauses.push_back({n, -a, -c});
                } else {
                    // nc <-> a | c
                    inst.extra_clauses.push_back({n, -a});
                    inst.extra_clauses.push_back({n, -c});
                    inst.extra_clauses.push_back({-n, a, c});
                }
                carry_lit = n;
            }
        }
    }
}

void apply_conditions(Instance& inst, const std::vector<BitCondition>& conds, bool twin) {
    const TemplateCnf& tpl = *inst.base;
    for (const BitCondition& c : conds) {
        try {
            switch (c.kind) {
                case BitCondition::Kind::Fix: {
                    for (CopySel s : expand_copy(c.copy, twin)) {
                        Var v = resolve_trace_copy(tpl, c.target_a, s, twin);
                        inst.assume(make_lit(v, c.value != 0));
                    }
                    break;
                }
                case BitCondition::Kind::FixRange: {
                    std::string name, occ;
                    int64_t ignored;
                    split_indexed(c.target_a, name, ignored, occ);
                    for (CopySel s : expand_copy(c.copy, twin)) {
                        for (int64_t i = c.lo; i <= c.hi; ++i) {
                            std::string ref = name + "[" + std::to_string(i) + "]" + occ;
                            Var v = resolve_trace_copy(tpl, ref, s, twin);
                            inst.assume(make_lit(v, c.value != 0));
                        }
                    }
                    break;
                }
                case BitCondition::Kind::Eq: {
                    if (twin && c.copy == CopySel::Both && c.copy_b == CopySel::Both) {
                        for (CopySel s : {CopySel::First, CopySel::Second})
                            add_equality(inst, resolve_trace_copy(tpl, c.target_a, s, twin),
                                         resolve_trace_copy(tpl, c.target_b, s, twin));
                    } else {
                        CopySel sa = c.copy, sb = c.copy_b;
                        if (twin && sa == CopySel::Both) sa = CopySel::First;
                        if (twin && sb == CopySel::Both) sb = CopySel::Second;
                        add_equality(inst, resolve_trace_copy(tpl, c.target_a, sa, twin),
                                     resolve_trace_copy(tpl, c.target_b, sb, twin));
                    }
                    break;
                }
                case BitCondition::Kind::Diff32: {
                    CopySel sa = c.copy, sb = c.copy_b;
                    if (twin && sa == CopySel::Both) sa = CopySel::First;
                    if (twin && sb == CopySel::Both) sb = CopySel::Second;
                    auto wa = resolve_word(tpl, c.target_a, sa, twin);
                    auto wb = resolve_word(tpl, c.target_b, sb, twin);
                    add_mod_difference(inst, wa, wb, c.constant);
                    break;
                }
                case BitCondition::Kind::FreeTie: {
                    if (!twin) break; // single-copy inputs are already free
                    auto first = match_inputs(tpl, c.target_a, "1:");
                    auto second = match_inputs(tpl, c.target_a, "2:");
                    if (first.empty() || first.size() != second.size())
                        throw Error("no input matches '" + c.target_a + "'");
                    for (size_t i = 0; i < first.size(); ++i)
                        add_equality(inst, first[i].second, second[i].second);
                    break;
                }
                case BitCondition::Kind::SetWord: {
                    std::vector<std::string> prefixes =
                        twin ? std::vector<std::string>{"1:", "2:"} : std::vector<std::string>{""};
                    for (const std::string& p : prefixes) {
                        auto cells = match_inputs(tpl, c.target_a, p);
                        if (cells.empty()) throw Error("no input matches '" + c.target_a + "'");
                        BitVec bits = hex_to_bits(c.hex, cells.size());
                        for (size_t i = 0; i < cells.size(); ++i)
                            inst.assume(make_lit(cells[i].second, bits[i] != 0));
                    }
                    break;
                }
            }
        } catch (const Error& e) {
            throw Error("condition line " + std::to_string(c.line) + ": " + e.what());
        }
    }
}

Instance collision_instance(const TemplateCnf& tpl, const CollisionOptions& opts) {
    Instance inst;
    inst.base = twin_template(tpl);
    inst.label = opts.label;
    if (opts.tie_outputs) {
        size_t m = tpl.output_vars.size();
        for (size_t i = 0; i < m; ++i) {
            Var y1 = inst.base->output_vars[i].second;
            Var y2 = inst.base->output_vars[m + i].second;
            add_equality(inst, y1, y2);
        }
    }
    apply_conditions(inst, opts.conditions, /*twin=*/true);
    return inst;
}

BitVec decode_inputs(const TemplateCnf& tpl, const std::vector<uint8_t>& model,
                     const std::string& name_prefix) {
    BitVec out;
    for (auto& [name, v] : tpl.input_vars) {
        if (!name_prefix.empty() && name.rfind(name_prefix, 0) != 0) continue;
        if (v >= model.size()) throw Error("model too short for input decode");
        out.push_back(model[v]);
    }
    return out;
}

} // namespace algsat
