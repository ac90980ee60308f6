#include "algsat/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "algsat/diag.hpp"
#include "algsat/instance.hpp"

namespace algsat {

const char* status_name(Status s) {
    switch (s) {
        case Status::Sat: return "SAT";
        case Status::Unsat: return "UNSAT";
        case Status::Unknown: return "UNKNOWN";
    }
    return "?";
}

namespace {

using ILit = uint32_t; // (var << 1) | sign, var 1-based, sign 1 = negated
inline ILit mk_ilit(Var v, bool neg) { return (v << 1) | ILit(neg); }
inline ILit from_ext(Lit l) { return mk_ilit(lit_var(l), l < 0); }
inline Var  ivar(ILit p) { return p >> 1; }
inline ILit inot(ILit p) { return p ^ 1; }
inline Lit  to_ext(ILit p) { return (p & 1) ? -Lit(ivar(p)) : Lit(ivar(p)); }

using CRef = uint32_t;
constexpr CRef CRef_Undef = 0xffffffffu;

// clause layout in the arena: [size<<1 | learnt][activity bits][lits...]
struct Arena {
    std::vector<uint32_t> mem;

    CRef alloc(const std::vector<ILit>& lits, bool learnt) {
        CRef ref = CRef(mem.size());
        mem.push_back(uint32_t(lits.size() << 1) | uint32_t(learnt));
        mem.push_back(0); // activity
        for (ILit l : lits) mem.push_back(l);
        return ref;
    }
    uint32_t size(CRef c) const { return mem[c] >> 1; }
    bool learnt(CRef c) const { return mem[c] & 1; }
    float activity(CRef c) const {
        float f;
        std::memcpy(&f, &mem[c + 1], 4);
        return f;
    }
    void set_activity(CRef c, float f) { std::memcpy(&mem[c + 1], &f, 4); }
    ILit* lits(CRef c) { return &mem[c + 2]; }
    const ILit* lits(CRef c) const { return &mem[c + 2]; }
};

struct Watcher {
    CRef cref;
    ILit blocker;
};

} // namespace

struct CdclSolver::Impl {
    // clause database
    Arena arena;
    std::vector<CRef> clauses, learnts;
    double cla_inc = 1.0;

    // assignment
    std::vector<int8_t>  assigns;  // per var: -1 unassigned / 0 false / 1 true
    std::vector<int>     level;
    std::vector<CRef>    reason;
    std::vector<ILit>    trail;
    std::vector<size_t>  trail_lim;
    size_t               qhead = 0;

    // decision heuristic
    std::vector<double>  activity;
    std::vector<uint8_t> polarity; // saved phase (1 = last value true)
    std::vector<uint8_t> is_input;
    std::vector<int>     heap_pos; // -1 = not in heap
    std::vector<Var>     heap;
    double var_inc = 1.0;

    std::vector<std::vector<Watcher>> watches; // indexed by ILit

    // analysis scratch
    std::vector<uint8_t> seen;
    std::vector<ILit>    analyze_clear;
    std::vector<ILit>    analyze_stack;

    bool ok = true;
    uint64_t conflicts = 0, decisions = 0, propagations = 0;

    // active configuration
    double var_decay = 0.95, clause_decay = 0.999;
    bool   phase_saving = true;
    bool   input_tier = false;
    double input_boost = 1.0;

    uint64_t max_learnts = 0;

    // --- helpers --------------------------------------------------------

    Var nvars() const { return Var(assigns.size() ? assigns.size() - 1 : 0); }

    void ensure_vars(Var n) {
        while (assigns.size() < size_t(n) + 1) {
            assigns.push_back(-1);
            level.push_back(0);
            reason.push_back(CRef_Undef);
            activity.push_back(0.0);
            polarity.push_back(0);
            is_input.push_back(0);
            heap_pos.push_back(-1);
            seen.push_back(0);
            if (watches.empty()) watches.resize(2);
            watches.resize(2 * (assigns.size()) + 2);
        }
    }

    int8_t value_lit(ILit p) const {
        int8_t a = assigns[ivar(p)];
        return a < 0 ? int8_t(-1) : int8_t(a ^ int8_t(p & 1));
    }

    int decision_level() const { return int(trail_lim.size()); }

    // heap ordering: input tier first (when enabled), then activity, then index
    bool order_before(Var a, Var b) const {
        if (input_tier && is_input[a] != is_input[b]) return is_input[a] > is_input[b];
        if (activity[a] != activity[b]) return activity[a] > activity[b];
        return a < b;
    }

    void heap_swap(size_t i, size_t j) {
        std::swap(heap[i], heap[j]);
        heap_pos[heap[i]] = int(i);
        heap_pos[heap[j]] = int(j);
    }
    void heap_up(size_t i) {
        while (i > 0) {
            size_t p = (i - 1) / 2;
            if (!order_before(heap[i], heap[p])) break;
            heap_swap(i, p);
            i = p;
        }
    }
    void heap_down(size_t i) {
        for (;;) {
            size_t l = 2 * i + 1, r = 2 * i + 2, best = i;
            if (l < heap.size() && order_before(heap[l], heap[best])) best = l;
            if (r < heap.size() && order_before(heap[r], heap[best])) best = r;
            if (best == i) break;
            heap_swap(i, best);
            i = best;
        }
    }
    void heap_insert(Var v) {
        if (heap_pos[v] >= 0) return;
        heap_pos[v] = int(heap.size());
        heap.push_back(v);
        heap_up(size_t(heap_pos[v]));
    }
    void heap_update(Var v) {
        if (heap_pos[v] < 0) return;
        heap_up(size_t(heap_pos[v]));
        heap_down(size_t(heap_pos[v]));
    }
    Var heap_pop() {
        Var v = heap[0];
        heap_swap(0, heap.size() - 1);
        heap.pop_back();
        heap_pos[v] = -1;
        if (!heap.empty()) heap_down(0);
        return v;
    }
    void rebuild_heap() {
        heap.clear();
        for (Var v = 1; v <= nvars(); ++v) {
            heap_pos[v] = -1;
            if (assigns[v] < 0) heap_insert(v);
        }
    }

    void var_bump(Var v, double mult) {
        activity[v] += var_inc * mult;
        if (activity[v] > 1e100) {
            for (Var x = 1; x <= nvars(); ++x) activity[x] *= 1e-100;
            var_inc *= 1e-100;
        }
        heap_update(v);
    }
    void cla_bump(CRef c) {
        arena.set_activity(c, float(arena.activity(c) + cla_inc));
        if (arena.activity(c) > 1e20f) {
            for (CRef l : learnts) arena.set_activity(l, arena.activity(l) * 1e-20f);
            cla_inc *= 1e-20;
        }
    }

    void attach(CRef c) {
        const ILit* ls = arena.lits(c);
        watches[inot(ls[0])].push_back({c, ls[1]});
        watches[inot(ls[1])].push_back({c, ls[0]});
    }
    void detach(CRef c) {
        const ILit* ls = arena.lits(c);
        for (ILit w : {inot(ls[0]), inot(ls[1])}) {
            auto& wl = watches[w];
            for (size_t i = 0; i < wl.size(); ++i)
                if (wl[i].cref == c) {
                    wl[i] = wl.back();
                    wl.pop_back();
                    break;
                }
        }
    }

    void unchecked_enqueue(ILit p, CRef from) {
        assigns[ivar(p)] = int8_t(1 - (p & 1));
        level[ivar(p)] = decision_level();
        reason[ivar(p)] = from;
        trail.push_back(p);
    }

    bool enqueue(ILit p, CRef from) {
        int8_t v = value_lit(p);
        if (v >= 0) return v == 1;
        unchecked_enqueue(p, from);
        return true;
    }

    CRef propagate() {
        CRef confl = CRef_Undef;
        while (qhead < trail.size()) {
            ILit p = trail[qhead++];
            ++propagations;
            auto& wl = watches[p];
            size_t i = 0, j = 0;
            while (i < wl.size()) {
                Watcher w = wl[i];
                if (value_lit(w.blocker) == 1) {
                    wl[j++] = wl[i++];
                    continue;
                }
                CRef c = w.cref;
                ILit* ls = arena.lits(c);
                ILit false_lit = inot(p);
                if (ls[0] == false_lit) std::swap(ls[0], ls[1]);
                ++i;
                // ls[1] is the false literal now
                ILit first = ls[0];
                if (first != w.blocker && value_lit(first) == 1) {
                    wl[j++] = {c, first};
                    continue;
                }
                uint32_t sz = arena.size(c);
                bool moved = false;
                for (uint32_t k = 2; k < sz; ++k) {
                    if (value_lit(ls[k]) != 0) {
                        std::swap(ls[1], ls[k]);
                        watches[inot(ls[1])].push_back({c, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                // unit or conflict
                wl[j++] = {c, first};
                if (value_lit(first) == 0) {
                    confl = c;
                    qhead = trail.size();
                    while (i < wl.size()) wl[j++] = wl[i++];
                } else {
                    unchecked_enqueue(first, c);
                }
            }
            wl.resize(j);
        }
        return confl;
    }

    void cancel_until(int lvl) {
        if (decision_level() <= lvl) return;
        for (size_t i = trail.size(); i-- > trail_lim[size_t(lvl)];) {
            Var v = ivar(trail[i]);
            if (phase_saving) polarity[v] = uint8_t(assigns[v]);
            assigns[v] = -1;
            reason[v] = CRef_Undef;
            heap_insert(v);
        }
        trail.resize(trail_lim[size_t(lvl)]);
        trail_lim.resize(size_t(lvl));
        qhead = trail.size();
    }

    // --- conflict analysis ------------------------------------------------

    bool lit_redundant(ILit p) {
        analyze_stack.clear();
        analyze_stack.push_back(p);
        size_t top = analyze_clear.size();
        while (!analyze_stack.empty()) {
            ILit q = analyze_stack.back();
            analyze_stack.pop_back();
            CRef r = reason[ivar(q)];
            if (r == CRef_Undef) goto fail;
            {
                const ILit* ls = arena.lits(r);
                uint32_t sz = arena.size(r);
                for (uint32_t k = 0; k < sz; ++k) {
                    ILit l = ls[k];
                    if (ivar(l) == ivar(q)) continue;
                    if (seen[ivar(l)] || level[ivar(l)] == 0) continue;
                    if (reason[ivar(l)] == CRef_Undef) goto fail;
                    seen[ivar(l)] = 1;
                    analyze_clear.push_back(l);
                    analyze_stack.push_back(l);
                }
            }
        }
        return true;
    fail:
        for (size_t k = top; k < analyze_clear.size(); ++k) seen[ivar(analyze_clear[k])] = 0;
        analyze_clear.resize(top);
        return false;
    }

    void analyze(CRef confl, std::vector<ILit>& out_learnt, int& out_btlevel) {
        out_learnt.clear();
        out_learnt.push_back(0); // slot for the asserting literal
        int path_count = 0;
        ILit p = 0;
        size_t index = trail.size();

        do {
            if (confl == CRef_Undef) throw Error("internal: missing reason in analysis");
            if (arena.learnt(confl)) cla_bump(confl);
            const ILit* ls = arena.lits(confl);
            uint32_t sz = arena.size(confl);
            for (uint32_t k = (p == 0 ? 0 : 1); k < sz; ++k) {
                ILit q = ls[k];
                Var v = ivar(q);
                if (seen[v] || level[v] == 0) continue;
                seen[v] = 1;
                var_bump(v, is_input[v] ? input_boost : 1.0);
                if (level[v] >= decision_level()) ++path_count;
                else out_learnt.push_back(q);
            }
            while (!seen[ivar(trail[--index])]) {}
            p = trail[index];
            confl = reason[ivar(p)];
            seen[ivar(p)] = 0;
            --path_count;
        } while (path_count > 0);
        out_learnt[0] = inot(p);

        // minimization: drop implied literals
        analyze_clear.assign(out_learnt.begin() + 1, out_learnt.end());
        size_t keep = 1;
        for (size_t k = 1; k < out_learnt.size(); ++k) {
            ILit q = out_learnt[k];
            if (reason[ivar(q)] == CRef_Undef || !lit_redundant(q))
                out_learnt[keep++] = q;
        }
        out_learnt.resize(keep);
        for (ILit q : analyze_clear) seen[ivar(q)] = 0;
        seen[ivar(p)] = 0;
        for (size_t k = 1; k < out_learnt.size(); ++k) seen[ivar(out_learnt[k])] = 0;
        analyze_clear.clear();

        if (out_learnt.size() == 1) {
            out_btlevel = 0;
        } else {
            size_t max_i = 1;
            for (size_t k = 2; k < out_learnt.size(); ++k)
                if (level[ivar(out_learnt[k])] > level[ivar(out_learnt[max_i])]) max_i = k;
            std::swap(out_learnt[1], out_learnt[max_i]);
            out_btlevel = level[ivar(out_learnt[1])];
        }
    }

    // --- clause DB --------------------------------------------------------

    bool locked(CRef c) {
        const ILit* ls = arena.lits(c);
        return value_lit(ls[0]) == 1 && reason[ivar(ls[0])] == c;
    }

    void remove_clause(CRef c) { detach(c); }

    void reduce_db() {
        std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
            bool ba = arena.size(a) > 2, bb = arena.size(b) > 2;
            if (ba != bb) return ba < bb; // keep binaries at the back
            return arena.activity(a) < arena.activity(b);
        });
        double extra_lim = cla_inc / std::max<size_t>(learnts.size(), 1);
        size_t j = 0;
        for (size_t i = 0; i < learnts.size(); ++i) {
            CRef c = learnts[i];
            if (arena.size(c) > 2 && !locked(c) &&
                (i < learnts.size() / 2 || arena.activity(c) < extra_lim))
                remove_clause(c);
            else
                learnts[j++] = c;
        }
        learnts.resize(j);
        garbage_collect();
    }

    void garbage_collect() {
        Arena fresh;
        fresh.mem.reserve(arena.mem.size());
        std::unordered_map<CRef, CRef> reloc;
        auto move_clause = [&](CRef c) -> CRef {
            std::vector<ILit> ls(arena.lits(c), arena.lits(c) + arena.size(c));
            CRef nc = fresh.alloc(ls, arena.learnt(c));
            fresh.set_activity(nc, arena.activity(c));
            reloc[c] = nc;
            return nc;
        };
        for (CRef& c : clauses) c = move_clause(c);
        for (CRef& c : learnts) c = move_clause(c);
        for (auto& wl : watches)
            for (auto& w : wl) w.cref = reloc.at(w.cref);
        for (Var v = 1; v <= nvars(); ++v)
            if (reason[v] != CRef_Undef && assigns[v] >= 0) reason[v] = reloc.at(reason[v]);
        arena = std::move(fresh);
    }

    // --- top level ---------------------------------------------------------

    bool add_clause_external(const Clause& external) {
        if (!ok) return false;
        std::vector<ILit> ls;
        ls.reserve(external.size());
        for (Lit l : external) {
            ensure_vars(lit_var(l));
            ls.push_back(from_ext(l));
        }
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        for (size_t i = 0; i + 1 < ls.size(); ++i)
            if (ls[i] == inot(ls[i + 1])) return true; // tautology
        // level-0 simplification
        std::vector<ILit> kept;
        for (ILit p : ls) {
            int8_t v = value_lit(p);
            if (v == 1 && level[ivar(p)] == 0) return true;
            if (v == 0 && level[ivar(p)] == 0) continue;
            kept.push_back(p);
        }
        if (kept.empty()) {
            ok = false;
            return false;
        }
        if (kept.size() == 1) {
            if (!enqueue(kept[0], CRef_Undef)) {
                ok = false;
                return false;
            }
            if (propagate() != CRef_Undef) ok = false;
            return ok;
        }
        CRef c = arena.alloc(kept, false);
        clauses.push_back(c);
        attach(c);
        return true;
    }

    double luby(double y, uint64_t x) {
        uint64_t size, seq;
        for (size = 1, seq = 0; size < x + 1; ++seq, size = 2 * size + 1) {}
        while (size - 1 != x) {
            size = (size - 1) >> 1;
            --seq;
            x = x % size;
        }
        return std::pow(y, double(seq));
    }

    SolveResult run(const std::vector<Lit>& assumptions, const SolveConfig& cfg) {
        auto t0 = std::chrono::steady_clock::now();
        SolveResult res;
        uint64_t start_conflicts = conflicts;

        var_decay = cfg.var_decay;
        clause_decay = cfg.clause_decay;
        phase_saving = cfg.phase_saving;
        input_tier = cfg.input_priority >= 2.0;
        input_boost = std::max(1.0, cfg.input_priority);

        auto finish = [&](Status st) {
            res.status = st;
            res.conflicts = conflicts - start_conflicts;
            res.decisions = decisions;
            res.propagations = propagations;
            res.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            cancel_until(0);
            return res;
        };

        if (!ok) return finish(Status::Unsat);
        cancel_until(0);
        if (propagate() != CRef_Undef) {
            ok = false;
            return finish(Status::Unsat);
        }

        // activity head start for inputs
        if (cfg.input_priority > 1.0) {
            for (Var v = 1; v <= nvars(); ++v)
                if (is_input[v] && activity[v] == 0.0) activity[v] = cfg.input_priority - 1.0;
        }
        rebuild_heap();

        std::vector<ILit> assumps;
        for (Lit l : assumptions) {
            ensure_vars(lit_var(l));
            assumps.push_back(from_ext(l));
        }

        max_learnts = std::max<uint64_t>(uint64_t(double(clauses.size()) / 3.0), 2000);
        uint64_t restart_idx = 0;
        uint64_t restart_budget = uint64_t(100.0 * luby(2.0, restart_idx));
        uint64_t restart_used = 0;
        uint64_t deadline_check = 0;

        std::vector<ILit> learnt;
        for (;;) {
            CRef confl = propagate();
            if (confl != CRef_Undef) {
                ++conflicts;
                ++restart_used;
                if (decision_level() == 0) {
                    ok = false;
                    return finish(Status::Unsat);
                }
                int btlevel;
                analyze(confl, learnt, btlevel);
                // never backtrack past falsified assumptions: the asserting
                // literal re-propagates above the assumption prefix
                cancel_until(btlevel);
                if (learnt.size() == 1) {
                    unchecked_enqueue(learnt[0], CRef_Undef);
                } else {
                    CRef c = arena.alloc(learnt, true);
                    learnts.push_back(c);
                    attach(c);
                    cla_bump(c);
                    unchecked_enqueue(learnt[0], c);
                }
                var_inc /= var_decay;
                cla_inc /= clause_decay;
                if (cfg.conflict_limit && conflicts - start_conflicts >= cfg.conflict_limit) {
                    res.unknown_reason = "conflict-limit";
                    return finish(Status::Unknown);
                }
            } else {
                if (++deadline_check % 256 == 0) {
                    if (cfg.stop && cfg.stop->load(std::memory_order_relaxed)) {
                        res.unknown_reason = "cancelled";
                        return finish(Status::Unknown);
                    }
                    if (cfg.time_limit > 0) {
                        double el = std::chrono::duration<double>(
                                        std::chrono::steady_clock::now() - t0)
                                        .count();
                        if (el > cfg.time_limit) {
                            res.unknown_reason = "timeout";
                            return finish(Status::Unknown);
                        }
                    }
                }
                if (restart_used >= restart_budget && decision_level() > int(assumps.size())) {
                    restart_used = 0;
                    restart_budget = uint64_t(100.0 * luby(2.0, ++restart_idx));
                    cancel_until(int(assumps.size()));
                    continue;
                }
                if (learnts.size() >= max_learnts + trail.size()) {
                    reduce_db();
                    max_learnts = max_learnts + max_learnts / 10;
                }

                // assumption prefix, then free decisions
                ILit next = 0;
                while (decision_level() < int(assumps.size())) {
                    ILit p = assumps[size_t(decision_level())];
                    if (value_lit(p) == 1) {
                        trail_lim.push_back(trail.size()); // dummy level
                    } else if (value_lit(p) == 0) {
                        return finish(Status::Unsat); // conflicting assumptions
                    } else {
                        next = p;
                        break;
                    }
                }
                if (next == 0) {
                    for (;;) {
                        if (heap.empty()) {
                            // all variables assigned: model found
                            if (cfg.verify_model && !model_ok(assumps))
                                throw Error("internal: model fails verification");
                            res.model.assign(size_t(nvars()) + 1, 0);
                            for (Var v = 1; v <= nvars(); ++v)
                                res.model[v] = uint8_t(assigns[v] == 1);
                            return finish(Status::Sat);
                        }
                        Var v = heap_pop();
                        if (assigns[v] < 0) {
                            next = mk_ilit(v, polarity[v] == 0);
                            break;
                        }
                    }
                    if (cfg.decision_log > 0 && res.decision_head.size() < size_t(cfg.decision_log))
                        res.decision_head.push_back(ivar(next));
                    ++decisions;
                }
                trail_lim.push_back(trail.size());
                unchecked_enqueue(next, CRef_Undef);
            }
        }
    }

    bool model_ok(const std::vector<ILit>& assumps) {
        for (ILit p : assumps)
            if (value_lit(p) != 1) return false;
        for (CRef c : clauses) {
            const ILit* ls = arena.lits(c);
            bool sat = false;
            for (uint32_t k = 0; k < arena.size(c) && !sat; ++k)
                if (value_lit(ls[k]) == 1) sat = true;
            if (!sat) return false;
        }
        return true;
    }
};

CdclSolver::CdclSolver() : impl_(new Impl) {}
CdclSolver::~CdclSolver() { delete impl_; }

void CdclSolver::ensure_vars(Var n) { impl_->ensure_vars(n); }
Var CdclSolver::var_count() const { return impl_->nvars(); }
bool CdclSolver::add_clause(const Clause& c) { return impl_->add_clause_external(c); }
void CdclSolver::mark_input(Var v) {
    impl_->ensure_vars(v);
    impl_->is_input[v] = 1;
}

SolveResult CdclSolver::solve(const std::vector<Lit>& assumptions, const SolveConfig& cfg) {
    return impl_->run(assumptions, cfg);
}

bool CdclSolver::propagate_only(const std::vector<Lit>& assumptions, std::vector<int8_t>* values) {
    Impl& s = *impl_;
    s.cancel_until(0);
    if (!s.ok) return false;
    if (s.propagate() != CRef_Undef) {
        s.ok = false;
        return false;
    }
    bool conflict = false;
    s.trail_lim.push_back(s.trail.size());
    for (Lit l : assumptions) {
        s.ensure_vars(lit_var(l));
        ILit p = from_ext(l);
        if (s.value_lit(p) == 0) {
            conflict = true;
            break;
        }
        if (s.value_lit(p) < 0) s.unchecked_enqueue(p, CRef_Undef);
    }
    if (!conflict && s.propagate() != CRef_Undef) conflict = true;
    if (!conflict && values) {
        values->assign(size_t(s.nvars()) + 1, -1);
        for (Var v = 1; v <= s.nvars(); ++v) (*values)[v] = s.assigns[v];
    }
    s.cancel_until(0);
    return !conflict;
}

CdclSolver* make_solver(const Instance& inst) {
    auto* s = new CdclSolver();
    s->ensure_vars(inst.var_count());
    for (const Clause& c : inst.base->clauses)
        if (!s->add_clause(c)) break;
    for (const Clause& c : inst.extra_clauses)
        if (!s->add_clause(c)) break;
    for (auto& [name, v] : inst.base->input_vars) {
        (void)name;
        s->mark_input(v);
    }
    return s;
}

SolveResult solve_instance(const Instance& inst, const SolveConfig& cfg) {
    std::unique_ptr<CdclSolver> s(make_solver(inst));
    return s->solve(inst.assumptions, cfg);
}

bool propagate_instance(const Instance& inst, const std::vector<Lit>& extra,
                        std::vector<int8_t>* values) {
    std::unique_ptr<CdclSolver> s(make_solver(inst));
    std::vector<Lit> assumps = inst.assumptions;
    assumps.insert(assumps.end(), extra.begin(), extra.end());
    return s->propagate_only(assumps, values);
}

} // namespace algsat
