#include "cllr/laws.hpp"

#include <algorithm>
#include <sstream>

#include "cllr/axioms.hpp"
#include "cllr/syntax.hpp"

namespace cllr {

std::string describe(const LawInstance& inst) {
    std::ostringstream os;
    for (std::size_t i = 0; i < inst.terms.size(); ++i) os << (i ? ", " : "") << "t" << i << " = " << format(inst.terms[i]);
    os << "; action " << inst.action.str() << "; sync {";
    bool first = true;
    for (const auto& a : inst.sync.names()) {
        os << (first ? "" : ",") << a;
        first = false;
    }
    os << "}";
    return os.str();
}

namespace {

using Inst = LawInstance;

SimOptions quiet() { return {Exec::Serial, false}; }

bool eqv(const Term& a, const Term& b, std::size_t bound) {
    RefinementChecker c({a, b}, bound, quiet());
    return c.refines(a, b) && c.refines(b, a);
}

bool leq(const Term& a, const Term& b, std::size_t bound) {
    RefinementChecker c({a, b}, bound, quiet());
    return c.refines(a, b);
}

bool in_f(const Term& a, std::size_t bound) { return build_lts(a, bound).inconsistent(a); }

bool any(const Inst&, std::size_t) { return true; }

// Terms drawn independently, plus an action and a sync set.
std::function<Inst(TermGenerator&, std::size_t)> terms(std::size_t n) {
    return [n](TermGenerator& g, std::size_t size) {
        Inst i;
        for (std::size_t k = 0; k < n; ++k) i.terms.push_back(g.up_to(size));
        i.action = g.visible();
        i.sync = g.sync_set();
        return i;
    };
}

Term par(const Inst& i, const Term& l, const Term& r) { return Term::par(l, r, i.sync); }

// Distinct actions, in alphabet order, of random count.
std::vector<std::string> distinct_actions(TermGenerator& g) {
    auto names = g.options().alphabet;
    for (std::size_t k = names.size(); k > 1; --k) std::swap(names[k - 1], names[g.below(k)]);
    names.resize(g.below(names.size() + 1));
    return names;
}

std::vector<std::string> random_actions(TermGenerator& g, std::size_t max) {
    std::vector<std::string> v(g.below(max + 1));
    for (auto& a : v) a = g.visible().name();
    return v;
}

std::vector<std::string> actions_of(const Term& sum) {
    std::vector<std::string> v;
    const auto parts = as_guarded_sum(sum).value();
    for (const auto& s : parts) v.push_back(s.action.name());
    return v;
}

bool sums(const Inst& i) {
    return std::all_of(i.terms.begin(), i.terms.end(), [](const Term& t) { return as_guarded_sum(t).has_value(); });
}

bool same_actions(const Inst& i) { return sums(i) && actions_of(i.terms[0]) == actions_of(i.terms[1]); }

Term zipped(const Term& s1, const Term& s2) {
    auto a = *as_guarded_sum(s1);
    const auto b = *as_guarded_sum(s2);
    for (std::size_t k = 0; k < a.size(); ++k) a[k].continuation = Term::conj(a[k].continuation, b[k].continuation);
    return sum_term(a);
}

// Continuations of summands whose synchronising action has no partner are consistent.
bool blocked_consistent(const Inst& i, std::size_t bound) {
    if (!sums(i)) return false;
    const auto s1 = *as_guarded_sum(i.terms[0]), s2 = *as_guarded_sum(i.terms[1]);
    auto check = [&](const GuardedSum& mine, const GuardedSum& other) {
        for (const auto& m : mine) {
            if (!i.sync.contains(m.action)) continue;
            const bool partner =
                std::any_of(other.begin(), other.end(), [&](const Summand& o) { return o.action == m.action; });
            if (!partner && in_f(m.continuation, bound)) return false;
        }
        return true;
    };
    return check(s1, s2) && check(s2, s1);
}

std::vector<Law> build_catalogue() {
    std::vector<Law> v;
    auto add = [&](std::string name, std::size_t arity, std::function<bool(const Inst&, std::size_t)> holds) {
        v.push_back({std::move(name), terms(arity), any, std::move(holds)});
    };
    const Term O = Term::nil(), B = Term::bottom();
#define T0 i.terms[0]
#define T1 i.terms[1]
#define T2 i.terms[2]
    add("choice-commutative", 2, [](const Inst& i, std::size_t b) { return eqv(Term::choice(T0, T1), Term::choice(T1, T0), b); });
    add("par-commutative", 2, [](const Inst& i, std::size_t b) { return eqv(par(i, T0, T1), par(i, T1, T0), b); });
    add("conj-commutative", 2, [](const Inst& i, std::size_t b) { return eqv(Term::conj(T0, T1), Term::conj(T1, T0), b); });
    add("disj-commutative", 2, [](const Inst& i, std::size_t b) { return eqv(Term::disj(T0, T1), Term::disj(T1, T0), b); });
    add("choice-associative", 3, [](const Inst& i, std::size_t b) {
        return eqv(Term::choice(Term::choice(T0, T1), T2), Term::choice(T0, Term::choice(T1, T2)), b);
    });
    add("disj-associative", 3, [](const Inst& i, std::size_t b) {
        return eqv(Term::disj(Term::disj(T0, T1), T2), Term::disj(T0, Term::disj(T1, T2)), b);
    });
    add("conj-associative", 3, [](const Inst& i, std::size_t b) {
        return eqv(Term::conj(Term::conj(T0, T1), T2), Term::conj(T0, Term::conj(T1, T2)), b);
    });
    v.push_back({"choice-idempotent",
                 [](TermGenerator& g, std::size_t size) {
                     Inst i = terms(1)(g, size);
                     if (!is_stable(T0)) T0 = Term::prefix(i.action, T0);
                     return i;
                 },
                 [](const Inst& i, std::size_t) { return is_stable(T0); },
                 [](const Inst& i, std::size_t b) { return eqv(Term::choice(T0, T0), T0, b); }});
    add("conj-idempotent", 1, [](const Inst& i, std::size_t b) { return eqv(Term::conj(T0, T0), T0, b); });
    add("disj-idempotent", 1, [](const Inst& i, std::size_t b) { return eqv(Term::disj(T0, T0), T0, b); });
    add("choice-unit", 1, [O](const Inst& i, std::size_t b) { return eqv(Term::choice(T0, O), T0, b); });
    add("disj-unit", 1, [B](const Inst& i, std::size_t b) { return eqv(Term::disj(T0, B), T0, b); });
    add("choice-zero", 1, [B](const Inst& i, std::size_t b) { return eqv(Term::choice(T0, B), B, b); });
    add("par-zero", 1, [B](const Inst& i, std::size_t b) { return eqv(par(i, T0, B), B, b); });
    add("conj-zero", 1, [B](const Inst& i, std::size_t b) { return eqv(Term::conj(T0, B), B, b); });
    add("tau-identity", 1, [](const Inst& i, std::size_t b) { return eqv(Term::prefix(Action::tau(), T0), T0, b); });
    add("prefix-bottom", 1, [B](const Inst& i, std::size_t b) { return eqv(Term::prefix(i.action, B), B, b); });
    add("choice-distributive", 3, [](const Inst& i, std::size_t b) {
        return eqv(Term::choice(T0, Term::disj(T1, T2)), Term::disj(Term::choice(T0, T1), Term::choice(T0, T2)), b);
    });
    add("par-distributive", 3, [](const Inst& i, std::size_t b) {
        return eqv(par(i, T0, Term::disj(T1, T2)), Term::disj(par(i, T0, T1), par(i, T0, T2)), b);
    });
    add("conj-distributive", 3, [](const Inst& i, std::size_t b) {
        return eqv(Term::conj(T0, Term::disj(T1, T2)), Term::disj(Term::conj(T0, T1), Term::conj(T0, T2)), b);
    });
    add("disj-over-conj", 3, [](const Inst& i, std::size_t b) {
        return eqv(Term::disj(T0, Term::conj(T1, T2)), Term::conj(Term::disj(T0, T1), Term::disj(T0, T2)), b);
    });
    add("absorption-conj", 2, [](const Inst& i, std::size_t b) { return eqv(Term::conj(T0, Term::disj(T0, T1)), T0, b); });
    add("absorption-disj", 2, [](const Inst& i, std::size_t b) { return eqv(Term::disj(T0, Term::conj(T0, T1)), T0, b); });
    add("conj-meet", 3, [](const Inst& i, std::size_t b) {
        const Term qr = Term::conj(T1, T2);
        RefinementChecker c({T0, T1, T2, qr}, b, quiet());
        return c.refines(T0, qr) == (c.refines(T0, T1) && c.refines(T0, T2));
    });
    add("prefix-merge", 2, [](const Inst& i, std::size_t b) {
        const Action& a = i.action;
        return leq(Term::choice(Term::prefix(a, T0), Term::prefix(a, T1)), Term::prefix(a, Term::disj(T0, T1)), b);
    });
    add("prefix-split-uniform", 2, [](const Inst& i, std::size_t b) {
        const Term l = Term::prefix(i.action, Term::disj(T0, T1));
        const Term r = Term::choice(Term::prefix(i.action, T0), Term::prefix(i.action, T1));
        return leq(l, r, b) == (in_f(T0, b) == in_f(T1, b));
    });
    add("reflexive", 1, [](const Inst& i, std::size_t b) { return leq(T0, T0, b); });
    add("transitive", 3, [](const Inst& i, std::size_t b) {
        RefinementChecker c({T0, T1, T2}, b, quiet());
        return !(c.refines(T0, T1) && c.refines(T1, T2)) || c.refines(T0, T2);
    });
    add("inconsistency-is-below-bottom", 1, [B](const Inst& i, std::size_t b) {
        RefinementChecker c({T0, B}, b, quiet());
        return c.lts().inconsistent(T0) == c.refines(T0, B);
    });

    auto sums_draw = [](std::function<std::vector<std::string>(TermGenerator&)> first,
                        std::function<std::vector<std::string>(TermGenerator&, const std::vector<std::string>&)> second) {
        return [first, second](TermGenerator& g, std::size_t size) {
            const std::size_t cont = std::max<std::size_t>(1, size / 2);
            Inst i;
            const auto a1 = first(g);
            i.terms.push_back(g.guarded_sum(a1, cont));
            i.terms.push_back(g.guarded_sum(second(g, a1), cont));
            i.action = g.visible();
            i.sync = g.sync_set();
            return i;
        };
    };
    auto free_actions = [](TermGenerator& g) { return random_actions(g, 3); };
    auto free_second = [](TermGenerator& g, const std::vector<std::string>&) { return random_actions(g, 3); };
    auto copy_second = [](TermGenerator&, const std::vector<std::string>& a) { return a; };

    v.push_back({"conj-prefix-mismatch",
                 [](TermGenerator& g, std::size_t size) {
                     const std::size_t cont = std::max<std::size_t>(1, size / 2);
                     Inst i;
                     auto a1 = random_actions(g, 3), a2 = random_actions(g, 3);
                     auto set = [](std::vector<std::string> x) {
                         std::sort(x.begin(), x.end());
                         x.erase(std::unique(x.begin(), x.end()), x.end());
                         return x;
                     };
                     if (set(a1) == set(a2)) a2 = a1.empty() ? std::vector<std::string>{g.visible().name()} : std::vector<std::string>{};
                     i.terms = {g.guarded_sum(a1, cont), g.guarded_sum(a2, cont)};
                     return i;
                 },
                 [](const Inst& i, std::size_t) {
                     return sums(i) && prefix_set(*as_guarded_sum(T0)) != prefix_set(*as_guarded_sum(T1));
                 },
                 [B](const Inst& i, std::size_t b) { return eqv(Term::conj(T0, T1), B, b); }});
    v.push_back({"conj-zip-below", sums_draw(free_actions, copy_second),
                 [](const Inst& i, std::size_t) { return same_actions(i); },
                 [](const Inst& i, std::size_t b) { return leq(zipped(T0, T1), Term::conj(T0, T1), b); }});
    v.push_back({"conj-zip-above-injective", sums_draw(distinct_actions, copy_second),
                 [](const Inst& i, std::size_t) { return same_actions(i) && is_injective_in_prefixes(*as_guarded_sum(T0)); },
                 [](const Inst& i, std::size_t b) { return leq(Term::conj(T0, T1), zipped(T0, T1), b); }});
    v.push_back({"expansion-below", sums_draw(free_actions, free_second),
                 [](const Inst& i, std::size_t) { return sums(i); },
                 [](const Inst& i, std::size_t b) { return leq(par(i, T0, T1), expansion(T0, T1, i.sync), b); }});
    v.push_back({"expansion-above-consistent-blocked", sums_draw(free_actions, free_second), blocked_consistent,
                 [](const Inst& i, std::size_t b) { return leq(expansion(T0, T1, i.sync), par(i, T0, T1), b); }});
#undef T0
#undef T1
#undef T2
    return v;
}

// Replaces the node at pre-order position `pos`.
Term replaced(const Term& t, std::size_t pos, const Term& with) {
    if (pos == 0) return with;
    --pos;
    if (t.is(Kind::Prefix)) return Term::with_operands(t, replaced(t.body(), pos, with));
    const std::size_t ls = t.left().size();
    if (pos < ls) return Term::with_operands(t, replaced(t.left(), pos, with), t.right());
    return Term::with_operands(t, t.left(), replaced(t.right(), pos - ls, with));
}

}  // namespace

const std::vector<Law>& law_catalogue() {
    static const std::vector<Law> laws = build_catalogue();
    return laws;
}

const Law* find_law(const std::string& name) {
    for (const auto& l : law_catalogue())
        if (l.name == name) return &l;
    return nullptr;
}

void for_cases(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn) {
    const auto count = static_cast<std::int64_t>(n);
    if (exec == Exec::Serial) {
        for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) fn(static_cast<std::size_t>(i));
}

std::uint64_t case_seed(std::uint64_t seed, std::size_t law, std::size_t index) {
    std::uint64_t x = seed * 0x9E3779B97F4A7C15ull + law * 0xBF58476D1CE4E5B9ull + index * 0x94D049BB133111EBull;
    x ^= x >> 31;
    x *= 0xD6E8FEB86659FD93ull;
    return x ^ (x >> 29);
}

LawInstance shrink_instance(const Law& law, LawInstance inst, std::size_t bound) {
    const Term zero = Term::nil();
    auto failing = [&](const LawInstance& c) {
        try {
            return law.admissible(c, bound) && !law.holds(c, bound);
        } catch (const std::exception&) {
            return false;
        }
    };
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t k = 0; k < inst.terms.size() && !progress; ++k) {
            const std::size_t n = inst.terms[k].size();
            for (std::size_t pos = 0; pos < n && !progress; ++pos) {
                Term cand = replaced(inst.terms[k], pos, zero);
                if (cand == inst.terms[k]) continue;
                LawInstance c = inst;
                c.terms[k] = cand;
                if (failing(c)) {
                    inst = std::move(c);
                    progress = true;
                }
            }
        }
    }
    return inst;
}

LawRun run_law(const Law& law, std::size_t law_index, const FuzzConfig& cfg) {
    GenOptions opts;
    opts.alphabet = cfg.alphabet;
    struct Slot {
        bool admissible = true;
        bool failed = false;
        LawInstance inst;
        std::string error;
    };
    std::vector<Slot> slots(cfg.count);
    for_cases(cfg.count, cfg.exec, [&](std::size_t i) {
        Slot& s = slots[i];
        TermGenerator g(case_seed(cfg.seed, law_index, i), opts);
        s.inst = law.draw(g, cfg.size);
        try {
            s.admissible = law.admissible(s.inst, cfg.state_bound);
            if (!s.admissible) return;
            s.failed = !law.holds(s.inst, cfg.state_bound);
            if (s.failed && cfg.shrink) s.inst = shrink_instance(law, s.inst, cfg.state_bound);
        } catch (const std::exception& e) {
            s.failed = true;
            s.error = e.what();
        }
    });
    LawRun run;
    run.law = law.name;
    run.cases = cfg.count;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].admissible) ++run.skipped;
        if (slots[i].failed) run.failures.push_back({i, slots[i].inst, slots[i].error});
    }
    return run;
}

}  // namespace cllr
