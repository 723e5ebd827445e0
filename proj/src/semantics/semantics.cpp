#include "cllr/semantics.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "cllr/syntax.hpp"

namespace cllr {

namespace {

bool has_tau(const std::vector<Transition>& ts) {
    return std::any_of(ts.begin(), ts.end(), [](const Transition& t) { return t.label.is_tau(); });
}

void normalize_transitions(std::vector<Transition>& ts) {
    std::sort(ts.begin(), ts.end(), [](const Transition& x, const Transition& y) {
        if (auto c = x.label <=> y.label; c != 0) return c < 0;
        return x.target < y.target;
    });
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

}  // namespace

const std::vector<Transition>& StepCache::step(const Term& t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    std::vector<Transition> out;
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Bottom: break;
        case Kind::Prefix: out.push_back({t.action(), t.body()}); break;
        case Kind::Disj:
            out.push_back({Action::tau(), t.left()});
            out.push_back({Action::tau(), t.right()});
            break;
        case Kind::ExtChoice:
        case Kind::Conj:
        case Kind::Par: {
            const auto& l = step(t.left());
            const auto& r = step(t.right());
            const bool l_stable = !has_tau(l), r_stable = !has_tau(r);
            for (const auto& x : l)
                if (x.label.is_tau()) out.push_back({x.label, Term::with_operands(t, x.target, t.right())});
            for (const auto& y : r)
                if (y.label.is_tau()) out.push_back({y.label, Term::with_operands(t, t.left(), y.target)});
            if (t.is(Kind::ExtChoice)) {
                if (r_stable)
                    for (const auto& x : l)
                        if (x.label.is_visible()) out.push_back(x);
                if (l_stable)
                    for (const auto& y : r)
                        if (y.label.is_visible()) out.push_back(y);
            } else if (t.is(Kind::Conj)) {
                for (const auto& x : l) {
                    if (x.label.is_tau()) continue;
                    for (const auto& y : r)
                        if (y.label == x.label) out.push_back({x.label, Term::conj(x.target, y.target)});
                }
            } else {
                const SyncSet& sync = t.sync();
                for (const auto& x : l) {
                    if (x.label.is_tau()) continue;
                    if (!sync.contains(x.label)) {
                        if (r_stable) out.push_back({x.label, Term::par(x.target, t.right(), sync)});
                        continue;
                    }
                    for (const auto& y : r)
                        if (y.label == x.label) out.push_back({x.label, Term::par(x.target, y.target, sync)});
                }
                if (l_stable)
                    for (const auto& y : r)
                        if (y.label.is_visible() && !sync.contains(y.label))
                            out.push_back({y.label, Term::par(t.left(), y.target, sync)});
            }
            break;
        }
    }
    normalize_transitions(out);
    return memo_.emplace(t, std::move(out)).first->second;
}

bool StepCache::stable(const Term& t) { return !has_tau(step(t)); }

std::vector<Transition> step(const Term& t) {
    StepCache cache;
    return cache.step(t);
}

namespace {

using Succ = std::vector<std::vector<Lts::Out>>;
using Index = std::unordered_map<Term, StateId, TermHash>;

struct Universe {
    std::vector<Term> terms;
    Index index;
    Succ succ;

    StateId add(const Term& t) {
        auto [it, fresh] = index.emplace(t, static_cast<StateId>(terms.size()));
        if (fresh) {
            terms.push_back(t);
            succ.emplace_back();
        }
        return it->second;
    }
};

// Explores everything reachable from the states in [from, size) using `cache`.
void explore(Universe& u, std::size_t from, StepCache& cache, std::size_t cap, const char* what) {
    for (std::size_t i = from; i < u.terms.size(); ++i) {
        const Term t = u.terms[i];
        std::vector<Lts::Out> outs;
        for (const auto& tr : cache.step(t)) {
            outs.push_back({tr.label, u.add(tr.target)});
            if (u.terms.size() > cap)
                throw ResourceLimitError(std::string(what) + " exceeds " + std::to_string(cap) + " states");
        }
        u.succ[i] = std::move(outs);
    }
}

// Adds operands of composite states (and everything they reach) until closed.
void close_under_operands(Universe& u, std::size_t known_edges_upto, StepCache& cache, std::size_t cap) {
    std::size_t scanned = 0;
    while (scanned < u.terms.size()) {
        const std::size_t before = u.terms.size();
        for (; scanned < before; ++scanned) {
            const Term t = u.terms[scanned];
            if (t.is(Kind::Prefix)) {
                u.add(t.body());
            } else if (t.is_binary()) {
                u.add(t.left());
                u.add(t.right());
            }
        }
        if (u.terms.size() > cap) throw ResourceLimitError("state universe exceeds " + std::to_string(cap) + " states");
        explore(u, std::max(before, known_edges_upto), cache, cap, "state universe");
    }
}

std::vector<bool> fixpoint(const Universe& u) {
    const std::size_t n = u.terms.size();
    auto op = [&](const Term& t) { return u.index.at(t); };
    std::vector<bool> stable(n);
    for (std::size_t i = 0; i < n; ++i)
        stable[i] = std::none_of(u.succ[i].begin(), u.succ[i].end(), [](const Lts::Out& o) { return o.label.is_tau(); });

    std::vector<std::vector<StateId>> parents(n), conj_preds(n), conj_anc(n);
    std::vector<std::vector<StateId>> stable_desc(n);
    std::vector<bool> desc_done(n, false);
    // Order by size so every τ-successor precedes its source.
    std::vector<StateId> by_size(n);
    for (std::size_t i = 0; i < n; ++i) by_size[i] = static_cast<StateId>(i);
    std::sort(by_size.begin(), by_size.end(),
              [&](StateId a, StateId b) { return u.terms[a].size() < u.terms[b].size(); });
    for (StateId i : by_size) {
        if (stable[i]) {
            stable_desc[i] = {i};
            continue;
        }
        std::vector<StateId> acc;
        for (const auto& o : u.succ[i])
            if (o.label.is_tau()) acc.insert(acc.end(), stable_desc[o.target].begin(), stable_desc[o.target].end());
        std::sort(acc.begin(), acc.end());
        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
        stable_desc[i] = std::move(acc);
    }

    for (std::size_t i = 0; i < n; ++i) {
        const Term& t = u.terms[i];
        const auto id = static_cast<StateId>(i);
        if (t.is(Kind::Prefix)) {
            parents[op(t.body())].push_back(id);
        } else if (t.is_binary()) {
            parents[op(t.left())].push_back(id);
            parents[op(t.right())].push_back(id);
        }
        if (t.is(Kind::Conj)) {
            for (const auto& o : u.succ[i]) conj_preds[o.target].push_back(id);
            for (StateId d : stable_desc[i])
                if (d != id) conj_anc[d].push_back(id);
        }
    }

    std::vector<bool> f(n, false);
    auto labels = [&](StateId s) {
        std::vector<Action> out;
        for (const auto& o : u.succ[s]) out.push_back(o.label);
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    auto holds = [&](StateId i) {
        const Term& t = u.terms[i];
        switch (t.kind()) {
            case Kind::Nil: return false;
            case Kind::Bottom: return true;
            case Kind::Prefix: return static_cast<bool>(f[op(t.body())]);
            case Kind::Disj: return f[op(t.left())] && f[op(t.right())];
            case Kind::ExtChoice:
            case Kind::Par: return f[op(t.left())] || f[op(t.right())];
            case Kind::Conj: break;
        }
        const StateId l = op(t.left()), r = op(t.right());
        if (f[l] || f[r]) return true;
        if (stable[i] && labels(l) != labels(r)) return true;
        const auto& outs = u.succ[i];
        for (std::size_t a = 0; a < outs.size();) {
            std::size_t b = a;
            bool all = true;
            for (; b < outs.size() && outs[b].label == outs[a].label; ++b) all = all && f[outs[b].target];
            if (all) return true;
            a = b;
        }
        const auto& desc = stable_desc[i];
        return !stable[i] && std::all_of(desc.begin(), desc.end(), [&](StateId d) { return f[d]; });
    };

    std::deque<StateId> work(by_size.begin(), by_size.end());
    std::vector<bool> queued(n, true);
    while (!work.empty()) {
        const StateId i = work.front();
        work.pop_front();
        queued[i] = false;
        if (f[i] || !holds(i)) continue;
        f[i] = true;
        for (const auto* deps : {&parents[i], &conj_preds[i], &conj_anc[i]})
            for (StateId d : *deps)
                if (!f[d] && !queued[d]) {
                    queued[d] = true;
                    work.push_back(d);
                }
    }
    return f;
}

std::size_t universe_cap(std::size_t bound) { return std::max<std::size_t>(bound * 8, 4096); }

}  // namespace

std::vector<bool> compute_f(const std::vector<Term>& states, const std::vector<Edge>& edges) {
    Universe u;
    for (const auto& s : states) u.add(s);
    const std::size_t n = u.terms.size();
    for (const auto& e : edges) {
        if (e.from >= states.size() || e.to >= states.size()) throw std::invalid_argument("edge refers to unknown state");
        u.succ[u.index.at(states[e.from])].push_back({e.label, u.index.at(states[e.to])});
    }
    for (auto& outs : u.succ)
        std::sort(outs.begin(), outs.end(), [](const Lts::Out& a, const Lts::Out& b) {
            if (auto c = a.label <=> b.label; c != 0) return c < 0;
            return a.target < b.target;
        });
    StepCache cache;
    close_under_operands(u, n, cache, universe_cap(kDefaultStateBound));
    const auto f = fixpoint(u);
    std::vector<bool> out(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) out[i] = f[u.index.at(states[i])];
    return out;
}

Lts build_lts(const std::vector<Term>& roots, std::size_t state_bound) {
    if (roots.empty()) throw std::invalid_argument("build_lts needs at least one root");
    Universe u;
    StepCache cache;
    Lts l;
    for (const auto& r : roots) l.roots_.push_back(u.add(r));
    if (u.terms.size() > state_bound)
        throw ResourceLimitError("reachable state space exceeds " + std::to_string(state_bound) + " states");
    explore(u, 0, cache, state_bound, "reachable state space");
    const std::size_t reachable = u.terms.size();
    close_under_operands(u, reachable, cache, universe_cap(state_bound));
    const auto f = fixpoint(u);

    l.terms_.assign(u.terms.begin(), u.terms.begin() + static_cast<std::ptrdiff_t>(reachable));
    l.succ_.assign(u.succ.begin(), u.succ.begin() + static_cast<std::ptrdiff_t>(reachable));
    l.inconsistent_.assign(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(reachable));
    l.stable_.resize(reachable);
    for (std::size_t i = 0; i < reachable; ++i) {
        l.index_.emplace(l.terms_[i], static_cast<StateId>(i));
        l.transition_count_ += l.succ_[i].size();
        l.stable_[i] = std::none_of(l.succ_[i].begin(), l.succ_[i].end(), [](const Lts::Out& o) { return o.label.is_tau(); });
    }

    std::vector<StateId> by_size(reachable);
    for (std::size_t i = 0; i < reachable; ++i) by_size[i] = static_cast<StateId>(i);
    std::sort(by_size.begin(), by_size.end(),
              [&](StateId a, StateId b) { return l.terms_[a].size() < l.terms_[b].size(); });
    l.weps_.resize(reachable);
    for (StateId i : by_size) {
        if (l.inconsistent_[i]) continue;
        if (l.stable_[i]) {
            l.weps_[i] = {i};
            continue;
        }
        std::vector<StateId> acc;
        for (const auto& o : l.succ_[i])
            if (o.label.is_tau()) acc.insert(acc.end(), l.weps_[o.target].begin(), l.weps_[o.target].end());
        std::sort(acc.begin(), acc.end());
        acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
        l.weps_[i] = std::move(acc);
    }
    return l;
}

std::optional<StateId> Lts::find(const Term& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateId Lts::id(const Term& t) const {
    if (auto s = find(t)) return *s;
    throw UnknownStateError("not a state of this transition system: " + format(t));
}

std::set<Action> Lts::ready_set(StateId s) const {
    std::set<Action> out;
    for (const auto& o : succ_.at(s)) out.insert(o.label);
    return out;
}

std::vector<Term> Lts::weak_eps_stable(const Term& t) const {
    std::vector<Term> out;
    for (StateId s : weps_[id(t)]) out.push_back(terms_[s]);
    return out;
}

std::vector<StateId> Lts::weak_act_stable(StateId s, const Action& a) const {
    std::vector<StateId> out;
    for (StateId r : weps_.at(s))
        for (const auto& o : succ_[r])
            if (o.label == a && !inconsistent_[o.target])
                out.insert(out.end(), weps_[o.target].begin(), weps_[o.target].end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Term> Lts::weak_act_stable(const Term& t, const Action& a) const {
    std::vector<Term> out;
    for (StateId s : weak_act_stable(id(t), a)) out.push_back(terms_[s]);
    return out;
}

nlohmann::json Lts::to_json() const {
    nlohmann::json states = nlohmann::json::array(), transitions = nlohmann::json::array();
    for (std::size_t i = 0; i < size(); ++i) {
        states.push_back({{"id", i}, {"term", format(terms_[i])}, {"stable", bool(stable_[i])},
                          {"inconsistent", bool(inconsistent_[i])}});
        for (const auto& o : succ_[i]) transitions.push_back({{"from", i}, {"label", o.label.str()}, {"to", o.target}});
    }
    return {{"root", root()}, {"states", std::move(states)}, {"transitions", std::move(transitions)}};
}

namespace {
std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\\' || c == '"') out += '\\';
        out += c;
    }
    return out;
}
}  // namespace

std::string Lts::to_dot() const {
    std::ostringstream out;
    out << "digraph lts {\n  init [shape=point];\n";
    for (std::size_t i = 0; i < size(); ++i) {
        out << "  s" << i << " [label=\"" << dot_escape(format(terms_[i])) << '"';
        if (inconsistent_[i]) out << ", peripheries=2";
        out << "];\n";
    }
    out << "  init -> s" << root() << ";\n";
    for (std::size_t i = 0; i < size(); ++i)
        for (const auto& o : succ_[i]) {
            out << "  s" << i << " -> s" << o.target << " [label=\"" << o.label.str() << '"';
            if (o.label.is_tau()) out << ", style=dashed";
            out << "];\n";
        }
    out << "}\n";
    return out.str();
}

LtsReport check_llts(const Lts& l) {
    LtsReport rep;
    const std::size_t n = l.size();
    auto fail = [&](bool& flag, const std::string& what, StateId s) {
        flag = false;
        rep.violations.push_back(what + " at " + format(l.term(s)));
    };
    for (StateId s = 0; s < n; ++s) {
        const auto& outs = l.successors(s);
        bool tau = false, vis = false;
        for (const auto& o : outs) (o.label.is_tau() ? tau : vis) = true;
        if (tau && vis) fail(rep.tau_pure, "tau-purity", s);
        for (const auto& o : outs) {
            bool all_f = true;
            for (const auto& p : outs)
                if (p.label == o.label) all_f = all_f && l.inconsistent(p.target);
            if (all_f && !l.inconsistent(s)) {
                fail(rep.lts1, "LTS1 (" + o.label.str() + ")", s);
                break;
            }
        }
        if (l.inconsistent(s) && tau)
            for (const auto& o : outs)
                if (o.label.is_tau() && !l.inconsistent(o.target)) {
                    fail(rep.tau_from_f_into_f, "tau-step leaves F", s);
                    break;
                }
    }
    // τ-acyclicity and F-avoiding reachability of a stable consistent state, by DFS.
    enum : std::uint8_t { White, Grey, Black };
    std::vector<std::uint8_t> colour(n, White);
    std::vector<std::int8_t> escapes(n, -1);
    for (StateId root = 0; root < n; ++root) {
        if (colour[root] != White) continue;
        std::vector<std::pair<StateId, std::size_t>> stack{{root, 0}};
        colour[root] = Grey;
        while (!stack.empty()) {
            auto& [s, k] = stack.back();
            const auto& outs = l.successors(s);
            while (k < outs.size() && !outs[k].label.is_tau()) ++k;
            if (k < outs.size()) {
                const StateId t = outs[k++].target;
                if (colour[t] == Grey) fail(rep.tau_acyclic, "tau-cycle", t);
                if (colour[t] == White) {
                    colour[t] = Grey;
                    stack.push_back({t, 0});
                }
                continue;
            }
            bool esc = false;
            if (!l.inconsistent(s)) {
                if (l.stable(s)) esc = true;
                for (const auto& o : outs)
                    if (o.label.is_tau() && escapes[o.target] == 1) esc = true;
            }
            escapes[s] = esc ? 1 : 0;
            colour[s] = Black;
            stack.pop_back();
        }
    }
    for (StateId s = 0; s < n; ++s)
        if (escapes[s] == 0 && !l.inconsistent(s)) fail(rep.lts2, "LTS2", s);
    return rep;
}

}  // namespace cllr
