#include "cllr/refinement.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

#include "cllr/syntax.hpp"

namespace cllr {

const char* witness_kind_name(WitnessKind k) {
    switch (k) {
        case WitnessKind::InconsistencyGap: return "InconsistencyGap";
        case WitnessKind::ReadySetMismatch: return "ReadySetMismatch";
        case WitnessKind::UnmatchedWeakStep: return "UnmatchedWeakStep";
        case WitnessKind::NoStableMatch: return "NoStableMatch";
    }
    return "?";
}

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
constexpr std::size_t kMaxStable = 32768;

struct Reason {
    std::uint32_t time;
    std::uint32_t action;
    std::uint32_t left_target;
};

}  // namespace

struct RefinementChecker::Impl {
    Lts lts;
    SimOptions opts;
    std::vector<StateId> stable_ids;          // compact -> state
    std::vector<std::uint32_t> compact;       // state -> compact or kNone
    std::vector<Action> actions;              // visible labels
    // wa[c]: (action, sorted compact targets) for each action with a weak step.
    std::vector<std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>>> wa;
    std::vector<std::vector<std::vector<std::uint32_t>>> rev;  // rev[a][c'] = sources
    std::vector<std::uint64_t> bits;
    std::size_t words = 0;
    std::vector<bool> seeded_bits;
    std::unordered_map<std::uint64_t, Reason> reasons;
    std::size_t deleted = 0;

    std::size_t m() const { return stable_ids.size(); }
    bool in_r(std::uint32_t p, std::uint32_t q) const { return bits[p * words + q / 64] >> (q % 64) & 1; }
    void drop(std::uint32_t p, std::uint32_t q) { bits[p * words + q / 64] &= ~(std::uint64_t{1} << (q % 64)); }
    static std::uint64_t key(std::uint32_t p, std::uint32_t q) { return std::uint64_t{p} << 32 | q; }

    const std::vector<std::uint32_t>* wa_of(std::uint32_t c, std::uint32_t a) const {
        for (const auto& [b, v] : wa[c])
            if (b == a) return &v;
        return nullptr;
    }

    // First (action, left target) whose weak step has no related answer.
    std::optional<std::pair<std::uint32_t, std::uint32_t>> violation(std::uint32_t p, std::uint32_t q) const {
        for (const auto& [a, targets] : wa[p]) {
            const auto* answers = wa_of(q, a);
            for (std::uint32_t p2 : targets) {
                bool ok = false;
                if (answers)
                    for (std::uint32_t q2 : *answers)
                        if (in_r(p2, q2)) {
                            ok = true;
                            break;
                        }
                if (!ok) return std::make_pair(a, p2);
            }
        }
        return std::nullopt;
    }

    void build_tables() {
        const std::size_t n = lts.size();
        compact.assign(n, kNone);
        for (StateId s = 0; s < n; ++s)
            if (lts.stable(s)) {
                compact[s] = static_cast<std::uint32_t>(stable_ids.size());
                stable_ids.push_back(s);
            }
        if (m() > kMaxStable)
            throw ResourceLimitError("simulation over more than " + std::to_string(kMaxStable) + " stable states");
        std::map<Action, std::uint32_t> action_index;
        for (StateId s = 0; s < n; ++s)
            for (const auto& o : lts.successors(s))
                if (o.label.is_visible()) action_index.emplace(o.label, 0);
        for (auto& [a, i] : action_index) {
            i = static_cast<std::uint32_t>(actions.size());
            actions.push_back(a);
        }
        wa.assign(m(), {});
        auto fill = [&](std::size_t c) {
            const StateId p = stable_ids[c];
            if (lts.inconsistent(p)) return;
            std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> row;
            for (const auto& o : lts.successors(p)) {
                if (lts.inconsistent(o.target)) continue;
                const std::uint32_t a = action_index.at(o.label);
                if (row.empty() || row.back().first != a) row.emplace_back(a, std::vector<std::uint32_t>{});
                for (StateId t : lts.weak_eps_stable(o.target)) row.back().second.push_back(compact[t]);
            }
            for (auto& [a, v] : row) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            }
            row.erase(std::remove_if(row.begin(), row.end(), [](auto& e) { return e.second.empty(); }), row.end());
            wa[c] = std::move(row);
        };
        const auto mm = static_cast<std::int64_t>(m());
        if (opts.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
            for (std::int64_t c = 0; c < mm; ++c) fill(static_cast<std::size_t>(c));
        } else {
            for (std::int64_t c = 0; c < mm; ++c) fill(static_cast<std::size_t>(c));
        }
        rev.assign(actions.size(), std::vector<std::vector<std::uint32_t>>(m()));
        for (std::uint32_t c = 0; c < m(); ++c)
            for (const auto& [a, v] : wa[c])
                for (std::uint32_t t : v) rev[a][t].push_back(c);
    }

    void seed() {
        words = (m() + 63) / 64;
        bits.assign(m() * words, 0);
        // Ready sets of stable states as sorted label-index lists.
        std::vector<std::vector<std::uint32_t>> ready(m());
        std::map<Action, std::uint32_t> idx;
        for (std::uint32_t i = 0; i < actions.size(); ++i) idx.emplace(actions[i], i);
        for (std::uint32_t c = 0; c < m(); ++c) {
            for (const auto& o : lts.successors(stable_ids[c])) ready[c].push_back(idx.at(o.label));
            ready[c].erase(std::unique(ready[c].begin(), ready[c].end()), ready[c].end());
        }
        auto row = [&](std::size_t p) {
            const bool fp = lts.inconsistent(stable_ids[p]);
            for (std::uint32_t q = 0; q < m(); ++q)
                if (fp || (!lts.inconsistent(stable_ids[q]) && ready[p] == ready[q]))
                    bits[p * words + q / 64] |= std::uint64_t{1} << (q % 64);
        };
        const auto mm = static_cast<std::int64_t>(m());
        if (opts.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
            for (std::int64_t p = 0; p < mm; ++p) row(static_cast<std::size_t>(p));
        } else {
            for (std::int64_t p = 0; p < mm; ++p) row(static_cast<std::size_t>(p));
        }
        if (!opts.record_reasons) return;
        seeded_bits.assign(m() * m(), false);
        for (std::uint32_t p = 0; p < m(); ++p)
                for (std::uint32_t q = 0; q < m(); ++q) seeded_bits[std::size_t{p} * m() + q] = in_r(p, q);
    }

    void record(std::uint32_t p, std::uint32_t q, std::uint32_t time, std::pair<std::uint32_t, std::uint32_t> why) {
        ++deleted;
        if (opts.record_reasons) reasons.emplace(key(p, q), Reason{time, why.first, why.second});
    }

    void refine_serial() {
        std::deque<std::uint64_t> work;
        std::vector<bool> queued(m() * m(), false);
        for (std::uint32_t p = 0; p < m(); ++p) {
            if (lts.inconsistent(stable_ids[p]) || wa[p].empty()) continue;
            for (std::uint32_t q = 0; q < m(); ++q)
                if (in_r(p, q)) {
                    work.push_back(key(p, q));
                    queued[std::size_t{p} * m() + q] = true;
                }
        }
        std::uint32_t clock = 0;
        while (!work.empty()) {
            const std::uint64_t k = work.front();
            work.pop_front();
            const auto p = static_cast<std::uint32_t>(k >> 32), q = static_cast<std::uint32_t>(k);
            queued[std::size_t{p} * m() + q] = false;
            if (!in_r(p, q)) continue;
            const auto why = violation(p, q);
            if (!why) continue;
            drop(p, q);
            record(p, q, ++clock, *why);
            for (std::uint32_t a = 0; a < actions.size(); ++a)
                for (std::uint32_t pp : rev[a][p])
                    for (std::uint32_t qq : rev[a][q])
                        if (in_r(pp, qq) && !queued[std::size_t{pp} * m() + qq]) {
                            queued[std::size_t{pp} * m() + qq] = true;
                            work.push_back(key(pp, qq));
                        }
        }
    }

    // Jacobi rounds: every surviving pair is tested against the relation of the
    // previous round, and all failures are removed together.
    void refine_parallel() {
        std::vector<std::uint32_t> active;
        for (std::uint32_t p = 0; p < m(); ++p)
            if (!lts.inconsistent(stable_ids[p]) && !wa[p].empty()) active.push_back(p);
        std::vector<std::vector<std::pair<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>>>> found(active.size());
        for (std::uint32_t round = 1;; ++round) {
            const auto na = static_cast<std::int64_t>(active.size());
#pragma omp parallel for schedule(dynamic, 16)
            for (std::int64_t i = 0; i < na; ++i) {
                const std::uint32_t p = active[static_cast<std::size_t>(i)];
                auto& out = found[static_cast<std::size_t>(i)];
                out.clear();
                for (std::uint32_t q = 0; q < m(); ++q)
                    if (in_r(p, q))
                        if (auto why = violation(p, q)) out.emplace_back(key(p, q), *why);
            }
            bool changed = false;
            for (const auto& out : found)
                for (const auto& [k, why] : out) {
                    drop(static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k));
                    record(static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k), round, why);
                    changed = true;
                }
            if (!changed) break;
        }
    }

    // Order: never seeded first, then earlier deletion.
    std::uint64_t removal_time(std::uint32_t p, std::uint32_t q) const {
        if (in_r(p, q)) return std::numeric_limits<std::uint64_t>::max();
        if (!seeded_bits[std::size_t{p} * m() + q]) return 0;
        return reasons.at(key(p, q)).time;
    }

    std::uint32_t earliest(std::uint32_t p, const std::vector<std::uint32_t>& qs) const {
        std::uint32_t best = qs.front();
        for (std::uint32_t q : qs)
            if (removal_time(p, q) < removal_time(p, best)) best = q;
        return best;
    }

    bool refines(StateId p, StateId q) const {
        const auto& wq = lts.weak_eps_stable(q);
        for (StateId p2 : lts.weak_eps_stable(p)) {
            bool ok = false;
            for (StateId q2 : wq)
                if (in_r(compact[p2], compact[q2])) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    }
};

RefinementChecker::RefinementChecker(const std::vector<Term>& roots, std::size_t state_bound, SimOptions opts)
    : impl_(std::make_unique<Impl>()) {
    impl_->lts = build_lts(roots, state_bound);
    impl_->opts = opts;
    impl_->build_tables();
    impl_->seed();
    if (opts.exec == Exec::Parallel)
        impl_->refine_parallel();
    else
        impl_->refine_serial();
}

RefinementChecker::~RefinementChecker() = default;
RefinementChecker::RefinementChecker(RefinementChecker&&) noexcept = default;
RefinementChecker& RefinementChecker::operator=(RefinementChecker&&) noexcept = default;

const Lts& RefinementChecker::lts() const { return impl_->lts; }

bool RefinementChecker::related(StateId p, StateId q) const {
    const auto cp = impl_->compact.at(p), cq = impl_->compact.at(q);
    return cp != kNone && cq != kNone && impl_->in_r(cp, cq);
}

bool RefinementChecker::related(const Term& p, const Term& q) const { return related(lts().id(p), lts().id(q)); }

bool RefinementChecker::refines(StateId p, StateId q) const { return impl_->refines(p, q); }

bool RefinementChecker::refines(const Term& p, const Term& q) const { return refines(lts().id(p), lts().id(q)); }

std::size_t RefinementChecker::deletions() const { return impl_->deleted; }

std::vector<std::pair<StateId, StateId>> RefinementChecker::pairs() const {
    std::vector<std::pair<StateId, StateId>> out;
    const auto& I = *impl_;
    for (std::uint32_t p = 0; p < I.m(); ++p)
        for (std::uint32_t q = 0; q < I.m(); ++q)
            if (I.in_r(p, q)) out.emplace_back(I.stable_ids[p], I.stable_ids[q]);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<RefusalWitness> RefinementChecker::witness(const Term& p_term, const Term& q_term) const {
    const auto& I = *impl_;
    if (!I.opts.record_reasons) throw std::logic_error("witnesses need recorded deletion reasons");
    const Lts& l = I.lts;
    const StateId p = l.id(p_term), q = l.id(q_term);
    if (I.refines(p, q)) return std::nullopt;
    const auto& wq = l.weak_eps_stable(q);
    StateId p1 = 0;
    for (StateId cand : l.weak_eps_stable(p)) {
        bool ok = false;
        for (StateId q2 : wq) ok = ok || I.in_r(I.compact[cand], I.compact[q2]);
        if (!ok) {
            p1 = cand;
            break;
        }
    }
    RefusalWitness w;
    w.path.push_back({Side::Left, p_term, std::nullopt, l.term(p1)});
    if (wq.empty()) {
        w.kind = l.inconsistent(q) ? WitnessKind::InconsistencyGap : WitnessKind::NoStableMatch;
        w.left = l.term(p1);
        w.right = q_term;
        return w;
    }
    std::vector<std::uint32_t> cands;
    for (StateId s : wq) cands.push_back(I.compact[s]);
    std::uint32_t cp = I.compact[p1], cq = I.earliest(cp, cands);
    w.path.push_back({Side::Right, q_term, std::nullopt, l.term(I.stable_ids[cq])});
    for (;;) {
        const std::uint64_t t = I.removal_time(cp, cq);
        if (t == 0) {
            w.kind = WitnessKind::ReadySetMismatch;
            break;
        }
        const Reason& why = I.reasons.at(Impl::key(cp, cq));
        const Action& a = I.actions[why.action];
        const auto* answers = I.wa_of(cq, why.action);
        if (!answers) {
            w.kind = WitnessKind::UnmatchedWeakStep;
            w.action = a;
            break;
        }
        w.path.push_back({Side::Left, l.term(I.stable_ids[cp]), a, l.term(I.stable_ids[why.left_target])});
        const std::uint32_t next = I.earliest(why.left_target, *answers);
        if (I.removal_time(why.left_target, next) >= t) throw std::logic_error("witness chain does not descend");
        w.path.push_back({Side::Right, l.term(I.stable_ids[cq]), a, l.term(I.stable_ids[next])});
        cp = why.left_target;
        cq = next;
    }
    w.left = l.term(I.stable_ids[cp]);
    w.right = l.term(I.stable_ids[cq]);
    return w;
}

bool SimRelation::contains(const Term& p, const Term& q) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(p, q));
}

SimRelation largest_stable_sim(const Lts& l1, const Lts& l2, SimOptions opts) {
    std::vector<Term> roots;
    for (StateId r : l1.roots()) roots.push_back(l1.term(r));
    for (StateId r : l2.roots()) roots.push_back(l2.term(r));
    opts.record_reasons = false;
    RefinementChecker c(roots, std::max(l1.size() + l2.size(), std::size_t{1}), opts);
    SimRelation rel;
    for (const auto& [p, q] : c.pairs()) rel.pairs.emplace_back(c.lts().term(p), c.lts().term(q));
    std::sort(rel.pairs.begin(), rel.pairs.end());
    return rel;
}

std::string check_stable_ready_simulation(const Lts& l, const std::vector<std::pair<StateId, StateId>>& pairs) {
    auto in = [&](StateId p, StateId q) { return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(p, q)); };
    for (const auto& [p, q] : pairs) {
        const std::string at = " at (" + format(l.term(p)) + ", " + format(l.term(q)) + ")";
        if (!l.stable(p) || !l.stable(q)) return "RS1" + at;
        if (!l.inconsistent(p) && l.inconsistent(q)) return "RS2" + at;
        if (!l.inconsistent(p) && l.ready_set(p) != l.ready_set(q)) return "RS4" + at;
        for (const Action& a : l.ready_set(p)) {
            if (a.is_tau()) continue;
            const auto answers = l.weak_act_stable(q, a);
            for (StateId p2 : l.weak_act_stable(p, a))
                if (std::none_of(answers.begin(), answers.end(), [&](StateId q2) { return in(p2, q2); }))
                    return "RS3 (" + a.str() + ")" + at;
        }
    }
    return {};
}

RefinementResult refines(const Term& p, const Term& q, std::size_t state_bound) {
    RefinementChecker c({p, q}, state_bound);
    RefinementResult r{c.refines(p, q), std::nullopt};
    if (!r.holds) r.witness = c.witness(p, q);
    return r;
}

bool rs_equiv(const Term& p, const Term& q, std::size_t state_bound) {
    SimOptions o;
    o.record_reasons = false;
    RefinementChecker c({p, q}, state_bound, o);
    return c.refines(p, q) && c.refines(q, p);
}

nlohmann::json witness_to_json(const RefusalWitness& w) {
    nlohmann::json path = nlohmann::json::array();
    for (const auto& s : w.path)
        path.push_back({{"side", s.side == Side::Left ? "left" : "right"},
                        {"from", format(s.from)},
                        {"label", s.label ? s.label->str() : "eps"},
                        {"to", format(s.to)}});
    nlohmann::json detail{{"left", format(w.left)}, {"right", format(w.right)}};
    if (w.action) detail["action"] = w.action->str();
    return {{"kind", witness_kind_name(w.kind)}, {"path", std::move(path)}, {"detail", std::move(detail)}};
}

std::string describe(const RefusalWitness& w) {
    switch (w.kind) {
        case WitnessKind::InconsistencyGap:
            return "consistent stable " + format(w.left) + " but " + format(w.right) + " is inconsistent";
        case WitnessKind::ReadySetMismatch:
            return "ready sets of " + format(w.left) + " and " + format(w.right) + " differ";
        case WitnessKind::UnmatchedWeakStep:
            return format(w.left) + " has a weak " + w.action->str() + "-step that " + format(w.right) + " cannot match";
        case WitnessKind::NoStableMatch:
            return "no stable consistent match for " + format(w.left) + " below " + format(w.right);
    }
    return {};
}

std::string replay_witness(const RefusalWitness& w, const Term& p, const Term& q, std::size_t state_bound) {
    const Lts l = build_lts({p, q}, state_bound);
    auto known = [&](const Term& t) { return l.find(t).has_value(); };
    Term left = p, right = q;
    bool left_started = false;
    for (const auto& s : w.path) {
        Term& cur = s.side == Side::Left ? left : right;
        if (!(s.from == cur)) return "path step does not continue from " + format(cur);
        if (!known(s.to)) return "path step target " + format(s.to) + " is not a state";
        const StateId from = l.id(s.from), to = l.id(s.to);
        const auto targets = s.label ? l.weak_act_stable(from, *s.label) : l.weak_eps_stable(from);
        if (!(s.label && s.label->is_tau()) && !std::binary_search(targets.begin(), targets.end(), to))
            return "no weak step " + format(s.from) + " to " + format(s.to);
        if (s.label && s.label->is_tau()) return "tau-labelled weak step";
        if (s.side == Side::Left) left_started = true;
        cur = s.to;
    }
    if (!left_started) return "left path is empty";
    if (!(left == w.left) || !(right == w.right)) return "detail does not match path ends";
    const StateId a = l.id(w.left), b = l.id(w.right);
    if (l.inconsistent(a)) return "left end is inconsistent";
    switch (w.kind) {
        case WitnessKind::InconsistencyGap:
            if (!(right == q) || !l.inconsistent(b)) return "right side is not inconsistent";
            return {};
        case WitnessKind::NoStableMatch:
            if (!(right == q) || !l.weak_eps_stable(b).empty()) return "right side has a stable match";
            return {};
        case WitnessKind::ReadySetMismatch:
            if (l.ready_set(a) == l.ready_set(b) && !l.inconsistent(b)) return "ready sets agree";
            return {};
        case WitnessKind::UnmatchedWeakStep:
            if (!w.action) return "missing action";
            if (l.weak_act_stable(a, *w.action).empty()) return "left end has no such weak step";
            if (!l.weak_act_stable(b, *w.action).empty()) return "right end can match the step";
            return {};
    }
    return "unknown kind";
}

}  // namespace cllr
