#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "cllr/term.hpp"

namespace cllr {

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownStateError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

constexpr std::size_t kDefaultStateBound = 100000;

struct Transition {
    Action label;
    Term target;
    bool operator==(const Transition&) const = default;
};

/// One-step transitions of t, sorted by (label, target) and duplicate-free.
std::vector<Transition> step(const Term& t);

/// Memoizing step evaluator; reuse across many terms sharing subterms.
class StepCache {
public:
    const std::vector<Transition>& step(const Term& t);
    bool stable(const Term& t);

private:
    std::unordered_map<Term, std::vector<Transition>, TermHash> memo_;
};

using StateId = std::uint32_t;

struct Edge {
    StateId from;
    Action label;
    StateId to;
};

/// Least set closed under the inconsistency rules over a transition graph.
/// `edges` must list every transition of every state; operands of composite
/// states missing from `states` are added internally (with their own steps).
std::vector<bool> compute_f(const std::vector<Term>& states, const std::vector<Edge>& edges);

class Lts;
/// Throws ResourceLimitError when more than `state_bound` states are reachable.
Lts build_lts(const std::vector<Term>& roots, std::size_t state_bound = kDefaultStateBound);

/// Reachable transition system of one or more roots, with inconsistency flags.
class Lts {
public:
    struct Out {
        Action label;
        StateId target;
    };

    std::size_t size() const { return terms_.size(); }
    std::size_t transition_count() const { return transition_count_; }
    const std::vector<StateId>& roots() const { return roots_; }
    StateId root() const { return roots_.front(); }

    const Term& term(StateId s) const { return terms_.at(s); }
    std::optional<StateId> find(const Term& t) const;
    /// Throws UnknownStateError.
    StateId id(const Term& t) const;

    const std::vector<Out>& successors(StateId s) const { return succ_[s]; }
    bool stable(StateId s) const { return stable_[s]; }
    bool inconsistent(StateId s) const { return inconsistent_[s]; }
    bool inconsistent(const Term& t) const { return inconsistent(id(t)); }

    std::set<Action> ready_set(StateId s) const;
    std::set<Action> ready_set(const Term& t) const { return ready_set(id(t)); }

    /// Stable, consistent q reachable by an F-avoiding τ-path; sorted ids.
    const std::vector<StateId>& weak_eps_stable(StateId s) const { return weps_[s]; }
    std::vector<Term> weak_eps_stable(const Term& t) const;
    /// Targets of p ⇒ε_F r →a_F s ⇒ε_F| q; sorted ids.
    std::vector<StateId> weak_act_stable(StateId s, const Action& a) const;
    std::vector<Term> weak_act_stable(const Term& t, const Action& a) const;

    nlohmann::json to_json() const;
    std::string to_dot() const;

private:
    friend Lts build_lts(const std::vector<Term>& roots, std::size_t state_bound);
    std::vector<Term> terms_;
    std::unordered_map<Term, StateId, TermHash> index_;
    std::vector<std::vector<Out>> succ_;
    std::vector<bool> stable_;
    std::vector<bool> inconsistent_;
    std::vector<std::vector<StateId>> weps_;
    std::vector<StateId> roots_;
    std::size_t transition_count_ = 0;
};

inline Lts build_lts(const Term& root, std::size_t state_bound = kDefaultStateBound) {
    return build_lts(std::vector<Term>{root}, state_bound);
}

/// Checks of the structural guarantees of a built system.
struct LtsReport {
    bool tau_pure = true;
    bool lts1 = true;
    bool lts2 = true;
    bool tau_acyclic = true;
    bool tau_from_f_into_f = true;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

LtsReport check_llts(const Lts& l);

}  // namespace cllr
