#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cllr/semantics.hpp"

namespace cllr {

enum class Exec { Serial, Parallel };

enum class WitnessKind { InconsistencyGap, ReadySetMismatch, UnmatchedWeakStep, NoStableMatch };
const char* witness_kind_name(WitnessKind k);

enum class Side { Left, Right };

/// One weak step of a witness; an absent label means ε.
struct WitnessStep {
    Side side;
    Term from;
    std::optional<Action> label;
    Term to;
};

/// Explanation of a failed refinement: the two side paths end in `left` / `right`
/// where a clause of the simulation conditions visibly fails.
struct RefusalWitness {
    WitnessKind kind;
    std::vector<WitnessStep> path;
    Term left;
    Term right;
    std::optional<Action> action;
};

nlohmann::json witness_to_json(const RefusalWitness& w);
std::string describe(const RefusalWitness& w);

/// Checks a witness for the query `p` refines `q` against freshly built systems.
/// Returns an empty string when it replays, otherwise the reason it does not.
std::string replay_witness(const RefusalWitness& w, const Term& p, const Term& q,
                           std::size_t state_bound = kDefaultStateBound);

struct SimOptions {
    Exec exec = Exec::Parallel;
    bool record_reasons = true;
};

/// Largest stable ready simulation over the union of the systems reachable from
/// `roots`, kept for repeated queries.
class RefinementChecker {
public:
    explicit RefinementChecker(const std::vector<Term>& roots, std::size_t state_bound = kDefaultStateBound,
                               SimOptions opts = {});
    ~RefinementChecker();
    RefinementChecker(RefinementChecker&&) noexcept;
    RefinementChecker& operator=(RefinementChecker&&) noexcept;

    const Lts& lts() const;

    /// Membership of a pair of states in the largest stable ready simulation.
    bool related(StateId p, StateId q) const;
    bool related(const Term& p, const Term& q) const;

    /// Full preorder between two states of the system.
    bool refines(StateId p, StateId q) const;
    bool refines(const Term& p, const Term& q) const;
    std::optional<RefusalWitness> witness(const Term& p, const Term& q) const;

    /// All related pairs, sorted by state id.
    std::vector<std::pair<StateId, StateId>> pairs() const;
    std::size_t deletions() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct SimRelation {
    std::vector<std::pair<Term, Term>> pairs;
    bool contains(const Term& p, const Term& q) const;
};

SimRelation largest_stable_sim(const Lts& l1, const Lts& l2, SimOptions opts = {});

/// Whether `pairs` satisfies the four stable ready simulation conditions in `l`.
std::string check_stable_ready_simulation(const Lts& l, const std::vector<std::pair<StateId, StateId>>& pairs);

struct RefinementResult {
    bool holds;
    std::optional<RefusalWitness> witness;
    explicit operator bool() const { return holds; }
};

RefinementResult refines(const Term& p, const Term& q, std::size_t state_bound = kDefaultStateBound);
bool rs_equiv(const Term& p, const Term& q, std::size_t state_bound = kDefaultStateBound);

}  // namespace cllr
