#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "cllr/term.hpp"

namespace cllr {

enum class AxiomName {
    EC1, EC2, EC3, EC4, EC5,
    DI1, DI2, DI3, DI4, DI5,
    CO1, CO2, CO3,
    PR1, PR2,
    PA1, PA2,
    DS1, DS2, DS3, DS4,
    ECC1, ECC2, ECC3,
    EXP1, EXP2,
};

const std::vector<AxiomName>& all_axioms();
const char* axiom_name(AxiomName a);
std::optional<AxiomName> axiom_from_name(const std::string& s);
/// Equational axioms may be used in both directions.
bool is_equational(AxiomName a);

enum class Direction { L2R, R2L };
const char* direction_name(Direction d);

struct Instantiation {
    std::map<std::string, Term> vars;
    std::size_t n = 0;  // summand counts of n-ary schemas
    std::size_t m = 0;
};

struct MatchResult {
    std::optional<Instantiation> inst;
    /// Why matching failed; mentions the side condition when only that failed.
    std::string failure;
    explicit operator bool() const { return inst.has_value(); }
};

/// Is `lhs <= rhs` a ground instance of the axiom read in direction `dir`?
MatchResult match_axiom(AxiomName name, Direction dir, const Term& lhs, const Term& rhs);

/// Right-hand side of the expansion schema for two guarded sums.
Term expansion(const Term& left_sum, const Term& right_sum, const SyncSet& sync);

enum class Rule { Axiom, Ref, Trans, Context };
const char* rule_name(Rule r);

struct ProofNode;
using ProofPtr = std::shared_ptr<const ProofNode>;

/// A derivation of `lhs <= rhs`.
struct ProofNode {
    Rule rule;
    AxiomName axiom = AxiomName::EC1;
    Direction direction = Direction::L2R;
    Term lhs;
    Term rhs;
    std::vector<ProofPtr> children;
};

ProofPtr proof_ref(const Term& t);
ProofPtr proof_axiom(AxiomName name, Direction dir, const Term& lhs, const Term& rhs);
/// Claim is (a.lhs, b.rhs); Ref operands are dropped.
ProofPtr proof_trans(const ProofPtr& a, const ProofPtr& b);
/// Operator taken from `shape`; claim sides combine the children's sides.
ProofPtr proof_context(const Term& shape, std::vector<ProofPtr> children);

/// Number of distinct nodes.
std::size_t proof_size(const ProofPtr& p);

struct CheckResult {
    bool ok = true;
    std::string path;  // child indices from the root, e.g. "/1/0"
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Memoizing checker; shared subproofs are checked once.
class ProofChecker {
public:
    CheckResult check(const ProofPtr& p);

private:
    CheckResult check_node(const ProofPtr& p);
    std::unordered_map<const ProofNode*, CheckResult> memo_;
    std::vector<ProofPtr> keep_;
};

CheckResult check_proof(const ProofPtr& p);

/// Proof that two terms are equal: one derivation for each inequality.
struct EqProof {
    ProofPtr fwd;  // a <= b
    ProofPtr bwd;  // b <= a
    const Term& lhs() const { return fwd->lhs; }
    const Term& rhs() const { return fwd->rhs; }
};

EqProof eq_refl(const Term& t);
/// Equational axiom instance with `lhs` matching the schema side selected by `dir`.
EqProof eq_axiom(AxiomName name, Direction dir, const Term& lhs, const Term& rhs);
EqProof eq_trans(const EqProof& a, const EqProof& b);
EqProof eq_swap(const EqProof& e);
EqProof eq_context(const Term& shape, const std::vector<EqProof>& children);

/// Proof of src = dst when both flatten (under □, or under ∨) to the same multiset.
std::optional<EqProof> reorder_proof(const Term& src, const Term& dst);

/// Equality with the left-nested form of the maximal `op`-flattening.
EqProof left_nest_proof(Kind op, const Term& t);
/// Equality of a left-nested list with the left-nested list sorted by term order,
/// adjacent duplicates removed with the idempotence axiom (stable ones only for □).
EqProof sort_dedup_proof(Kind op, const std::vector<Term>& items, bool dedup);

/// Rewrites items k and k+1 of a left-nested `op`-list of n items into one, given
/// `pair` proving (item_k op item_k+1) = u.
EqProof combine_adjacent_proof(Kind op, const Term& list, std::size_t n, std::size_t k, const EqProof& pair);

nlohmann::json proof_to_json(const ProofPtr& p);
ProofPtr proof_from_json(const nlohmann::json& j);

}  // namespace cllr
