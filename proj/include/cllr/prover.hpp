#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "cllr/axioms.hpp"
#include "cllr/normalizer.hpp"
#include "cllr/refinement.hpp"

namespace cllr {

/// Either a derivation of t1 <= t2 or, when none exists, the semantic reason.
struct Verdict {
    bool derivable = false;
    ProofPtr proof;
    std::optional<RefusalWitness> witness;  // absent when witnesses were not requested
    explicit operator bool() const { return derivable; }
};

struct ProverOptions {
    std::size_t state_bound = kDefaultStateBound;
    bool witnesses = true;
    Exec exec = Exec::Parallel;
};

/// Ground-completeness prover. Normal forms and sub-derivations are cached across
/// queries; not safe for concurrent use.
class Prover {
public:
    explicit Prover(ProverOptions opts = {});
    ~Prover();
    Prover(Prover&&) noexcept;
    Prover& operator=(Prover&&) noexcept;

    /// Builds one semantic model over `terms` and their normal forms, used by later queries
    /// whose terms it contains.
    void preload(const std::vector<Term>& terms);

    Verdict prove(const Term& t1, const Term& t2);

    /// Derivation of n1 <= n2 for normal forms; absent when n1 does not refine n2.
    std::optional<ProofPtr> prove_nf_leq(const Term& n1, const Term& n2);

    Normalizer& normalizer();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Verdict prove_leq(const Term& t1, const Term& t2, std::size_t state_bound = kDefaultStateBound);

}  // namespace cllr
