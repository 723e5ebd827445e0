#include "cllr/prover.hpp"

#include <stdexcept>
#include <unordered_map>

namespace cllr {

namespace {

ProofPtr ax(AxiomName a, const Term& l, const Term& r) { return proof_axiom(a, Direction::L2R, l, r); }

// ⊥ <= t
ProofPtr bottom_leq(const Term& t) {
    if (t.is_bottom()) return proof_ref(t);
    const Term bt = Term::disj(Term::bottom(), t), tb = Term::disj(t, Term::bottom());
    return proof_trans(ax(AxiomName::DI5, Term::bottom(), bt),
                       proof_trans(ax(AxiomName::DI1, bt, tb), ax(AxiomName::DI4, tb, t)));
}

// Item j of a left-nested disjunction of n items is below the whole.
ProofPtr lift(const Term& list, std::size_t n, std::size_t j) {
    if (n == 1) return proof_ref(list);
    const Term& rest = list.left();
    if (j == n - 1) {
        const Term& y = list.right();
        const Term yr = Term::disj(y, rest);
        return proof_trans(ax(AxiomName::DI5, y, yr), ax(AxiomName::DI1, yr, list));
    }
    return proof_trans(lift(rest, n - 1, j), ax(AxiomName::DI5, rest, list));
}

// From item_k <= y for every item of a left-nested disjunction, the whole is below y.
ProofPtr bound(const Term& list, const std::vector<ProofPtr>& items, std::size_t n) {
    if (n == 1) return items[0];
    ProofPtr c = proof_context(list, {bound(list.left(), items, n - 1), items[n - 1]});
    return proof_trans(c, ax(AxiomName::DI3, c->rhs, items[n - 1]->rhs));
}

ProofPtr sum_context(const Term& sum, const std::vector<ProofPtr>& conts, std::size_t n) {
    if (n == 1) return proof_context(sum, {conts[0]});
    return proof_context(sum, {sum_context(sum.left(), conts, n - 1), proof_context(sum.right(), {conts[n - 1]})});
}

struct PairHash {
    std::size_t operator()(const std::pair<Term, Term>& p) const { return p.first.hash() * 1000003u ^ p.second.hash(); }
};

}  // namespace

struct Prover::Impl {
    ProverOptions opts;
    Normalizer norm;
    std::unique_ptr<RefinementChecker> model;
    std::unordered_map<std::pair<Term, Term>, ProofPtr, PairHash> memo;

    bool covers(const RefinementChecker& c, std::initializer_list<const Term*> ts) const {
        for (const Term* t : ts)
            if (!c.lts().find(*t)) return false;
        return true;
    }

    // Left disjunction below right disjunction, one left disjunct at a time.
    ProofPtr disj_leq(const Term& x, const Term& y, const RefinementChecker& chk, std::size_t measure) {
        const auto xs = flatten(x, Kind::Disj), ys = flatten(y, Kind::Disj);
        std::vector<ProofPtr> parts;
        for (const Term& d : xs) {
            std::size_t j = 0;
            while (j < ys.size() && !chk.related(d, ys[j])) ++j;
            if (j == ys.size()) throw std::logic_error("no right disjunct simulates " + format(d));
            if (d.size() >= measure) throw std::logic_error("completeness recursion does not descend");
            parts.push_back(proof_trans(sum_leq(d, ys[j], chk), lift(y, ys.size(), j)));
        }
        return bound(x, parts, xs.size());
    }

    // Guarded sums in normal form related by the stable simulation.
    ProofPtr sum_leq(const Term& g1, const Term& g2, const RefinementChecker& chk) {
        const auto key = std::make_pair(g1, g2);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const auto s1 = as_guarded_sum(g1).value(), s2 = as_guarded_sum(g2).value();
        if (s1.size() != s2.size()) throw std::logic_error("related sums with different ready sets");
        ProofPtr r;
        if (s1.empty()) {
            r = proof_ref(g1);
        } else {
            std::vector<ProofPtr> conts;
            for (std::size_t i = 0; i < s1.size(); ++i) {
                if (!(s1[i].action == s2[i].action)) throw std::logic_error("related sums with different ready sets");
                conts.push_back(disj_leq(s1[i].continuation, s2[i].continuation, chk, g1.size()));
            }
            r = sum_context(g1, conts, s1.size());
        }
        memo.emplace(key, r);
        return r;
    }

    ProofPtr nf_leq(const Term& n1, const Term& n2, const RefinementChecker& chk) {
        if (n1.is_bottom()) return bottom_leq(n2);
        if (n2.is_bottom()) throw std::logic_error("consistent normal form below bottom");
        return disj_leq(n1, n2, chk, n1.size() + 1);
    }
};

Prover::Prover(ProverOptions opts) : impl_(std::make_unique<Impl>()) { impl_->opts = opts; }
Prover::~Prover() = default;
Prover::Prover(Prover&&) noexcept = default;
Prover& Prover::operator=(Prover&&) noexcept = default;

Normalizer& Prover::normalizer() { return impl_->norm; }

void Prover::preload(const std::vector<Term>& terms) {
    std::vector<Term> roots = terms;
    for (const Term& t : terms) roots.push_back(impl_->norm.normalize(t).nf.term);
    impl_->model = std::make_unique<RefinementChecker>(roots, impl_->opts.state_bound, SimOptions{impl_->opts.exec, false});
}

Verdict Prover::prove(const Term& t1, const Term& t2) {
    Impl& I = *impl_;
    const auto a = I.norm.normalize(t1);
    const auto b = I.norm.normalize(t2);
    const Term& n1 = a.nf.term;
    const Term& n2 = b.nf.term;
    std::unique_ptr<RefinementChecker> local;
    const RefinementChecker* chk = I.model.get();
    if (!chk || !I.covers(*chk, {&t1, &t2, &n1, &n2})) {
        local = std::make_unique<RefinementChecker>(std::vector<Term>{t1, t2, n1, n2}, I.opts.state_bound,
                                                    SimOptions{I.opts.exec, I.opts.witnesses});
        chk = local.get();
    }
    Verdict v;
    if (!chk->refines(t1, t2)) {
        if (I.opts.witnesses) v.witness = local ? chk->witness(t1, t2) : refines(t1, t2, I.opts.state_bound).witness;
        return v;
    }
    ProofPtr mid = n1 == n2 ? proof_ref(n1) : I.nf_leq(n1, n2, *chk);
    v.derivable = true;
    v.proof = proof_trans(a.proof.fwd, proof_trans(mid, b.proof.bwd));
    if (!(v.proof->lhs == t1) || !(v.proof->rhs == t2)) throw std::logic_error("stitched proof has the wrong claim");
    return v;
}

std::optional<ProofPtr> Prover::prove_nf_leq(const Term& n1, const Term& n2) {
    Impl& I = *impl_;
    if (!is_normal_form(n1) || !is_normal_form(n2)) throw std::invalid_argument("prove_nf_leq needs normal forms");
    if (n1.is_bottom()) return bottom_leq(n2);
    std::unique_ptr<RefinementChecker> local;
    const RefinementChecker* chk = I.model.get();
    if (!chk || !I.covers(*chk, {&n1, &n2})) {
        local = std::make_unique<RefinementChecker>(std::vector<Term>{n1, n2}, I.opts.state_bound,
                                                    SimOptions{I.opts.exec, false});
        chk = local.get();
    }
    if (!chk->refines(n1, n2)) return std::nullopt;
    return I.nf_leq(n1, n2, *chk);
}

Verdict prove_leq(const Term& t1, const Term& t2, std::size_t state_bound) {
    Prover p(ProverOptions{state_bound, true, Exec::Parallel});
    return p.prove(t1, t2);
}

}  // namespace cllr
