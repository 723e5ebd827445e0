#include "cllr/normalizer.hpp"

#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace cllr {

std::vector<GuardedSum> NormalForm::disjuncts() const {
    std::vector<GuardedSum> out;
    if (is_bottom()) return out;
    for (const Term& d : flatten(term, Kind::Disj)) out.push_back(as_guarded_sum(d).value());
    return out;
}

namespace {

struct OpAxioms {
    AxiomName comm, ds, zero;
};

OpAxioms op_axioms(Kind k) {
    switch (k) {
        case Kind::ExtChoice: return {AxiomName::EC1, AxiomName::DS1, AxiomName::EC5};
        case Kind::Conj: return {AxiomName::CO1, AxiomName::DS2, AxiomName::CO3};
        case Kind::Par: return {AxiomName::PA1, AxiomName::DS3, AxiomName::PA2};
        default: throw std::invalid_argument("not a combining operator");
    }
}

EqProof ax(AxiomName a, const Term& l, const Term& r) { return eq_axiom(a, Direction::L2R, l, r); }

// Same operator (and synchronisation set) as `shape`, new operands.
Term like(const Term& shape, const Term& l, const Term& r) { return Term::with_operands(shape, l, r); }

std::size_t count(const Term& t, Kind op) { return flatten(t, op).size(); }

// Applies f to every item of a left-nested op-list of n items.
EqProof map_items(const Term& t, std::size_t n, const std::function<EqProof(const Term&)>& f) {
    if (n <= 1) return f(t);
    return eq_context(t, {map_items(t.left(), n - 1, f), f(t.right())});
}

// Applies f to the continuation of every summand of a guarded sum.
EqProof map_summands(const Term& sum, const std::function<EqProof(const Term&)>& f) {
    if (sum.is_nil()) return eq_refl(sum);
    return map_items(sum, count(sum, Kind::ExtChoice), [&](const Term& p) { return eq_context(p, {f(p.body())}); });
}

// A left-nested choice list with some ⊥ item equals ⊥.
EqProof collapse(const Term& t, std::size_t n) {
    if (n <= 1) return eq_refl(t);
    if (t.right().is_bottom()) return ax(AxiomName::EC5, t, Term::bottom());
    EqProof c = eq_context(t, {collapse(t.left(), n - 1), eq_refl(t.right())});
    const Term swapped = Term::choice(t.right(), Term::bottom());
    return eq_trans(eq_trans(c, ax(AxiomName::EC1, c.rhs(), swapped)), ax(AxiomName::EC5, swapped, Term::bottom()));
}

// x op (y ∨ z) = (x op y) ∨ (x op z)
EqProof ds_step(const Term& u) {
    const Term& x = u.left();
    const Term& yz = u.right();
    const Term& y = yz.left();
    const Term& z = yz.right();
    const Term xy = like(u, x, y), xz = like(u, x, z);
    const Term d = Term::disj(xy, xz);
    ProofPtr fwd = proof_axiom(op_axioms(u.kind()).ds, Direction::L2R, u, d);
    ProofPtr p1 = proof_context(xy, {proof_ref(x), proof_axiom(AxiomName::DI5, Direction::L2R, y, yz)});
    const Term zy = Term::disj(z, y);
    ProofPtr p2 = proof_context(
        xz, {proof_ref(x), proof_trans(proof_axiom(AxiomName::DI5, Direction::L2R, z, zy),
                                       proof_axiom(AxiomName::DI1, Direction::L2R, zy, yz))});
    ProofPtr p3 = proof_context(d, {p1, p2});
    ProofPtr bwd = proof_trans(p3, proof_axiom(AxiomName::DI3, Direction::L2R, p3->rhs, u));
    return {fwd, bwd};
}

EqProof distribute_right(const Term& u) {
    if (count(u.right(), Kind::Disj) == 1) return eq_refl(u);
    EqProof d = ds_step(u);
    const Term& dr = d.rhs();
    return eq_trans(d, eq_context(dr, {distribute_right(dr.left()), eq_refl(dr.right())}));
}

// op(⋁ L_i, ⋁ R_j) = ⋁ op(L_i, R_j), i-major, left-nested.
EqProof distribute(const Term& u) {
    const Term& L = u.left();
    const Term& R = u.right();
    if (count(L, Kind::Disj) == 1) return distribute_right(u);
    const AxiomName comm = op_axioms(u.kind()).comm;
    EqProof c1 = ax(comm, u, like(u, R, L));
    EqProof d = ds_step(c1.rhs());
    const Term& dr = d.rhs();
    const Term l_r = like(u, L.left(), R), r_r = like(u, L.right(), R);
    EqProof c3 = eq_context(dr, {ax(comm, dr.left(), l_r), ax(comm, dr.right(), r_r)});
    EqProof c4 = eq_context(c3.rhs(), {distribute(l_r), distribute_right(r_r)});
    EqProof c5 = left_nest_proof(Kind::Disj, c4.rhs());
    return eq_trans(eq_trans(eq_trans(c1, d), eq_trans(c3, c4)), c5);
}

// Sorted, duplicate-free, ⊥-free (unless only ⊥ remains) disjunction.
EqProof canon_disj(const Term& t) {
    EqProof acc = left_nest_proof(Kind::Disj, t);
    auto items = flatten(t, Kind::Disj);
    acc = eq_trans(acc, sort_dedup_proof(Kind::Disj, items, true));
    std::vector<Term> cur = flatten(acc.rhs(), Kind::Disj);
    if (cur.size() == 1) return acc;
    std::vector<Term> rest;
    bool bottom = false;
    for (const Term& x : cur) {
        if (x.is_bottom())
            bottom = true;
        else
            rest.push_back(x);
    }
    if (!bottom) return acc;
    const Term kept = left_nest(Kind::Disj, rest);
    const Term target = Term::disj(kept, Term::bottom());
    acc = eq_trans(acc, reorder_proof(acc.rhs(), target).value());
    return eq_trans(acc, ax(AxiomName::DI4, target, kept));
}

}  // namespace

struct Normalizer::Impl {
    std::unordered_map<Term, EqProof, TermHash> norm_cache;
    std::unordered_map<Term, EqProof, TermHash> top_cache;

    EqProof norm(const Term& t) {
        if (auto it = norm_cache.find(t); it != norm_cache.end()) return it->second;
        EqProof r = norm_uncached(t);
        norm_cache.emplace(t, r);
        return r;
    }

    EqProof norm_uncached(const Term& t) {
        switch (t.kind()) {
            case Kind::Nil:
            case Kind::Bottom: return eq_refl(t);
            case Kind::Prefix: {
                EqProof c = eq_context(t, {norm(t.body())});
                const Term& u = c.rhs();
                if (t.action().is_tau()) return eq_trans(c, ax(AxiomName::PR2, u, u.body()));
                if (u.body().is_bottom()) return eq_trans(c, ax(AxiomName::PR1, u, Term::bottom()));
                return c;
            }
            case Kind::Disj: {
                EqProof c = eq_context(t, {norm(t.left()), norm(t.right())});
                return eq_trans(c, canon_disj(c.rhs()));
            }
            default: {
                EqProof c = eq_context(t, {norm(t.left()), norm(t.right())});
                return eq_trans(c, top(c.rhs()));
            }
        }
    }

    // op(x, y) with both operands normal.
    EqProof top(const Term& u) {
        if (auto it = top_cache.find(u); it != top_cache.end()) return it->second;
        EqProof r = top_uncached(u);
        top_cache.emplace(u, r);
        return r;
    }

    EqProof top_uncached(const Term& u) {
        const OpAxioms o = op_axioms(u.kind());
        if (u.right().is_bottom()) return ax(o.zero, u, Term::bottom());
        if (u.left().is_bottom()) {
            EqProof c = ax(o.comm, u, like(u, u.right(), u.left()));
            return eq_trans(c, ax(o.zero, c.rhs(), Term::bottom()));
        }
        EqProof d = distribute(u);
        const std::size_t n = count(u.left(), Kind::Disj) * count(u.right(), Kind::Disj);
        EqProof m = map_items(d.rhs(), n, [&](const Term& v) { return pair_gs(v); });
        return eq_trans(eq_trans(d, m), canon_disj(m.rhs()));
    }

    EqProof pair_gs(const Term& v) {
        switch (v.kind()) {
            case Kind::ExtChoice: return choice_gs(v);
            case Kind::Conj: return conj_gs(v);
            case Kind::Par: return par_gs(v);
            default: throw std::logic_error("unexpected operator");
        }
    }

    // a.x [] a.y = a.(x \/ y), normalized underneath.
    EqProof merge_prefix(const Term& v) {
        const Term& ax_ = v.left();
        const Term& ay = v.right();
        const Term& x = ax_.body();
        const Term& y = ay.body();
        const Term xy = Term::disj(x, y), yx = Term::disj(y, x);
        const Term j = Term::prefix(ax_.action(), xy);
        ProofPtr p1 = proof_context(ax_, {proof_axiom(AxiomName::DI5, Direction::L2R, x, xy)});
        ProofPtr p2 = proof_context(ay, {proof_trans(proof_axiom(AxiomName::DI5, Direction::L2R, y, yx),
                                                     proof_axiom(AxiomName::DI1, Direction::L2R, yx, xy))});
        ProofPtr p3 = proof_context(v, {p1, p2});
        EqProof m{proof_trans(p3, proof_axiom(AxiomName::EC3, Direction::L2R, p3->rhs, j)),
                  proof_axiom(AxiomName::DS4, Direction::L2R, j, v)};
        return eq_trans(m, eq_context(j, {canon_disj(xy)}));
    }

    EqProof choice_gs(const Term& v) {
        const Term& g = v.left();
        const Term& h = v.right();
        if (h.is_nil()) return ax(AxiomName::EC4, v, g);
        if (g.is_nil()) {
            EqProof c = ax(AxiomName::EC1, v, Term::choice(h, g));
            return eq_trans(c, ax(AxiomName::EC4, c.rhs(), h));
        }
        EqProof acc = left_nest_proof(Kind::ExtChoice, v);
        acc = eq_trans(acc, sort_dedup_proof(Kind::ExtChoice, flatten(v, Kind::ExtChoice), true));
        std::vector<Term> cur = flatten(acc.rhs(), Kind::ExtChoice);
        for (std::size_t k = 0; k + 1 < cur.size();) {
            if (!(cur[k].action() == cur[k + 1].action())) {
                ++k;
                continue;
            }
            EqProof pair = merge_prefix(Term::choice(cur[k], cur[k + 1]));
            acc = eq_trans(acc, combine_adjacent_proof(Kind::ExtChoice, acc.rhs(), cur.size(), k, pair));
            cur[k] = pair.rhs();
            cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        }
        return acc;
    }

    EqProof conj_gs(const Term& v) {
        const auto sg = as_guarded_sum(v.left()).value();
        const auto sh = as_guarded_sum(v.right()).value();
        if (prefix_set(sg) != prefix_set(sh)) return ax(AxiomName::ECC1, v, Term::bottom());
        if (sg.empty()) return ax(AxiomName::CO2, v, v.left());
        GuardedSum zipped = sg;
        for (std::size_t i = 0; i < sg.size(); ++i) zipped[i].continuation = Term::conj(sg[i].continuation, sh[i].continuation);
        const Term z = sum_term(zipped);
        EqProof acc{proof_axiom(AxiomName::ECC3, Direction::L2R, v, z), proof_axiom(AxiomName::ECC2, Direction::L2R, z, v)};
        acc = eq_trans(acc, map_summands(z, [&](const Term& c) { return top(c); }));
        const Term r = acc.rhs();
        bool bottom = false;
        const auto parts = as_guarded_sum(r).value();
        for (const auto& s : parts) bottom = bottom || s.continuation.is_bottom();
        if (!bottom) return acc;
        const std::size_t n = sg.size();
        acc = eq_trans(acc, map_items(r, n, [](const Term& p) {
                           return p.body().is_bottom() ? ax(AxiomName::PR1, p, Term::bottom()) : eq_refl(p);
                       }));
        return eq_trans(acc, collapse(acc.rhs(), n));
    }

    EqProof par_gs(const Term& v) {
        const Term omega = expansion(v.left(), v.right(), v.sync());
        EqProof acc{proof_axiom(AxiomName::EXP1, Direction::L2R, v, omega),
                    proof_axiom(AxiomName::EXP2, Direction::L2R, omega, v)};
        auto cont = [&](const Term& c) { return top(c); };
        const Term& o12 = omega.left();
        EqProof inner = eq_context(o12, {map_summands(o12.left(), cont), map_summands(o12.right(), cont)});
        acc = eq_trans(acc, eq_context(omega, {inner, map_summands(omega.right(), cont)}));
        const Term w = acc.rhs();
        EqProof first = choice_gs(w.left());
        acc = eq_trans(acc, eq_context(w, {first, eq_refl(w.right())}));
        return eq_trans(acc, choice_gs(acc.rhs()));
    }

    static Normalized wrap(const EqProof& p) { return {NormalForm{p.rhs()}, p}; }
};

Normalizer::Normalizer() : impl_(std::make_unique<Impl>()) {}
Normalizer::~Normalizer() = default;
Normalizer::Normalizer(Normalizer&&) noexcept = default;
Normalizer& Normalizer::operator=(Normalizer&&) noexcept = default;

Normalized Normalizer::normalize(const Term& t) { return Impl::wrap(impl_->norm(t)); }

Normalized Normalizer::conj_nf(const Term& x, const Term& y) {
    if (x.is_bottom() || y.is_bottom()) throw std::invalid_argument("conj_nf needs consistent normal forms");
    return Impl::wrap(impl_->top(Term::conj(x, y)));
}

Normalized Normalizer::choice_nf(const Term& x, const Term& y) {
    if (!as_guarded_sum(x) || !as_guarded_sum(y)) throw std::invalid_argument("choice_nf needs guarded sums");
    return Impl::wrap(impl_->choice_gs(Term::choice(x, y)));
}

Normalized Normalizer::par_nf(const Term& x, const Term& y, const SyncSet& sync) {
    if (x.is_bottom() || y.is_bottom()) throw std::invalid_argument("par_nf needs consistent normal forms");
    return Impl::wrap(impl_->top(Term::par(x, y, sync)));
}

std::size_t Normalizer::cache_size() const { return impl_->norm_cache.size() + impl_->top_cache.size(); }

Normalized normalize(const Term& t) {
    Normalizer n;
    return n.normalize(t);
}

}  // namespace cllr
