#include "cllr/axioms.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_set>

#include "cllr/syntax.hpp"

namespace cllr {

namespace {

struct AxiomInfo {
    AxiomName name;
    const char* text;
    bool equational;
};

const AxiomInfo kAxioms[] = {
    {AxiomName::EC1, "EC1", true},   {AxiomName::EC2, "EC2", true},   {AxiomName::EC3, "EC3", true},
    {AxiomName::EC4, "EC4", true},   {AxiomName::EC5, "EC5", true},   {AxiomName::DI1, "DI1", true},
    {AxiomName::DI2, "DI2", true},   {AxiomName::DI3, "DI3", true},   {AxiomName::DI4, "DI4", true},
    {AxiomName::DI5, "DI5", false},  {AxiomName::CO1, "CO1", true},   {AxiomName::CO2, "CO2", true},
    {AxiomName::CO3, "CO3", true},   {AxiomName::PR1, "PR1", true},   {AxiomName::PR2, "PR2", true},
    {AxiomName::PA1, "PA1", true},   {AxiomName::PA2, "PA2", true},   {AxiomName::DS1, "DS1", false},
    {AxiomName::DS2, "DS2", false},  {AxiomName::DS3, "DS3", false},  {AxiomName::DS4, "DS4", false},
    {AxiomName::ECC1, "ECC1", true}, {AxiomName::ECC2, "ECC2", false}, {AxiomName::ECC3, "ECC3", false},
    {AxiomName::EXP1, "EXP1", false}, {AxiomName::EXP2, "EXP2", false},
};

const AxiomInfo& info(AxiomName a) { return kAxioms[static_cast<std::size_t>(a)]; }

MatchResult no(std::string why) { return {std::nullopt, std::move(why)}; }

MatchResult yes(std::map<std::string, Term> vars, std::size_t n = 0, std::size_t m = 0) {
    Instantiation i;
    i.vars = std::move(vars);
    i.n = n;
    i.m = m;
    return {std::move(i), {}};
}

MatchResult shape_mismatch() { return no("terms do not have the shape of the axiom"); }

// x op y = y op x
MatchResult comm(Kind op, const Term& x, const Term& y) {
    if (x.is(op) && y.same_operator(x) && y.left() == x.right() && y.right() == x.left())
        return yes({{"x", x.left()}, {"y", x.right()}});
    return shape_mismatch();
}

MatchResult idem(Kind op, const Term& x, const Term& y) {
    if (x.is(op) && x.left() == x.right() && y == x.left()) return yes({{"x", y}});
    return shape_mismatch();
}

MatchResult unit(Kind op, const Term& x, const Term& y, const Term& u) {
    if (x.is(op) && x.right() == u && y == x.left()) return yes({{"x", y}});
    return shape_mismatch();
}

MatchResult zero(Kind op, const Term& x, const Term& y) {
    if (x.is(op) && x.right().is_bottom() && y.is_bottom()) return yes({{"x", x.left()}});
    return shape_mismatch();
}

// x op (y ∨ z) <= (x op y) ∨ (x op z)
MatchResult distrib(Kind op, const Term& x, const Term& y) {
    if (!x.is(op) || !x.right().is(Kind::Disj) || !y.is(Kind::Disj)) return shape_mismatch();
    const Term& l = y.left();
    const Term& r = y.right();
    if (!l.same_operator(x) || !r.same_operator(x)) return shape_mismatch();
    if (l.left() == x.left() && r.left() == x.left() && l.right() == x.right().left() && r.right() == x.right().right())
        return yes({{"x", x.left()}, {"y", l.right()}, {"z", r.right()}});
    return shape_mismatch();
}

std::map<std::string, Term> sum_vars(const GuardedSum& s, const char* prefix) {
    std::map<std::string, Term> vars;
    for (std::size_t i = 0; i < s.size(); ++i) vars[prefix + std::to_string(i)] = s[i].continuation;
    return vars;
}

bool same_actions(const GuardedSum& a, const GuardedSum& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i].action == b[i].action)) return false;
    return true;
}

MatchResult ecc1(const Term& x, const Term& y) {
    if (!x.is(Kind::Conj) || !y.is_bottom()) return shape_mismatch();
    auto s1 = as_guarded_sum(x.left()), s2 = as_guarded_sum(x.right());
    if (!s1 || !s2) return no("conjuncts are not guarded sums");
    if (prefix_set(*s1) == prefix_set(*s2)) return no("side condition: the prefix sets are equal");
    auto vars = sum_vars(*s1, "x");
    vars.merge(sum_vars(*s2, "y"));
    return yes(std::move(vars), s1->size(), s2->size());
}

// sum a_i.(x_i ∧ y_i)  vs  sum a_i.x_i ∧ sum a_i.y_i
MatchResult ecc_zip(const Term& zipped, const Term& conj, bool need_injective) {
    if (!conj.is(Kind::Conj)) return shape_mismatch();
    auto z = as_guarded_sum(zipped);
    auto s1 = as_guarded_sum(conj.left()), s2 = as_guarded_sum(conj.right());
    if (!z || !s1 || !s2) return no("operands are not guarded sums");
    if (!same_actions(*s1, *s2) || !same_actions(*z, *s1)) return no("summand actions do not line up");
    for (std::size_t i = 0; i < z->size(); ++i) {
        const Term& c = (*z)[i].continuation;
        if (!c.is(Kind::Conj) || !(c.left() == (*s1)[i].continuation) || !(c.right() == (*s2)[i].continuation))
            return no("continuation " + std::to_string(i) + " is not the conjunction of the two summands");
    }
    if (need_injective && !is_injective_in_prefixes(*s1)) return no("side condition: the left sum is not injective in prefixes");
    auto vars = sum_vars(*s1, "x");
    vars.merge(sum_vars(*s2, "y"));
    return yes(std::move(vars), s1->size(), s2->size());
}

MatchResult exp(const Term& par, const Term& expanded, bool need_basic) {
    if (!par.is(Kind::Par)) return shape_mismatch();
    auto s1 = as_guarded_sum(par.left()), s2 = as_guarded_sum(par.right());
    if (!s1 || !s2) return no("operands are not guarded sums");
    if (!(expansion(par.left(), par.right(), par.sync()) == expanded)) return no("not the expansion of the composition");
    if (need_basic) {
        for (const auto* s : {&*s1, &*s2})
            for (const auto& m : *s)
                if (!is_basic(m.continuation)) return no("side condition: continuation " + format(m.continuation) + " is not basic");
    }
    auto vars = sum_vars(*s1, "x");
    vars.merge(sum_vars(*s2, "y"));
    return yes(std::move(vars), s1->size(), s2->size());
}

// x instantiates the schema's left side, y its right side.
MatchResult schema(AxiomName a, const Term& x, const Term& y) {
    switch (a) {
        case AxiomName::EC1: return comm(Kind::ExtChoice, x, y);
        case AxiomName::EC2:
            if (x.is(Kind::ExtChoice) && x.left().is(Kind::ExtChoice) && y.is(Kind::ExtChoice) &&
                y.right().is(Kind::ExtChoice) && y.left() == x.left().left() && y.right().left() == x.left().right() &&
                y.right().right() == x.right())
                return yes({{"x", y.left()}, {"y", y.right().left()}, {"z", x.right()}});
            return shape_mismatch();
        case AxiomName::EC3: {
            auto r = idem(Kind::ExtChoice, x, y);
            if (r.inst && !is_stable(y)) return no("side condition: x is not stable");
            return r;
        }
        case AxiomName::EC4: return unit(Kind::ExtChoice, x, y, Term::nil());
        case AxiomName::EC5: return zero(Kind::ExtChoice, x, y);
        case AxiomName::DI1: return comm(Kind::Disj, x, y);
        case AxiomName::DI2:
            if (x.is(Kind::Disj) && x.right().is(Kind::Disj) && y.is(Kind::Disj) && y.left().is(Kind::Disj) &&
                y.left().left() == x.left() && y.left().right() == x.right().left() && y.right() == x.right().right())
                return yes({{"x", x.left()}, {"y", x.right().left()}, {"z", y.right()}});
            return shape_mismatch();
        case AxiomName::DI3: return idem(Kind::Disj, x, y);
        case AxiomName::DI4: return unit(Kind::Disj, x, y, Term::bottom());
        case AxiomName::DI5:
            if (y.is(Kind::Disj) && y.left() == x) return yes({{"x", x}, {"y", y.right()}});
            return shape_mismatch();
        case AxiomName::CO1: return comm(Kind::Conj, x, y);
        case AxiomName::CO2: return idem(Kind::Conj, x, y);
        case AxiomName::CO3: return zero(Kind::Conj, x, y);
        case AxiomName::PR1:
            if (x.is(Kind::Prefix) && x.body().is_bottom() && y.is_bottom()) {
                if (x.action().is_tau()) return no("side condition: the prefix must be a visible action");
                return yes({});
            }
            return shape_mismatch();
        case AxiomName::PR2:
            if (x.is(Kind::Prefix) && x.action().is_tau() && y == x.body()) return yes({{"x", y}});
            return shape_mismatch();
        case AxiomName::PA1: return comm(Kind::Par, x, y);
        case AxiomName::PA2: return zero(Kind::Par, x, y);
        case AxiomName::DS1: return distrib(Kind::ExtChoice, x, y);
        case AxiomName::DS2: return distrib(Kind::Conj, x, y);
        case AxiomName::DS3: return distrib(Kind::Par, x, y);
        case AxiomName::DS4: {
            if (!x.is(Kind::Prefix) || !x.body().is(Kind::Disj) || !y.is(Kind::ExtChoice)) return shape_mismatch();
            const Term& l = y.left();
            const Term& r = y.right();
            if (!l.same_operator(x) || !r.same_operator(x) || !(l.body() == x.body().left()) ||
                !(r.body() == x.body().right()))
                return shape_mismatch();
            if (x.action().is_tau()) return no("side condition: the prefix must be a visible action");
            for (const Term& v : {x.body().left(), x.body().right()})
                if (!is_basic(v)) return no("side condition: " + format(v) + " is not a basic term");
            return yes({{"x", x.body().left()}, {"y", x.body().right()}});
        }
        case AxiomName::ECC1: return ecc1(x, y);
        case AxiomName::ECC2: return ecc_zip(x, y, false);
        case AxiomName::ECC3: return ecc_zip(y, x, true);
        case AxiomName::EXP1: return exp(x, y, false);
        case AxiomName::EXP2: return exp(y, x, true);
    }
    return shape_mismatch();
}

Term nested_choice(const std::vector<Term>& items) { return items.empty() ? Term::nil() : left_nest(Kind::ExtChoice, items); }

}  // namespace

const std::vector<AxiomName>& all_axioms() {
    static const std::vector<AxiomName> v = [] {
        std::vector<AxiomName> out;
        for (const auto& a : kAxioms) out.push_back(a.name);
        return out;
    }();
    return v;
}

const char* axiom_name(AxiomName a) { return info(a).text; }

std::optional<AxiomName> axiom_from_name(const std::string& s) {
    for (const auto& a : kAxioms)
        if (s == a.text) return a.name;
    return std::nullopt;
}

bool is_equational(AxiomName a) { return info(a).equational; }

const char* direction_name(Direction d) { return d == Direction::L2R ? "L2R" : "R2L"; }

MatchResult match_axiom(AxiomName name, Direction dir, const Term& lhs, const Term& rhs) {
    if (dir == Direction::L2R) return schema(name, lhs, rhs);
    if (!is_equational(name)) return no(std::string(axiom_name(name)) + " is an inequation and only holds left to right");
    return schema(name, rhs, lhs);
}

Term expansion(const Term& left_sum, const Term& right_sum, const SyncSet& sync) {
    const auto s1 = as_guarded_sum(left_sum), s2 = as_guarded_sum(right_sum);
    if (!s1 || !s2) throw std::invalid_argument("expansion needs guarded sums");
    std::vector<Term> o1, o2, o3;
    for (const auto& m : *s1)
        if (!sync.contains(m.action)) o1.push_back(Term::prefix(m.action, Term::par(m.continuation, right_sum, sync)));
    for (const auto& m : *s2)
        if (!sync.contains(m.action)) o2.push_back(Term::prefix(m.action, Term::par(left_sum, m.continuation, sync)));
    for (const auto& a : *s1)
        for (const auto& b : *s2)
            if (a.action == b.action && sync.contains(a.action))
                o3.push_back(Term::prefix(a.action, Term::par(a.continuation, b.continuation, sync)));
    return Term::choice(Term::choice(nested_choice(o1), nested_choice(o2)), nested_choice(o3));
}

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Axiom: return "AXIOM";
        case Rule::Ref: return "REF";
        case Rule::Trans: return "TRANS";
        case Rule::Context: return "CONTEXT";
    }
    return "?";
}

ProofPtr proof_ref(const Term& t) {
    auto n = std::make_shared<ProofNode>();
    n->rule = Rule::Ref;
    n->lhs = t;
    n->rhs = t;
    return n;
}

ProofPtr proof_axiom(AxiomName name, Direction dir, const Term& lhs, const Term& rhs) {
    auto n = std::make_shared<ProofNode>();
    n->rule = Rule::Axiom;
    n->axiom = name;
    n->direction = dir;
    n->lhs = lhs;
    n->rhs = rhs;
    return n;
}

ProofPtr proof_trans(const ProofPtr& a, const ProofPtr& b) {
    if (a->rule == Rule::Ref) return b;
    if (b->rule == Rule::Ref) return a;
    auto n = std::make_shared<ProofNode>();
    n->rule = Rule::Trans;
    n->lhs = a->lhs;
    n->rhs = b->rhs;
    n->children = {a, b};
    return n;
}

namespace {
Term rebuild(const Term& shape, const Term& l, const Term& r) {
    if (shape.is(Kind::Prefix)) return l.identical(shape.body()) ? shape : Term::with_operands(shape, l);
    if (l.identical(shape.left()) && r.identical(shape.right())) return shape;
    return Term::with_operands(shape, l, r);
}
}  // namespace

ProofPtr proof_context(const Term& shape, std::vector<ProofPtr> children) {
    const bool prefix = shape.is(Kind::Prefix);
    if (children.size() != (prefix ? 1u : 2u) || !(prefix || shape.is_binary()))
        throw std::invalid_argument("context arity does not match the operator");
    const Term& r0 = children[0]->rhs;
    const Term& l0 = children[0]->lhs;
    const Term l1 = prefix ? Term() : children[1]->lhs, r1 = prefix ? Term() : children[1]->rhs;
    const bool all_ref = std::all_of(children.begin(), children.end(), [](const ProofPtr& c) { return c->rule == Rule::Ref; });
    auto n = std::make_shared<ProofNode>();
    n->lhs = rebuild(shape, l0, l1);
    if (all_ref) return proof_ref(n->lhs);
    n->rule = Rule::Context;
    n->rhs = rebuild(shape, r0, r1);
    n->children = std::move(children);
    return n;
}

std::size_t proof_size(const ProofPtr& p) {
    std::unordered_set<const ProofNode*> seen;
    std::vector<const ProofNode*> stack{p.get()};
    while (!stack.empty()) {
        const ProofNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        for (const auto& c : n->children) stack.push_back(c.get());
    }
    return seen.size();
}

CheckResult ProofChecker::check(const ProofPtr& p) {
    if (auto it = memo_.find(p.get()); it != memo_.end()) return it->second;
    CheckResult r = check_node(p);
    keep_.push_back(p);
    memo_.emplace(p.get(), r);
    return r;
}

CheckResult ProofChecker::check_node(const ProofPtr& p) {
    auto bad = [](std::string why) { return CheckResult{false, "", std::move(why)}; };
    auto child = [&](std::size_t i) -> std::optional<CheckResult> {
        CheckResult c = check(p->children[i]);
        if (c.ok) return std::nullopt;
        c.path = "/" + std::to_string(i) + c.path;
        return c;
    };
    switch (p->rule) {
        case Rule::Ref:
            if (!p->children.empty()) return bad("REF has no premises");
            if (!(p->lhs == p->rhs)) return bad("REF claims " + format(p->lhs) + " <= " + format(p->rhs));
            return {};
        case Rule::Axiom: {
            if (!p->children.empty()) return bad("axiom instances have no premises");
            auto m = match_axiom(p->axiom, p->direction, p->lhs, p->rhs);
            if (!m) return bad(std::string(axiom_name(p->axiom)) + " " + direction_name(p->direction) + ": " + m.failure);
            return {};
        }
        case Rule::Trans: {
            if (p->children.size() != 2) return bad("TRANS needs two premises");
            const auto& a = *p->children[0];
            const auto& b = *p->children[1];
            if (!(a.lhs == p->lhs)) return bad("first premise of TRANS does not start at the claimed left side");
            if (!(b.rhs == p->rhs)) return bad("second premise of TRANS does not end at the claimed right side");
            if (!(a.rhs == b.lhs)) return bad("premises of TRANS do not compose");
            for (std::size_t i = 0; i < 2; ++i)
                if (auto c = child(i)) return *c;
            return {};
        }
        case Rule::Context: {
            const Term& l = p->lhs;
            const Term& r = p->rhs;
            if (!l.same_operator(r) || !(l.is(Kind::Prefix) || l.is_binary()))
                return bad("CONTEXT sides do not share an operator");
            const std::size_t arity = l.is(Kind::Prefix) ? 1 : 2;
            if (p->children.size() != arity) return bad("CONTEXT premise count does not match the operator");
            for (std::size_t i = 0; i < arity; ++i) {
                const auto& c = *p->children[i];
                const Term& li = i == 0 ? l.left() : l.right();
                const Term& ri = i == 0 ? r.left() : r.right();
                if (!(c.lhs == li) || !(c.rhs == ri))
                    return bad("CONTEXT premise " + std::to_string(i) + " claims " + format(c.lhs) + " <= " +
                               format(c.rhs) + " instead of " + format(li) + " <= " + format(ri));
            }
            for (std::size_t i = 0; i < arity; ++i)
                if (auto c = child(i)) return *c;
            return {};
        }
    }
    return bad("unknown rule");
}

CheckResult check_proof(const ProofPtr& p) {
    ProofChecker c;
    return c.check(p);
}

EqProof eq_refl(const Term& t) {
    auto r = proof_ref(t);
    return {r, r};
}

EqProof eq_axiom(AxiomName name, Direction dir, const Term& lhs, const Term& rhs) {
    const Direction back = dir == Direction::L2R ? Direction::R2L : Direction::L2R;
    return {proof_axiom(name, dir, lhs, rhs), proof_axiom(name, back, rhs, lhs)};
}

EqProof eq_trans(const EqProof& a, const EqProof& b) { return {proof_trans(a.fwd, b.fwd), proof_trans(b.bwd, a.bwd)}; }

EqProof eq_swap(const EqProof& e) { return {e.bwd, e.fwd}; }

EqProof eq_context(const Term& shape, const std::vector<EqProof>& children) {
    std::vector<ProofPtr> f, b;
    for (const auto& c : children) {
        f.push_back(c.fwd);
        b.push_back(c.bwd);
    }
    return {proof_context(shape, std::move(f)), proof_context(shape, std::move(b))};
}

namespace {

struct AcOps {
    Kind op;
    AxiomName comm, idem;
    Term make(const Term& l, const Term& r) const { return op == Kind::Disj ? Term::disj(l, r) : Term::choice(l, r); }
    // X op (Y op z) = (X op Y) op z
    EqProof assoc(const Term& x_yz, const Term& xy_z) const {
        return op == Kind::Disj ? eq_axiom(AxiomName::DI2, Direction::L2R, x_yz, xy_z)
                                : eq_axiom(AxiomName::EC2, Direction::R2L, x_yz, xy_z);
    }
};

AcOps ac_ops(Kind op) {
    if (op == Kind::Disj) return {op, AxiomName::DI1, AxiomName::DI3};
    if (op == Kind::ExtChoice) return {op, AxiomName::EC1, AxiomName::EC3};
    throw std::invalid_argument("reordering is defined for choice and disjunction only");
}

// (X op Y) = left-nested concatenation, X and Y already left-nested.
EqProof merge(const AcOps& ac, const Term& x_op_y) {
    const Term& y = x_op_y.right();
    if (!y.is(ac.op)) return eq_refl(x_op_y);
    const Term& x = x_op_y.left();
    const Term xy1 = ac.make(x, y.left());
    const Term xy1_z = ac.make(xy1, y.right());
    EqProof step = ac.assoc(x_op_y, xy1_z);
    EqProof inner = merge(ac, xy1);
    return eq_trans(step, eq_context(xy1_z, {inner, eq_refl(y.right())}));
}

// Prefixes P_0 .. P_{n-1} of a left-nested term (P_{n-1} is the term).
std::vector<Term> spine(const Term& t, std::size_t n) {
    std::vector<Term> out(n);
    Term cur = t;
    for (std::size_t i = n; i-- > 1;) {
        out[i] = cur;
        cur = cur.left();
    }
    out[0] = cur;
    return out;
}

// Lifts an equality about prefix P_k to the whole left-nested term.
EqProof lift(const std::vector<Term>& prefixes, std::size_t k, EqProof inner) {
    for (std::size_t i = k + 1; i < prefixes.size(); ++i)
        inner = eq_context(prefixes[i], {inner, eq_refl(prefixes[i].right())});
    return inner;
}

class ListRewriter {
public:
    ListRewriter(const AcOps& ac, const Term& start, std::size_t n) : ac_(ac), acc_(eq_refl(start)), n_(n) {}

    const Term& current() const { return acc_.rhs(); }
    std::vector<Term> items() const {
        std::vector<Term> out;
        Term cur = current();
        for (std::size_t i = n_; i-- > 1;) {
            out.push_back(cur.right());
            cur = cur.left();
        }
        out.push_back(cur);
        std::reverse(out.begin(), out.end());
        return out;
    }

    void swap(std::size_t k) {
        const auto pre = spine(current(), n_);
        const Term& pk1 = pre[k + 1];
        EqProof inner;
        if (k == 0) {
            inner = eq_axiom(ac_.comm, Direction::L2R, pk1, ac_.make(pk1.right(), pk1.left()));
        } else {
            const Term& p = pre[k - 1];
            const Term a = pk1.left().right(), b = pk1.right();
            const Term p_ab = ac_.make(p, ac_.make(a, b));
            const Term p_ba = ac_.make(p, ac_.make(b, a));
            EqProof s1 = eq_swap(ac_.assoc(p_ab, pk1));
            EqProof s2 = eq_context(p_ab, {eq_refl(p), eq_axiom(ac_.comm, Direction::L2R, p_ab.right(), p_ba.right())});
            EqProof s3 = ac_.assoc(p_ba, ac_.make(ac_.make(p, b), a));
            inner = eq_trans(eq_trans(s1, s2), s3);
        }
        acc_ = eq_trans(acc_, lift(pre, k + 1, inner));
    }

    void dedup(std::size_t k) {
        const auto pre = spine(current(), n_);
        const Term& a = pre[k + 1].right();
        const Term aa = ac_.make(a, a);
        acc_ = eq_trans(acc_, combine_adjacent_proof(ac_.op, current(), n_, k, eq_axiom(ac_.idem, Direction::L2R, aa, a)));
        --n_;
    }

    const EqProof& proof() const { return acc_; }

private:
    AcOps ac_;
    EqProof acc_;
    std::size_t n_;
};

}  // namespace

EqProof combine_adjacent_proof(Kind op, const Term& list, std::size_t n, std::size_t k, const EqProof& pair) {
    const AcOps ac = ac_ops(op);
    const auto pre = spine(list, n);
    const Term& pk1 = pre.at(k + 1);
    if (k == 0) return lift(pre, 1, pair);
    const Term& p = pre[k - 1];
    const Term p_ab = ac.make(p, pair.lhs());
    EqProof s1 = eq_swap(ac.assoc(p_ab, pk1));
    EqProof s2 = eq_context(p_ab, {eq_refl(p), pair});
    return lift(pre, k + 1, eq_trans(s1, s2));
}

EqProof left_nest_proof(Kind op, const Term& t) {
    const AcOps ac = ac_ops(op);
    if (!t.is(op)) return eq_refl(t);
    EqProof l = left_nest_proof(op, t.left());
    EqProof r = left_nest_proof(op, t.right());
    EqProof c = eq_context(t, {l, r});
    return eq_trans(c, merge(ac, c.rhs()));
}

EqProof sort_dedup_proof(Kind op, const std::vector<Term>& items, bool dedup) {
    const AcOps ac = ac_ops(op);
    ListRewriter rw(ac, left_nest(op, items), items.size());
    std::vector<Term> cur = items;
    for (std::size_t i = 1; i < cur.size(); ++i)
        for (std::size_t j = i; j > 0 && cur[j] < cur[j - 1]; --j) {
            rw.swap(j - 1);
            std::swap(cur[j], cur[j - 1]);
        }
    if (dedup)
        for (std::size_t i = 0; i + 1 < cur.size();) {
            if (cur[i] == cur[i + 1] && (op != Kind::ExtChoice || is_stable(cur[i]))) {
                rw.dedup(i);
                cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(i) + 1);
            } else {
                ++i;
            }
        }
    return rw.proof();
}

std::optional<EqProof> reorder_proof(const Term& src, const Term& dst) {
    for (Kind op : {Kind::ExtChoice, Kind::Disj}) {
        const auto fs = flatten(src, op), fd = flatten(dst, op);
        auto a = fs, b = fd;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) continue;
        const AcOps ac = ac_ops(op);
        EqProof to_list = left_nest_proof(op, src);
        ListRewriter rw(ac, to_list.rhs(), fs.size());
        std::vector<Term> cur = fs;
        for (std::size_t i = 0; i < fd.size(); ++i) {
            std::size_t j = i;
            while (!(cur[j] == fd[i])) ++j;
            for (; j > i; --j) {
                rw.swap(j - 1);
                std::swap(cur[j], cur[j - 1]);
            }
        }
        return eq_trans(eq_trans(to_list, rw.proof()), eq_swap(left_nest_proof(op, dst)));
    }
    return std::nullopt;
}

nlohmann::json proof_to_json(const ProofPtr& root) {
    std::unordered_map<const ProofNode*, int> uses;
    std::vector<const ProofNode*> stack{root.get()};
    while (!stack.empty()) {
        const ProofNode* n = stack.back();
        stack.pop_back();
        if (uses[n]++ > 0) continue;
        for (const auto& c : n->children) stack.push_back(c.get());
    }
    std::unordered_map<const ProofNode*, int> ids;
    std::unordered_map<const ProofNode*, std::string> text;
    auto term_text = [&](const Term& t) { return format(t); };
    std::function<nlohmann::json(const ProofNode*)> emit = [&](const ProofNode* n) -> nlohmann::json {
        if (auto it = ids.find(n); it != ids.end()) return {{"ref", it->second}};
        nlohmann::json j;
        if (uses[n] > 1) {
            const int id = static_cast<int>(ids.size());
            ids.emplace(n, id);
            j["id"] = id;
        }
        j["rule"] = rule_name(n->rule);
        if (n->rule == Rule::Axiom) {
            j["axiom"] = axiom_name(n->axiom);
            j["direction"] = direction_name(n->direction);
        }
        j["claimLhs"] = term_text(n->lhs);
        j["claimRhs"] = term_text(n->rhs);
        nlohmann::json kids = nlohmann::json::array();
        for (const auto& c : n->children) kids.push_back(emit(c.get()));
        j["children"] = std::move(kids);
        return j;
    };
    return emit(root.get());
}

ProofPtr proof_from_json(const nlohmann::json& root) {
    std::unordered_map<std::string, Term> terms;
    std::unordered_map<int, ProofPtr> ids;
    auto term = [&](const nlohmann::json& j) {
        const std::string s = j.get<std::string>();
        auto it = terms.find(s);
        if (it == terms.end()) it = terms.emplace(s, parse(s)).first;
        return it->second;
    };
    std::function<ProofPtr(const nlohmann::json&)> read = [&](const nlohmann::json& j) -> ProofPtr {
        if (j.contains("ref")) {
            auto it = ids.find(j.at("ref").get<int>());
            if (it == ids.end()) throw std::invalid_argument("reference to an unknown proof node");
            return it->second;
        }
        auto n = std::make_shared<ProofNode>();
        const std::string rule = j.at("rule").get<std::string>();
        if (rule == "AXIOM") {
            n->rule = Rule::Axiom;
            auto a = axiom_from_name(j.at("axiom").get<std::string>());
            if (!a) throw std::invalid_argument("unknown axiom " + j.at("axiom").get<std::string>());
            n->axiom = *a;
            const std::string d = j.at("direction").get<std::string>();
            if (d != "L2R" && d != "R2L") throw std::invalid_argument("unknown direction " + d);
            n->direction = d == "L2R" ? Direction::L2R : Direction::R2L;
        } else if (rule == "REF") {
            n->rule = Rule::Ref;
        } else if (rule == "TRANS") {
            n->rule = Rule::Trans;
        } else if (rule == "CONTEXT") {
            n->rule = Rule::Context;
        } else {
            throw std::invalid_argument("unknown rule " + rule);
        }
        n->lhs = term(j.at("claimLhs"));
        n->rhs = term(j.at("claimRhs"));
        for (const auto& c : j.at("children")) n->children.push_back(read(c));
        if (j.contains("id")) ids[j.at("id").get<int>()] = n;
        return n;
    };
    return read(root);
}

}  // namespace cllr
