#include "cllr/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace cllr {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t string_hash(const std::string& s) { return std::hash<std::string>{}(s); }

const Action& tau_action() {
    static const Action a = Action::tau();
    return a;
}

const Term& nil_term() {
    static const Term t;
    return t;
}

const SyncSet& empty_sync() {
    static const SyncSet s;
    return s;
}

}  // namespace

Action Action::visible(std::string name) {
    if (name.empty()) throw std::invalid_argument("visible action needs a nonempty name");
    if (name == "tau") throw std::invalid_argument("'tau' is not a visible action name");
    return Action(std::move(name));
}

std::strong_ordering Action::operator<=>(const Action& other) const {
    if (is_tau() || other.is_tau()) return other.is_tau() <=> is_tau();
    return name_ <=> other.name_;
}

SyncSet::SyncSet(std::initializer_list<std::string> names) : SyncSet(std::vector<std::string>(names)) {}

SyncSet::SyncSet(std::vector<std::string> names) : names_(std::move(names)) {
    for (const auto& n : names_) {
        if (n.empty() || n == "tau") throw std::invalid_argument("synchronisation sets contain visible actions only");
    }
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

bool SyncSet::contains(const Action& a) const { return a.is_visible() && contains(a.name()); }

bool SyncSet::contains(const std::string& name) const {
    return std::binary_search(names_.begin(), names_.end(), name);
}

std::strong_ordering SyncSet::operator<=>(const SyncSet& other) const {
    return std::lexicographical_compare_three_way(names_.begin(), names_.end(), other.names_.begin(),
                                                  other.names_.end());
}

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Nil: return "Nil";
        case Kind::Bottom: return "Bottom";
        case Kind::Prefix: return "Prefix";
        case Kind::ExtChoice: return "ExtChoice";
        case Kind::Conj: return "Conj";
        case Kind::Disj: return "Disj";
        case Kind::Par: return "Par";
    }
    return "?";
}

Term Term::nil() { return Term(); }

Term Term::bottom() {
    static const Term b = [] {
        auto n = std::make_shared<detail::Node>();
        n->kind = Kind::Bottom;
        n->hash = 0x51ed270b27aa4b6dULL;
        return Term(std::shared_ptr<const detail::Node>(std::move(n)));
    }();
    return b;
}

Term Term::prefix(Action a, Term body) {
    auto n = std::make_shared<detail::Node>();
    n->kind = Kind::Prefix;
    n->hash = mix(mix(static_cast<std::size_t>(Kind::Prefix), a.is_tau() ? 7 : string_hash(a.name())), body.hash());
    n->size = 1 + body.size();
    n->action = std::move(a);
    n->left_operand = std::move(body);
    return Term(std::shared_ptr<const detail::Node>(std::move(n)));
}

namespace {
std::shared_ptr<detail::Node> binary_node(Kind k, Term l, Term r) {
    auto n = std::make_shared<detail::Node>();
    n->kind = k;
    n->hash = mix(mix(static_cast<std::size_t>(k) * 0x100000001b3ULL, l.hash()), r.hash());
    n->size = 1 + l.size() + r.size();
    n->left_operand = std::move(l);
    n->right_operand = std::move(r);
    return n;
}
}  // namespace

Term Term::choice(Term l, Term r) { return Term(binary_node(Kind::ExtChoice, std::move(l), std::move(r))); }
Term Term::conj(Term l, Term r) { return Term(binary_node(Kind::Conj, std::move(l), std::move(r))); }
Term Term::disj(Term l, Term r) { return Term(binary_node(Kind::Disj, std::move(l), std::move(r))); }

Term Term::par(Term l, Term r, SyncSet sync) {
    auto n = binary_node(Kind::Par, std::move(l), std::move(r));
    for (const auto& a : sync.names()) n->hash = mix(n->hash, string_hash(a));
    n->sync = std::move(sync);
    return Term(std::shared_ptr<const detail::Node>(std::move(n)));
}

Term Term::with_operands(const Term& shape, Term l, Term r) {
    switch (shape.kind()) {
        case Kind::Prefix: return prefix(shape.action(), std::move(l));
        case Kind::ExtChoice: return choice(std::move(l), std::move(r));
        case Kind::Conj: return conj(std::move(l), std::move(r));
        case Kind::Disj: return disj(std::move(l), std::move(r));
        case Kind::Par: return par(std::move(l), std::move(r), shape.sync());
        case Kind::Nil:
        case Kind::Bottom: break;
    }
    throw std::invalid_argument("with_operands: constant has no operands");
}

bool Term::is_binary() const {
    switch (kind()) {
        case Kind::ExtChoice:
        case Kind::Conj:
        case Kind::Disj:
        case Kind::Par: return true;
        default: return false;
    }
}

const Action& Term::action() const { return is(Kind::Prefix) ? node_->action : tau_action(); }
const Term& Term::left() const { return node_ && node_->kind != Kind::Bottom ? node_->left_operand : nil_term(); }
const Term& Term::right() const { return node_ && node_->kind != Kind::Bottom ? node_->right_operand : nil_term(); }
const SyncSet& Term::sync() const { return is(Kind::Par) ? node_->sync : empty_sync(); }

bool Term::same_operator(const Term& other) const {
    if (kind() != other.kind()) return false;
    if (is(Kind::Prefix)) return action() == other.action();
    if (is(Kind::Par)) return sync() == other.sync();
    return true;
}

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.size() != b.size() || !a.same_operator(b)) return false;
    switch (a.kind()) {
        case Kind::Nil:
        case Kind::Bottom: return true;
        case Kind::Prefix: return a.body() == b.body();
        default: return a.left() == b.left() && a.right() == b.right();
    }
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    switch (a.kind()) {
        case Kind::Nil:
        case Kind::Bottom: return std::strong_ordering::equal;
        case Kind::Prefix:
            if (auto c = a.action() <=> b.action(); c != 0) return c;
            return a.body() <=> b.body();
        case Kind::Par:
            if (auto c = a.sync() <=> b.sync(); c != 0) return c;
            [[fallthrough]];
        default:
            if (auto c = a.left() <=> b.left(); c != 0) return c;
            return a.right() <=> b.right();
    }
}

}  // namespace cllr
