#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace cllr {

/// An action label: either the internal action tau or a visible name.
class Action {
public:
    static Action tau() { return Action{}; }
    static Action visible(std::string name);

    bool is_tau() const { return name_.empty(); }
    bool is_visible() const { return !name_.empty(); }

    /// The visible name, or "tau".
    std::string str() const { return is_tau() ? std::string("tau") : name_; }
    const std::string& name() const { return name_; }

    bool operator==(const Action&) const = default;
    /// tau orders before every visible action; visible actions order by name.
    std::strong_ordering operator<=>(const Action& other) const;

private:
    Action() = default;
    explicit Action(std::string name) : name_(std::move(name)) {}

    std::string name_;  // empty encodes tau
};

/// Synchronisation set of a parallel composition: sorted, duplicate-free visible names.
class SyncSet {
public:
    SyncSet() = default;
    SyncSet(std::initializer_list<std::string> names);
    explicit SyncSet(std::vector<std::string> names);

    bool contains(const Action& a) const;
    bool contains(const std::string& name) const;
    bool empty() const { return names_.empty(); }
    const std::vector<std::string>& names() const { return names_; }

    bool operator==(const SyncSet&) const = default;
    std::strong_ordering operator<=>(const SyncSet& other) const;

private:
    std::vector<std::string> names_;
};

enum class Kind : std::uint8_t { Nil, Bottom, Prefix, ExtChoice, Conj, Disj, Par };

const char* kind_name(Kind k);

class Term;

namespace detail {
struct Node;
}

/// Immutable, structurally compared process term of the finite calculus.
/// Copies share structure; all operations are pure.
class Term {
public:
    /// Default-constructed terms are 0.
    Term() = default;

    static Term nil();
    static Term bottom();
    static Term prefix(Action a, Term body);
    static Term choice(Term l, Term r);
    static Term conj(Term l, Term r);
    static Term disj(Term l, Term r);
    static Term par(Term l, Term r, SyncSet sync);

    /// Rebuilds a binary/unary node with the same operator as `shape` over new operands.
    static Term with_operands(const Term& shape, Term l, Term r = Term());

    Kind kind() const;
    bool is(Kind k) const { return kind() == k; }
    bool is_nil() const { return is(Kind::Nil); }
    bool is_bottom() const { return is(Kind::Bottom); }
    bool is_binary() const;

    /// Prefix action. Only meaningful for Prefix.
    const Action& action() const;
    /// Prefix body or left operand.
    const Term& left() const;
    const Term& right() const;
    const Term& body() const { return left(); }
    const SyncSet& sync() const;

    std::size_t hash() const;
    /// Number of constructor nodes, constants included.
    std::size_t size() const;

    /// Same operator at the root (kind, prefix action, sync set).
    bool same_operator(const Term& other) const;

    bool identical(const Term& other) const { return node_ == other.node_; }

    friend bool operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    explicit Term(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const detail::Node> node_;  // null encodes 0
};

namespace detail {
struct Node {
    Kind kind = Kind::Nil;
    Action action = Action::tau();
    Term left_operand;
    Term right_operand;
    SyncSet sync;
    std::size_t hash = 0;
    std::size_t size = 1;
};
}  // namespace detail

inline Kind Term::kind() const { return node_ ? node_->kind : Kind::Nil; }
inline std::size_t Term::size() const { return node_ ? node_->size : 1; }
inline std::size_t Term::hash() const { return node_ ? node_->hash : 0x9e3779b97f4a7c15ULL; }

/// Text form under the minimal-parenthesis precedence (see parser.hpp).
std::string format(const Term& t);

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace cllr

template <>
struct std::hash<cllr::Term> {
    std::size_t operator()(const cllr::Term& t) const { return t.hash(); }
};
