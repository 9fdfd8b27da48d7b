#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memevo/kb.hpp"

namespace memevo {

/// Directed labeled edge. Ordered by (from, to, label).
struct Relation {
    RelationLabel label;
    Concept from;
    Concept to;

    Relation(RelationLabel l, Concept f, Concept t);
    explicit Relation(const Assertion& a) : Relation(a.label, a.from, a.to) {}

    bool involves(const Concept& c) const { return from == c || to == c; }
    /// The endpoint that is not `c`. Precondition: involves(c).
    const Concept& partner(const Concept& c) const { return from == c ? to : from; }
    /// Copy with every occurrence of `old_c` replaced by `new_c`.
    Relation substituted(const Concept& old_c, const Concept& new_c) const;

    friend bool operator==(const Relation&, const Relation&) = default;
    friend std::strong_ordering operator<=>(const Relation& a, const Relation& b);
};

std::string to_string(const Relation& r);

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct NetworkSize {
    std::size_t concepts = 0;
    std::size_t relations = 0;
    friend bool operator==(const NetworkSize&, const NetworkSize&) = default;
};

/// A semantic network: a concept set plus a set of binary relations whose
/// endpoints are always members of the concept set. Isolated concepts and
/// disconnected clusters are allowed. Value type; iteration is sorted.
class SemanticNetwork {
public:
    SemanticNetwork() = default;

    const std::set<Concept>& concepts() const noexcept { return concepts_; }
    const std::set<Relation>& relations() const noexcept { return relations_; }

    bool empty() const noexcept { return concepts_.empty(); }
    bool contains(const Concept& c) const { return concepts_.contains(c); }
    bool contains(const Relation& r) const { return relations_.contains(r); }

    /// Idempotent.
    void add_concept(const Concept& c);
    /// Adds missing endpoints; duplicate triple is a no-op. Rejects self-loops.
    void add_relation(const Relation& r);
    /// Endpoints stay, even if isolated afterwards.
    void remove_relation(const Relation& r);
    /// Removes `c` and every incident relation. Throws if `c` is absent.
    void remove_concept(const Concept& c);

    std::vector<Relation> relations_of(const Concept& c) const;

    /// Weakly connected components, each sorted, ordered by smallest concept.
    std::vector<std::vector<Concept>> clusters() const;

    NetworkSize size() const noexcept { return {concepts_.size(), relations_.size()}; }

    /// Every relation endpoint is a member concept.
    bool is_well_formed() const;

    friend bool operator==(const SemanticNetwork&, const SemanticNetwork&) = default;

private:
    std::set<Concept> concepts_;
    std::set<Relation> relations_;
};

/// Parses the `.semnet` text format: one `Label(from, to)` or bare `concept`
/// per line, '#' comments and blank lines ignored.
SemanticNetwork parse_network(std::string_view text);
SemanticNetwork load_network_file(const std::string& path);

/// Relations first, then isolated concepts, all in sorted order.
std::string render_network(const SemanticNetwork& net);

/// Graphviz digraph with one node per concept and one labeled edge per relation.
std::string to_dot(const SemanticNetwork& net);

}  // namespace memevo
