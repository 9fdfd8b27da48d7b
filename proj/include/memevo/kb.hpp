#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memevo/random.hpp"

namespace memevo {

/// A node identifier: lowercase, trimmed, inner whitespace collapsed to '_'.
/// Only [a-z0-9_] survive; anything else is rejected.
class Concept {
public:
    explicit Concept(std::string_view raw);

    const std::string& text() const noexcept { return text_; }

    friend bool operator==(const Concept&, const Concept&) = default;
    friend auto operator<=>(const Concept&, const Concept&) = default;

    /// Normalized form of `raw`, or nullopt when it is empty or has characters
    /// outside [a-z0-9_] after normalization.
    static std::optional<std::string> normalize(std::string_view raw);

private:
    std::string text_;
};

/// Relation name such as "IsA" or "AtLocation". Open vocabulary, case-sensitive.
class RelationLabel {
public:
    explicit RelationLabel(std::string_view text);

    const std::string& text() const noexcept { return text_; }

    friend bool operator==(const RelationLabel&, const RelationLabel&) = default;
    friend auto operator<=>(const RelationLabel&, const RelationLabel&) = default;

private:
    std::string text_;
};

struct Assertion {
    RelationLabel label;
    Concept from;
    Concept to;
    double score = 0.0;

    /// Identity is the (label, from, to) triple; score is payload.
    bool same_triple(const Assertion& o) const {
        return label == o.label && from == o.from && to == o.to;
    }
};

/// Ordering used for every query result: from, to, label.
bool assertion_less(const Assertion& a, const Assertion& b);

class IngestionError : public std::runtime_error {
public:
    IngestionError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyKnowledgeBase : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LoadReport {
    std::size_t lines_read = 0;
    std::size_t below_min_score = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_collapsed = 0;
};

/// Immutable, indexed collection of scored commonsense assertions. The only
/// authority on which relation triples are licensed.
class KnowledgeBase {
public:
    /// Reads `label<TAB>from<TAB>to<TAB>score` lines; '#' lines and blank lines
    /// are skipped. Assertions scoring below `min_score` are discarded.
    static KnowledgeBase load(std::istream& in, double min_score);
    static KnowledgeBase load_file(const std::string& path, double min_score);

    /// Builds from in-memory assertions with the same rules as `load`
    /// (self-loops dropped, duplicate triples keep the max score).
    static KnowledgeBase from_assertions(std::vector<Assertion> assertions, double min_score = 0.0);

    std::span<const Assertion> assertions() const noexcept { return assertions_; }
    std::span<const Concept> concepts() const noexcept { return concepts_; }
    std::vector<RelationLabel> labels() const;
    const LoadReport& report() const noexcept { return report_; }

    bool empty() const noexcept { return assertions_.empty(); }
    bool contains(const Concept& c) const { return index_.contains(c); }

    /// Every assertion with `c` as either endpoint, sorted; empty if unknown.
    std::span<const Assertion> relations_involving(const Concept& c) const;

    bool is_licensed(const RelationLabel& label, const Concept& from, const Concept& to) const;

    /// Uniform draw over `concepts()`.
    const Concept& random_concept(Rng& rng) const;

    /// Label spelled as first registered, matched case-insensitively.
    std::optional<RelationLabel> canonical_label(std::string_view text) const;

    /// Rebuilds the concept index from the assertion list and compares.
    bool index_is_coherent() const;

private:
    KnowledgeBase() = default;
    static std::map<Concept, std::vector<Assertion>> build_index(std::span<const Assertion> all);

    std::vector<Assertion> assertions_;
    std::map<Concept, std::vector<Assertion>> index_;
    std::vector<Concept> concepts_;
    std::map<std::string, RelationLabel> label_by_folded_;
    LoadReport report_;
};

}  // namespace memevo
