#include "memevo/kb.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <tuple>

namespace memevo {

namespace {

std::string fold_case(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

bool valid_label_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

auto triple_key(const Assertion& a) { return std::tie(a.from, a.to, a.label); }

}  // namespace

std::optional<std::string> Concept::normalize(std::string_view raw) {
    raw = trim(raw);
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        const auto uch = static_cast<unsigned char>(ch);
        if (std::isspace(uch)) {
            pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back('_');
            pending_space = false;
        }
        const char lower = static_cast<char>(std::tolower(uch));
        if (!(std::islower(static_cast<unsigned char>(lower)) || std::isdigit(uch) || lower == '_'))
            return std::nullopt;
        out.push_back(lower);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

Concept::Concept(std::string_view raw) {
    auto norm = normalize(raw);
    if (!norm) throw std::invalid_argument("invalid concept '" + std::string(raw) + "'");
    text_ = std::move(*norm);
}

RelationLabel::RelationLabel(std::string_view text) : text_(trim(text)) {
    if (text_.empty()) throw std::invalid_argument("empty relation label");
    if (!std::all_of(text_.begin(), text_.end(), valid_label_char))
        throw std::invalid_argument("invalid relation label '" + text_ + "'");
}

bool assertion_less(const Assertion& a, const Assertion& b) { return triple_key(a) < triple_key(b); }

IngestionError::IngestionError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

KnowledgeBase KnowledgeBase::load(std::istream& in, double min_score) {
    KnowledgeBase kb;
    std::vector<Assertion> parsed;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        ++kb.report_.lines_read;

        const auto fields = split_tabs(line);
        if (fields.size() != 4)
            throw IngestionError(line_no, "expected 4 tab-separated fields, got " + std::to_string(fields.size()));

        const auto score_text = trim(fields[3]);
        double score = 0.0;
        const auto [ptr, ec] = std::from_chars(score_text.data(), score_text.data() + score_text.size(), score);
        if (ec != std::errc{} || ptr != score_text.data() + score_text.size() || !std::isfinite(score) || score < 0.0)
            throw IngestionError(line_no, "unparsable score '" + std::string(score_text) + "'");

        auto from = Concept::normalize(fields[1]);
        auto to = Concept::normalize(fields[2]);
        if (!from || !to) throw IngestionError(line_no, "invalid concept");

        std::optional<RelationLabel> label;
        try {
            const auto folded = fold_case(trim(fields[0]));
            auto it = kb.label_by_folded_.find(folded);
            if (it == kb.label_by_folded_.end())
                it = kb.label_by_folded_.emplace(folded, RelationLabel(fields[0])).first;
            label = it->second;
        } catch (const std::invalid_argument& e) {
            throw IngestionError(line_no, e.what());
        }

        if (score < min_score) {
            ++kb.report_.below_min_score;
            continue;
        }
        parsed.push_back(Assertion{*label, Concept(*from), Concept(*to), score});
    }

    auto labels = std::move(kb.label_by_folded_);
    auto report = kb.report_;
    kb = from_assertions(std::move(parsed), min_score);
    kb.label_by_folded_ = std::move(labels);
    report.self_loops_dropped = kb.report_.self_loops_dropped;
    report.duplicates_collapsed = kb.report_.duplicates_collapsed;
    kb.report_ = report;
    if (kb.empty()) throw EmptyKnowledgeBase("knowledge base is empty after filtering");
    return kb;
}

KnowledgeBase KnowledgeBase::load_file(const std::string& path, double min_score) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open knowledge base file '" + path + "'");
    return load(in, min_score);
}

KnowledgeBase KnowledgeBase::from_assertions(std::vector<Assertion> all, double min_score) {
    KnowledgeBase kb;
    std::vector<Assertion> kept;
    kept.reserve(all.size());
    for (auto& a : all) {
        if (a.score < min_score) {
            ++kb.report_.below_min_score;
            continue;
        }
        if (a.from == a.to) {
            ++kb.report_.self_loops_dropped;
            continue;
        }
        kept.push_back(std::move(a));
    }
    std::stable_sort(kept.begin(), kept.end(), assertion_less);
    for (auto& a : kept) {
        if (!kb.assertions_.empty() && kb.assertions_.back().same_triple(a)) {
            kb.assertions_.back().score = std::max(kb.assertions_.back().score, a.score);
            ++kb.report_.duplicates_collapsed;
        } else {
            kb.assertions_.push_back(std::move(a));
        }
    }
    kb.index_ = build_index(kb.assertions_);
    kb.concepts_.reserve(kb.index_.size());
    for (const auto& [c, _] : kb.index_) kb.concepts_.push_back(c);
    for (const auto& a : kb.assertions_) kb.label_by_folded_.try_emplace(fold_case(a.label.text()), a.label);
    return kb;
}

std::map<Concept, std::vector<Assertion>> KnowledgeBase::build_index(std::span<const Assertion> all) {
    std::map<Concept, std::vector<Assertion>> index;
    for (const auto& a : all) {
        index[a.from].push_back(a);
        index[a.to].push_back(a);
    }
    // input is sorted, so each bucket already is
    return index;
}

std::vector<RelationLabel> KnowledgeBase::labels() const {
    std::vector<RelationLabel> out;
    for (const auto& a : assertions_) out.push_back(a.label);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::span<const Assertion> KnowledgeBase::relations_involving(const Concept& c) const {
    const auto it = index_.find(c);
    if (it == index_.end()) return {};
    return it->second;
}

bool KnowledgeBase::is_licensed(const RelationLabel& label, const Concept& from, const Concept& to) const {
    const auto key = std::tie(from, to, label);
    const auto it = std::lower_bound(assertions_.begin(), assertions_.end(), key,
                                     [](const Assertion& a, const auto& k) { return triple_key(a) < k; });
    return it != assertions_.end() && triple_key(*it) == key;
}

const Concept& KnowledgeBase::random_concept(Rng& rng) const {
    if (concepts_.empty()) throw EmptyKnowledgeBase("cannot draw a concept from an empty knowledge base");
    return concepts_[rng.index(concepts_.size())];
}

std::optional<RelationLabel> KnowledgeBase::canonical_label(std::string_view text) const {
    const auto it = label_by_folded_.find(fold_case(trim(text)));
    if (it == label_by_folded_.end()) return std::nullopt;
    return it->second;
}

bool KnowledgeBase::index_is_coherent() const {
    const auto rebuilt = build_index(assertions_);
    if (rebuilt.size() != index_.size()) return false;
    auto lhs = rebuilt.begin();
    for (auto rhs = index_.begin(); rhs != index_.end(); ++lhs, ++rhs) {
        if (lhs->first != rhs->first || lhs->second.size() != rhs->second.size()) return false;
        for (std::size_t i = 0; i < lhs->second.size(); ++i) {
            if (!lhs->second[i].same_triple(rhs->second[i]) || lhs->second[i].score != rhs->second[i].score)
                return false;
        }
    }
    return true;
}

}  // namespace memevo
