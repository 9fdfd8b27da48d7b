#include "memevo/semnet.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace memevo {

Relation::Relation(RelationLabel l, Concept f, Concept t) : label(std::move(l)), from(std::move(f)), to(std::move(t)) {
    if (from == to) throw std::invalid_argument("self-loop relation " + label.text() + "(" + from.text() + ")");
}

Relation Relation::substituted(const Concept& old_c, const Concept& new_c) const {
    return Relation(label, from == old_c ? new_c : from, to == old_c ? new_c : to);
}

std::strong_ordering operator<=>(const Relation& a, const Relation& b) {
    return std::tie(a.from, a.to, a.label) <=> std::tie(b.from, b.to, b.label);
}

std::string to_string(const Relation& r) { return r.label.text() + "(" + r.from.text() + ", " + r.to.text() + ")"; }

SyntaxError::SyntaxError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void SemanticNetwork::add_concept(const Concept& c) { concepts_.insert(c); }

void SemanticNetwork::add_relation(const Relation& r) {
    concepts_.insert(r.from);
    concepts_.insert(r.to);
    relations_.insert(r);
}

void SemanticNetwork::remove_relation(const Relation& r) { relations_.erase(r); }

void SemanticNetwork::remove_concept(const Concept& c) {
    if (!concepts_.erase(c)) throw std::invalid_argument("concept '" + c.text() + "' is not in the network");
    std::erase_if(relations_, [&](const Relation& r) { return r.involves(c); });
}

std::vector<Relation> SemanticNetwork::relations_of(const Concept& c) const {
    std::vector<Relation> out;
    for (const auto& r : relations_)
        if (r.involves(c)) out.push_back(r);
    return out;
}

std::vector<std::vector<Concept>> SemanticNetwork::clusters() const {
    std::vector<Concept> nodes(concepts_.begin(), concepts_.end());
    std::map<Concept, std::size_t> slot;
    for (std::size_t i = 0; i < nodes.size(); ++i) slot.emplace(nodes[i], i);

    std::vector<std::size_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& r : relations_) {
        const auto a = find(slot.at(r.from));
        const auto b = find(slot.at(r.to));
        // keep the smaller index as root so roots are cluster minima
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }

    std::vector<std::vector<Concept>> out;
    std::map<std::size_t, std::size_t> cluster_of_root;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto root = find(i);
        auto [it, fresh] = cluster_of_root.try_emplace(root, out.size());
        if (fresh) out.emplace_back();
        out[it->second].push_back(nodes[i]);
    }
    return out;
}

bool SemanticNetwork::is_well_formed() const {
    return std::all_of(relations_.begin(), relations_.end(), [&](const Relation& r) {
        return r.from != r.to && concepts_.contains(r.from) && concepts_.contains(r.to);
    });
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Concept parse_concept(std::string_view text, std::size_t line) {
    auto norm = Concept::normalize(text);
    if (!norm) throw SyntaxError(line, "invalid concept '" + std::string(trim(text)) + "'");
    return Concept(*norm);
}

}  // namespace

SemanticNetwork parse_network(std::string_view text) {
    SemanticNetwork net;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto open = line.find('(');
        if (open == std::string_view::npos) {
            if (line.find_first_of("),") != std::string_view::npos)
                throw SyntaxError(line_no, "unbalanced relation syntax");
            net.add_concept(parse_concept(line, line_no));
            continue;
        }
        if (line.back() != ')') throw SyntaxError(line_no, "expected ')' at end of relation");
        const auto args = line.substr(open + 1, line.size() - open - 2);
        const auto comma = args.find(',');
        if (comma == std::string_view::npos || args.find(',', comma + 1) != std::string_view::npos)
            throw SyntaxError(line_no, "relation needs exactly two arguments");
        if (args.find_first_of("()") != std::string_view::npos) throw SyntaxError(line_no, "nested parentheses");

        std::optional<RelationLabel> label;
        try {
            label.emplace(trim(line.substr(0, open)));
        } catch (const std::invalid_argument& e) {
            throw SyntaxError(line_no, e.what());
        }
        auto from = parse_concept(args.substr(0, comma), line_no);
        auto to = parse_concept(args.substr(comma + 1), line_no);
        if (from == to) throw SyntaxError(line_no, "self-loop relation");
        net.add_relation(Relation(*label, std::move(from), std::move(to)));
    }
    return net;
}

SemanticNetwork load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_network(buf.str());
    } catch (const SyntaxError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string render_network(const SemanticNetwork& net) {
    std::string out;
    std::set<Concept> connected;
    for (const auto& r : net.relations()) {
        out += to_string(r);
        out += '\n';
        connected.insert(r.from);
        connected.insert(r.to);
    }
    for (const auto& c : net.concepts()) {
        if (!connected.contains(c)) {
            out += c.text();
            out += '\n';
        }
    }
    return out;
}

std::string to_dot(const SemanticNetwork& net) {
    std::string out = "digraph {\n";
    for (const auto& c : net.concepts()) out += "  \"" + c.text() + "\";\n";
    for (const auto& r : net.relations())
        out += "  \"" + r.from.text() + "\" -> \"" + r.to.text() + "\" [label=\"" + r.label.text() + "\"];\n";
    out += "}\n";
    return out;
}

}  // namespace memevo
