#pragma once

// Hasse diagram export (DOT and JSON) for posets and flagged posets.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semistar/engine.hpp"
#include "semistar/poset.hpp"

namespace semistar {

/// {"size": n, "covers": [[lower, upper], ...]}, plus "flagged" and
/// "labels" when given.
inline nlohmann::json hasse_json(const Poset& p, const Poset::Bits* flagged = nullptr,
                                 const std::vector<std::string>* labels = nullptr) {
    nlohmann::json covers = nlohmann::json::array();
    for (const auto& [lo, hi] : p.covers()) covers.push_back({lo, hi});
    nlohmann::json out{{"size", p.size()}, {"covers", covers}};
    if (flagged) out["flagged"] = to_indices(*flagged);
    if (labels) out["labels"] = *labels;
    return out;
}

inline nlohmann::json hasse_json(const FlaggedPoset& f, const std::vector<std::string>* labels = nullptr) {
    return hasse_json(f.poset, &f.ring_closing, labels);
}

/// Bottom-to-top digraph of cover relations. Flagged nodes are drawn as
/// filled double circles.
inline std::string hasse_dot(const Poset& p, const Poset::Bits* flagged = nullptr,
                             const std::vector<std::string>* labels = nullptr, const std::string& name = "hasse") {
    std::ostringstream out;
    out << "digraph " << name << " {\n  rankdir=BT;\n  node [shape=circle];\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        out << "  v" << i << " [label=\"" << (labels ? (*labels)[i] : std::to_string(i)) << '"';
        if (flagged && flagged->test(i)) out << ", shape=doublecircle, style=filled, fillcolor=lightgray";
        out << "];\n";
    }
    for (const auto& [lo, hi] : p.covers()) out << "  v" << lo << " -> v" << hi << ";\n";
    out << "}\n";
    return out.str();
}

inline std::string hasse_dot(const FlaggedPoset& f, const std::vector<std::string>* labels = nullptr,
                             const std::string& name = "hasse") {
    return hasse_dot(f.poset, &f.ring_closing, labels, name);
}

/// A short label for a semistar operation: its support as braces of branch
/// bit sets, e.g. "{K,1,3}" where 3 = branches 0 and 1.
inline std::string support_label(const Support& s) {
    std::string out = "{";
    bool first = true;
    for (auto a : s.elements()) {
        if (!first) out += ',';
        first = false;
        out += a == 0 ? std::string("K") : std::to_string(a);
    }
    return out + "}";
}

inline std::vector<std::string> semistar_labels(const SemistarPoset& s) {
    std::vector<std::string> out;
    for (Index i = 0; i < s.size(); ++i) {
        const auto e = s.element(i);
        std::string label = support_label(e.support);
        for (const auto& m : e.maps) {
            if (!m) continue;
            label += " [";
            for (std::size_t k = 0; k < m->image.size(); ++k) label += (k ? " " : "") + std::to_string(m->image[k]);
            label += "]";
        }
        out.push_back(std::move(label));
    }
    return out;
}

}  // namespace semistar
