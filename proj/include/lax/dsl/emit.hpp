#pragma once

#include "lax/dsl/document.hpp"

#include <string>
#include <vector>

namespace lax::dsl {

namespace detail {

/// Σ_t coefficient_t · target_t with targets in index order and, within a
/// target, monomials in increasing graded-lex order. Empty for zero.
template <class Coefficient>
std::string target_sum(const std::vector<std::pair<std::string, Coefficient>>& parts) {
  std::string out;
  for (const auto& [target, coefficient] : parts) {
    const Element& e = coefficient;
    for (const auto& [m, c] : e.terms()) {
      const std::string mono = format_monomial(*e.generators(), m);
      append_signed_term(out, c, mono.empty() ? target : mono + "*" + target);
    }
  }
  return out;
}

inline std::string weighted_list(const std::string& keyword, const std::vector<std::pair<std::string, int>>& items) {
  if (items.empty())
    return keyword + " {}";
  std::string s = keyword + " { ";
  for (std::size_t i = 0; i < items.size(); ++i)
    s += (i ? ", " : "") + items[i].first + ":" + std::to_string(items[i].second);
  return s + " }";
}

inline std::string block(const std::string& keyword, const std::vector<std::string>& rows) {
  if (rows.empty())
    return keyword + " {}";
  std::string s = keyword + " { ";
  for (const auto& r : rows)
    s += r + "; ";
  return s + "}";
}

inline std::string tuple(const GeneratorSet& g, const std::vector<std::size_t>& slots) {
  std::string s = "[";
  for (std::size_t i = 0; i < slots.size(); ++i)
    s += (i ? "," : "") + g.odds()[slots[i]].name;
  return s + "]";
}

template <class Gen>
std::vector<std::pair<std::string, int>> names_and_weights(const std::vector<Gen>& gens) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& g : gens)
    out.emplace_back(g.name, g.weight);
  return out;
}

}  // namespace detail

inline std::string emit(const AlgebroidPresentation& p) {
  const GeneratorSet& g = *p.generators();
  std::vector<std::string> anchors, brackets;
  for (std::size_t i = 0; i < p.rank(); ++i) {
    std::vector<std::pair<std::string, Element>> parts;
    for (std::size_t a = 0; a < p.base_dimension(); ++a)
      parts.emplace_back("d/d" + p.base_name(a), p.anchor(i, a));
    const std::string row = detail::target_sum(parts);
    if (!row.empty())
      anchors.push_back(p.frame_name(i) + " -> " + row);
  }
  for (const auto& [ij, values] : p.bracket_table()) {
    std::vector<std::pair<std::string, Element>> parts;
    for (std::size_t k = 0; k < p.rank(); ++k)
      parts.emplace_back(p.frame_name(k), values[k]);
    const std::string row = detail::target_sum(parts);
    if (!row.empty())
      brackets.push_back("[" + p.frame_name(ij.first) + "," + p.frame_name(ij.second) + "] = " + row);
  }
  return "algebroid " + p.name() + " { " + detail::weighted_list("base", detail::names_and_weights(g.evens())) + " " +
         detail::weighted_list("fiber", detail::names_and_weights(g.odds())) + " " +
         detail::block("anchor", anchors) + " " + detail::block("bracket", brackets) + " }";
}

inline std::string emit(const SubmersionItem& s) {
  return "submersion " + s.spec.name + " { over " + s.over + "; " +
         detail::weighted_list("fiber", detail::names_and_weights(s.spec.fiber)) + " }";
}

inline std::string emit(const CochainItem& c) {
  const Multiderivation& m = c.cochain;
  const GeneratorSet& g = *m.generators();
  auto rows = [&](const std::map<Multiderivation::Key, Element>& table, bool symbol, const std::string& sep) {
    std::vector<std::string> out;
    std::vector<std::pair<std::string, Element>> parts;
    const std::vector<std::size_t>* current = nullptr;
    auto flush = [&] {
      if (current && !parts.empty())
        out.push_back(detail::tuple(g, *current) + sep + detail::target_sum(parts));
      parts.clear();
    };
    for (const auto& [key, value] : table) {
      if (!current || *current != key.first) {
        flush();
        current = &key.first;
      }
      parts.emplace_back(symbol ? "d/d" + g.evens()[key.second].name : g.odds()[key.second].name, value);
    }
    flush();
    return out;
  };
  return "cochain " + c.name + " on " + c.on + " { arity " + std::to_string(m.arity()) + "; " +
         detail::block("values", rows(m.values(), false, " = ")) + " " +
         detail::block("symbol", rows(m.symbol(), true, " -> ")) + " }";
}

inline std::string emit(const FoliationItem& f) {
  const GeneratorSetPtr gens = make_generators(f.spec.ambient, {});
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < f.spec.fields.size(); ++i) {
    std::vector<std::pair<std::string, Element>> parts;
    for (std::size_t a = 0; a < f.spec.ambient.size(); ++a)
      parts.emplace_back("d/d" + f.spec.ambient[a].name, Element::constant(gens, f.spec.fields[i][a]));
    rows.push_back(f.spec.field_names[i] + " -> " + detail::target_sum(parts));
  }
  return "foliation " + f.spec.name + " { " +
         detail::weighted_list("ambient", detail::names_and_weights(f.spec.ambient)) + " " +
         detail::block("spanning", rows) + " }";
}

/// Canonical text: one item per line in declaration order.
inline std::string emit(const SpecDocument& doc) {
  std::string out;
  for (const auto& e : doc.order()) {
    switch (e.kind) {
      case ItemKind::algebroid: out += emit(doc.algebroid_item(e.name).presentation); break;
      case ItemKind::submersion: out += emit(doc.submersion(e.name)); break;
      case ItemKind::cochain: out += emit(doc.cochain(e.name)); break;
      case ItemKind::foliation: out += emit(doc.foliation(e.name)); break;
    }
    out += '\n';
  }
  return out;
}

}  // namespace lax::dsl
