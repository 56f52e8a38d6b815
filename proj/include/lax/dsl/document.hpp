#pragma once

#include "lax/deformation.hpp"
#include "lax/dsl/diagnostic.hpp"
#include "lax/foliation.hpp"
#include "lax/pullback.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lax::dsl {

enum class ItemKind { algebroid, submersion, cochain, foliation };

inline const char* item_keyword(ItemKind k) {
  switch (k) {
    case ItemKind::algebroid: return "algebroid";
    case ItemKind::submersion: return "submersion";
    case ItemKind::cochain: return "cochain";
    case ItemKind::foliation: return "foliation";
  }
  return "";
}

struct AlgebroidItem {
  AlgebroidPresentation presentation;
  Span span;  ///< the item name
  /// Source rows of the anchor and bracket entries, for deferred diagnostics.
  std::vector<std::pair<TableEntry, Span>> entry_spans;

  [[nodiscard]] std::optional<Span> span_of(const TableEntry& e) const {
    for (const auto& [entry, s] : entry_spans)
      if (entry == e)
        return s;
    return std::nullopt;
  }
};

struct SubmersionItem {
  SubmersionSpec spec;
  std::string over;
  Span span;
};

struct CochainItem {
  std::string name;
  std::string on;
  Multiderivation cochain;
  Span span;
};

struct FoliationItem {
  FoliationSpec spec;
  Span span;
};

/// Named objects of one source file, in declaration order. Names are unique
/// across all kinds.
class SpecDocument {
public:
  struct Entry {
    ItemKind kind;
    std::string name;
  };

  [[nodiscard]] const std::vector<Entry>& order() const { return order_; }
  [[nodiscard]] bool contains(const std::string& name) const {
    for (const auto& e : order_)
      if (e.name == name)
        return true;
    return false;
  }
  [[nodiscard]] std::optional<ItemKind> kind_of(const std::string& name) const {
    for (const auto& e : order_)
      if (e.name == name)
        return e.kind;
    return std::nullopt;
  }

  void add(AlgebroidItem item) {
    std::string n = item.presentation.name();
    insert(ItemKind::algebroid, std::move(n), algebroids_, std::move(item));
  }
  void add(SubmersionItem item) {
    std::string n = item.spec.name;
    insert(ItemKind::submersion, std::move(n), submersions_, std::move(item));
  }
  void add(CochainItem item) {
    std::string n = item.name;
    insert(ItemKind::cochain, std::move(n), cochains_, std::move(item));
  }
  void add(FoliationItem item) {
    std::string n = item.spec.name;
    insert(ItemKind::foliation, std::move(n), foliations_, std::move(item));
  }

  [[nodiscard]] const AlgebroidItem& algebroid_item(const std::string& n) const { return get(algebroids_, n, "algebroid"); }
  [[nodiscard]] const SubmersionItem& submersion(const std::string& n) const { return get(submersions_, n, "submersion"); }
  [[nodiscard]] const CochainItem& cochain(const std::string& n) const { return get(cochains_, n, "cochain"); }
  [[nodiscard]] const FoliationItem& foliation(const std::string& n) const { return get(foliations_, n, "foliation"); }

  /// An algebroid by name; a foliation is returned as its algebroid.
  [[nodiscard]] AlgebroidPresentation presentation(const std::string& n) const {
    if (auto it = algebroids_.find(n); it != algebroids_.end())
      return it->second.presentation;
    if (auto it = foliations_.find(n); it != foliations_.end())
      return foliation_algebroid(it->second.spec);
    throw Error("no algebroid or foliation named '" + n + "'");
  }

private:
  template <class T>
  void insert(ItemKind kind, std::string name, std::map<std::string, T>& table, T item) {
    if (contains(name))
      throw Error("duplicate item name '" + name + "'");
    order_.push_back({kind, name});
    table.emplace(std::move(name), std::move(item));
  }
  template <class T>
  static const T& get(const std::map<std::string, T>& table, const std::string& n, const char* what) {
    auto it = table.find(n);
    if (it == table.end())
      throw Error(std::string("no ") + what + " named '" + n + "'");
    return it->second;
  }

  std::vector<Entry> order_;
  std::map<std::string, AlgebroidItem> algebroids_;
  std::map<std::string, SubmersionItem> submersions_;
  std::map<std::string, CochainItem> cochains_;
  std::map<std::string, FoliationItem> foliations_;
};

}  // namespace lax::dsl
