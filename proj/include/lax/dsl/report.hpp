#pragma once

#include "lax/cohomology.hpp"
#include "lax/foliation.hpp"
#include "lax/morita.hpp"

#include "json.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lax::dsl {

/// One row of a machine-readable report.
struct ReportBlock {
  int degree = 0;
  int weight = 0;
  std::size_t betti_left = 0;
  std::optional<std::size_t> betti_right;
  bool pass = true;
};

struct Report {
  std::string command;
  std::vector<ReportBlock> blocks;
  bool pass = true;
};

inline Report cohomology_report(const CohomologyReport& c) {
  Report r{"cohomology", {}, true};
  for (const auto& [d, w] : c.window.blocks())
    r.blocks.push_back({d, w, c.betti(d, w), std::nullopt, true});
  return r;
}

inline Report morita_report(const MoritaReport& m, std::string command = "morita") {
  Report r{std::move(command), {}, m.passed};
  for (const auto& b : m.blocks)
    r.blocks.push_back({b.degree, b.weight, b.betti_left, b.betti_right, b.pass});
  return r;
}

/// Left: Bott complex. Right: deformation complex.
inline Report bott_report(const BottComparison& c) {
  Report r{"foliation", {}, c.equal()};
  for (const auto& [d, w] : c.window.blocks()) {
    const std::size_t l = c.bott.betti(d, w), rt = c.deformation.betti(d, w);
    r.blocks.push_back({d, w, l, rt, l == rt});
  }
  return r;
}

/// {"command", "blocks": [{"degree", "weight", "betti_left", "betti_right", "pass"}], "pass"}
inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : r.blocks) {
    nlohmann::ordered_json row;
    row["degree"] = b.degree;
    row["weight"] = b.weight;
    row["betti_left"] = b.betti_left;
    row["betti_right"] = b.betti_right ? nlohmann::ordered_json(*b.betti_right) : nlohmann::ordered_json(nullptr);
    row["pass"] = b.pass;
    j["blocks"].push_back(std::move(row));
  }
  j["pass"] = r.pass;
  return j;
}

/// "degree,weight,betti" rows; a second Betti column is added when the
/// report compares two complexes.
inline std::string to_csv(const Report& r) {
  bool two = false;
  for (const auto& b : r.blocks)
    two = two || b.betti_right.has_value();
  std::ostringstream os;
  os << (two ? "degree,weight,betti_left,betti_right,pass\n" : "degree,weight,betti\n");
  for (const auto& b : r.blocks) {
    os << b.degree << ',' << b.weight << ',' << b.betti_left;
    if (two)
      os << ',' << (b.betti_right ? std::to_string(*b.betti_right) : "") << ',' << (b.pass ? "true" : "false");
    os << '\n';
  }
  return os.str();
}

/// Weight rows by degree columns; comparisons print "left/right".
inline std::string to_table(const Report& r) {
  std::vector<int> degrees, weights;
  for (const auto& b : r.blocks) {
    if (std::find(degrees.begin(), degrees.end(), b.degree) == degrees.end())
      degrees.push_back(b.degree);
    if (std::find(weights.begin(), weights.end(), b.weight) == weights.end())
      weights.push_back(b.weight);
  }
  std::sort(degrees.begin(), degrees.end());
  std::sort(weights.begin(), weights.end());
  auto cell = [&](int d, int w) -> std::string {
    for (const auto& b : r.blocks)
      if (b.degree == d && b.weight == w)
        return std::to_string(b.betti_left) + (b.betti_right ? "/" + std::to_string(*b.betti_right) : "") +
               (b.pass ? "" : "!");
    return "";
  };
  std::size_t width = 6;
  for (int w : weights)
    for (int d : degrees)
      width = std::max(width, cell(d, w).size() + 2);
  std::ostringstream os;
  auto pad = [&](const std::string& s) { os << std::string(width - std::min(width, s.size()), ' ') << s; };
  pad("w\\deg");
  for (int d : degrees)
    pad(std::to_string(d));
  os << '\n';
  for (int w : weights) {
    pad(std::to_string(w));
    for (int d : degrees)
      pad(cell(d, w));
    os << '\n';
  }
  os << (r.pass ? "pass\n" : "FAIL\n");
  return os.str();
}

}  // namespace lax::dsl
