#pragma once

#include "lax/pullback.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lax {

/// One (degree, weight) block of a comparison between A and π!A.
struct MoritaBlock {
  int degree = 0;
  int weight = 0;
  std::size_t betti_left = 0;   ///< A
  std::size_t betti_right = 0;  ///< π!A
  bool betti_equal = false;
  bool upper_iso = false;       ///< Π* (dr) or Π⋆ (def) induces an iso
  std::optional<bool> lower_iso;       ///< def only: Π★ induces an iso
  std::optional<bool> kernel_acyclic;  ///< def only: H(K) = 0 with the homotopy law
  bool pass = false;
};

struct MoritaReport {
  ComplexKind kind = ComplexKind::dr;
  int max_degree = 0;
  Window window;
  CohomologyReport left;
  CohomologyReport right;
  std::vector<MoritaBlock> blocks;
  bool passed = false;
};

/// Compares A with π!A blockwise in degrees ≤ m (from −1 for def) and the
/// given weights. dr: Betti tables and the map induced by Π*. def: K = ker Π★
/// acyclic, Π★ and Π⋆ inducing isos, and the Betti tables.
inline MoritaReport morita_check(const PullbackPresentation& pp, ComplexKind kind, int max_degree, int weight_lo,
                                 int weight_hi, unsigned threads = 1) {
  if (max_degree < 0)
    throw Error("morita_check: max degree must be >= 0");
  if (weight_lo > weight_hi)
    throw Error("morita_check: empty weight window");
  MoritaReport rep;
  rep.kind = kind;
  rep.max_degree = max_degree;
  rep.window = Window{kind == ComplexKind::dr ? 0 : -1, max_degree, weight_lo, weight_hi};
  const MorphismPtr& pi = pp.projection;

  if (kind == ComplexKind::dr) {
    const FormComplex left = de_rham_complex(pp.base);
    const FormComplex right = de_rham_complex(pp.presentation);
    rep.left = betti(left, rep.window, threads);
    rep.right = betti(right, rep.window, threads);
    const auto map = form_map("Pi*", left, right, [pi](const Element& e) { return pi->pullback(e); });
    for (const auto& [d, w] : rep.window.blocks()) {
      MoritaBlock b{d, w, rep.left.betti(d, w), rep.right.betti(d, w), false, false, std::nullopt, std::nullopt, false};
      b.betti_equal = b.betti_left == b.betti_right;
      b.upper_iso = induced_map(left, right, map, d, w).iso;
      b.pass = b.betti_equal && b.upper_iso;
      rep.blocks.push_back(b);
    }
  } else {
    const ImageComplex left = deformation_complex(pp.base);
    const ImageComplex right = deformation_complex(pp.presentation);
    const ImageComplex rel = relative_complex(pi, "C(Pi)");
    const ImageComplex kernel = kernel_complex(pp);
    rep.left = betti(left, rep.window, threads);
    rep.right = betti(right, rep.window, threads);
    const auto lower = lower_star_map(pi, right, rel);
    const auto upper = upper_star_map(pi, left, rel);
    for (const auto& [d, w] : rep.window.blocks()) {
      MoritaBlock b{d, w, rep.left.betti(d, w), rep.right.betti(d, w), false, false, std::nullopt, std::nullopt, false};
      b.betti_equal = b.betti_left == b.betti_right;
      b.upper_iso = induced_map(left, rel, upper, d, w).iso;
      b.lower_iso = induced_map(right, rel, lower, d, w).iso;
      b.kernel_acyclic = kernel_acyclicity_check(pp, kernel, d, w).passed();
      b.pass = b.betti_equal && b.upper_iso && *b.lower_iso && *b.kernel_acyclic;
      rep.blocks.push_back(b);
    }
  }
  rep.passed = true;
  for (const auto& b : rep.blocks)
    rep.passed = rep.passed && b.pass;
  return rep;
}

inline MoritaReport morita_check(const AlgebroidPresentation& pres, const SubmersionSpec& sub, ComplexKind kind,
                                 int max_degree, int weight_lo, int weight_hi, unsigned threads = 1) {
  return morita_check(pullback_algebroid(pres, sub), kind, max_degree, weight_lo, weight_hi, threads);
}

}  // namespace lax
