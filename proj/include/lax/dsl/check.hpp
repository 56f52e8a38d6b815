#pragma once

#include "lax/dsl/document.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace lax::dsl {

struct DocumentCheck {
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> passed;  ///< names of items that check out
  bool input_error = false;         ///< weight or construction problems
  bool math_failure = false;        ///< structure equations fail
};

/// Runs the deferred checks on a parsed document: weight homogeneity of every
/// table entry, d_A² = 0 on every generator, and that each submersion's
/// pull-back can be formed.
inline DocumentCheck check_document(const SpecDocument& doc) {
  DocumentCheck out;
  std::vector<std::string> broken;
  auto report = [&](const Span& s, std::string msg, std::string code) {
    out.diagnostics.push_back({Severity::error, s, std::move(msg), std::move(code)});
  };
  for (const auto& entry : doc.order()) {
    switch (entry.kind) {
      case ItemKind::algebroid: {
        const AlgebroidItem& item = doc.algebroid_item(entry.name);
        try {
          check_weights(item.presentation);
        } catch (const WeightError& e) {
          report(item.span_of(e.entry()).value_or(item.span), e.what(), "weight");
          out.input_error = true;
          broken.push_back(entry.name);
          break;
        }
        const ValidationReport v = validate(item.presentation);
        for (const auto& [gen, residual] : v.failures)
          report(item.span,
                 "structure equations of '" + entry.name + "' fail on generator '" + gen + "': [d,d](" + gen +
                     ") = " + residual.str(),
                 "jacobi");
        if (!v.passed) {
          out.math_failure = true;
          broken.push_back(entry.name);
        } else {
          out.passed.push_back(entry.name);
        }
        break;
      }
      case ItemKind::foliation:
        out.passed.push_back(entry.name);
        break;
      case ItemKind::submersion: {
        const SubmersionItem& item = doc.submersion(entry.name);
        if (std::find(broken.begin(), broken.end(), item.over) != broken.end())
          break;
        try {
          (void)pullback_algebroid(doc.presentation(item.over), item.spec);
          out.passed.push_back(entry.name);
        } catch (const Error& e) {
          report(item.span, e.what(), "invalid");
          out.input_error = true;
        }
        break;
      }
      case ItemKind::cochain:
        out.passed.push_back(entry.name);
        break;
    }
  }
  return out;
}

}  // namespace lax::dsl
