#pragma once

#include "lax/linalg.hpp"
#include "lax/morphism.hpp"

#include <concepts>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace lax {

/// Rectangle of (degree, weight) blocks, both ranges inclusive.
struct Window {
  int degree_lo = 0;
  int degree_hi = 0;
  int weight_lo = 0;
  int weight_hi = 0;

  [[nodiscard]] bool empty() const { return degree_lo > degree_hi || weight_lo > weight_hi; }
  [[nodiscard]] std::vector<std::pair<int, int>> blocks() const {
    std::vector<std::pair<int, int>> out;
    for (int w = weight_lo; w <= weight_hi; ++w)
      for (int d = degree_lo; d <= degree_hi; ++d)
        out.emplace_back(d, w);
    return out;
  }
};

/// A cochain complex split into finite (degree, weight) blocks, with
/// differential(d, w) the matrix from block (d, w) to block (d + 1, w).
template <class C>
concept BlockComplex = requires(const C& c, int d, int w) {
  { c.dimension(d, w) } -> std::convertible_to<std::size_t>;
  { c.differential(d, w) } -> std::convertible_to<SparseRationalMatrix>;
  { c.id() } -> std::convertible_to<std::string>;
};

/// A degree-0 weight-preserving linear map between block complexes.
template <class M>
concept BlockMap = requires(const M& m, int d, int w) {
  { m.matrix(d, w) } -> std::convertible_to<SparseRationalMatrix>;
};

namespace detail {

/// Thread-safe memo of per-block values.
template <class T>
class BlockMemo {
public:
  template <class Make>
  const T& get(int d, int w, Make&& make) const {
    {
      std::lock_guard lock(mu_);
      auto it = values_.find({d, w});
      if (it != values_.end())
        return *it->second;
    }
    auto value = std::make_shared<const T>(make());
    std::lock_guard lock(mu_);
    return *values_.try_emplace({d, w}, std::move(value)).first->second;
  }

private:
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const T>> values_;
};

inline RationalVector coordinates_in(const Element& e, const MonomialIndex& index, std::size_t size) {
  RationalVector v(size);
  for (const auto& [m, c] : e.terms()) {
    const auto pos = index.find(m);
    if (!pos)
      throw Error("element leaves its block: " + e.str());
    v[*pos] = c;
  }
  return v;
}

}  // namespace detail

/// Forms (C, d) for a degree-1 derivation d of a weighted algebra: block
/// (n, w) is spanned by the monomials of degree n and weight w.
class FormComplex {
public:
  FormComplex(GradedDerivation d, std::string id)
      : gens_(d.generators()), d_(std::move(d)), id_(std::move(id)),
        bases_(std::make_shared<detail::BlockMemo<Basis>>()),
        matrices_(std::make_shared<detail::BlockMemo<SparseRationalMatrix>>()) {
    if (d_.degree() != 1)
      throw Error("form complexes need a degree-1 differential");
  }

  [[nodiscard]] const std::string& id() const { return id_; }
  [[nodiscard]] const GeneratorSetPtr& generators() const { return gens_; }
  [[nodiscard]] const GradedDerivation& d() const { return d_; }

  [[nodiscard]] const std::vector<Monomial>& basis(int n, int w) const { return block(n, w).monomials; }
  [[nodiscard]] std::size_t dimension(int n, int w) const { return basis(n, w).size(); }

  [[nodiscard]] RationalVector coordinates(const Element& e, int n, int w) const {
    const Basis& b = block(n, w);
    return detail::coordinates_in(e, b.index, b.monomials.size());
  }
  [[nodiscard]] Element element(const RationalVector& v, int n, int w) const {
    const auto& basis = this->basis(n, w);
    Element e(gens_);
    for (std::size_t i = 0; i < basis.size(); ++i)
      e.add_term(basis[i], v[i]);
    return e;
  }

  [[nodiscard]] const SparseRationalMatrix& differential(int n, int w) const {
    return matrices_->get(n, w, [&] {
      const auto& source = basis(n, w);
      const Basis& target = block(n + 1, w);
      SparseRationalMatrix m(target.monomials.size(), source.size());
      for (std::size_t j = 0; j < source.size(); ++j) {
        const RationalVector col = detail::coordinates_in(d_.apply(source[j]), target.index, target.monomials.size());
        for (std::size_t i = 0; i < col.size(); ++i)
          if (!col[i].is_zero())
            m.set(i, j, col[i]);
      }
      return m;
    });
  }

private:
  struct Basis {
    std::vector<Monomial> monomials;
    MonomialIndex index;
  };
  const Basis& block(int n, int w) const {
    return bases_->get(n, w, [&] {
      Basis b;
      b.monomials = basis_enumerate(*gens_, n, w);
      b.index = MonomialIndex(b.monomials);
      return b;
    });
  }

  GeneratorSetPtr gens_;
  GradedDerivation d_;
  std::string id_;
  std::shared_ptr<detail::BlockMemo<Basis>> bases_;
  std::shared_ptr<detail::BlockMemo<SparseRationalMatrix>> matrices_;
};

/// Spaces of "generator image" cochains: a degree-k cochain assigns to each
/// allowed generator g of a source algebra an element of a target algebra of
/// degree deg(g) + k. Block (k, w) is spanned by pairs (g, m) with m a target
/// monomial of weight w(g) + w. Derivations (source = target) and relative
/// cochains (source = C(B), target = C(A)) are both of this form; the
/// differential is supplied as an operation on image vectors.
class ImageComplex {
public:
  using Images = std::vector<Element>;
  using Operation = std::function<Images(const Images&, int degree)>;

  ImageComplex(GeneratorSetPtr source, GeneratorSetPtr target, std::vector<std::size_t> allowed, Operation delta,
               std::string id)
      : source_(std::move(source)), target_(std::move(target)), allowed_(std::move(allowed)),
        delta_(std::move(delta)), id_(std::move(id)), bases_(std::make_shared<detail::BlockMemo<Basis>>()),
        matrices_(std::make_shared<detail::BlockMemo<SparseRationalMatrix>>()) {}

  [[nodiscard]] const std::string& id() const { return id_; }
  [[nodiscard]] const GeneratorSetPtr& source() const { return source_; }
  [[nodiscard]] const GeneratorSetPtr& target() const { return target_; }
  [[nodiscard]] const std::vector<std::size_t>& allowed() const { return allowed_; }

  /// (generator global index, monomial) pairs of block (k, w) in order.
  [[nodiscard]] const std::vector<std::pair<std::size_t, Monomial>>& basis(int k, int w) const {
    return block(k, w).entries;
  }
  [[nodiscard]] std::size_t dimension(int k, int w) const { return basis(k, w).size(); }

  [[nodiscard]] Images images(const RationalVector& v, int k, int w) const {
    Images out(source_->size(), Element(target_));
    const auto& entries = basis(k, w);
    for (std::size_t i = 0; i < entries.size(); ++i)
      out[entries[i].first].add_term(entries[i].second, v[i]);
    return out;
  }
  [[nodiscard]] Images unit_images(std::size_t position, int k, int w) const {
    Images out(source_->size(), Element(target_));
    const auto& e = basis(k, w).at(position);
    out[e.first].add_term(e.second, Rational(1));
    return out;
  }

  /// Coordinates of an image vector in block (k, w); throws when an image is
  /// outside the block or sits on a generator that is not allowed.
  [[nodiscard]] RationalVector coordinates(const Images& images, int k, int w) const {
    const Basis& b = block(k, w);
    RationalVector v(b.entries.size());
    std::vector<bool> is_allowed(source_->size(), false);
    for (auto g : allowed_)
      is_allowed[g] = true;
    for (std::size_t g = 0; g < images.size(); ++g) {
      if (images[g].is_zero())
        continue;
      if (!is_allowed[g])
        throw Error("cochain has a nonzero image on an excluded generator of complex '" + id_ + "'");
      for (const auto& [m, c] : images[g].terms()) {
        auto it = b.offsets.find(g);
        const auto pos = it == b.offsets.end() ? std::nullopt : it->second.second.find(m);
        if (!pos)
          throw Error("cochain image leaves block (" + std::to_string(k) + ", " + std::to_string(w) +
                      ") of complex '" + id_ + "'");
        v[it->second.first + *pos] = c;
      }
    }
    return v;
  }

  [[nodiscard]] Images apply_delta(const Images& images, int k) const { return delta_(images, k); }

  [[nodiscard]] const SparseRationalMatrix& differential(int k, int w) const {
    return matrices_->get(k, w, [&] {
      const std::size_t n = dimension(k, w);
      SparseRationalMatrix m(dimension(k + 1, w), n);
      for (std::size_t j = 0; j < n; ++j) {
        const RationalVector col = coordinates(delta_(unit_images(j, k, w), k), k + 1, w);
        for (std::size_t i = 0; i < col.size(); ++i)
          if (!col[i].is_zero())
            m.set(i, j, col[i]);
      }
      return m;
    });
  }

private:
  struct Basis {
    std::vector<std::pair<std::size_t, Monomial>> entries;
    std::map<std::size_t, std::pair<std::size_t, MonomialIndex>> offsets;
  };
  const Basis& block(int k, int w) const {
    return bases_->get(k, w, [&] {
      Basis b;
      for (auto g : allowed_) {
        const GeneratorRef ref = source_->from_global(g);
        const auto monomials = basis_enumerate(*target_, GeneratorSet::degree(ref) + k, source_->weight(ref) + w);
        if (monomials.empty())
          continue;
        b.offsets.emplace(g, std::make_pair(b.entries.size(), MonomialIndex(monomials)));
        for (const auto& m : monomials)
          b.entries.emplace_back(g, m);
      }
      return b;
    });
  }

  GeneratorSetPtr source_;
  GeneratorSetPtr target_;
  std::vector<std::size_t> allowed_;
  Operation delta_;
  std::string id_;
  std::shared_ptr<detail::BlockMemo<Basis>> bases_;
  std::shared_ptr<detail::BlockMemo<SparseRationalMatrix>> matrices_;
};

inline std::vector<std::size_t> all_generators(const GeneratorSet& g) {
  std::vector<std::size_t> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = i;
  return out;
}

inline GradedDerivation derivation_from_images(const GeneratorSetPtr& gens, const ImageComplex::Images& images,
                                               int degree) {
  GradedDerivation x(gens, degree);
  for (std::size_t i = 0; i < images.size(); ++i)
    if (!images[i].is_zero())
      x.set_image(gens->from_global(i), images[i]);
  return x;
}

/// (C(A), d_A).
inline FormComplex de_rham_complex(const AlgebroidPresentation& p) {
  return FormComplex(build_differential(p).differential, "dR(" + p.name() + ")");
}

/// C_def(A) = derivations of C(A) with δ = [d_A, −], optionally restricted to
/// derivations vanishing outside `allowed`.
inline ImageComplex deformation_complex(const DeRhamComplex& complex, std::string id,
                                        std::vector<std::size_t> allowed = {}) {
  const GeneratorSetPtr gens = complex.generators;
  if (allowed.empty())
    allowed = all_generators(*gens);
  GradedDerivation d = complex.differential;
  return ImageComplex(
      gens, gens, std::move(allowed),
      [gens, d](const ImageComplex::Images& images, int degree) {
        return derivation_commutator(d, derivation_from_images(gens, images, degree)).images();
      },
      std::move(id));
}

inline ImageComplex deformation_complex(const AlgebroidPresentation& p) {
  return deformation_complex(build_differential(p), "def(" + p.name() + ")");
}

/// C(F) with δZ = d_A∘Z − (−1)^{|Z|} Z∘d_B.
inline ImageComplex relative_complex(const MorphismPtr& f, std::string id) {
  const GeneratorSetPtr source = f->target().generators();
  return ImageComplex(
      source, f->source().generators(), all_generators(*source),
      [f](const ImageComplex::Images& images, int degree) {
        RelativeCochain z(f, degree);
        for (std::size_t i = 0; i < images.size(); ++i)
          if (!images[i].is_zero())
            z.set_image(f->target().generators()->from_global(i), images[i]);
        return relative_delta(z).images();
      },
      std::move(id));
}

inline RelativeCochain relative_from_images(const MorphismPtr& f, const ImageComplex::Images& images, int degree) {
  RelativeCochain z(f, degree);
  for (std::size_t i = 0; i < images.size(); ++i)
    if (!images[i].is_zero())
      z.set_image(f->target().generators()->from_global(i), images[i]);
  return z;
}

/// Degree-0 map between block complexes given by its block matrices.
class LinearBlockMap {
public:
  using MatrixFn = std::function<SparseRationalMatrix(int d, int w)>;
  LinearBlockMap(std::string id, MatrixFn fn)
      : id_(std::move(id)), fn_(std::move(fn)), cache_(std::make_shared<detail::BlockMemo<SparseRationalMatrix>>()) {}

  [[nodiscard]] const std::string& id() const { return id_; }
  [[nodiscard]] const SparseRationalMatrix& matrix(int d, int w) const {
    return cache_->get(d, w, [&] { return fn_(d, w); });
  }

private:
  std::string id_;
  MatrixFn fn_;
  std::shared_ptr<detail::BlockMemo<SparseRationalMatrix>> cache_;
};

/// Map of form complexes induced by an algebra map.
inline LinearBlockMap form_map(std::string id, const FormComplex& source, const FormComplex& target,
                               std::function<Element(const Element&)> f) {
  return LinearBlockMap(std::move(id), [source, target, f](int d, int w) {
    const auto& basis = source.basis(d, w);
    SparseRationalMatrix m(target.dimension(d, w), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const RationalVector col =
          target.coordinates(f(Element::monomial(source.generators(), basis[j])), d, w);
      for (std::size_t i = 0; i < col.size(); ++i)
        if (!col[i].is_zero())
          m.set(i, j, col[i]);
    }
    return m;
  });
}

/// Map of image complexes given on image vectors.
inline LinearBlockMap image_map(std::string id, const ImageComplex& source, const ImageComplex& target,
                                std::function<ImageComplex::Images(const ImageComplex::Images&, int degree)> f) {
  return LinearBlockMap(std::move(id), [source, target, f](int d, int w) {
    const std::size_t n = source.dimension(d, w);
    SparseRationalMatrix m(target.dimension(d, w), n);
    for (std::size_t j = 0; j < n; ++j) {
      const RationalVector col = target.coordinates(f(source.unit_images(j, d, w), d), d, w);
      for (std::size_t i = 0; i < col.size(); ++i)
        if (!col[i].is_zero())
          m.set(i, j, col[i]);
    }
    return m;
  });
}

/// F★ = −∘F*: C_def(A) → C(F) for F: A → B.
inline LinearBlockMap lower_star_map(const MorphismPtr& f, const ImageComplex& defs, const ImageComplex& relative) {
  const GeneratorSetPtr gens = f->source().generators();
  return image_map("lower_star", defs, relative, [f, gens](const ImageComplex::Images& images, int degree) {
    return lower_star(f, derivation_from_images(gens, images, degree)).images();
  });
}

/// F⋆ = F*∘−: C_def(B) → C(F).
inline LinearBlockMap upper_star_map(const MorphismPtr& f, const ImageComplex& defs, const ImageComplex& relative) {
  const GeneratorSetPtr gens = f->target().generators();
  return image_map("upper_star", defs, relative, [f, gens](const ImageComplex::Images& images, int degree) {
    return upper_star(f, derivation_from_images(gens, images, degree)).images();
  });
}

/// Matrix of a complex's differential from block (d, w) to (d + 1, w).
template <BlockComplex C>
SparseRationalMatrix block_matrix(const C& complex, int degree, int weight) {
  return complex.differential(degree, weight);
}

inline SparseRationalMatrix block_matrix(const GradedDerivation& d, int degree, int weight) {
  return FormComplex(d, "").differential(degree, weight);
}

struct CohomologyReport {
  std::string complex_id;
  Window window;
  std::map<std::pair<int, int>, std::size_t> table;

  [[nodiscard]] std::size_t betti(int degree, int weight) const { return table.at({degree, weight}); }
  /// Betti numbers of one weight, in increasing degree.
  [[nodiscard]] std::vector<std::size_t> row(int weight) const {
    std::vector<std::size_t> out;
    for (int d = window.degree_lo; d <= window.degree_hi; ++d)
      out.push_back(betti(d, weight));
    return out;
  }
};

/// Betti number of one block: dim ker(d at n) − rank(d at n − 1).
template <BlockComplex C>
std::size_t block_betti(const C& complex, int degree, int weight) {
  const std::size_t dim = complex.dimension(degree, weight);
  if (dim == 0)
    return 0;
  const std::size_t out_rank = rank(complex.differential(degree, weight));
  const std::size_t in_rank = rank(complex.differential(degree - 1, weight));
  if (out_rank + in_rank > dim)
    throw Error("rank-nullity violated in block (" + std::to_string(degree) + ", " + std::to_string(weight) +
                ") of " + std::string(complex.id()) + ": the differential does not square to zero");
  return dim - out_rank - in_rank;
}

/// Exact Betti table over a window. Blocks are independent and may be
/// evaluated concurrently; the table is assembled in block order, so the
/// result does not depend on scheduling.
template <BlockComplex C>
CohomologyReport betti(const C& complex, const Window& window, unsigned threads = 1) {
  CohomologyReport report{std::string(complex.id()), window, {}};
  const auto blocks = window.blocks();
  if (threads <= 1 || blocks.size() <= 1) {
    for (const auto& [d, w] : blocks)
      report.table[{d, w}] = block_betti(complex, d, w);
    return report;
  }
  std::vector<std::future<std::size_t>> pending;
  for (std::size_t start = 0; start < blocks.size(); start += threads) {
    pending.clear();
    const std::size_t end = std::min(blocks.size(), start + threads);
    for (std::size_t i = start; i < end; ++i)
      pending.push_back(std::async(std::launch::async, [&complex, b = blocks[i]] {
        return block_betti(complex, b.first, b.second);
      }));
    for (std::size_t i = start; i < end; ++i)
      report.table[blocks[i]] = pending[i - start].get();
  }
  return report;
}

/// Cocycles of block (d, w) completing the coboundaries to a basis of the
/// cocycle space; their classes form a basis of the cohomology.
template <BlockComplex C>
std::vector<RationalVector> cohomology_representatives(const C& complex, int degree, int weight) {
  const std::size_t dim = complex.dimension(degree, weight);
  if (dim == 0)
    return {};
  const SparseRationalMatrix& incoming = complex.differential(degree - 1, weight);
  const std::vector<RationalVector> cycles = kernel_basis(complex.differential(degree, weight));
  std::vector<RationalVector> rows(dim, RationalVector(incoming.cols() + cycles.size()));
  for (const auto& [k, x] : incoming.entries())
    rows[k.first][k.second] = x;
  for (std::size_t j = 0; j < cycles.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i)
      rows[i][incoming.cols() + j] = cycles[j][i];
  std::vector<RationalVector> reps;
  for (auto pivot : rref(rows))
    if (pivot >= incoming.cols())
      reps.push_back(cycles[pivot - incoming.cols()]);
  return reps;
}

struct InducedMapEntry {
  int degree = 0;
  int weight = 0;
  std::size_t source_betti = 0;
  std::size_t target_betti = 0;
  /// target_betti × source_betti matrix in the representative bases.
  SparseRationalMatrix matrix;
  bool injective = false;
  bool surjective = false;
  bool iso = false;
};

struct InducedMapReport {
  std::string map_id;
  std::vector<InducedMapEntry> entries;
  [[nodiscard]] bool all_iso() const {
    for (const auto& e : entries)
      if (!e.iso)
        return false;
    return true;
  }
};

/// True when f commutes with the differentials out of block (d, w).
template <BlockComplex S, BlockComplex T, BlockMap M>
bool chain_map_law(const S& source, const T& target, const M& f, int degree, int weight) {
  const SparseRationalMatrix lhs = f.matrix(degree + 1, weight) * source.differential(degree, weight);
  const SparseRationalMatrix rhs = target.differential(degree, weight) * f.matrix(degree, weight);
  return lhs == rhs;
}

/// The map on H^d in block (d, w). Throws when f is not a chain map around
/// the block.
template <BlockComplex S, BlockComplex T, BlockMap M>
InducedMapEntry induced_map(const S& source, const T& target, const M& f, int degree, int weight) {
  if (!chain_map_law(source, target, f, degree, weight) || !chain_map_law(source, target, f, degree - 1, weight))
    throw Error("induced_map: the given map is not a chain map at block (" + std::to_string(degree) + ", " +
                std::to_string(weight) + ")");
  InducedMapEntry e;
  e.degree = degree;
  e.weight = weight;
  const auto source_reps = cohomology_representatives(source, degree, weight);
  const auto target_reps = cohomology_representatives(target, degree, weight);
  e.source_betti = source_reps.size();
  e.target_betti = target_reps.size();
  e.matrix = SparseRationalMatrix(e.target_betti, e.source_betti);
  if (!source_reps.empty() && !target_reps.empty()) {
    const SparseRationalMatrix& incoming = target.differential(degree - 1, weight);
    const std::size_t dim = target.dimension(degree, weight);
    SparseRationalMatrix system(dim, incoming.cols() + target_reps.size());
    for (const auto& [k, x] : incoming.entries())
      system.set(k.first, k.second, x);
    for (std::size_t j = 0; j < target_reps.size(); ++j)
      for (std::size_t i = 0; i < dim; ++i)
        system.set(i, incoming.cols() + j, target_reps[j][i]);
    const SparseRationalMatrix& fm = f.matrix(degree, weight);
    for (std::size_t j = 0; j < source_reps.size(); ++j) {
      const auto x = solve(system, fm.apply(source_reps[j]));
      if (!x)
        throw Error("induced_map: image of a cocycle is not a cocycle");
      for (std::size_t i = 0; i < target_reps.size(); ++i)
        e.matrix.set(i, j, (*x)[incoming.cols() + i]);
    }
  }
  const std::size_t r = rank(e.matrix);
  e.injective = r == e.source_betti;
  e.surjective = r == e.target_betti;
  e.iso = e.injective && e.surjective;
  return e;
}

template <BlockComplex S, BlockComplex T, BlockMap M>
InducedMapReport induced_map(const S& source, const T& target, const M& f, const Window& window,
                             std::string id = "") {
  InducedMapReport report{std::move(id), {}};
  for (const auto& [d, w] : window.blocks())
    report.entries.push_back(induced_map(source, target, f, d, w));
  return report;
}

}  // namespace lax
