#include "qr/fourier.hpp"

#include "qr/error.hpp"
#include "qr/rng.hpp"
#include "qr/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qr::fourier {

namespace {

constexpr std::size_t kSpectralCap = 4096;
constexpr std::size_t kIrrepCap = 512;
constexpr std::size_t kCor25Cap = 1024;
constexpr int kIrrepAttempts = 20;

void require_subset(const grp::Group& g, const Bitset& d) {
  if (d.size() != g.order())
    throw Error(ErrorCode::InvalidArgument, "subset has " + std::to_string(d.size()) + " bits for a group of order " +
                                                std::to_string(g.order()));
}

}  // namespace

const char* to_string(Method m) noexcept {
  return m == Method::spectral ? "spectral" : "abelian_characters";
}

SubsetQR subset_qr_spectral(const grp::Group& g, const Bitset& d) {
  const std::size_t n = g.order();
  if (n > kSpectralCap) throw Error(ErrorCode::OrderCap, "spectral subset eps needs |H| <= 4096");
  require_subset(g, d);
  // Row w lists the v with v·w⁻¹ ∈ D, i.e. v ∈ D·w.
  std::vector<Bitset> rows(n, Bitset(n));
  for (std::size_t w = 0; w < n; ++w)
    d.for_each([&](std::size_t x) { rows[w].set(g.mul(static_cast<grp::Id>(x), static_cast<grp::Id>(w))); });
  spectral::LanczosOptions opts;
  opts.tolerance = 1e-10 * static_cast<double>(n);
  const auto sv = spectral::top_singular_value(rows, n, true, opts);
  const double scale = static_cast<double>(n);
  return {std::clamp(sv.value / scale, 0.0, 1.0), sv.error / scale, Method::spectral};
}

CharacterData::CharacterData(const grp::Group& g) : n_(g.order()), basis_(grp::abelian_basis(g)) {
  if (n_ > kSpectralCap) throw Error(ErrorCode::OrderCap, "character table needs |H| <= 4096");
  const std::uint64_t l = basis_.exponent;
  for (auto o : basis_.orders) weight_.push_back(l / o);
  roots_.resize(l);
  for (std::uint64_t k = 0; k < l; ++k)
    roots_[k] = std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(l));
  trivial_ = g.identity();
}

std::vector<std::uint32_t> CharacterData::dual_label(grp::Id a) const {
  std::vector<std::uint32_t> out(basis_.rank());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = basis_.coord(a, i);
  return out;
}

std::uint64_t CharacterData::phase(grp::Id a, grp::Id x) const noexcept {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < weight_.size(); ++i)
    s += std::uint64_t{basis_.coord(a, i)} * basis_.coord(x, i) % basis_.orders[i] * weight_[i];
  return s % basis_.exponent;
}

CharacterData abelian_characters(const grp::Group& g) { return CharacterData(g); }

SubsetQR subset_qr_characters(const grp::Group& g, const Bitset& d) {
  const CharacterData chars(g);
  require_subset(g, d);
  const std::size_t n = g.order();
  std::vector<grp::Id> members;
  d.for_each([&](std::size_t x) { members.push_back(static_cast<grp::Id>(x)); });
  double best = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (a == chars.trivial()) continue;
    std::complex<double> s = 0;
    for (auto x : members) s += chars.value(static_cast<grp::Id>(a), x);
    best = std::max(best, std::abs(s));
  }
  const double scale = static_cast<double>(n);
  // Each term carries a few ulps from the root table and the addition.
  const double error = 4.0 * static_cast<double>(members.size() + 1) * 0x1p-52 / scale;
  return {std::min(best / scale, 1.0), error, Method::abelian_characters};
}

std::vector<unsigned> irrep_dimensions(const grp::Group& g, std::uint64_t seed) {
  const std::size_t n = g.order();
  if (n > kIrrepCap) throw Error(ErrorCode::OrderCap, "irrep_dimensions needs |G| <= 512");
  const auto classes = grp::conjugacy_classes(g);
  const std::size_t k = classes.size();
  std::vector<std::size_t> class_of(n);
  for (std::size_t c = 0; c < k; ++c)
    for (auto x : classes[c]) class_of[x] = c;
  const std::size_t e_class = class_of[g.identity()];

  // Class sums multiply as C_i C_j = Σ_l a_ijl C_l, with a_ijl the number of
  // (x, y) ∈ C_i × C_j with xy = z for a fixed z ∈ C_l. The central
  // characters ω_χ(C) = |C|χ(c)/χ(1) are the common eigenvectors of the
  // matrices (M_i)_jl = a_ijl.
  // Sparse: entry (i, j) lists (l, |C_l| a_ijl) for the classes hit.
  std::vector<std::vector<std::pair<std::size_t, double>>> counts(k * k);
  std::vector<double> hits(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      std::fill(hits.begin(), hits.end(), 0.0);
      for (auto x : classes[i])
        for (auto y : classes[j]) hits[class_of[g.mul(x, y)]] += 1;
      for (std::size_t l = 0; l < k; ++l)
        if (hits[l] != 0) counts[i * k + j].emplace_back(l, hits[l]);
    }

  Rng rng(seed);
  for (int attempt = 0; attempt < kIrrepAttempts; ++attempt) {
    std::vector<double> r(k);
    for (auto& ri : r) ri = uniform_unit(rng) * 2 - 1;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (const auto& [l, c] : counts[i * k + j])
          m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) +=
              r[i] * c / static_cast<double>(classes[l].size());

    Eigen::EigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) continue;
    const auto lambda = es.eigenvalues();
    double spread = 0;
    for (Eigen::Index a = 0; a < lambda.size(); ++a) spread = std::max(spread, std::abs(lambda[a]));
    bool separated = true;
    for (Eigen::Index a = 0; a < lambda.size() && separated; ++a)
      for (Eigen::Index b = a + 1; b < lambda.size(); ++b)
        if (std::abs(lambda[a] - lambda[b]) <= 1e-7 * std::max(spread, 1.0)) {
          separated = false;
          break;
        }
    if (!separated) continue;

    std::vector<unsigned> degrees;
    bool ok = true;
    std::uint64_t sum_sq = 0;
    for (Eigen::Index a = 0; a < lambda.size() && ok; ++a) {
      Eigen::VectorXcd w = es.eigenvectors().col(a);
      const auto pivot = w[static_cast<Eigen::Index>(e_class)];
      if (std::abs(pivot) < 1e-9 * w.norm()) {
        ok = false;
        break;
      }
      w /= pivot;
      double s = 0;
      for (std::size_t c = 0; c < k; ++c)
        s += std::norm(w[static_cast<Eigen::Index>(c)]) / static_cast<double>(classes[c].size());
      const double dim = std::sqrt(static_cast<double>(n) / s);
      const double rounded = std::round(dim);
      if (rounded < 1 || std::abs(dim - rounded) > 1e-4 || n % static_cast<std::size_t>(rounded) != 0) {
        ok = false;
        break;
      }
      degrees.push_back(static_cast<unsigned>(rounded));
      sum_sq += static_cast<std::uint64_t>(rounded) * static_cast<std::uint64_t>(rounded);
    }
    if (!ok || sum_sq != n) continue;
    std::sort(degrees.begin(), degrees.end());
    return degrees;
  }
  throw Error(ErrorCode::DegeneracyNotResolved,
              "class-sum eigenvectors did not separate after " + std::to_string(kIrrepAttempts) + " attempts");
}

bool Cor25Record::holds() const {
  return std::none_of(relations.begin(), relations.end(),
                      [](const quasi::Relation& r) { return r.status == quasi::RelationStatus::fail; });
}

Cor25Record verify_cor25(const grp::GroupPtr& g, const Bitset& d) {
  const std::size_t n = g->order();
  if (n > kCor25Cap) throw Error(ErrorCode::OrderCap, "verify_cor25 needs |H| <= 1024");
  Cor25Record rec;
  rec.subset = subset_qr_spectral(*g, d);
  const auto graph = quasi::cayley_bipartite(g, d, Bitset::full(n), Bitset::full(n));
  rec.eps1 = quasi::eps1_quasirandomness(graph).value;
  const double eps = rec.subset.eps, err = rec.subset.error;
  const double root = fourth_root(rec.eps1);
  const double eps1 = to_double(rec.eps1);
  const auto status = [](bool ok) { return ok ? quasi::RelationStatus::pass : quasi::RelationStatus::fail; };
  rec.relations.push_back({"eps <= eps1^(1/4)", eps, root, status(eps - err <= root + quasi::kFloatSlack), false});
  const double high = eps + err;
  rec.relations.push_back({"eps1 <= eps^2", eps1, eps * eps, status(eps1 <= high * high + quasi::kFloatSlack), false});
  return rec;
}

}  // namespace qr::fourier
