#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fschubert/lattice.hpp"

namespace fschubert {

enum class LatticeKind { SimplyConnected, Adjoint, Custom };

std::string to_string(LatticeKind k);

struct Root {
    LatticeVector coords;  // in the basis of Λ
    LatticeVector simple;  // in the basis of simple roots
    LatticeVector coroot;  // covector on Λ
    int height = 0;
};

/// Root datum of finite type.  Roots are numbered 0..P-1 for the positive
/// ones (ordered by height, then simple-root coordinates descending, so the
/// simple roots come first in their natural order) and P..2P-1 for their
/// negatives, with root P+k = -(root k).
class RootDatum {
public:
    static std::shared_ptr<const RootDatum> from_type(const std::string& label, LatticeKind kind);
    static std::shared_ptr<const RootDatum> from_matrices(const std::vector<LatticeVector>& simple_roots,
                                                          const std::vector<LatticeVector>& simple_coroots);

    std::size_t rank() const noexcept { return simple_roots_.size(); }
    LatticeKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }
    /// Dynkin types of the irreducible components, e.g. {"B2"}.
    const std::vector<std::string>& components() const noexcept { return components_; }

    const std::vector<LatticeVector>& simple_roots() const noexcept { return simple_roots_; }
    const std::vector<LatticeVector>& simple_coroots() const noexcept { return simple_coroots_; }
    /// C_ij = α_j^∨(α_i).
    const IntMatrix& cartan() const noexcept { return cartan_; }
    const IntMatrix& simple_reflection(std::size_t i) const { return reflections_.at(i); }

    std::size_t num_positive() const noexcept { return roots_.size() / 2; }
    std::size_t num_roots() const noexcept { return roots_.size(); }
    const Root& root(std::size_t idx) const { return roots_.at(idx); }
    bool is_positive(std::size_t idx) const noexcept { return idx < num_positive(); }
    std::size_t negate(std::size_t idx) const noexcept {
        return idx < num_positive() ? idx + num_positive() : idx - num_positive();
    }
    /// Index of the root with these Λ-coordinates, or -1.
    int root_index(const LatticeVector& coords) const;

    /// Primes dividing the torsion index (static table plus |Λ_w/Λ|).
    std::vector<int> torsion_primes() const;
    /// Order of Λ_w/Λ.
    std::int64_t fundamental_group_order() const;
    /// True when some irreducible component is of type C_k (k >= 1, with
    /// A1 = C1 and B2 = C2) on the simply connected lattice.
    bool has_symplectic_sc_component() const;

    static std::int64_t pair(std::span<const std::int64_t> covector, std::span<const std::int64_t> v);

private:
    RootDatum() = default;
    void build(const std::vector<LatticeVector>& roots, const std::vector<LatticeVector>& coroots);

    LatticeKind kind_ = LatticeKind::Custom;
    std::string label_;
    std::vector<std::string> components_;
    std::vector<std::vector<std::size_t>> component_nodes_;
    std::vector<LatticeVector> simple_roots_, simple_coroots_;
    IntMatrix cartan_;
    std::vector<IntMatrix> reflections_;
    std::vector<Root> roots_;
    std::map<LatticeVector, int> root_lookup_;
};

using RootDatumPtr = std::shared_ptr<const RootDatum>;

/// Subset Ξ of the simple roots, as a bitmask over 0-based indices.
struct Parabolic {
    std::uint32_t mask = 0;

    static Parabolic from_indices(std::span<const int> idx);
    static Parabolic full(std::size_t rank) { return Parabolic{rank >= 32 ? ~0u : ((1u << rank) - 1)}; }
    bool contains(std::size_t i) const noexcept { return (mask >> i) & 1u; }
    bool subset_of(Parabolic o) const noexcept { return (mask & ~o.mask) == 0; }
    bool empty() const noexcept { return mask == 0; }
    std::vector<int> indices() const;
    friend bool operator==(Parabolic a, Parabolic b) = default;
    friend auto operator<=>(Parabolic a, Parabolic b) = default;
};

struct WeylElement {
    std::vector<int> word;  // canonical (lexicographically smallest) reduced word, 0-based
    IntMatrix matrix;
    std::size_t length() const noexcept { return word.size(); }
};

struct CosetTable {
    Parabolic xi;
    std::vector<int> min_reps;  // W^Ξ in enumeration order
    std::vector<int> rep_of;    // w -> minimal representative of wW_Ξ
    std::vector<int> position;  // w -> index in min_reps, or -1
    std::vector<int> subgroup;  // W_Ξ in enumeration order
};

/// Enumerated Weyl group.  Elements are numbered in breadth-first order
/// (by length, then canonical word); element 0 is the identity.
class WeylGroup {
public:
    static std::size_t default_bound();

    explicit WeylGroup(RootDatumPtr rd, std::size_t bound = default_bound());

    const RootDatum& datum() const noexcept { return *rd_; }
    const RootDatumPtr& datum_ptr() const noexcept { return rd_; }
    std::size_t size() const noexcept { return elems_.size(); }
    const WeylElement& operator[](std::size_t w) const { return elems_.at(w); }
    std::size_t length(int w) const { return elems_[w].word.size(); }
    int longest() const noexcept { return static_cast<int>(elems_.size()) - 1; }

    int find(const IntMatrix& m) const;
    int from_word(std::span<const int> word) const;
    int mul(int a, int b) const;
    int inverse(int a) const { return inverse_[a]; }
    int right_simple(int w, std::size_t i) const { return right_[w][i]; }

    LatticeVector act(int w, std::span<const std::int64_t> v) const;
    /// Index of w(root).
    int act_root(int w, std::size_t root_idx) const { return root_image_[w][root_idx]; }
    bool right_descent(int w, std::size_t i) const;
    /// Element s_β for the root β.
    int reflection(std::size_t root_idx) const { return reflection_[root_idx]; }

    bool bruhat_leq(int v, int w) const;
    std::vector<std::vector<int>> reduced_words(int w) const;

    const CosetTable& cosets(Parabolic xi) const;
    /// Minimal representatives of W_Ξ/W_Ξ'.
    std::vector<int> relative_reps(Parabolic xi, Parabolic xi_prime) const;
    /// Indices of positive roots in Σ^+_Ξ.
    std::vector<std::size_t> positive_roots_in(Parabolic xi) const;

private:
    RootDatumPtr rd_;
    std::vector<WeylElement> elems_;
    std::unordered_map<IntMatrix, int, IntMatrixHash> lookup_;
    std::vector<std::vector<int>> right_;
    std::vector<int> inverse_;
    std::vector<std::vector<int>> root_image_;
    std::vector<int> reflection_;

    mutable std::mutex cache_mutex_;
    mutable std::map<std::uint32_t, std::unique_ptr<CosetTable>> coset_cache_;
    mutable std::map<int, std::vector<std::vector<int>>> words_cache_;
};

using WeylGroupPtr = std::shared_ptr<const WeylGroup>;

} // namespace fschubert
