/*
 * algebra.hpp
 * Finite-dimensional graded quiver algebras over an exact field: monomial path
 * algebras, graded tensor products (Koszul signs), opposites, enveloping
 * algebras, radical filtration, Dynkin classification.
 *
 * Multiplication convention: for paths, p*q means "traverse p, then q".
 * Display labels use function order (rightmost factor traversed first), so the
 * path "x then y" prints as "yx".
 */
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "perfdim/linalg.hpp"

namespace perfdim {

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfiniteDimensionalError : AlgebraError {
    using AlgebraError::AlgebraError;
};
struct NotNilpotentError : AlgebraError {
    using AlgebraError::AlgebraError;
};

struct Arrow {
    std::string name;
    int source = 0;
    int target = 0;
    int degree = 0;
};

struct Quiver {
    int num_vertices = 0;
    std::vector<Arrow> arrows;
    std::vector<std::string> vertex_names;  // optional; defaults to "0","1",...

    std::string vertex_name(int v) const;
};

// Monomial relations, each a word of arrow indices in traversal order
// (word[0] is traversed first).
struct MonomialRelationSet {
    std::vector<std::vector<int>> words;
};

enum class GenKind { idempotent, radical };

struct AlgebraGen {
    std::string label;
    GenKind kind = GenKind::radical;
    int source = 0;  // for idempotents source == target == vertex
    int target = 0;
    int degree = 0;
};

// Sparse vector over the algebra basis: sorted, unique indices, nonzero coeffs.
using SparseVec = std::vector<std::pair<int, Scalar>>;

SparseVec sparse_unit(int index, FieldSpec f);
SparseVec sparse_add(const SparseVec& a, const SparseVec& b);
SparseVec sparse_scale(const SparseVec& a, const Scalar& c);
bool sparse_is_zero(const SparseVec& a);

struct BasisElt {
    std::string label;
    int degree = 0;
    int source = 0;  // left idempotent vertex: e_source * b = b
    int target = 0;  // right idempotent vertex: b * e_target = b
    std::vector<int> word;  // generator indices; product word[0]*...*word[k-1] = coeff * b
    Scalar coeff;           // always a unit; computed on construction
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

// Dynkin classification of the underlying undirected graph of a quiver.
struct DynkinVerdict {
    enum class Type { A, D, E6, E7, E8, not_tree, not_dynkin };
    Type type = Type::not_dynkin;
    int n = 0;  // rank for A/D
    bool is_dynkin() const { return type != Type::not_tree && type != Type::not_dynkin; }
    std::string str() const;
};

class Algebra : public std::enable_shared_from_this<Algebra> {
public:
    // Monomial path algebra kQ/(relations). Throws InfiniteDimensionalError when
    // the surviving-path language is infinite (detected rigorously by pumping).
    static AlgebraPtr path_algebra(const Quiver& q, const MonomialRelationSet& rels,
                                   FieldSpec field, const std::string& name);

    // Raw constructor from generator tables; validates the axioms (unit laws,
    // degree additivity, associativity on generator triples, word evaluation)
    // up to a size threshold above which validation samples. bg[i][g] = b_i * gen_g.
    static AlgebraPtr from_tables(FieldSpec field, const std::string& name, int num_vertices,
                                  std::vector<AlgebraGen> gens, std::vector<BasisElt> basis,
                                  std::vector<std::vector<SparseVec>> bg, bool validate = true);

    // Graded tensor product: (x (x) y)(x' (x) y') = (-1)^{|y||x'|} xx' (x) yy'.
    static AlgebraPtr tensor_product(const AlgebraPtr& a, const AlgebraPtr& b);
    // Opposite algebra: a o b = (-1)^{|a||b|} ba.
    static AlgebraPtr opposite(const AlgebraPtr& a);
    // Enveloping algebra A^op (x) A; right modules over it = A-bimodules.
    static AlgebraPtr enveloping(const AlgebraPtr& a);
    // The ground field as a one-vertex algebra.
    static AlgebraPtr ground_field(FieldSpec f);

    FieldSpec field() const { return field_; }
    const std::string& name() const { return name_; }
    int dim() const { return (int)basis_.size(); }
    int num_vertices() const { return num_vertices_; }
    const std::vector<AlgebraGen>& gens() const { return gens_; }
    const BasisElt& basis(int i) const { return basis_[i]; }
    int idempotent_basis_index(int v) const;  // basis index of e_v
    int gen_basis_index(int g) const;         // basis index of generator g
    bool is_graded() const;                   // some generator has nonzero degree

    // b_i * gen_g as a sparse combination.
    const SparseVec& bg(int i, int g) const { return bg_[i][g]; }
    // Structure constants: b_i * b_j (computed through the word of b_j).
    SparseVec mult(int i, int j) const;
    SparseVec mult(const SparseVec& x, const SparseVec& y) const;
    SparseVec mult_gen(const SparseVec& x, int g) const;  // x * gen_g

    // Basis indices of the slice e_v A (elements with source v).
    std::vector<int> slice(int v) const;
    // dim e_v A e_w.
    int hom_dim(int v, int w) const;

    // Re-run the construction axioms; false (with reason) on corrupted tables.
    bool validate_tables(std::string* why = nullptr) const;

    // Provenance metadata (set by the builders).
    struct PathInfo {
        Quiver quiver;
        MonomialRelationSet relations;
    };
    struct TensorInfo {
        AlgebraPtr left, right;  // basis (i,j) <-> i*right->dim()+j, vertices likewise
    };
    const std::optional<PathInfo>& path_info() const { return path_info_; }
    const std::optional<TensorInfo>& tensor_info() const { return tensor_info_; }
    const AlgebraPtr& opposite_of() const { return opposite_of_; }
    bool structurally_equal(const Algebra& o) const;

private:
    Algebra() = default;

    FieldSpec field_;
    std::string name_;
    int num_vertices_ = 0;
    std::vector<AlgebraGen> gens_;          // idempotents first, then radical gens
    std::vector<BasisElt> basis_;
    std::vector<int> idem_basis_;           // basis index of e_v per vertex
    std::vector<int> gen_basis_;            // basis index per generator
    std::vector<std::vector<SparseVec>> bg_;
    std::optional<PathInfo> path_info_;
    std::optional<TensorInfo> tensor_info_;
    AlgebraPtr opposite_of_;

    void check_tables(bool full) const;  // throws AlgebraError
};

// Radical filtration: dims of rad^1, rad^2, ... down to zero (exclusive).
// Throws NotNilpotentError if the chain stabilizes at a nonzero subspace.
std::vector<int> radical_series(const Algebra& a);
// Number of nonzero radical powers (0 for semisimple algebras).
int loewy_length(const Algebra& a);
bool is_semisimple(const Algebra& a);

DynkinVerdict dynkin_type(const Quiver& q);
bool quiver_is_acyclic(const Quiver& q);          // no directed cycles
bool quiver_is_connected(const Quiver& q);        // underlying graph connected
std::vector<std::vector<int>> quiver_components(const Quiver& q);

}  // namespace perfdim
