/*
 * homalg.hpp
 * Dg modules over a graded quiver algebra: explicit finite-dimensional
 * modules/bimodules with validated actions, degreewise block complexes,
 * semifree modules presented by generators, minimal resolutions, derived
 * tensor and Hom profiles.
 *
 * Conventions (fixed throughout):
 *  - differentials have degree +1 and act on column vectors;
 *  - right actions commute strictly with d (the algebra has zero
 *    differential); left actions obey d(a.m) = (-1)^{|a|} a.d(m);
 *  - duals/Hom carry (delta f) = d o f - (-1)^{|f|} f o d;
 *  - the shift M[s]^n = M^{n+s} negates d for odd s.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perfdim/algebra.hpp"

namespace perfdim {

struct HomalgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MaxLengthExceededError : HomalgError {
    using HomalgError::HomalgError;
};

// ------------------------------------------------------------------ profiles

struct CohomologyProfile {
    std::map<int, int> h;   // degree -> dim, nonzero only
    std::vector<long> k0;   // Euler class per vertex

    bool is_zero() const { return h.empty(); }
    int inf() const { return h.empty() ? 0 : h.begin()->first; }
    int sup() const { return h.empty() ? 0 : h.rbegin()->first; }
    int total() const;
    int dim_at(int n) const;
    std::string str() const;
};

// ---------------------------------------------------------------- complexes

// Finitely supported cochain complex of k-spaces, stored degreewise.
// d[i] maps degree lo+i to lo+i+1 and has shape dims[i+1] x dims[i]
// (the top map has zero rows).
struct Complex {
    FieldSpec field;
    int lo = 0;
    std::vector<int> dims;
    std::vector<Matrix> d;

    int hi() const { return lo + (int)dims.size() - 1; }
    int dim_at(int n) const;
    const Matrix& d_at(int n) const;  // zero-shaped outside the window
    void validate() const;            // shapes and d^2 = 0
    std::map<int, int> cohomology_dims() const;
    Complex shifted(int s) const;
};

// A complex whose basis vectors carry a right idempotent type: column c of
// degree slot i satisfies (basis vector) * e_{vertex[i][c]} = itself. The
// right action of each algebra generator is stored as one block per degree
// slot, mapping slot i into slot i + deg(gen); the resolution engine needs it
// to extend killing maps A-linearly over module generators.
struct SlicedComplex {
    Complex cx;
    std::vector<std::vector<int>> vertex;
    std::vector<std::vector<Matrix>> act;  // act[gen][slot]

    // Right action of a full algebra basis element on one degree slot.
    Matrix act_basis(const Algebra& a, int slot, int basis_index) const;
    Matrix act_vec(const Algebra& a, int slot, const SparseVec& x) const;
};

// --------------------------------------------------------------- dg modules

// Explicit dg right module (or bimodule) over an algebra: a basis with
// degrees, a differential, and one right (and optionally left) action matrix
// per algebra generator. Axioms are checked on construction.
class DgModule {
public:
    DgModule(AlgebraPtr a, std::vector<int> degrees, Matrix d, std::vector<Matrix> right_act,
             std::vector<Matrix> left_act = {}, std::vector<std::string> labels = {},
             bool validate = true);

    const AlgebraPtr& algebra() const { return a_; }
    FieldSpec field() const { return a_->field(); }
    int dim() const { return (int)deg_.size(); }
    const std::vector<int>& degrees() const { return deg_; }
    const Matrix& d() const { return d_; }
    bool is_bimodule() const { return !lact_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }

    const Matrix& ract_gen(int g) const { return ract_[g]; }
    const Matrix& lact_gen(int g) const { return lact_[g]; }
    Matrix ract_basis(int basis_index) const;  // right action of a basis element
    Matrix ract(const SparseVec& x) const;
    Matrix lact_basis(int basis_index) const;
    Matrix lact(const SparseVec& x) const;

    // Right/left vertex tags when every basis vector is idempotent-homogeneous.
    std::optional<std::vector<int>> right_vertices() const;
    std::optional<std::vector<int>> left_vertices() const;

    DgModule shifted(int s) const;
    void validate(bool thorough = true) const;  // throws HomalgError

private:
    AlgebraPtr a_;
    std::vector<int> deg_;
    Matrix d_;
    std::vector<Matrix> ract_;
    std::vector<Matrix> lact_;
    std::vector<std::string> labels_;
};

// Standard modules.
DgModule regular_module(const AlgebraPtr& a);            // A as a bimodule over itself
DgModule simple_module(const AlgebraPtr& a, int v);      // S_v in degree 0 (right module)
DgModule projective_module(const AlgebraPtr& a, int v);  // e_v A (right module)
// The dualizing bimodule A* = Hom_k(A, k) with (a.f.b)(x) = f(bxa), zero
// differential, degrees negated.
DgModule serre_bimodule(const AlgebraPtr& a);

// k-linear dual: right modules over A become right modules over A^op (the
// action is the sign-twisted transpose), with d* = -(-1)^{|f|} f o d.
DgModule dual(const DgModule& m);
// k-linear dual of a bimodule, again a bimodule over the same algebra, with
// (a.f.b)(x) = f(bxa). Plain transposes on the actions, sign only in d.
DgModule bimodule_dual(const DgModule& m);

// Change basis so every basis vector has a single right (and left, for
// bimodules) idempotent type. Needed before slicing operations.
DgModule vertex_split(const DgModule& m);

// Underlying complex and cohomology.
Complex underlying_complex(const DgModule& m);
// Degreewise view of a vertex-homogeneous module, with action blocks.
SlicedComplex sliced_from_module(const DgModule& m);
CohomologyProfile cohomology(const DgModule& m);
CohomologyProfile cohomology(const Complex& c);  // no k0
// k0 from the vertex tags; pass num_vertices to fix the k0 length.
CohomologyProfile cohomology(const SlicedComplex& c, int num_vertices = -1);
std::vector<long> k0_vector(const DgModule& m);

// Derived-category-safe tensor over A of explicit modules. m must be a right
// module (or bimodule) over A and n a bimodule over the same algebra; when n
// is a right module over A^op (a left module), the result is a complex over
// the ground field. Computed as the cokernel of the shuffle relations.
DgModule tensor_over_A(const DgModule& m, const DgModule& n);

// Strict minimization: repeatedly splits off two-dimensional contractible
// direct summands span(x, dx) whose span is action-stable. Cohomology is
// always preserved; for modules in split form this reaches the minimal model.
DgModule minimize(const DgModule& m);

// ------------------------------------------------------------ semifree side

struct SfGen {
    int vertex = 0;
    int deg = 0;
};

// Semifree dg right module: finitely many generators g_j with
// d(g_j) = sum_i g_i * d[i][j], entries homogeneous in e_{v_i} A of algebra
// degree deg_j + 1 - deg_i.
class Semifree {
public:
    Semifree(AlgebraPtr a, std::vector<SfGen> gens, std::vector<std::vector<SparseVec>> d,
             bool validate = true);
    static Semifree regular(const AlgebraPtr& a);  // one degree-0 generator per vertex

    const AlgebraPtr& algebra() const { return a_; }
    int num_gens() const { return (int)gens_.size(); }
    const SfGen& gen(int j) const { return gens_[j]; }
    const SparseVec& d_entry(int i, int j) const { return d_[i][j]; }

    Semifree shifted(int s) const;
    void validate() const;

    // Gaussian elimination of unit differential components; the result is a
    // direct summand with radical differential, isomorphic in the homotopy
    // category.
    Semifree minimized() const;

    // Expansion to an explicit basis (g_j, b) with b in e_{v_j} A.
    struct Expansion {
        SlicedComplex sc;
        // per degree slot, the (generator, algebra basis index) of each column
        std::vector<std::vector<std::pair<int, int>>> cols;
    };
    Expansion expand() const;
    DgModule expand_module() const;  // explicit right module with actions

    int expanded_dim() const;

private:
    AlgebraPtr a_;
    std::vector<SfGen> gens_;
    std::vector<std::vector<SparseVec>> d_;
};

// X (x)_A B for a bimodule B over the same algebra: slices (g_j, e_{v_j}B).
Semifree::Expansion semifree_tensor_bimodule(const Semifree& x, const DgModule& b);
DgModule semifree_tensor_bimodule_module(const Semifree& x, const DgModule& b);

// ------------------------------------------------------------- resolutions

struct ResolveCaps {
    int max_gens = 4096;
    int max_rounds = 512;
};

// Kill-cycles semifree resolution of a sliced complex: returns a minimized
// semifree module quasi-isomorphic to y. Sweeps from the top degree when the
// algebra is concentrated in degrees <= 0, from the bottom when >= 0, and
// alternates otherwise. Throws MaxLengthExceededError at the caps.
Semifree resolve_sliced(const AlgebraPtr& a, const SlicedComplex& y,
                        const ResolveCaps& caps = {});
// Resolution of an explicit dg module (vertex-split internally).
Semifree resolve_module(const DgModule& m, const ResolveCaps& caps = {});

// Minimal resolution of a plain module (d = 0) by graded projective covers.
struct ModuleResolution {
    // terms[k] = multiset of (vertex, internal shift) describing (+) e_v A[-shift]
    std::vector<std::vector<std::pair<int, int>>> terms;
    bool complete = true;  // false when the length cap was hit
    int length() const { return (int)terms.size() - 1; }
};
ModuleResolution minimal_module_resolution(const DgModule& m, int max_length);

// Iterated-kernel bimodule resolution of a bimodule M: covers M_k (x)_k A,
// stopping when a kernel is right-projective (it becomes the final term).
struct BimoduleResolution {
    std::vector<DgModule> terms;  // P_0, ..., P_len as bimodules
    std::vector<Matrix> maps;     // maps[k]: P_{k+1} -> P_k in basis coordinates
    Matrix augmentation;          // P_0 -> M
    bool final_term_is_kernel = false;
    // For a term built as M_k (x)_k A: dim of M_k (basis pairs (i, b) are laid
    // out as i * dim A + b). -1 for a kernel-form final term.
    std::vector<int> tensor_rank;
};
BimoduleResolution bimodule_resolution(const DgModule& m, int max_length);

// Hom_A(X, A) of the total complex of a bimodule resolution: a dg bimodule
// (the inverse dualizing complex when fed the resolution of A*).
DgModule hom_resolution_to_algebra(const BimoduleResolution& res);

// Derived Hom profile: resolve m, then Hom_A(-, n) as a complex over k.
Complex rhom_complex(const DgModule& m, const DgModule& n, const ResolveCaps& caps = {});
Complex rhom_from_semifree(const Semifree& f, const DgModule& n);
CohomologyProfile rhom(const DgModule& m, const DgModule& n, const ResolveCaps& caps = {});
// (inf, sup) of the nonzero Hom degrees; throws HomalgError when empty.
std::pair<int, int> e_pm(const DgModule& m, const DgModule& n);

}  // namespace perfdim
