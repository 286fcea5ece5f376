#include "perfdim/homalg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace perfdim {

namespace {

Scalar sc_zero(FieldSpec f) { return Scalar::zero(f); }
Scalar sc_one(FieldSpec f) { return Scalar::one(f); }

Matrix col_of(const Matrix& m, int j) { return m.block(0, j, m.rows(), 1); }

bool col_is_unit(const Matrix& m, int j, int at) {
    for (int i = 0; i < m.rows(); ++i) {
        if (i == at) {
            if (!(m.at(i, j) == sc_one(m.field()))) return false;
        } else if (!m.entry_is_zero(i, j)) {
            return false;
        }
    }
    return true;
}

bool col_is_zero(const Matrix& m, int j) {
    for (int i = 0; i < m.rows(); ++i)
        if (!m.entry_is_zero(i, j)) return false;
    return true;
}

// Basis of the column space of m, as columns. Each output column is supported
// on the same coordinates as the input columns (a row-space basis of m^T).
Matrix col_space_basis(const Matrix& m) {
    Matrix t = m.transpose();
    int r = rref_in_place(t);
    Matrix out(m.field(), m.rows(), r);
    for (int q = 0; q < r; ++q)
        for (int i = 0; i < m.rows(); ++i) out.set(i, q, t.at(q, i));
    return out;
}

// Quotient of k^n by the row span of rels: pi maps old coordinates to
// quotient coordinates carried by the non-pivot columns, sigma is the section.
struct QuotientData {
    std::vector<int> free_cols;
    Matrix pi;
    Matrix sigma;
};

QuotientData quotient_by_rows(Matrix rels) {
    FieldSpec f = rels.field();
    int n = rels.cols();
    std::vector<int> pivots;
    int r = rref_in_place(rels, &pivots);
    std::vector<char> is_pivot(n, 0);
    for (int p : pivots) is_pivot[p] = 1;
    QuotientData out;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) out.free_cols.push_back(c);
    int q = (int)out.free_cols.size();
    out.pi = Matrix(f, q, n);
    out.sigma = Matrix(f, n, q);
    for (int t = 0; t < q; ++t) {
        out.pi.set(t, out.free_cols[t], sc_one(f));
        out.sigma.set(out.free_cols[t], t, sc_one(f));
    }
    for (int t = 0; t < r; ++t)
        for (int s = 0; s < q; ++s) {
            Scalar v = rels.at(t, out.free_cols[s]);
            if (!v.is_zero()) out.pi.set(s, pivots[t], -v);
        }
    return out;
}

// I_m (x) B, acting on pair indices (i, j) -> i * B.cols() + j.
Matrix kron_left_identity(int m, const Matrix& b) {
    Matrix out(b.field(), m * b.rows(), m * b.cols());
    for (int i = 0; i < m; ++i) out.set_block(i * b.rows(), i * b.cols(), b);
    return out;
}

// A (x) I_n on pair indices (i, j) -> i * n + j.
Matrix kron_right_identity(const Matrix& a, int n) {
    Matrix out(a.field(), a.rows() * n, a.cols() * n);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            if (a.entry_is_zero(i, j)) continue;
            Scalar v = a.at(i, j);
            for (int t = 0; t < n; ++t) out.set(i * n + t, j * n + t, v);
        }
    return out;
}

int num_radical_gens(const Algebra& a) {
    int c = 0;
    for (const auto& g : a.gens())
        if (g.kind == GenKind::radical) ++c;
    return c;
}

}  // namespace

// ------------------------------------------------------------------ profiles

int CohomologyProfile::total() const {
    int t = 0;
    for (const auto& [n, d] : h) t += d;
    return t;
}

int CohomologyProfile::dim_at(int n) const {
    auto it = h.find(n);
    return it == h.end() ? 0 : it->second;
}

std::string CohomologyProfile::str() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [n, d] : h) {
        if (!first) os << ", ";
        os << n << ":" << d;
        first = false;
    }
    os << "}";
    if (!k0.empty()) {
        os << " k0=(";
        for (size_t i = 0; i < k0.size(); ++i) os << (i ? "," : "") << k0[i];
        os << ")";
    }
    return os.str();
}

// ---------------------------------------------------------------- complexes

int Complex::dim_at(int n) const {
    int i = n - lo;
    if (i < 0 || i >= (int)dims.size()) return 0;
    return dims[i];
}

const Matrix& Complex::d_at(int n) const {
    int i = n - lo;
    if (i < 0 || i >= (int)d.size()) throw HomalgError("Complex::d_at out of window");
    return d[i];
}

void Complex::validate() const {
    if (dims.size() != d.size()) throw HomalgError("complex: dims/d size mismatch");
    for (size_t i = 0; i < dims.size(); ++i) {
        int next = (i + 1 < dims.size()) ? dims[i + 1] : 0;
        if (d[i].rows() != next || d[i].cols() != dims[i])
            throw HomalgError("complex: differential shape mismatch");
    }
    for (size_t i = 0; i + 1 < dims.size(); ++i)
        if (!(d[i + 1] * d[i]).is_zero()) throw HomalgError("complex: d^2 != 0");
}

std::map<int, int> Complex::cohomology_dims() const {
    std::map<int, int> out;
    std::vector<int> rk(dims.size(), 0);
    for (size_t i = 0; i < dims.size(); ++i) rk[i] = rank(d[i]);
    for (size_t i = 0; i < dims.size(); ++i) {
        int h = dims[i] - rk[i] - (i > 0 ? rk[i - 1] : 0);
        if (h < 0) throw HomalgError("complex: negative cohomology dimension");
        if (h > 0) out[lo + (int)i] = h;
    }
    return out;
}

Complex Complex::shifted(int s) const {
    Complex out = *this;
    out.lo = lo - s;
    if (s % 2 != 0)
        for (auto& m : out.d) m = -m;
    return out;
}

Matrix SlicedComplex::act_basis(const Algebra& a, int slot, int basis_index) const {
    const BasisElt& b = a.basis(basis_index);
    FieldSpec f = cx.field;
    int cur = slot;
    Matrix m = Matrix::identity(f, cx.dims[slot]);
    for (int g : b.word) {
        int next = cur + a.gens()[g].degree;
        if (next < 0 || next >= (int)cx.dims.size()) {
            // the action of this word leaves the window, so it is zero
            return Matrix(f, 0, cx.dims[slot]);
        }
        m = act[g][cur] * m;
        cur = next;
    }
    return m.scaled(sc_one(f) / b.coeff);
}

Matrix SlicedComplex::act_vec(const Algebra& a, int slot, const SparseVec& x) const {
    FieldSpec f = cx.field;
    // determine target slot from the (homogeneous) element degree
    if (x.empty()) return Matrix(f, 0, cx.dims[slot]);
    int deg = a.basis(x.front().first).degree;
    int target = slot + deg;
    int trows = (target >= 0 && target < (int)cx.dims.size()) ? cx.dims[target] : 0;
    Matrix out(f, trows, cx.dims[slot]);
    for (const auto& [idx, c] : x) {
        if (a.basis(idx).degree != deg) throw HomalgError("act_vec: inhomogeneous element");
        Matrix m = act_basis(a, slot, idx);
        if (m.rows() == 0) continue;
        out = out + m.scaled(c);
    }
    return out;
}

// --------------------------------------------------------------- dg modules

DgModule::DgModule(AlgebraPtr a, std::vector<int> degrees, Matrix d, std::vector<Matrix> right_act,
                   std::vector<Matrix> left_act, std::vector<std::string> labels, bool validate)
    : a_(std::move(a)),
      deg_(std::move(degrees)),
      d_(std::move(d)),
      ract_(std::move(right_act)),
      lact_(std::move(left_act)),
      labels_(std::move(labels)) {
    int n = (int)deg_.size();
    if (labels_.empty()) {
        labels_.reserve(n);
        for (int i = 0; i < n; ++i) labels_.push_back("m" + std::to_string(i));
    }
    if (d_.rows() != n || d_.cols() != n) throw HomalgError("dg module: d shape");
    if ((int)ract_.size() != (int)a_->gens().size())
        throw HomalgError("dg module: one right action per generator required");
    if (!lact_.empty() && (int)lact_.size() != (int)a_->gens().size())
        throw HomalgError("dg module: one left action per generator required");
    for (const auto& m : ract_)
        if (m.rows() != n || m.cols() != n) throw HomalgError("dg module: action shape");
    for (const auto& m : lact_)
        if (m.rows() != n || m.cols() != n) throw HomalgError("dg module: action shape");
    if (validate) this->validate();
}

Matrix DgModule::ract_basis(int basis_index) const {
    const BasisElt& b = a_->basis(basis_index);
    Matrix m = Matrix::identity(field(), dim());
    for (int g : b.word) m = ract_[g] * m;
    return m.scaled(sc_one(field()) / b.coeff);
}

Matrix DgModule::lact_basis(int basis_index) const {
    if (!is_bimodule()) throw HomalgError("lact on a right module");
    const BasisElt& b = a_->basis(basis_index);
    Matrix m = Matrix::identity(field(), dim());
    for (int g : b.word) m = m * lact_[g];
    return m.scaled(sc_one(field()) / b.coeff);
}

Matrix DgModule::ract(const SparseVec& x) const {
    Matrix out(field(), dim(), dim());
    for (const auto& [idx, c] : x) out = out + ract_basis(idx).scaled(c);
    return out;
}

Matrix DgModule::lact(const SparseVec& x) const {
    Matrix out(field(), dim(), dim());
    for (const auto& [idx, c] : x) out = out + lact_basis(idx).scaled(c);
    return out;
}

std::optional<std::vector<int>> DgModule::right_vertices() const {
    int n = dim();
    std::vector<int> out(n, -1);
    for (int j = 0; j < n; ++j) {
        for (int v = 0; v < a_->num_vertices(); ++v) {
            const Matrix& p = ract_[v];  // idempotent generators come first
            if (col_is_zero(p, j)) continue;
            if (col_is_unit(p, j, j) && out[j] < 0) {
                out[j] = v;
            } else if (col_is_unit(p, j, j)) {
                return std::nullopt;
            } else {
                return std::nullopt;
            }
        }
        if (out[j] < 0) return std::nullopt;
    }
    return out;
}

std::optional<std::vector<int>> DgModule::left_vertices() const {
    if (!is_bimodule()) return std::nullopt;
    int n = dim();
    std::vector<int> out(n, -1);
    for (int j = 0; j < n; ++j) {
        for (int v = 0; v < a_->num_vertices(); ++v) {
            const Matrix& p = lact_[v];
            if (col_is_zero(p, j)) continue;
            if (col_is_unit(p, j, j) && out[j] < 0)
                out[j] = v;
            else
                return std::nullopt;
        }
        if (out[j] < 0) return std::nullopt;
    }
    return out;
}

DgModule DgModule::shifted(int s) const {
    std::vector<int> deg(deg_);
    for (auto& t : deg) t -= s;
    Matrix d = (s % 2 == 0) ? d_ : -d_;
    return DgModule(a_, std::move(deg), std::move(d), ract_, lact_, labels_, false);
}

void DgModule::validate(bool thorough) const {
    FieldSpec f = field();
    int n = dim();
    const auto& gens = a_->gens();
    int r = (int)gens.size();
    // degree typing of the differential, and d^2 = 0
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!d_.entry_is_zero(i, j) && deg_[i] != deg_[j] + 1)
                throw HomalgError("dg module: differential not of degree +1");
    if (!(d_ * d_).is_zero()) throw HomalgError("dg module: d^2 != 0");
    // degree typing of the actions
    for (int g = 0; g < r; ++g) {
        int dg = gens[g].degree;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!ract_[g].entry_is_zero(i, j) && deg_[i] != deg_[j] + dg)
                    throw HomalgError("dg module: right action degree mismatch");
                if (is_bimodule() && !lact_[g].entry_is_zero(i, j) && deg_[i] != deg_[j] + dg)
                    throw HomalgError("dg module: left action degree mismatch");
            }
    }
    // unit law: idempotent actions decompose the identity
    Matrix sum(f, n, n);
    for (int v = 0; v < a_->num_vertices(); ++v) sum = sum + ract_[v];
    if (!(sum == Matrix::identity(f, n))) throw HomalgError("dg module: right unit law fails");
    if (is_bimodule()) {
        Matrix lsum(f, n, n);
        for (int v = 0; v < a_->num_vertices(); ++v) lsum = lsum + lact_[v];
        if (!(lsum == Matrix::identity(f, n))) throw HomalgError("dg module: left unit law fails");
    }
    // d commutes with the right action strictly, with the left action up to
    // the sign of the generator degree
    for (int g = 0; g < r; ++g) {
        if (!(d_ * ract_[g] == ract_[g] * d_))
            throw HomalgError("dg module: right action does not commute with d");
        if (is_bimodule()) {
            Matrix lhs = d_ * lact_[g];
            Matrix rhs = lact_[g] * d_;
            if (gens[g].degree % 2 != 0) rhs = -rhs;
            if (!(lhs == rhs)) throw HomalgError("dg module: left Leibniz rule fails");
        }
    }
    if (!thorough) return;
    // associativity of the actions on generator pairs, possibly sampled
    double cost = double(r) * r * n * n * n;
    long stride = cost > 3e8 ? (long)(cost / 3e8) + 1 : 1;
    std::vector<std::optional<Matrix>> rb(a_->dim()), lb(a_->dim());
    auto ract_of = [&](const SparseVec& x) {
        Matrix out(f, n, n);
        for (const auto& [idx, c] : x) {
            if (!rb[idx]) rb[idx] = ract_basis(idx);
            out = out + rb[idx]->scaled(c);
        }
        return out;
    };
    auto lact_of = [&](const SparseVec& x) {
        Matrix out(f, n, n);
        for (const auto& [idx, c] : x) {
            if (!lb[idx]) lb[idx] = lact_basis(idx);
            out = out + lb[idx]->scaled(c);
        }
        return out;
    };
    long pair_idx = 0;
    for (int g = 0; g < r; ++g)
        for (int h = 0; h < r; ++h, ++pair_idx) {
            bool both_idem =
                gens[g].kind == GenKind::idempotent && gens[h].kind == GenKind::idempotent;
            if (!both_idem && stride > 1 && pair_idx % stride != 0) continue;
            SparseVec prod = a_->mult(a_->gen_basis_index(g), a_->gen_basis_index(h));
            if (!(ract_[h] * ract_[g] == ract_of(prod)))
                throw HomalgError("dg module: right action not associative on pair (" +
                                  gens[g].label + ", " + gens[h].label + ")");
            if (is_bimodule()) {
                if (!(lact_[g] * lact_[h] == lact_of(prod)))
                    throw HomalgError("dg module: left action not associative on pair (" +
                                      gens[g].label + ", " + gens[h].label + ")");
                if (!(lact_[g] * ract_[h] == ract_[h] * lact_[g]))
                    throw HomalgError("dg module: left and right actions do not commute");
            }
        }
}

// ---------------------------------------------------------- standard modules

DgModule regular_module(const AlgebraPtr& a) {
    FieldSpec f = a->field();
    int n = a->dim();
    std::vector<int> deg(n);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) {
        deg[i] = a->basis(i).degree;
        labels[i] = a->basis(i).label;
    }
    int r = (int)a->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, n, n)), lact(r, Matrix(f, n, n));
    for (int g = 0; g < r; ++g) {
        for (int j = 0; j < n; ++j) {
            for (const auto& [i, c] : a->bg(j, g)) ract[g].set(i, j, c);
            for (const auto& [i, c] : a->mult(a->gen_basis_index(g), j)) lact[g].set(i, j, c);
        }
    }
    return DgModule(a, std::move(deg), Matrix(f, n, n), std::move(ract), std::move(lact),
                    std::move(labels), true);
}

DgModule simple_module(const AlgebraPtr& a, int v) {
    FieldSpec f = a->field();
    int r = (int)a->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, 1, 1));
    ract[v] = Matrix::identity(f, 1);  // idempotent generators come first
    return DgModule(a, {0}, Matrix(f, 1, 1), std::move(ract), {},
                    {"S" + std::to_string(v)}, true);
}

DgModule projective_module(const AlgebraPtr& a, int v) {
    FieldSpec f = a->field();
    std::vector<int> sl = a->slice(v);
    int n = (int)sl.size();
    std::vector<int> pos(a->dim(), -1);
    for (int t = 0; t < n; ++t) pos[sl[t]] = t;
    std::vector<int> deg(n);
    std::vector<std::string> labels(n);
    for (int t = 0; t < n; ++t) {
        deg[t] = a->basis(sl[t]).degree;
        labels[t] = a->basis(sl[t]).label;
    }
    int r = (int)a->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, n, n));
    for (int g = 0; g < r; ++g)
        for (int t = 0; t < n; ++t)
            for (const auto& [i, c] : a->bg(sl[t], g)) {
                if (pos[i] < 0) throw HomalgError("projective slice not action-stable");
                ract[g].set(pos[i], t, c);
            }
    return DgModule(a, std::move(deg), Matrix(f, n, n), std::move(ract), {}, std::move(labels),
                    true);
}

DgModule serre_bimodule(const AlgebraPtr& a) {
    FieldSpec f = a->field();
    int n = a->dim();
    std::vector<int> deg(n);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) {
        deg[i] = -a->basis(i).degree;
        labels[i] = a->basis(i).label + "*";
    }
    int r = (int)a->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, n, n)), lact(r, Matrix(f, n, n));
    for (int g = 0; g < r; ++g) {
        int gb = a->gen_basis_index(g);
        for (int j = 0; j < n; ++j) {
            // (b_i^* . y)(b_j) = b_i^*(y b_j)   row j, column i
            for (const auto& [i, c] : a->mult(gb, j)) ract[g].set(j, i, c);
            // (x . b_i^*)(b_j) = b_i^*(b_j x)
            for (const auto& [i, c] : a->mult(j, gb)) lact[g].set(j, i, c);
        }
    }
    return DgModule(a, std::move(deg), Matrix(f, n, n), std::move(ract), std::move(lact),
                    std::move(labels), true);
}

// -------------------------------------------------------------------- duals

DgModule dual(const DgModule& m) {
    AlgebraPtr op = Algebra::opposite(m.algebra());
    FieldSpec f = m.field();
    int n = m.dim();
    const auto& deg = m.degrees();
    std::vector<int> ddeg(n);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) {
        ddeg[i] = -deg[i];
        labels[i] = m.labels()[i] + "*";
    }
    Matrix dd(f, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!m.d().entry_is_zero(i, j)) {
                Scalar v = m.d().at(i, j);
                if (deg[i] % 2 == 0) v = -v;  // -(-1)^{deg_i}, with deg_i = deg_j + 1
                dd.set(j, i, v);
            }
    int r = (int)m.algebra()->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, n, n));
    for (int g = 0; g < r; ++g) {
        int dg = m.algebra()->gens()[g].degree;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!m.ract_gen(g).entry_is_zero(i, j)) {
                    Scalar v = m.ract_gen(g).at(i, j);
                    if ((dg % 2 != 0) && (deg[i] % 2 != 0)) v = -v;
                    ract[g].set(j, i, v);
                }
    }
    return DgModule(op, std::move(ddeg), std::move(dd), std::move(ract), {}, std::move(labels),
                    true);
}

DgModule bimodule_dual(const DgModule& m) {
    if (!m.is_bimodule()) throw HomalgError("bimodule_dual needs a bimodule");
    FieldSpec f = m.field();
    int n = m.dim();
    const auto& deg = m.degrees();
    std::vector<int> ddeg(n);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) {
        ddeg[i] = -deg[i];
        labels[i] = m.labels()[i] + "*";
    }
    Matrix dd(f, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!m.d().entry_is_zero(i, j)) {
                Scalar v = m.d().at(i, j);
                if (deg[i] % 2 == 0) v = -v;
                dd.set(j, i, v);
            }
    int r = (int)m.algebra()->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, n, n)), lact(r, Matrix(f, n, n));
    for (int g = 0; g < r; ++g) {
        ract[g] = m.lact_gen(g).transpose();
        lact[g] = m.ract_gen(g).transpose();
    }
    return DgModule(m.algebra(), std::move(ddeg), std::move(dd), std::move(ract), std::move(lact),
                    std::move(labels), true);
}

// ------------------------------------------------------------- vertex split

DgModule vertex_split(const DgModule& m) {
    FieldSpec f = m.field();
    int n = m.dim();
    if (n == 0) return m;
    const auto& deg = m.degrees();
    std::map<int, std::vector<int>> by_deg;
    for (int i = 0; i < n; ++i) by_deg[deg[i]].push_back(i);
    std::vector<Matrix> pieces;
    std::vector<int> new_deg;
    for (const auto& [t, idx] : by_deg) {
        Matrix sel(f, n, (int)idx.size());
        for (size_t q = 0; q < idx.size(); ++q) sel.set(idx[q], (int)q, sc_one(f));
        int found = 0;
        for (int v = 0; v < m.algebra()->num_vertices(); ++v) {
            Matrix img = col_space_basis(m.ract_gen(v) * sel);
            if (img.cols() == 0) continue;
            if (!m.is_bimodule()) {
                pieces.push_back(img);
                for (int q = 0; q < img.cols(); ++q) new_deg.push_back(t);
                found += img.cols();
            } else {
                for (int u = 0; u < m.algebra()->num_vertices(); ++u) {
                    Matrix img2 = col_space_basis(m.lact_gen(u) * img);
                    if (img2.cols() == 0) continue;
                    pieces.push_back(img2);
                    for (int q = 0; q < img2.cols(); ++q) new_deg.push_back(t);
                    found += img2.cols();
                }
            }
        }
        if (found != (int)idx.size()) throw HomalgError("vertex split: projector images bad");
    }
    Matrix t = pieces[0];
    for (size_t q = 1; q < pieces.size(); ++q) t = Matrix::hcat(t, pieces[q]);
    auto tinv = inverse(t);
    if (!tinv) throw HomalgError("vertex split: transform singular");
    int r = (int)m.algebra()->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, n, n)), lact;
    for (int g = 0; g < r; ++g) ract[g] = *tinv * m.ract_gen(g) * t;
    if (m.is_bimodule()) {
        lact.resize(r, Matrix(f, n, n));
        for (int g = 0; g < r; ++g) lact[g] = *tinv * m.lact_gen(g) * t;
    }
    Matrix dd = *tinv * m.d() * t;
    return DgModule(m.algebra(), std::move(new_deg), std::move(dd), std::move(ract),
                    std::move(lact), {}, false);
}

// ------------------------------------------------- complexes from dg modules

namespace {

struct DegLayout {
    int lo = 0;
    std::vector<std::vector<int>> idx;  // original indices per slot
    std::vector<int> slot_of;           // per original index
    std::vector<int> pos_of;            // position within its slot
};

DegLayout layout_of(const DgModule& m) {
    DegLayout out;
    int n = m.dim();
    if (n == 0) return out;
    const auto& deg = m.degrees();
    int lo = *std::min_element(deg.begin(), deg.end());
    int hi = *std::max_element(deg.begin(), deg.end());
    out.lo = lo;
    out.idx.assign(hi - lo + 1, {});
    out.slot_of.assign(n, 0);
    out.pos_of.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        int s = deg[i] - lo;
        out.slot_of[i] = s;
        out.pos_of[i] = (int)out.idx[s].size();
        out.idx[s].push_back(i);
    }
    return out;
}

}  // namespace

Complex underlying_complex(const DgModule& m) {
    FieldSpec f = m.field();
    Complex out;
    out.field = f;
    DegLayout lay = layout_of(m);
    out.lo = lay.lo;
    int ns = (int)lay.idx.size();
    out.dims.resize(ns);
    for (int s = 0; s < ns; ++s) out.dims[s] = (int)lay.idx[s].size();
    out.d.reserve(ns);
    for (int s = 0; s < ns; ++s) {
        int next = (s + 1 < ns) ? out.dims[s + 1] : 0;
        Matrix block(f, next, out.dims[s]);
        if (s + 1 < ns)
            for (int jq = 0; jq < out.dims[s]; ++jq)
                for (int iq = 0; iq < next; ++iq) {
                    int j = lay.idx[s][jq], i = lay.idx[s + 1][iq];
                    if (!m.d().entry_is_zero(i, j)) block.set(iq, jq, m.d().at(i, j));
                }
        out.d.push_back(std::move(block));
    }
    return out;
}

SlicedComplex sliced_from_module(const DgModule& m) {
    auto rv = m.right_vertices();
    if (!rv) throw HomalgError("sliced_from_module: basis not vertex-homogeneous");
    SlicedComplex out;
    out.cx = underlying_complex(m);
    DegLayout lay = layout_of(m);
    int ns = (int)lay.idx.size();
    out.vertex.resize(ns);
    for (int s = 0; s < ns; ++s)
        for (int i : lay.idx[s]) out.vertex[s].push_back((*rv)[i]);
    int r = (int)m.algebra()->gens().size();
    FieldSpec f = m.field();
    out.act.assign(r, {});
    for (int g = 0; g < r; ++g) {
        int dg = m.algebra()->gens()[g].degree;
        out.act[g].reserve(ns);
        for (int s = 0; s < ns; ++s) {
            int t = s + dg;
            if (t < 0 || t >= ns) {
                out.act[g].push_back(Matrix(f, 0, out.cx.dims[s]));
                continue;
            }
            Matrix block(f, out.cx.dims[t], out.cx.dims[s]);
            for (int jq = 0; jq < out.cx.dims[s]; ++jq)
                for (int iq = 0; iq < out.cx.dims[t]; ++iq) {
                    int j = lay.idx[s][jq], i = lay.idx[t][iq];
                    if (!m.ract_gen(g).entry_is_zero(i, j))
                        block.set(iq, jq, m.ract_gen(g).at(i, j));
                }
            out.act[g].push_back(std::move(block));
        }
    }
    return out;
}

// --------------------------------------------------------------- cohomology

std::vector<long> k0_vector(const DgModule& m) {
    int nv = m.algebra()->num_vertices();
    std::vector<long> out(nv, 0);
    DegLayout lay = layout_of(m);
    for (int v = 0; v < nv; ++v) {
        const Matrix& p = m.ract_gen(v);
        for (size_t s = 0; s < lay.idx.size(); ++s) {
            const auto& idx = lay.idx[s];
            if (idx.empty()) continue;
            Matrix sub(m.field(), (int)idx.size(), (int)idx.size());
            for (size_t iq = 0; iq < idx.size(); ++iq)
                for (size_t jq = 0; jq < idx.size(); ++jq)
                    if (!p.entry_is_zero(idx[iq], idx[jq]))
                        sub.set((int)iq, (int)jq, p.at(idx[iq], idx[jq]));
            int rk = rank(sub);
            int degree = lay.lo + (int)s;
            out[v] += (degree % 2 == 0) ? rk : -rk;
        }
    }
    return out;
}

CohomologyProfile cohomology(const Complex& c) {
    CohomologyProfile out;
    out.h = c.cohomology_dims();
    return out;
}

CohomologyProfile cohomology(const SlicedComplex& c, int num_vertices) {
    CohomologyProfile out;
    out.h = c.cx.cohomology_dims();
    int nv = num_vertices;
    if (nv < 0) {
        nv = 0;
        for (const auto& slot : c.vertex)
            for (int v : slot) nv = std::max(nv, v + 1);
    }
    out.k0.assign(nv, 0);
    for (size_t s = 0; s < c.vertex.size(); ++s) {
        int degree = c.cx.lo + (int)s;
        for (int v : c.vertex[s]) out.k0[v] += (degree % 2 == 0) ? 1 : -1;
    }
    return out;
}

CohomologyProfile cohomology(const DgModule& m) {
    CohomologyProfile out;
    out.h = underlying_complex(m).cohomology_dims();
    out.k0 = k0_vector(m);
    return out;
}

// ------------------------------------------------------------ tensor over A

DgModule tensor_over_A(const DgModule& m, const DgModule& n) {
    FieldSpec f = m.field();
    if (!(n.field() == f)) throw HomalgError("tensor: field mismatch");
    const AlgebraPtr& A = m.algebra();
    const AlgebraPtr& B = n.algebra();
    bool same = (A.get() == B.get()) || A->structurally_equal(*B);
    bool opp = false;
    if (!same) {
        const AlgebraPtr& of = B->opposite_of();
        opp = of && (of.get() == A.get() || of->structurally_equal(*A));
        if (!opp) throw HomalgError("tensor: n must live over A or A^op");
    }
    if (same && !n.is_bimodule())
        throw HomalgError("tensor over A with a right module on the right needs a bimodule");
    int dm = m.dim(), dn = n.dim();
    int N = dm * dn;
    const auto& degm = m.degrees();
    const auto& degn = n.degrees();
    int r = (int)A->gens().size();
    // left action of A on n
    std::vector<Matrix> ln(r, Matrix(f, dn, dn));
    for (int g = 0; g < r; ++g) {
        if (same) {
            ln[g] = n.lact_gen(g);
        } else {
            // right A^op-module as a left A-module: a.y = (-1)^{|a||y|} y.a^op
            int dg = A->gens()[g].degree;
            for (int i = 0; i < dn; ++i)
                for (int j = 0; j < dn; ++j)
                    if (!n.ract_gen(g).entry_is_zero(i, j)) {
                        Scalar v = n.ract_gen(g).at(i, j);
                        if ((dg % 2 != 0) && (degn[j] % 2 != 0)) v = -v;
                        ln[g].set(i, j, v);
                    }
        }
    }
    // shuffle relations (x a) (x) y - x (x) (a y), for every generator a
    std::vector<std::vector<Scalar>> rel_rows;
    rel_rows.reserve((size_t)r * dm * dn);
    for (int g = 0; g < r; ++g)
        for (int i = 0; i < dm; ++i)
            for (int j = 0; j < dn; ++j) {
                std::vector<Scalar> row(N, sc_zero(f));
                bool nz = false;
                for (int i2 = 0; i2 < dm; ++i2)
                    if (!m.ract_gen(g).entry_is_zero(i2, i)) {
                        row[i2 * dn + j] = row[i2 * dn + j] + m.ract_gen(g).at(i2, i);
                        nz = true;
                    }
                for (int j2 = 0; j2 < dn; ++j2)
                    if (!ln[g].entry_is_zero(j2, j)) {
                        row[i * dn + j2] = row[i * dn + j2] - ln[g].at(j2, j);
                        nz = true;
                    }
                if (nz) rel_rows.push_back(std::move(row));
            }
    Matrix rels(f, (int)rel_rows.size(), N);
    for (size_t t = 0; t < rel_rows.size(); ++t)
        for (int c = 0; c < N; ++c)
            if (!rel_rows[t][c].is_zero()) rels.set((int)t, c, rel_rows[t][c]);
    QuotientData q = quotient_by_rows(std::move(rels));
    // differential on m (x) n
    Matrix dt = kron_right_identity(m.d(), dn);
    for (int i = 0; i < dm; ++i)
        for (int j2 = 0; j2 < dn; ++j2)
            for (int j = 0; j < dn; ++j)
                if (!n.d().entry_is_zero(j2, j)) {
                    Scalar v = n.d().at(j2, j);
                    if (degm[i] % 2 != 0) v = -v;
                    dt.set(i * dn + j2, i * dn + j, dt.at(i * dn + j2, i * dn + j) + v);
                }
    Matrix dq = q.pi * dt * q.sigma;
    std::vector<int> deg;
    deg.reserve(q.free_cols.size());
    for (int c : q.free_cols) deg.push_back(degm[c / dn] + degn[c % dn]);
    int nq = (int)q.free_cols.size();
    if (same) {
        std::vector<Matrix> ract(r, Matrix(f, nq, nq)), lact;
        for (int g = 0; g < r; ++g)
            ract[g] = q.pi * kron_left_identity(dm, n.ract_gen(g)) * q.sigma;
        if (m.is_bimodule()) {
            lact.resize(r, Matrix(f, nq, nq));
            for (int g = 0; g < r; ++g)
                lact[g] = q.pi * kron_right_identity(m.lact_gen(g), dn) * q.sigma;
        }
        return DgModule(A, std::move(deg), std::move(dq), std::move(ract), std::move(lact), {},
                        true);
    }
    AlgebraPtr k = Algebra::ground_field(f);
    std::vector<Matrix> ract{Matrix::identity(f, nq)};
    return DgModule(k, std::move(deg), std::move(dq), std::move(ract), {}, {}, true);
}

// ----------------------------------------------------------------- minimize

DgModule minimize(const DgModule& m) {
    FieldSpec f = m.field();
    AlgebraPtr a = m.algebra();
    int r = (int)a->gens().size();
    std::vector<int> deg = m.degrees();
    Matrix d = m.d();
    std::vector<Matrix> ract, lact;
    for (int g = 0; g < r; ++g) ract.push_back(m.ract_gen(g));
    if (m.is_bimodule())
        for (int g = 0; g < r; ++g) lact.push_back(m.lact_gen(g));
    std::vector<std::string> labels = m.labels();

    auto in_span = [&](const Matrix& v, int j, int i, const Matrix& w, const Scalar& u) {
        // is v in span(e_j, w)?  (w = d e_j, w[j] = 0, w[i] = u != 0)
        Scalar alpha = v.at(j, 0);
        Scalar beta = v.at(i, 0) / u;
        int nn = v.rows();
        for (int t = 0; t < nn; ++t) {
            Scalar val = v.at(t, 0) - w.at(t, 0) * beta;
            if (t == j) val = val - alpha;
            if (!val.is_zero()) return false;
        }
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        int n = (int)deg.size();
        for (int j = 0; j < n && !changed; ++j) {
            Matrix w = col_of(d, j);
            for (int i = 0; i < n && !changed; ++i) {
                if (i == j || d.entry_is_zero(i, j)) continue;
                Scalar u = d.at(i, j);
                // stability of span(e_j, d e_j) under every action
                bool stable = true;
                for (int g = 0; g < r && stable; ++g) {
                    Matrix ej(f, n, 1);
                    ej.set(j, 0, sc_one(f));
                    if (!in_span(ract[g] * ej, j, i, w, u) || !in_span(ract[g] * w, j, i, w, u))
                        stable = false;
                    if (stable && !lact.empty() &&
                        (!in_span(lact[g] * ej, j, i, w, u) || !in_span(lact[g] * w, j, i, w, u)))
                        stable = false;
                }
                if (!stable) continue;
                // project away the contractible summand span(e_j, d e_j)
                std::vector<int> keep;
                for (int t = 0; t < n; ++t)
                    if (t != i && t != j) keep.push_back(t);
                int q = (int)keep.size();
                Matrix pi(f, q, n), sigma(f, n, q);
                for (int t = 0; t < q; ++t) {
                    int k = keep[t];
                    pi.set(t, k, sc_one(f));
                    if (!d.entry_is_zero(k, j)) pi.set(t, i, -(d.at(k, j) / u));
                    sigma.set(k, t, sc_one(f));
                    if (!d.entry_is_zero(i, k)) sigma.set(j, t, -(d.at(i, k) / u));
                }
                d = pi * d * sigma;
                for (int g = 0; g < r; ++g) ract[g] = pi * ract[g] * sigma;
                for (auto& l : lact) l = pi * l * sigma;
                std::vector<int> ndeg;
                std::vector<std::string> nlab;
                for (int t : keep) {
                    ndeg.push_back(deg[t]);
                    nlab.push_back(labels[t]);
                }
                deg = std::move(ndeg);
                labels = std::move(nlab);
                changed = true;
            }
        }
    }
    DgModule out(a, std::move(deg), std::move(d), std::move(ract), std::move(lact),
                 std::move(labels), false);
    out.validate(false);
    return out;
}

// -------------------------------------------------------- module resolution

ModuleResolution minimal_module_resolution(const DgModule& m, int max_length) {
    if (!m.d().is_zero()) throw HomalgError("minimal_module_resolution needs d = 0");
    AlgebraPtr a = m.algebra();
    FieldSpec f = a->field();
    int nv = a->num_vertices();
    std::vector<DgModule> projs;
    projs.reserve(nv);
    for (int v = 0; v < nv; ++v) projs.push_back(projective_module(a, v));
    int nrad = num_radical_gens(*a);
    int ngen = (int)a->gens().size();

    ModuleResolution out;
    DgModule cur = vertex_split(m);
    while (true) {
        int n = cur.dim();
        if (n == 0) break;
        auto rvo = cur.right_vertices();
        if (!rvo) throw HomalgError("resolution step: basis not vertex-homogeneous");
        const std::vector<int>& rv = *rvo;
        const std::vector<int>& deg = cur.degrees();
        // top = cur / cur . rad
        Matrix rad_rows(f, n * nrad, n);
        int row = 0;
        for (int g = nv; g < ngen; ++g) {
            for (int c = 0; c < n; ++c) {
                for (int i = 0; i < n; ++i)
                    if (!cur.ract_gen(g).entry_is_zero(i, c))
                        rad_rows.set(row, i, cur.ract_gen(g).at(i, c));
                ++row;
            }
        }
        QuotientData top = quotient_by_rows(std::move(rad_rows));
        std::vector<std::pair<int, int>> term;
        term.reserve(top.free_cols.size());
        for (int c : top.free_cols) term.emplace_back(rv[c], deg[c]);
        std::sort(term.begin(), term.end());
        out.terms.push_back(term);
        // cover P = (+)_c e_{v_c} A [-deg_c] and its map onto cur
        std::vector<int> cover_off;
        int dimP = 0;
        for (int c : top.free_cols) {
            cover_off.push_back(dimP);
            dimP += projs[rv[c]].dim();
        }
        Matrix phi(f, n, dimP);
        std::vector<int> pdeg(dimP), prv(dimP);
        std::map<int, Matrix> rbx;
        for (size_t t = 0; t < top.free_cols.size(); ++t) {
            int c = top.free_cols[t];
            const std::vector<int> sl = a->slice(rv[c]);
            for (size_t bq = 0; bq < sl.size(); ++bq) {
                int b = sl[bq];
                auto it = rbx.find(b);
                if (it == rbx.end()) it = rbx.emplace(b, cur.ract_basis(b)).first;
                int col = cover_off[t] + (int)bq;
                for (int i = 0; i < n; ++i)
                    if (!it->second.entry_is_zero(i, c)) phi.set(i, col, it->second.at(i, c));
                pdeg[col] = deg[c] + a->basis(b).degree;
                prv[col] = a->basis(b).target;
            }
        }
        if (rank(phi) != n) throw HomalgError("resolution step: cover not surjective");
        // kernel, blockwise over (degree, right vertex)
        std::map<std::pair<int, int>, std::vector<int>> pcls, mcls;
        for (int c = 0; c < dimP; ++c) pcls[{pdeg[c], prv[c]}].push_back(c);
        for (int i = 0; i < n; ++i) mcls[{deg[i], rv[i]}].push_back(i);
        std::vector<Matrix> kcols;
        std::vector<int> kdeg;
        int dimK = 0;
        for (const auto& [key, jc] : pcls) {
            auto mit = mcls.find(key);
            std::vector<int> ri = (mit == mcls.end()) ? std::vector<int>{} : mit->second;
            Matrix sub(f, (int)ri.size(), (int)jc.size());
            for (size_t iq = 0; iq < ri.size(); ++iq)
                for (size_t jq = 0; jq < jc.size(); ++jq)
                    if (!phi.entry_is_zero(ri[iq], jc[jq]))
                        sub.set((int)iq, (int)jq, phi.at(ri[iq], jc[jq]));
            Matrix kb = kernel_basis(sub);
            if (kb.cols() == 0) continue;
            Matrix lifted(f, dimP, kb.cols());
            for (size_t jq = 0; jq < jc.size(); ++jq)
                for (int c = 0; c < kb.cols(); ++c)
                    if (!kb.entry_is_zero((int)jq, c)) lifted.set(jc[jq], c, kb.at((int)jq, c));
            kcols.push_back(lifted);
            for (int c = 0; c < kb.cols(); ++c) kdeg.push_back(key.first);
            dimK += kb.cols();
        }
        if (dimK == 0) break;
        if ((int)out.terms.size() > max_length) {
            out.complete = false;
            break;
        }
        Matrix K = kcols[0];
        for (size_t t = 1; t < kcols.size(); ++t) K = Matrix::hcat(K, kcols[t]);
        // restrict the cover's action to the kernel
        std::vector<Matrix> kract;
        kract.reserve(ngen);
        for (int g = 0; g < ngen; ++g) {
            Matrix pg(f, dimP, dimP);
            for (size_t t = 0; t < top.free_cols.size(); ++t)
                pg.set_block(cover_off[t], cover_off[t], projs[rv[top.free_cols[t]]].ract_gen(g));
            auto sol = solve(K, pg * K);
            if (!sol) throw HomalgError("resolution step: kernel not action-stable");
            kract.push_back(*sol);
        }
        cur = DgModule(a, std::move(kdeg), Matrix(f, dimK, dimK), std::move(kract), {}, {}, false);
    }
    return out;
}

// ------------------------------------------------------ bimodule resolution

namespace {

// M (x)_k A as a bimodule, for a bimodule M with zero differential.
DgModule tensor_k_with_algebra(const DgModule& m, const DgModule& reg) {
    AlgebraPtr a = m.algebra();
    FieldSpec f = m.field();
    int dm = m.dim(), da = a->dim();
    int n = dm * da;
    std::vector<int> deg(n);
    std::vector<std::string> labels(n);
    for (int i = 0; i < dm; ++i)
        for (int b = 0; b < da; ++b) {
            deg[i * da + b] = m.degrees()[i] + a->basis(b).degree;
            labels[i * da + b] = m.labels()[i] + "(x)" + a->basis(b).label;
        }
    int r = (int)a->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, n, n)), lact(r, Matrix(f, n, n));
    for (int g = 0; g < r; ++g) {
        ract[g] = kron_left_identity(dm, reg.ract_gen(g));
        lact[g] = kron_right_identity(m.lact_gen(g), da);
    }
    return DgModule(a, std::move(deg), Matrix(f, n, n), std::move(ract), std::move(lact),
                    std::move(labels), false);
}

}  // namespace

BimoduleResolution bimodule_resolution(const DgModule& m_in, int max_length) {
    if (!m_in.is_bimodule()) throw HomalgError("bimodule_resolution needs a bimodule");
    if (!m_in.d().is_zero()) throw HomalgError("bimodule_resolution needs d = 0");
    AlgebraPtr a = m_in.algebra();
    FieldSpec f = a->field();
    DgModule reg = regular_module(a);
    int nv = a->num_vertices();
    int ngen = (int)a->gens().size();
    int nrad = num_radical_gens(*a);
    std::vector<int> slice_dim(nv);
    for (int v = 0; v < nv; ++v) slice_dim[v] = (int)a->slice(v).size();

    BimoduleResolution out;
    DgModule M = vertex_split(m_in);
    std::optional<Matrix> prevK;  // kernel columns inside the previous cover
    while (true) {
        if ((int)out.terms.size() > max_length)
            throw MaxLengthExceededError("bimodule resolution exceeded length " +
                                         std::to_string(max_length));
        int dm = M.dim(), da = a->dim();
        auto rvo = M.right_vertices();
        auto lvo = M.left_vertices();
        if (!rvo || !lvo) throw HomalgError("bimodule resolution: basis not homogeneous");
        DgModule P = tensor_k_with_algebra(M, reg);
        // cover map (i, b) -> m_i . b
        Matrix phi(f, dm, dm * da);
        std::map<int, Matrix> rbx;
        for (int b = 0; b < da; ++b) rbx.emplace(b, M.ract_basis(b));
        for (int i = 0; i < dm; ++i)
            for (int b = 0; b < da; ++b)
                for (int t = 0; t < dm; ++t)
                    if (!rbx[b].entry_is_zero(t, i)) phi.set(t, i * da + b, rbx[b].at(t, i));
        if (rank(phi) != dm) throw HomalgError("bimodule resolution: cover not surjective");
        if (out.terms.empty()) {
            out.augmentation = phi;
        } else {
            // map P_k -> P_{k-1}: (i, b) -> (kernel column i) . b
            const DgModule& prevP = out.terms.back();
            Matrix mp(f, prevP.dim(), dm * da);
            std::map<int, Matrix> prb;
            for (int b = 0; b < da; ++b) prb.emplace(b, prevP.ract_basis(b));
            for (int i = 0; i < dm; ++i)
                for (int b = 0; b < da; ++b) {
                    Matrix v = prb[b] * col_of(*prevK, i);
                    for (int t = 0; t < prevP.dim(); ++t)
                        if (!v.entry_is_zero(t, 0)) mp.set(t, i * da + b, v.at(t, 0));
                }
            out.maps.push_back(std::move(mp));
        }
        // kernel of phi, blockwise over (degree, right vertex, left vertex)
        int dimP = dm * da;
        std::vector<int> pdeg(dimP), prv(dimP), plv(dimP);
        for (int i = 0; i < dm; ++i)
            for (int b = 0; b < da; ++b) {
                pdeg[i * da + b] = M.degrees()[i] + a->basis(b).degree;
                prv[i * da + b] = a->basis(b).target;
                plv[i * da + b] = (*lvo)[i];
            }
        std::map<std::tuple<int, int, int>, std::vector<int>> pcls, mcls;
        for (int c = 0; c < dimP; ++c) pcls[{pdeg[c], prv[c], plv[c]}].push_back(c);
        for (int i = 0; i < dm; ++i)
            mcls[{M.degrees()[i], (*rvo)[i], (*lvo)[i]}].push_back(i);
        std::vector<Matrix> kcols;
        std::vector<int> kdeg;
        int dimK = 0;
        for (const auto& [key, jc] : pcls) {
            auto mit = mcls.find(key);
            std::vector<int> ri = (mit == mcls.end()) ? std::vector<int>{} : mit->second;
            Matrix sub(f, (int)ri.size(), (int)jc.size());
            for (size_t iq = 0; iq < ri.size(); ++iq)
                for (size_t jq = 0; jq < jc.size(); ++jq)
                    if (!phi.entry_is_zero(ri[iq], jc[jq]))
                        sub.set((int)iq, (int)jq, phi.at(ri[iq], jc[jq]));
            Matrix kb = kernel_basis(sub);
            if (kb.cols() == 0) continue;
            Matrix lifted(f, dimP, kb.cols());
            for (size_t jq = 0; jq < jc.size(); ++jq)
                for (int c = 0; c < kb.cols(); ++c)
                    if (!kb.entry_is_zero((int)jq, c)) lifted.set(jc[jq], c, kb.at((int)jq, c));
            kcols.push_back(lifted);
            for (int c = 0; c < kb.cols(); ++c) kdeg.push_back(std::get<0>(key));
            dimK += kb.cols();
        }
        out.terms.push_back(P);
        out.tensor_rank.push_back(dm);
        if (dimK == 0) break;
        Matrix K = kcols[0];
        for (size_t t = 1; t < kcols.size(); ++t) K = Matrix::hcat(K, kcols[t]);
        std::vector<Matrix> kract, klact;
        for (int g = 0; g < ngen; ++g) {
            auto sr = solve(K, P.ract_gen(g) * K);
            auto sl = solve(K, P.lact_gen(g) * K);
            if (!sr || !sl) throw HomalgError("bimodule resolution: kernel not stable");
            kract.push_back(*sr);
            klact.push_back(*sl);
        }
        DgModule Kmod(a, kdeg, Matrix(f, dimK, dimK), std::move(kract), std::move(klact), {},
                      false);
        // right-projectivity: compare dim K with the dim of its projective cover
        Matrix rad_rows(f, dimK * nrad, dimK);
        int row = 0;
        for (int g = nv; g < ngen; ++g)
            for (int c = 0; c < dimK; ++c) {
                for (int i = 0; i < dimK; ++i)
                    if (!Kmod.ract_gen(g).entry_is_zero(i, c))
                        rad_rows.set(row, i, Kmod.ract_gen(g).at(i, c));
                ++row;
            }
        QuotientData top = quotient_by_rows(std::move(rad_rows));
        auto krv = Kmod.right_vertices();
        if (!krv) throw HomalgError("bimodule resolution: kernel not vertex-homogeneous");
        long cover_dim = 0;
        for (int c : top.free_cols) cover_dim += slice_dim[(*krv)[c]];
        if (cover_dim == dimK) {
            // the kernel itself is right-projective: make it the final term
            out.maps.push_back(K);
            out.terms.push_back(Kmod);
            out.tensor_rank.push_back(-1);
            out.final_term_is_kernel = true;
            break;
        }
        prevK = K;
        M = std::move(Kmod);
    }
    return out;
}

// ------------------------------------------------- Hom of a resolution into A

DgModule hom_resolution_to_algebra(const BimoduleResolution& res) {
    if (res.terms.empty()) throw HomalgError("hom: empty resolution");
    AlgebraPtr a = res.terms[0].algebra();
    FieldSpec f = a->field();
    int da = a->dim();
    DgModule reg = regular_module(a);
    int ngen = (int)a->gens().size();
    int L = (int)res.terms.size() - 1;

    struct Item {
        Matrix mat;  // dim A x dim P_k, the A-linear map in coordinates
        int deg = 0;
    };
    std::vector<std::vector<Item>> items(res.terms.size());
    // per term: (i, v) pairs for tensor-form extraction, or a stacked basis
    // matrix for kernel-form extraction
    std::vector<std::optional<Matrix>> ext(res.terms.size());

    for (size_t k = 0; k < res.terms.size(); ++k) {
        const DgModule& P = res.terms[k];
        int dimP = P.dim();
        if (res.tensor_rank[k] >= 0) {
            int rk = res.tensor_rank[k];
            for (int i = 0; i < rk; ++i) {
                int deg_i = P.degrees()[i * da + a->idempotent_basis_index(0)];
                for (int v = 0; v < a->num_vertices(); ++v) {
                    for (int c = 0; c < da; ++c) {
                        if (a->basis(c).target != v) continue;
                        Item it;
                        it.mat = Matrix(f, da, dimP);
                        for (int b = 0; b < da; ++b) {
                            if (a->basis(b).source != v) continue;
                            for (const auto& [idx, coef] : a->mult(c, b))
                                it.mat.set(idx, i * da + b, coef);
                        }
                        it.deg = (int)k + a->basis(c).degree - deg_i;
                        items[k].push_back(std::move(it));
                    }
                }
            }
        } else {
            // kernel-form final term: solve the right-linearity equations,
            // one internal degree offset at a time
            int dimK = dimP;
            std::set<int> offsets;
            for (int rr = 0; rr < da; ++rr)
                for (int c = 0; c < dimK; ++c)
                    offsets.insert(a->basis(rr).degree - P.degrees()[c] + (int)k);
            for (int t : offsets) {
                std::vector<std::pair<int, int>> vars;
                for (int rr = 0; rr < da; ++rr)
                    for (int c = 0; c < dimK; ++c)
                        if (a->basis(rr).degree - P.degrees()[c] + (int)k == t)
                            vars.emplace_back(rr, c);
                std::map<std::pair<int, int>, int> vid;
                for (size_t q = 0; q < vars.size(); ++q) vid[vars[q]] = (int)q;
                Matrix eqs(f, dimK * ngen * da, (int)vars.size());
                int row = 0;
                for (int cp = 0; cp < dimK; ++cp)
                    for (int g = 0; g < ngen; ++g) {
                        for (int rp = 0; rp < da; ++rp, ++row) {
                            // f(x . g)|_{rp} - (f(x) . g)|_{rp} = 0 at x = basis cp
                            for (int cq = 0; cq < dimK; ++cq) {
                                if (P.ract_gen(g).entry_is_zero(cq, cp)) continue;
                                auto it = vid.find({rp, cq});
                                if (it == vid.end()) continue;
                                eqs.set(row, it->second,
                                        eqs.at(row, it->second) + P.ract_gen(g).at(cq, cp));
                            }
                            for (int s = 0; s < da; ++s) {
                                if (reg.ract_gen(g).entry_is_zero(rp, s)) continue;
                                auto it = vid.find({s, cp});
                                if (it == vid.end()) continue;
                                eqs.set(row, it->second,
                                        eqs.at(row, it->second) - reg.ract_gen(g).at(rp, s));
                            }
                        }
                    }
                Matrix kb = kernel_basis(eqs);
                for (int c = 0; c < kb.cols(); ++c) {
                    Item it;
                    it.mat = Matrix(f, da, dimK);
                    for (size_t q = 0; q < vars.size(); ++q)
                        if (!kb.entry_is_zero((int)q, c))
                            it.mat.set(vars[q].first, vars[q].second, kb.at((int)q, c));
                    it.deg = t;
                    items[k].push_back(std::move(it));
                }
            }
            // extraction basis: stacked column vectors of the item matrices
            Matrix stacked(f, da * dimK, (int)items[k].size());
            for (size_t q = 0; q < items[k].size(); ++q)
                for (int c = 0; c < dimK; ++c)
                    for (int rr = 0; rr < da; ++rr)
                        if (!items[k][q].mat.entry_is_zero(rr, c))
                            stacked.set(c * da + rr, (int)q, items[k][q].mat.at(rr, c));
            ext[k] = std::move(stacked);
        }
    }

    // coordinates of an A-linear map G: P_k -> A in the term-k item basis
    auto coords = [&](int k, const Matrix& G) {
        const DgModule& P = res.terms[k];
        int h = (int)items[k].size();
        Matrix out(f, h, 1);
        if (res.tensor_rank[k] >= 0) {
            int q = 0;
            for (int i = 0; i < res.tensor_rank[k]; ++i)
                for (int v = 0; v < a->num_vertices(); ++v) {
                    int col = i * da + a->idempotent_basis_index(v);
                    for (int c = 0; c < da; ++c) {
                        if (a->basis(c).target != v) continue;
                        out.set(q, 0, G.at(c, col));
                        ++q;
                    }
                }
        } else {
            Matrix vecd(f, da * P.dim(), 1);
            for (int c = 0; c < P.dim(); ++c)
                for (int rr = 0; rr < da; ++rr)
                    if (!G.entry_is_zero(rr, c)) vecd.set(c * da + rr, 0, G.at(rr, c));
            auto sol = solve(*ext[k], vecd);
            if (!sol) throw HomalgError("hom: coordinate extraction failed");
            out = *sol;
        }
        return out;
    };

    // assemble the dg bimodule
    std::vector<int> offs(res.terms.size() + 1, 0);
    for (size_t k = 0; k < res.terms.size(); ++k)
        offs[k + 1] = offs[k] + (int)items[k].size();
    int n = offs.back();
    std::vector<int> deg(n);
    std::vector<std::string> labels(n);
    for (size_t k = 0; k < res.terms.size(); ++k)
        for (size_t q = 0; q < items[k].size(); ++q) {
            deg[offs[k] + (int)q] = items[k][q].deg;
            labels[offs[k] + (int)q] = "h" + std::to_string(k) + "_" + std::to_string(q);
        }
    Matrix d(f, n, n);
    for (int k = 0; k < L; ++k) {
        for (size_t q = 0; q < items[k].size(); ++q) {
            const Item& it = items[k][q];
            Matrix G = it.mat * res.maps[k];
            if (it.deg % 2 == 0) G = -G;  // -(-1)^{|f|} f o d
            Matrix cc = coords(k + 1, G);
            for (int t = 0; t < cc.rows(); ++t)
                if (!cc.entry_is_zero(t, 0)) d.set(offs[k + 1] + t, offs[k] + (int)q, cc.at(t, 0));
        }
    }
    std::vector<Matrix> ract(ngen, Matrix(f, n, n)), lact(ngen, Matrix(f, n, n));
    for (int g = 0; g < ngen; ++g) {
        for (size_t k = 0; k < res.terms.size(); ++k) {
            for (size_t q = 0; q < items[k].size(); ++q) {
                Matrix gr = items[k][q].mat * res.terms[k].lact_gen(g);  // (f.a)(x) = f(a x)
                Matrix cc = coords((int)k, gr);
                for (int t = 0; t < cc.rows(); ++t)
                    if (!cc.entry_is_zero(t, 0))
                        ract[g].set(offs[k] + t, offs[k] + (int)q, cc.at(t, 0));
                Matrix gl = reg.lact_gen(g) * items[k][q].mat;  // (a.f)(x) = a f(x)
                cc = coords((int)k, gl);
                for (int t = 0; t < cc.rows(); ++t)
                    if (!cc.entry_is_zero(t, 0))
                        lact[g].set(offs[k] + t, offs[k] + (int)q, cc.at(t, 0));
            }
        }
    }
    return DgModule(a, std::move(deg), std::move(d), std::move(ract), std::move(lact),
                    std::move(labels), true);
}

}  // namespace perfdim
