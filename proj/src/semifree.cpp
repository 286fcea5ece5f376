#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "perfdim/homalg.hpp"

namespace perfdim {

namespace {

SparseVec sparse_neg(const SparseVec& a) {
    SparseVec out = a;
    for (auto& [i, c] : out) c = -c;
    return out;
}

}  // namespace

// ----------------------------------------------------------------- Semifree

Semifree::Semifree(AlgebraPtr a, std::vector<SfGen> gens, std::vector<std::vector<SparseVec>> d,
                   bool validate)
    : a_(std::move(a)), gens_(std::move(gens)), d_(std::move(d)) {
    size_t n = gens_.size();
    if (d_.size() != n) throw HomalgError("semifree: d shape");
    for (const auto& row : d_)
        if (row.size() != n) throw HomalgError("semifree: d shape");
    if (validate) this->validate();
}

Semifree Semifree::regular(const AlgebraPtr& a) {
    std::vector<SfGen> gens;
    for (int v = 0; v < a->num_vertices(); ++v) gens.push_back({v, 0});
    std::vector<std::vector<SparseVec>> d(gens.size(), std::vector<SparseVec>(gens.size()));
    return Semifree(a, std::move(gens), std::move(d), false);
}

void Semifree::validate() const {
    int n = num_gens();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            for (const auto& [idx, c] : d_[i][j]) {
                const BasisElt& b = a_->basis(idx);
                if (b.source != gens_[i].vertex || b.target != gens_[j].vertex)
                    throw HomalgError("semifree: differential entry badly typed");
                if (b.degree != gens_[j].deg + 1 - gens_[i].deg)
                    throw HomalgError("semifree: differential entry of wrong degree");
            }
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            SparseVec acc;
            for (int k = 0; k < n; ++k)
                acc = sparse_add(acc, a_->mult(d_[i][k], d_[k][j]));
            if (!sparse_is_zero(acc)) throw HomalgError("semifree: d^2 != 0");
        }
}

Semifree Semifree::shifted(int s) const {
    std::vector<SfGen> gens = gens_;
    for (auto& g : gens) g.deg -= s;
    std::vector<std::vector<SparseVec>> d = d_;
    if (s % 2 != 0)
        for (auto& row : d)
            for (auto& e : row) e = sparse_neg(e);
    return Semifree(a_, std::move(gens), std::move(d), false);
}

int Semifree::expanded_dim() const {
    int out = 0;
    for (const auto& g : gens_) out += (int)a_->slice(g.vertex).size();
    return out;
}

Semifree Semifree::minimized() const {
    AlgebraPtr a = a_;
    FieldSpec f = a->field();
    std::vector<SfGen> gens = gens_;
    std::vector<std::vector<SparseVec>> d = d_;
    while (true) {
        int n = (int)gens.size();
        int pi = -1, pj = -1;
        Scalar c = Scalar::zero(f);
        int idem = -1;
        for (int i = 0; i < n && pi < 0; ++i)
            for (int j = 0; j < n && pi < 0; ++j) {
                if (i == j || gens[i].vertex != gens[j].vertex) continue;
                int e = a->idempotent_basis_index(gens[i].vertex);
                for (const auto& [idx, cc] : d[i][j])
                    if (idx == e) {
                        pi = i;
                        pj = j;
                        c = cc;
                        idem = e;
                    }
            }
        if (pi < 0) break;
        // invert u = d[pi][pj] = c e + r by the nilpotent geometric series
        SparseVec u = d[pi][pj];
        SparseVec e = sparse_unit(idem, f);
        SparseVec r = sparse_add(u, sparse_scale(e, -c));
        SparseVec uinv = sparse_scale(e, c.inv());
        SparseVec term = r;
        Scalar coef = c.inv();
        int guard = 0;
        while (!sparse_is_zero(term)) {
            coef = -coef / c;
            uinv = sparse_add(uinv, sparse_scale(term, coef));
            term = a->mult(term, r);
            if (++guard > a->dim() + 1) throw HomalgError("minimize: series did not terminate");
        }
        if (!(a->mult(u, uinv) == e)) throw HomalgError("minimize: unit inverse check failed");
        std::vector<int> keep;
        for (int t = 0; t < n; ++t)
            if (t != pi && t != pj) keep.push_back(t);
        std::vector<SfGen> ngens;
        for (int t : keep) ngens.push_back(gens[t]);
        std::vector<std::vector<SparseVec>> nd(keep.size(), std::vector<SparseVec>(keep.size()));
        for (size_t kq = 0; kq < keep.size(); ++kq)
            for (size_t lq = 0; lq < keep.size(); ++lq) {
                int k = keep[kq], l = keep[lq];
                SparseVec corr = a->mult(d[k][pj], a->mult(uinv, d[pi][l]));
                nd[kq][lq] = sparse_add(d[k][l], sparse_scale(corr, Scalar::of_long(f, -1)));
            }
        gens = std::move(ngens);
        d = std::move(nd);
    }
    Semifree out(a, std::move(gens), std::move(d), false);
    out.validate();
    return out;
}

Semifree::Expansion Semifree::expand() const {
    FieldSpec f = a_->field();
    Expansion out;
    int n = num_gens();
    if (n == 0) {
        out.sc.cx.field = f;
        return out;
    }
    // collect columns (gen, algebra basis element) grouped by total degree
    std::map<int, std::vector<std::pair<int, int>>> cols;
    for (int j = 0; j < n; ++j)
        for (int b : a_->slice(gens_[j].vertex)) cols[gens_[j].deg + a_->basis(b).degree].push_back({j, b});
    int lo = cols.begin()->first, hi = cols.rbegin()->first;
    int ns = hi - lo + 1;
    out.sc.cx.field = f;
    out.sc.cx.lo = lo;
    out.sc.cx.dims.assign(ns, 0);
    out.cols.assign(ns, {});
    std::map<std::pair<int, int>, std::pair<int, int>> pos;  // (gen,b) -> (slot, idx)
    for (auto& [deg, list] : cols) {
        int s = deg - lo;
        out.cols[s] = list;
        out.sc.cx.dims[s] = (int)list.size();
        for (size_t q = 0; q < list.size(); ++q) pos[list[q]] = {s, (int)q};
    }
    out.sc.vertex.assign(ns, {});
    for (int s = 0; s < ns; ++s)
        for (const auto& [j, b] : out.cols[s]) out.sc.vertex[s].push_back(a_->basis(b).target);
    // differential
    out.sc.cx.d.reserve(ns);
    for (int s = 0; s < ns; ++s) {
        int next = (s + 1 < ns) ? out.sc.cx.dims[s + 1] : 0;
        Matrix blk(f, next, out.sc.cx.dims[s]);
        if (next > 0)
            for (size_t q = 0; q < out.cols[s].size(); ++q) {
                auto [j, b] = out.cols[s][q];
                for (int i = 0; i < n; ++i) {
                    if (sparse_is_zero(d_[i][j])) continue;
                    SparseVec prod = a_->mult(d_[i][j], sparse_unit(b, f));
                    for (const auto& [b2, c] : prod) {
                        auto it = pos.find({i, b2});
                        if (it == pos.end() || it->second.first != s + 1)
                            throw HomalgError("semifree expand: misplaced differential entry");
                        blk.set(it->second.second, (int)q, blk.at(it->second.second, (int)q) + c);
                    }
                }
            }
        out.sc.cx.d.push_back(std::move(blk));
    }
    // right action blocks
    int r = (int)a_->gens().size();
    out.sc.act.assign(r, {});
    for (int g = 0; g < r; ++g) {
        int dg = a_->gens()[g].degree;
        for (int s = 0; s < ns; ++s) {
            int t = s + dg;
            if (t < 0 || t >= ns) {
                out.sc.act[g].push_back(Matrix(f, 0, out.sc.cx.dims[s]));
                continue;
            }
            Matrix blk(f, out.sc.cx.dims[t], out.sc.cx.dims[s]);
            for (size_t q = 0; q < out.cols[s].size(); ++q) {
                auto [j, b] = out.cols[s][q];
                for (const auto& [b2, c] : a_->bg(b, g)) {
                    auto it = pos.find({j, b2});
                    if (it == pos.end() || it->second.first != t)
                        throw HomalgError("semifree expand: misplaced action entry");
                    blk.set(it->second.second, (int)q, c);
                }
            }
            out.sc.act[g].push_back(std::move(blk));
        }
    }
    return out;
}

DgModule Semifree::expand_module() const {
    FieldSpec f = a_->field();
    int n = num_gens();
    std::vector<std::pair<int, int>> cols;
    for (int j = 0; j < n; ++j)
        for (int b : a_->slice(gens_[j].vertex)) cols.push_back({j, b});
    int N = (int)cols.size();
    std::map<std::pair<int, int>, int> pos;
    for (int q = 0; q < N; ++q) pos[cols[q]] = q;
    std::vector<int> deg(N);
    std::vector<std::string> labels(N);
    for (int q = 0; q < N; ++q) {
        deg[q] = gens_[cols[q].first].deg + a_->basis(cols[q].second).degree;
        labels[q] = "g" + std::to_string(cols[q].first) + "." + a_->basis(cols[q].second).label;
    }
    Matrix d(f, N, N);
    for (int q = 0; q < N; ++q) {
        auto [j, b] = cols[q];
        for (int i = 0; i < n; ++i) {
            if (sparse_is_zero(d_[i][j])) continue;
            SparseVec prod = a_->mult(d_[i][j], sparse_unit(b, f));
            for (const auto& [b2, c] : prod) d.set(pos.at({i, b2}), q, d.at(pos.at({i, b2}), q) + c);
        }
    }
    int r = (int)a_->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, N, N));
    for (int g = 0; g < r; ++g)
        for (int q = 0; q < N; ++q) {
            auto [j, b] = cols[q];
            for (const auto& [b2, c] : a_->bg(b, g)) ract[g].set(pos.at({j, b2}), q, c);
        }
    return DgModule(a_, std::move(deg), std::move(d), std::move(ract), {}, std::move(labels),
                    false);
}

// -------------------------------------------------- semifree tensor bimodule

namespace {

struct BimodView {
    const DgModule* b;
    std::vector<int> lv, rv;
    std::vector<std::vector<int>> lslice;  // per vertex: basis indices with that left vertex
};

BimodView view_bimodule(const DgModule& b) {
    if (!b.is_bimodule()) throw HomalgError("tensor: bimodule required");
    auto lv = b.left_vertices();
    auto rv = b.right_vertices();
    if (!lv || !rv) throw HomalgError("tensor: bimodule basis not vertex-homogeneous");
    BimodView out;
    out.b = &b;
    out.lv = *lv;
    out.rv = *rv;
    out.lslice.assign(b.algebra()->num_vertices(), {});
    for (int i = 0; i < b.dim(); ++i) out.lslice[(*lv)[i]].push_back(i);
    return out;
}

}  // namespace

Semifree::Expansion semifree_tensor_bimodule(const Semifree& x, const DgModule& b) {
    const AlgebraPtr& a = x.algebra();
    if (!(a.get() == b.algebra().get() || a->structurally_equal(*b.algebra())))
        throw HomalgError("tensor: bimodule must live over the same algebra");
    FieldSpec f = a->field();
    BimodView bv = view_bimodule(b);
    int n = x.num_gens();
    Semifree::Expansion out;
    out.sc.cx.field = f;
    if (n == 0) return out;
    std::map<int, std::vector<std::pair<int, int>>> cols;  // (gen j, b-basis index)
    for (int j = 0; j < n; ++j)
        for (int beta : bv.lslice[x.gen(j).vertex])
            cols[x.gen(j).deg + b.degrees()[beta]].push_back({j, beta});
    if (cols.empty()) return out;
    int lo = cols.begin()->first, hi = cols.rbegin()->first;
    int ns = hi - lo + 1;
    out.sc.cx.lo = lo;
    out.sc.cx.dims.assign(ns, 0);
    out.cols.assign(ns, {});
    out.sc.vertex.assign(ns, {});
    std::map<std::pair<int, int>, std::pair<int, int>> pos;
    for (auto& [deg, list] : cols) {
        int s = deg - lo;
        out.cols[s] = list;
        out.sc.cx.dims[s] = (int)list.size();
        for (size_t q = 0; q < list.size(); ++q) pos[list[q]] = {s, (int)q};
        for (const auto& [j, beta] : list) out.sc.vertex[s].push_back(bv.rv[beta]);
    }
    // cache left actions of the differential entries
    std::map<std::pair<int, int>, Matrix> lmat;
    auto lact_of = [&](int i, int j) -> const Matrix& {
        auto it = lmat.find({i, j});
        if (it == lmat.end()) it = lmat.emplace(std::make_pair(i, j), b.lact(x.d_entry(i, j))).first;
        return it->second;
    };
    out.sc.cx.d.reserve(ns);
    for (int s = 0; s < ns; ++s) {
        int next = (s + 1 < ns) ? out.sc.cx.dims[s + 1] : 0;
        Matrix blk(f, next, out.sc.cx.dims[s]);
        if (next > 0)
            for (size_t q = 0; q < out.cols[s].size(); ++q) {
                auto [j, beta] = out.cols[s][q];
                // sum_i g_i (x) (a_{ij} . beta)
                for (int i = 0; i < n; ++i) {
                    if (sparse_is_zero(x.d_entry(i, j))) continue;
                    const Matrix& L = lact_of(i, j);
                    for (int b2 = 0; b2 < b.dim(); ++b2) {
                        if (L.entry_is_zero(b2, beta)) continue;
                        auto it = pos.find({i, b2});
                        if (it == pos.end() || it->second.first != s + 1)
                            throw HomalgError("tensor expand: misplaced differential entry");
                        blk.set(it->second.second, (int)q,
                                blk.at(it->second.second, (int)q) + L.at(b2, beta));
                    }
                }
                // (-1)^{deg g_j} g_j (x) d_B beta
                Scalar sgn = Scalar::of_long(f, x.gen(j).deg % 2 == 0 ? 1 : -1);
                for (int b2 = 0; b2 < b.dim(); ++b2) {
                    if (b.d().entry_is_zero(b2, beta)) continue;
                    auto it = pos.find({j, b2});
                    if (it == pos.end() || it->second.first != s + 1)
                        throw HomalgError("tensor expand: misplaced differential entry");
                    blk.set(it->second.second, (int)q,
                            blk.at(it->second.second, (int)q) + sgn * b.d().at(b2, beta));
                }
            }
        out.sc.cx.d.push_back(std::move(blk));
    }
    int r = (int)a->gens().size();
    out.sc.act.assign(r, {});
    for (int g = 0; g < r; ++g) {
        int dg = a->gens()[g].degree;
        for (int s = 0; s < ns; ++s) {
            int t = s + dg;
            if (t < 0 || t >= ns) {
                out.sc.act[g].push_back(Matrix(f, 0, out.sc.cx.dims[s]));
                continue;
            }
            Matrix blk(f, out.sc.cx.dims[t], out.sc.cx.dims[s]);
            for (size_t q = 0; q < out.cols[s].size(); ++q) {
                auto [j, beta] = out.cols[s][q];
                for (int b2 = 0; b2 < b.dim(); ++b2) {
                    if (b.ract_gen(g).entry_is_zero(b2, beta)) continue;
                    auto it = pos.find({j, b2});
                    if (it == pos.end() || it->second.first != t)
                        throw HomalgError("tensor expand: misplaced action entry");
                    blk.set(it->second.second, (int)q, b.ract_gen(g).at(b2, beta));
                }
            }
            out.sc.act[g].push_back(std::move(blk));
        }
    }
    return out;
}

DgModule semifree_tensor_bimodule_module(const Semifree& x, const DgModule& b) {
    const AlgebraPtr& a = x.algebra();
    FieldSpec f = a->field();
    BimodView bv = view_bimodule(b);
    int n = x.num_gens();
    std::vector<std::pair<int, int>> cols;
    for (int j = 0; j < n; ++j)
        for (int beta : bv.lslice[x.gen(j).vertex]) cols.push_back({j, beta});
    int N = (int)cols.size();
    std::map<std::pair<int, int>, int> pos;
    for (int q = 0; q < N; ++q) pos[cols[q]] = q;
    std::vector<int> deg(N);
    std::vector<std::string> labels(N);
    for (int q = 0; q < N; ++q) {
        deg[q] = x.gen(cols[q].first).deg + b.degrees()[cols[q].second];
        labels[q] = "g" + std::to_string(cols[q].first) + "(x)" + b.labels()[cols[q].second];
    }
    Matrix d(f, N, N);
    for (int q = 0; q < N; ++q) {
        auto [j, beta] = cols[q];
        for (int i = 0; i < n; ++i) {
            if (sparse_is_zero(x.d_entry(i, j))) continue;
            Matrix L = b.lact(x.d_entry(i, j));
            for (int b2 = 0; b2 < b.dim(); ++b2)
                if (!L.entry_is_zero(b2, beta)) {
                    int t = pos.at({i, b2});
                    d.set(t, q, d.at(t, q) + L.at(b2, beta));
                }
        }
        Scalar sgn = Scalar::of_long(f, x.gen(j).deg % 2 == 0 ? 1 : -1);
        for (int b2 = 0; b2 < b.dim(); ++b2)
            if (!b.d().entry_is_zero(b2, beta)) {
                int t = pos.at({j, b2});
                d.set(t, q, d.at(t, q) + sgn * b.d().at(b2, beta));
            }
    }
    int r = (int)a->gens().size();
    std::vector<Matrix> ract(r, Matrix(f, N, N));
    for (int g = 0; g < r; ++g)
        for (int q = 0; q < N; ++q) {
            auto [j, beta] = cols[q];
            for (int b2 = 0; b2 < b.dim(); ++b2)
                if (!b.ract_gen(g).entry_is_zero(b2, beta))
                    ract[g].set(pos.at({j, b2}), q, b.ract_gen(g).at(b2, beta));
        }
    return DgModule(a, std::move(deg), std::move(d), std::move(ract), {}, std::move(labels),
                    false);
}

// -------------------------------------------------------------- kill cycles

namespace {

// A snapshot of the cone of phi: F[1] (+) Y, built degreewise. Slot s holds
// the expanded F-columns of total degree s+1 and the Y-columns of degree s.
struct ConeView {
    int lo = 0;
    std::vector<std::vector<std::pair<int, int>>> fcols;  // (gen j, algebra basis b)
    std::vector<int> fdim, ydim;
    std::vector<std::vector<int>> tag;  // vertex type per column (F then Y)
    std::vector<Matrix> d;
};

struct Engine {
    AlgebraPtr a;
    const SlicedComplex& y;
    FieldSpec f;
    std::vector<SfGen> gens;
    std::vector<std::vector<SparseVec>> dF;
    std::vector<Matrix> phi;  // phi[j]: Y-coordinates at degree gens[j].deg

    explicit Engine(AlgebraPtr a_, const SlicedComplex& y_) : a(std::move(a_)), y(y_) {
        f = a->field();
    }

    int ydim_at(int degree) const { return y.cx.dim_at(degree); }

    ConeView build() const {
        ConeView cv;
        int n = (int)gens.size();
        std::map<int, std::vector<std::pair<int, int>>> fcols;
        for (int j = 0; j < n; ++j)
            for (int b : a->slice(gens[j].vertex))
                fcols[gens[j].deg + a->basis(b).degree - 1].push_back({j, b});
        int lo = y.cx.lo, hi = y.cx.lo + (int)y.cx.dims.size() - 1;
        if (y.cx.dims.empty()) {
            lo = 0;
            hi = -1;
        }
        if (!fcols.empty()) {
            lo = std::min(lo, fcols.begin()->first);
            hi = std::max(hi, fcols.rbegin()->first);
        }
        if (hi < lo) {
            cv.lo = 0;
            return cv;
        }
        cv.lo = lo;
        int ns = hi - lo + 1;
        cv.fcols.assign(ns, {});
        cv.fdim.assign(ns, 0);
        cv.ydim.assign(ns, 0);
        cv.tag.assign(ns, {});
        for (auto& [deg, list] : fcols) {
            cv.fcols[deg - lo] = list;
            cv.fdim[deg - lo] = (int)list.size();
        }
        std::map<std::pair<int, int>, std::pair<int, int>> fpos;
        for (int s = 0; s < ns; ++s)
            for (size_t q = 0; q < cv.fcols[s].size(); ++q) fpos[cv.fcols[s][q]] = {s, (int)q};
        for (int s = 0; s < ns; ++s) {
            cv.ydim[s] = ydim_at(lo + s);
            for (const auto& [j, b] : cv.fcols[s]) cv.tag[s].push_back(a->basis(b).target);
            if (cv.ydim[s] > 0) {
                const auto& vt = y.vertex[lo + s - y.cx.lo];
                for (int c = 0; c < cv.ydim[s]; ++c) cv.tag[s].push_back(vt[c]);
            }
        }
        cv.d.reserve(ns);
        for (int s = 0; s < ns; ++s) {
            int rows = (s + 1 < ns) ? cv.fdim[s + 1] + cv.ydim[s + 1] : 0;
            Matrix blk(f, rows, cv.fdim[s] + cv.ydim[s]);
            if (rows > 0) {
                for (int q = 0; q < cv.fdim[s]; ++q) {
                    auto [j, b] = cv.fcols[s][q];
                    // F-part: -d_F(g_j . b)
                    for (int i = 0; i < n; ++i) {
                        if (sparse_is_zero(dF[i][j])) continue;
                        SparseVec prod = a->mult(dF[i][j], sparse_unit(b, f));
                        for (const auto& [b2, c] : prod) {
                            auto it = fpos.find({i, b2});
                            if (it == fpos.end() || it->second.first != s + 1)
                                throw HomalgError("cone: misplaced differential entry");
                            blk.set(it->second.second, q, blk.at(it->second.second, q) - c);
                        }
                    }
                    // Y-part: phi(g_j . b) = phi(g_j) . b
                    if (phi[j].rows() > 0) {
                        int yslot = gens[j].deg - y.cx.lo;
                        Matrix act = y.act_basis(*a, yslot, b);
                        if (act.rows() > 0) {
                            Matrix vec = act * phi[j];
                            for (int t = 0; t < vec.rows(); ++t)
                                if (!vec.entry_is_zero(t, 0))
                                    blk.set(cv.fdim[s + 1] + t, q, vec.at(t, 0));
                        }
                    }
                }
                // Y-part differential
                if (cv.ydim[s] > 0 && lo + s - y.cx.lo < (int)y.cx.d.size()) {
                    const Matrix& dy = y.cx.d[lo + s - y.cx.lo];
                    for (int c = 0; c < cv.ydim[s]; ++c)
                        for (int t = 0; t < dy.rows(); ++t)
                            if (!dy.entry_is_zero(t, c))
                                blk.set(cv.fdim[s + 1] + t, cv.fdim[s] + c, dy.at(t, c));
                }
            }
            cv.d.push_back(std::move(blk));
        }
        return cv;
    }
};

}  // namespace

Semifree resolve_sliced(const AlgebraPtr& a, const SlicedComplex& y, const ResolveCaps& caps) {
    Engine eng(a, y);
    FieldSpec f = a->field();
    // sweep direction from the sign of the grading
    bool nonpos = true, nonneg = true;
    for (const auto& g : a->gens()) {
        if (g.degree > 0) nonpos = false;
        if (g.degree < 0) nonneg = false;
    }
    bool from_top = nonpos || !nonneg;
    for (int round = 0; round < caps.max_rounds; ++round) {
        ConeView cv = eng.build();
        int ns = (int)cv.d.size();
        std::vector<int> rk(ns, 0);
        for (int s = 0; s < ns; ++s) rk[s] = rank(cv.d[s]);
        int target = -1;
        for (int s = 0; s < ns; ++s) {
            int dim = cv.fdim[s] + cv.ydim[s];
            int h = dim - rk[s] - (s > 0 ? rk[s - 1] : 0);
            if (h <= 0) continue;
            if (target < 0)
                target = s;
            else
                target = from_top ? std::max(target, s) : std::min(target, s);
        }
        if (target < 0) {
            Semifree out(a, eng.gens, eng.dF, true);
            return out.minimized();
        }
        // kill the classes in degree lo + target
        int s = target;
        Matrix z = kernel_basis(cv.d[s]);
        Matrix bnd = (s > 0) ? cv.d[s - 1] : Matrix(f, cv.fdim[s] + cv.ydim[s], 0);
        // vertex-split candidate representatives
        std::vector<Matrix> cand;
        std::vector<int> cand_vertex;
        for (int c = 0; c < z.cols(); ++c)
            for (int v = 0; v < a->num_vertices(); ++v) {
                Matrix m(f, z.rows(), 1);
                bool nz = false;
                for (int t = 0; t < z.rows(); ++t)
                    if (cv.tag[s][t] == v && !z.entry_is_zero(t, c)) {
                        m.set(t, 0, z.at(t, c));
                        nz = true;
                    }
                if (nz) {
                    cand.push_back(std::move(m));
                    cand_vertex.push_back(v);
                }
            }
        Matrix sel = bnd;
        for (const auto& m : cand) sel = Matrix::hcat(sel, m);
        std::vector<int> pivots;
        rref_in_place(sel, &pivots);
        int added = 0;
        for (int p : pivots) {
            if (p < bnd.cols()) continue;
            int ci = p - bnd.cols();
            const Matrix& zv = cand[ci];
            int v = cand_vertex[ci];
            int degree = cv.lo + s;
            // new generator g at (v, degree): d_F g = -f, phi g = y-part
            int idx = (int)eng.gens.size();
            eng.gens.push_back({v, degree});
            for (auto& row : eng.dF) row.emplace_back();
            eng.dF.emplace_back(eng.gens.size(), SparseVec{});
            for (int q = 0; q < cv.fdim[s]; ++q) {
                if (zv.entry_is_zero(q, 0)) continue;
                auto [j, b] = cv.fcols[s][q];
                eng.dF[j][idx] =
                    sparse_add(eng.dF[j][idx], sparse_scale(sparse_unit(b, f), -zv.at(q, 0)));
            }
            Matrix ph(f, cv.ydim[s], 1);
            for (int t = 0; t < cv.ydim[s]; ++t) ph.set(t, 0, zv.at(cv.fdim[s] + t, 0));
            eng.phi.push_back(std::move(ph));
            ++added;
            if ((int)eng.gens.size() > caps.max_gens)
                throw MaxLengthExceededError("resolution exceeded generator cap");
        }
        if (added == 0) throw HomalgError("kill cycles: no class could be split by vertex");
    }
    throw MaxLengthExceededError("resolution exceeded round cap");
}

Semifree resolve_module(const DgModule& m, const ResolveCaps& caps) {
    if (m.dim() == 0) {
        return Semifree(m.algebra(), {}, {}, false);
    }
    DgModule s = m.right_vertices() ? m : vertex_split(m);
    return resolve_sliced(m.algebra(), sliced_from_module(s), caps);
}

// --------------------------------------------------------------------- rhom

Complex rhom_from_semifree(const Semifree& fm, const DgModule& n_in) {
    const AlgebraPtr& a = fm.algebra();
    FieldSpec f = a->field();
    DgModule n = n_in.right_vertices() ? n_in : vertex_split(n_in);
    auto rv = *n.right_vertices();
    int ng = fm.num_gens();
    std::map<int, std::vector<std::pair<int, int>>> cols;  // (gen g, n-basis y)
    for (int g = 0; g < ng; ++g)
        for (int y = 0; y < n.dim(); ++y)
            if (rv[y] == fm.gen(g).vertex) cols[n.degrees()[y] - fm.gen(g).deg].push_back({g, y});
    Complex out;
    out.field = f;
    if (cols.empty()) return out;
    int lo = cols.begin()->first, hi = cols.rbegin()->first;
    int ns = hi - lo + 1;
    out.lo = lo;
    out.dims.assign(ns, 0);
    std::map<std::pair<int, int>, std::pair<int, int>> pos;
    std::vector<std::vector<std::pair<int, int>>> slot(ns);
    for (auto& [deg, list] : cols) {
        slot[deg - lo] = list;
        out.dims[deg - lo] = (int)list.size();
        for (size_t q = 0; q < list.size(); ++q) pos[list[q]] = {deg - lo, (int)q};
    }
    // cache the action of each differential entry on n
    std::map<std::pair<int, int>, Matrix> amat;
    auto act_of = [&](int i, int j) -> const Matrix& {
        auto it = amat.find({i, j});
        if (it == amat.end())
            it = amat.emplace(std::make_pair(i, j), n.ract(fm.d_entry(i, j))).first;
        return it->second;
    };
    out.d.reserve(ns);
    for (int s = 0; s < ns; ++s) {
        int next = (s + 1 < ns) ? out.dims[s + 1] : 0;
        Matrix blk(f, next, out.dims[s]);
        if (next > 0)
            for (size_t q = 0; q < slot[s].size(); ++q) {
                auto [g, yy] = slot[s][q];
                // d_n o f
                for (int y2 = 0; y2 < n.dim(); ++y2)
                    if (!n.d().entry_is_zero(y2, yy)) {
                        auto it = pos.find({g, y2});
                        if (it == pos.end() || it->second.first != s + 1)
                            throw HomalgError("rhom: misplaced entry");
                        blk.set(it->second.second, (int)q,
                                blk.at(it->second.second, (int)q) + n.d().at(y2, yy));
                    }
                // -(-1)^{|f|} f o d on generators
                Scalar sgn = Scalar::of_long(f, (lo + s) % 2 == 0 ? -1 : 1);
                for (int g2 = 0; g2 < ng; ++g2) {
                    if (sparse_is_zero(fm.d_entry(g, g2))) continue;
                    const Matrix& L = act_of(g, g2);
                    for (int y2 = 0; y2 < n.dim(); ++y2) {
                        if (L.entry_is_zero(y2, yy)) continue;
                        auto it = pos.find({g2, y2});
                        if (it == pos.end() || it->second.first != s + 1)
                            throw HomalgError("rhom: misplaced entry");
                        blk.set(it->second.second, (int)q,
                                blk.at(it->second.second, (int)q) + sgn * L.at(y2, yy));
                    }
                }
            }
        out.d.push_back(std::move(blk));
    }
    return out;
}

Complex rhom_complex(const DgModule& m, const DgModule& n, const ResolveCaps& caps) {
    Semifree fm = resolve_module(m, caps);
    return rhom_from_semifree(fm, n);
}

CohomologyProfile rhom(const DgModule& m, const DgModule& n, const ResolveCaps& caps) {
    return cohomology(rhom_complex(m, n, caps));
}

std::pair<int, int> e_pm(const DgModule& m, const DgModule& n) {
    CohomologyProfile p = rhom(m, n);
    if (p.is_zero()) throw HomalgError("e_pm: derived Hom vanishes");
    return {p.inf(), p.sup()};
}

}  // namespace perfdim
