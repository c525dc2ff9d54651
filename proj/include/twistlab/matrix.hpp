#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fields.hpp"

namespace twistlab {

// Dense matrices over a field object. Row-major. A matrix carries its field,
// so arithmetic needs no extra arguments. Everything downstream (hom
// complexes, Maurer-Cartan checks, certificate searches) reduces to these.

template <class F>
class Matrix {
public:
    using Elt = typename F::Elt;

    Matrix() requires std::default_initializable<F> : k_(F{}), m_(0), n_(0) {}
    Matrix(F k, std::size_t m, std::size_t n)
        : k_(std::move(k)), m_(m), n_(n), a_(m * n, k_.zero()) {}

    static Matrix identity(F k, std::size_t n) {
        Matrix r(k, n, n);
        for (std::size_t i = 0; i < n; ++i) r.at(i, i) = r.k_.one();
        return r;
    }

    const F& field() const { return k_; }
    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

    Elt& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Elt& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!k_.is_zero(x)) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        if (m_ != o.m_ || n_ != o.n_) return false;
        for (std::size_t i = 0; i < a_.size(); ++i)
            if (!k_.eq(a_[i], o.a_[i])) return false;
        return true;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        require_shape(m_ == o.m_ && n_ == o.n_, "matrix add: shape mismatch");
        Matrix r(k_, m_, n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = k_.add(a_[i], o.a_[i]);
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        require_shape(m_ == o.m_ && n_ == o.n_, "matrix sub: shape mismatch");
        Matrix r(k_, m_, n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = k_.sub(a_[i], o.a_[i]);
        return r;
    }
    Matrix operator-() const {
        Matrix r(k_, m_, n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = k_.neg(a_[i]);
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        require_shape(n_ == o.m_, "matrix mul: shape mismatch");
        Matrix r(k_, m_, o.n_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t l = 0; l < n_; ++l) {
                const Elt& x = at(i, l);
                if (k_.is_zero(x)) continue;
                for (std::size_t j = 0; j < o.n_; ++j)
                    r.at(i, j) = k_.add(r.at(i, j), k_.mul(x, o.at(l, j)));
            }
        return r;
    }

    Matrix scaled(const Elt& c) const {
        Matrix r(k_, m_, n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = k_.mul(c, a_[i]);
        return r;
    }

    Matrix transposed() const {
        Matrix r(k_, n_, m_);
        for (std::size_t i = 0; i < m_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    // Copy `src` into this matrix with top-left corner at (i0, j0).
    void paste(std::size_t i0, std::size_t j0, const Matrix& src) {
        require_shape(i0 + src.m_ <= m_ && j0 + src.n_ <= n_, "paste out of range");
        for (std::size_t i = 0; i < src.m_; ++i)
            for (std::size_t j = 0; j < src.n_; ++j) at(i0 + i, j0 + j) = src.at(i, j);
    }

    Matrix block(std::size_t i0, std::size_t j0, std::size_t m, std::size_t n) const {
        require_shape(i0 + m <= m_ && j0 + n <= n_, "block out of range");
        Matrix r(k_, m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) r.at(i, j) = at(i0 + i, j0 + j);
        return r;
    }

    Matrix col(std::size_t j) const { return block(0, j, m_, 1); }

    static Matrix hcat(const Matrix& a, const Matrix& b) {
        require_shape(a.m_ == b.m_, "hcat: row mismatch");
        Matrix r(a.k_, a.m_, a.n_ + b.n_);
        r.paste(0, 0, a);
        r.paste(0, a.n_, b);
        return r;
    }
    static Matrix vcat(const Matrix& a, const Matrix& b) {
        require_shape(a.n_ == b.n_, "vcat: col mismatch");
        Matrix r(a.k_, a.m_ + b.m_, a.n_);
        r.paste(0, 0, a);
        r.paste(a.m_, 0, b);
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << m_ << "x" << n_ << " [";
        for (std::size_t i = 0; i < m_; ++i) {
            if (i) os << "; ";
            for (std::size_t j = 0; j < n_; ++j) {
                if (j) os << " ";
                os << k_.to_string(at(i, j));
            }
        }
        os << "]";
        return os.str();
    }

    // In-place reduced row echelon form, leftmost-nonzero pivoting, first
    // eligible row wins. Returns pivot columns in order. This fixed strategy
    // is what makes every basis and certificate in the library reproducible.
    std::vector<std::size_t> rref_in_place() {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < n_ && r < m_; ++c) {
            std::size_t sel = m_;
            for (std::size_t i = r; i < m_; ++i)
                if (!k_.is_zero(at(i, c))) { sel = i; break; }
            if (sel == m_) continue;
            if (sel != r)
                for (std::size_t j = 0; j < n_; ++j) std::swap(at(sel, j), at(r, j));
            Elt inv = k_.inv(at(r, c));
            for (std::size_t j = c; j < n_; ++j) at(r, j) = k_.mul(inv, at(r, j));
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == r || k_.is_zero(at(i, c))) continue;
                Elt f = at(i, c);
                for (std::size_t j = c; j < n_; ++j)
                    at(i, j) = k_.sub(at(i, j), k_.mul(f, at(r, j)));
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

private:
    F k_;
    std::size_t m_, n_;
    std::vector<Elt> a_;
};

template <class F>
std::size_t rank(const Matrix<F>& a) {
    Matrix<F> w = a;
    return w.rref_in_place().size();
}

// Solve A x = b; free variables are set to zero. Column vectors.
template <class F>
std::optional<Matrix<F>> solve_linear(const Matrix<F>& a, const Matrix<F>& b) {
    require_shape(a.rows() == b.rows() && b.cols() == 1, "solve: shape mismatch");
    Matrix<F> w = Matrix<F>::hcat(a, b);
    auto piv = w.rref_in_place();
    if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
    Matrix<F> x(a.field(), a.cols(), 1);
    for (std::size_t r = 0; r < piv.size(); ++r) x.at(piv[r], 0) = w.at(r, a.cols());
    return x;
}

// Kernel basis in standard form: one vector per free column (ascending), with
// a 1 in the free position. Returned as the columns of a cols(a) x dim matrix.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& a) {
    Matrix<F> w = a;
    auto piv = w.rref_in_place();
    const F& k = a.field();
    std::vector<bool> is_piv(a.cols(), false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    Matrix<F> ker(k, a.cols(), free_cols.size());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        std::size_t f = free_cols[j];
        ker.at(f, j) = k.one();
        for (std::size_t r = 0; r < piv.size(); ++r)
            ker.at(piv[r], j) = k.neg(w.at(r, f));
    }
    return ker;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& a) {
    require_shape(a.rows() == a.cols(), "inverse: not square");
    std::size_t n = a.rows();
    Matrix<F> w = Matrix<F>::hcat(a, Matrix<F>::identity(a.field(), n));
    auto piv = w.rref_in_place();
    // singular input leaks pivots into the identity block
    if (piv.size() != n || (n && piv.back() >= n)) return std::nullopt;
    return w.block(0, n, n, n);
}

// Solve B C = M columnwise; absent if some column is outside the span.
template <class F>
std::optional<Matrix<F>> express_in(const Matrix<F>& B, const Matrix<F>& M) {
    require_shape(B.rows() == M.rows(), "express_in: shape mismatch");
    Matrix<F> C(B.field(), B.cols(), M.cols());
    for (std::size_t j = 0; j < M.cols(); ++j) {
        auto x = solve_linear(B, M.col(j));
        if (!x) return std::nullopt;
        C.paste(0, j, *x);
    }
    return C;
}

// Basis of the column space: the pivot columns of `a`, leftmost first.
template <class F>
Matrix<F> column_basis(const Matrix<F>& a) {
    Matrix<F> w = a;
    auto piv = w.rref_in_place();
    Matrix<F> b(a.field(), a.rows(), piv.size());
    for (std::size_t j = 0; j < piv.size(); ++j) b.paste(0, j, a.col(piv[j]));
    return b;
}

// Cohomology of a two-step pair d_in : U -> V, d_out : V -> W with
// d_out d_in = 0. Representatives are chosen deterministically: kernel basis
// columns accepted greedily (leftmost first) past the image of d_in.
template <class F>
class Cohomology {
public:
    Cohomology(const Matrix<F>& d_in, const Matrix<F>& d_out)
        : d_in_(d_in), reps_(d_in.field(), d_in.rows(), 0) {
        require_shape(d_in.rows() == d_out.cols(), "cohomology: pair shape mismatch");
        require_contract((d_out * d_in).is_zero(), "cohomology: d_out d_in != 0");
        Matrix<F> ker = kernel_basis(d_out);
        Matrix<F> w = Matrix<F>::hcat(d_in, ker);
        auto piv = w.rref_in_place();
        std::vector<std::size_t> chosen;
        for (auto c : piv)
            if (c >= d_in.cols()) chosen.push_back(c - d_in.cols());
        Matrix<F> reps(d_in.field(), d_in.rows(), chosen.size());
        for (std::size_t j = 0; j < chosen.size(); ++j)
            reps.paste(0, j, ker.col(chosen[j]));
        reps_ = reps;
    }

    std::size_t dim() const { return reps_.cols(); }
    const Matrix<F>& reps() const { return reps_; }
    Matrix<F> rep(std::size_t j) const { return reps_.col(j); }

    // Write a cocycle z as reps * c + d_in * w; returns (c, w).
    std::pair<Matrix<F>, Matrix<F>> decompose(const Matrix<F>& z) const {
        Matrix<F> sys = Matrix<F>::hcat(reps_, d_in_);
        auto sol = solve_linear(sys, z);
        require_contract(sol.has_value(), "cohomology decompose: not a cocycle");
        return {sol->block(0, 0, reps_.cols(), 1),
                sol->block(reps_.cols(), 0, d_in_.cols(), 1)};
    }

private:
    Matrix<F> d_in_;
    Matrix<F> reps_;
};

} // namespace twistlab
