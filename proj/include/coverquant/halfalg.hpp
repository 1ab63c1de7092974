#pragma once

// The half-quantum covering group f: the Z[I]-graded algebra on generators
// theta_i modulo the super Serre relations
//
//   sum_k (-1)^k pi^{C(k,2)p(i)+k p(i)p(j)} [b_ij choose k]_{v_i,pi_i}
//         theta_i^{b_ij-k} theta_j theta_i^k = 0   (i != j, b_ij = 1-a_ij).
//
// Each weight component f_nu is realized as the span of all weight-nu words
// in the generators modulo the two-sided span of the Serre elements; a
// deterministic basis of surviving words is chosen by row reduction (per
// idempotent component, with the pivot sets asserted equal), and every word
// carries a cached expansion in that basis.  This makes multiplication a
// concatenation plus table lookup.
//
// The module also carries the divided powers, the bar/dagger maps
// (coefficientwise on theta-words), the differentials r_i and _ir with their
// twisted Leibniz rules, and the bilinear form determined by
//   (1,1) = 1,  (theta_i x, y) = (x, _ir(y)) / (1 - pi_i v_i^2).

#include <cstdint>
#include <map>

#include "coverquant/rootdatum.hpp"

namespace coverquant {

// A word in the generators, e.g. {0,1,0} = theta_0 theta_1 theta_0.
using Word = std::vector<uint8_t>;

// Element of the free algebra: formal sum of coefficient * word.
struct WordCombo {
    std::vector<std::pair<PiScalar, Word>> terms;
};

// Basis data for one weight component of f.
struct GradedComponent {
    NuVec nu;
    std::vector<Word> words;          // all words of weight nu, lex order
    std::map<Word, int> word_index;   // inverse of `words`
    std::vector<int> basis;           // indices into `words` of basis words
    // expand[w][k]: coefficient of basis word k in the image of word w.
    std::vector<std::vector<PiScalar>> expand;

    int dim() const { return static_cast<int>(basis.size()); }
    const Word& basis_word(int k) const { return words[basis[k]]; }
};

// Homogeneous-by-weight element of f: per-weight coordinate vectors.
struct FElem {
    std::map<NuVec, std::vector<PiScalar>> comps;

    bool is_zero() const;
    // The unique weight of a homogeneous nonzero element; throws otherwise.
    NuVec weight() const;
    FElem operator+(const FElem& o) const;
    FElem operator-(const FElem& o) const;
    FElem operator-() const;
    FElem operator*(const PiScalar& c) const;
    bool operator==(const FElem& o) const;

    void add_in(const NuVec& nu, int k, const PiScalar& c);
    void prune();
};

class HalfAlg {
public:
    HalfAlg(RootDatum rd, int height_bound = 8)
        : rd_(std::move(rd)), height_bound_(height_bound) {}

    const RootDatum& datum() const { return rd_; }
    int height_bound() const { return height_bound_; }

    const GradedComponent& component(const NuVec& nu) const;
    int dim_at(const NuVec& nu) const { return component(nu).dim(); }

    NuVec word_weight(const Word& w) const;

    FElem one() const;
    FElem theta(int i) const;
    // theta_i^{(n)} = theta_i^n / [n]!
    FElem divided_power(int i, int n) const;
    // Expand a free-algebra element in the quotient bases.
    FElem from_combo(const WordCombo& wc) const;
    FElem from_word(const Word& w) const;

    FElem multiply(const FElem& x, const FElem& y) const;
    FElem bar_f(const FElem& x) const;
    FElem dagger_f(const FElem& x) const;

    // _ir and r_i: differentials lowering the weight by i.
    FElem diff_left(int i, const FElem& x) const;
    FElem diff_right(int i, const FElem& x) const;

    // The bilinear form on f (zero across different weights).
    PiScalar form_f(const FElem& x, const FElem& y) const;
    // Gram matrix of a weight component in its basis.
    const std::vector<std::vector<PiScalar>>& gram(const NuVec& nu) const;

    // The super Serre element for (i, j), i != j, as a free-algebra element.
    WordCombo serre_element(int i, int j) const;

    // c_i = 1/(1 - pi_i v_i^2): the form's one-step constant.
    PiScalar form_const(int i) const;

private:
    void build_component(const NuVec& nu) const;

    RootDatum rd_;
    int height_bound_;
    mutable std::map<NuVec, GradedComponent> comps_;
    mutable std::map<NuVec, std::vector<std::vector<PiScalar>>> gram_;
    mutable std::map<std::pair<int, Word>, WordCombo> diff_left_cache_;
    mutable std::map<std::pair<int, Word>, WordCombo> diff_right_cache_;

    WordCombo diff_left_word(int i, const Word& w) const;
    WordCombo diff_right_word(int i, const Word& w) const;
    // Add c * (expansion of word w) into r.
    void wc_scaled_add(FElem& r, const PiScalar& c, const Word& w) const;
    // The basis element with index l of the weight-nu component.
    static FElem basis_elem(const GradedComponent& gc, const NuVec& nu, int l);
};

// Row reduction of a list of rows over the componentwise fraction field:
// both eps-components are reduced independently with the same greedy pivot
// strategy (largest remaining column first in `col_order`); the pivot sets
// must agree or the routine throws.  Returns, for each column, either -1
// (basis column) or the expansion row index; `rref_rows` receives the fully
// reduced rows (pivot entry 1, support only on basis columns otherwise).
struct RrefResult {
    std::vector<int> pivot_of_col;                  // -1 if basis column
    std::vector<int> basis_cols;                    // ascending order
    std::vector<std::vector<PiScalar>> rref_rows;   // one per pivot
    std::vector<int> pivot_col_of_row;
};
RrefResult rref_pi(std::vector<std::vector<PiScalar>> rows,
                   const std::vector<int>& col_order);

}  // namespace coverquant
