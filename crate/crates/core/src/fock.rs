//! Fock space `S(h^-) ⊗ k[Λ]` with exponential vertex operators.
//!
//! States are monomials `h_{i1}(-n1)…h_{ik}(-nk) e^α` in the lattice basis
//! directions. Products of exponentials use the normal-ordered exponential
//! expansion; products of general states are reduced to them by peeling
//! one Heisenberg mode at a time with the associativity identity
//!
//! ```text
//! (h(-n)w)(m)c = Σ_{j≥0} C(n+j-1, j) [ h(-n-j) w(m+j)c − (-1)^n w(m-n-j) h(j)c ]
//! ```
//!
//! Both sums are finite: `w(p)c` vanishes once `p` exceeds the degree bound,
//! and `h(j)c` vanishes once `j` exceeds the Fock degree of `c`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use parking_lot::Mutex;

use crate::element::{BlockKey, Element, Weight};
use crate::error::Result;
use crate::model::{Cutoffs, VertexAlgebra};
use crate::scalar::{binomial, inv_factorial, sign, Scalar};

/// One creation operator `h_color(-n)`, `n >= 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub n: u32,
    pub color: usize,
}

/// Basis monomial. `modes` is sorted in decreasing `(n, color)` order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    pub alpha: Vec<i64>,
    pub modes: Vec<Mode>,
}

impl FockState {
    pub fn vacuum(rank: usize) -> Self {
        FockState { alpha: vec![0; rank], modes: Vec::new() }
    }

    pub fn exponential(alpha: Vec<i64>) -> Self {
        FockState { alpha, modes: Vec::new() }
    }

    /// Heisenberg monomial on the vacuum from `(n, color)` pairs in any order.
    pub fn monomial(rank: usize, modes: &[(u32, usize)]) -> Self {
        let mut s = Self::vacuum(rank);
        for &(n, color) in modes {
            s = s.with_mode(Mode { n, color });
        }
        s
    }

    pub fn fock_degree(&self) -> i64 {
        self.modes.iter().map(|m| m.n as i64).sum()
    }

    pub fn with_mode(&self, m: Mode) -> Self {
        let mut modes = self.modes.clone();
        let pos = modes.iter().position(|x| *x < m).unwrap_or(modes.len());
        modes.insert(pos, m);
        FockState { alpha: self.alpha.clone(), modes }
    }

    pub fn without(&self, idx: usize) -> Self {
        let mut modes = self.modes.clone();
        modes.remove(idx);
        FockState { alpha: self.alpha.clone(), modes }
    }

    /// Partition of a single-color state, largest part first.
    pub fn parts(&self) -> Vec<u32> {
        self.modes.iter().map(|m| m.n).collect()
    }
}

impl fmt::Debug for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let modes: Vec<String> = self
            .modes
            .iter()
            .map(|m| format!("h{}(-{})", m.color, m.n))
            .collect();
        let mut s = modes.join("");
        if self.alpha.iter().any(|&x| x != 0) {
            s.push_str(&format!("e^{:?}", self.alpha));
        } else if s.is_empty() {
            s.push('1');
        }
        write!(f, "{s}")
    }
}

pub type FockElement<T> = Element<FockState, T>;

type MemoKey = (FockState, i64, FockState);

/// Heisenberg algebra of rank `r` with integer Gram matrix, tensored with the
/// group algebra of the lattice `Z^r` twisted by a sign cocycle.
pub struct FockEngine<T: Scalar> {
    gram: Vec<Vec<i64>>,
    /// `eps_table[i][j]` = ε(g_i, g_j) ∈ {1, -1}.
    eps_table: Vec<Vec<i64>>,
    /// Optional single-pair override of ε, used only for negative controls.
    eps_override: Option<(Vec<i64>, Vec<i64>)>,
    memo: Mutex<HashMap<MemoKey, FockElement<T>>>,
}

impl<T: Scalar> FockEngine<T> {
    /// Engine with the standard cocycle `ε(g_i,g_j) = 1` for `i <= j` and
    /// `(-1)^{<g_i,g_j>}` for `i > j`.
    pub fn new(gram: Vec<Vec<i64>>) -> Self {
        let r = gram.len();
        let eps_table = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i <= j || gram[i][j].rem_euclid(2) == 0 { 1 } else { -1 })
                    .collect()
            })
            .collect();
        FockEngine { gram, eps_table, eps_override: None, memo: Mutex::new(HashMap::new()) }
    }

    /// Flips the sign of ε at exactly one ordered pair of lattice vectors,
    /// breaking the cocycle property.
    pub fn with_corrupted_pair(mut self, alpha: Vec<i64>, beta: Vec<i64>) -> Self {
        self.eps_override = Some((alpha, beta));
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                s += ai * bj * self.gram[i][j];
            }
        }
        s
    }

    /// `ε(α, β)`, bimultiplicative in both arguments.
    pub fn cocycle(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut exp = 0i64;
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if self.eps_table[i][j] < 0 {
                    exp += ai * bj;
                }
            }
        }
        let base = if exp.rem_euclid(2) == 0 { 1 } else { -1 };
        match &self.eps_override {
            Some((x, y)) if x.as_slice() == a && y.as_slice() == b => -base,
            _ => base,
        }
    }

    /// `½<α,α>`, the degree of `e^α`.
    pub fn exp_degree(&self, alpha: &[i64]) -> i64 {
        let n = self.pairing(alpha, alpha);
        debug_assert!(n % 2 == 0, "odd norm in exponential");
        n.div_euclid(2)
    }

    pub fn degree(&self, s: &FockState) -> i64 {
        self.exp_degree(&s.alpha) + s.fock_degree()
    }

    pub fn weight(&self, s: &FockState) -> Weight {
        Weight(s.alpha.clone())
    }

    /// `h_color(-n)` applied to an element, `n >= 1`.
    pub fn create(&self, color: usize, n: u32, x: &FockElement<T>) -> FockElement<T> {
        Element::from_terms(x.iter().map(|(s, c)| (s.with_mode(Mode { n, color }), c.clone())))
    }

    /// `h_color(n)` on a single state, any integer `n`.
    pub fn mode_on_state(&self, color: usize, n: i64, s: &FockState) -> FockElement<T> {
        match n.cmp(&0) {
            std::cmp::Ordering::Less => Element::basis(s.with_mode(Mode { n: (-n) as u32, color })),
            std::cmp::Ordering::Equal => {
                let ev: i64 = (0..self.rank()).map(|j| self.gram[color][j] * s.alpha[j]).sum();
                Element::term(s.clone(), T::from_int(ev))
            }
            std::cmp::Ordering::Greater => {
                let mut out = Element::zero();
                for (idx, m) in s.modes.iter().enumerate() {
                    if m.n as i64 == n {
                        let g = self.gram[color][m.color];
                        if g != 0 {
                            out.add_term(s.without(idx), T::from_int(n * g));
                        }
                    }
                }
                out
            }
        }
    }

    pub fn mode(&self, color: usize, n: i64, x: &FockElement<T>) -> FockElement<T> {
        let mut out = Element::zero();
        for (s, c) in x.iter() {
            out.add_scaled(&self.mode_on_state(color, n, s), c);
        }
        out
    }

    /// `α(n) = Σ α_i h_i(n)` on an element.
    fn lattice_mode(&self, alpha: &[i64], n: i64, x: &FockElement<T>) -> FockElement<T> {
        let mut out = Element::zero();
        for (i, &ai) in alpha.iter().enumerate() {
            if ai != 0 {
                out.add_scaled(&self.mode(i, n, x), &T::from_int(ai));
            }
        }
        out
    }

    /// Translation operator, a derivation with `[D, h(-n)] = n h(-n-1)` and
    /// `D e^α = α(-1) e^α`.
    pub fn d_state(&self, s: &FockState) -> FockElement<T> {
        let mut out = Element::zero();
        for (idx, m) in s.modes.iter().enumerate() {
            let rest = s.without(idx);
            out.add_term(rest.with_mode(Mode { n: m.n + 1, color: m.color }), T::from_int(m.n as i64));
        }
        for (i, &ai) in s.alpha.iter().enumerate() {
            if ai != 0 {
                out.add_term(s.with_mode(Mode { n: 1, color: i }), T::from_int(ai));
            }
        }
        out
    }

    /// `e^α(m) c` via
    /// `Y(e^α,z) = ε(α,·) E^-(α,z) E^+(α,z) e^α z^{α(0)}`.
    fn exp_product(&self, alpha: &[i64], m: i64, c: &FockState) -> FockElement<T> {
        if alpha.iter().all(|&x| x == 0) {
            return if m == -1 { Element::basis(c.clone()) } else { Element::zero() };
        }
        let shift = self.pairing(alpha, &c.alpha);
        let eps = self.cocycle(alpha, &c.alpha);
        let new_alpha: Vec<i64> = alpha.iter().zip(&c.alpha).map(|(a, b)| a + b).collect();
        let target = FockState { alpha: new_alpha, modes: c.modes.clone() };

        // Annihilation part: exp(-Σ α(n) z^{-n} / n), keyed by the power of z^{-1}.
        let mut ann: BTreeMap<i64, FockElement<T>> = BTreeMap::new();
        ann.insert(0, Element::basis(target));
        let fd = c.fock_degree();
        for n in 1..=fd {
            let mut next: BTreeMap<i64, FockElement<T>> = BTreeMap::new();
            for (q, x) in &ann {
                let mut power = x.clone();
                let mut k = 0u32;
                loop {
                    let coeff = sign::<T>(k as i64) * inv_factorial::<T>(k)
                        / pow_int::<T>(n, k);
                    next.entry(q + n * k as i64).or_default().add_scaled(&power, &coeff);
                    power = self.lattice_mode(alpha, n, &power);
                    if power.is_zero() {
                        break;
                    }
                    k += 1;
                }
            }
            ann = next;
        }

        // Creation part: coefficient of z^p in exp(Σ α(-n) z^n / n).
        let mut out = Element::zero();
        for (q, x) in &ann {
            if x.is_zero() {
                continue;
            }
            let p = -m - 1 - shift + q;
            if p < 0 {
                continue;
            }
            out.add_assign(&self.schur_creation(alpha, p as u32, x));
        }
        if eps < 0 {
            out = out.neg();
        }
        out
    }

    /// `Σ_{λ ⊢ p} Π_n α(-n)^{k_n} / (n^{k_n} k_n!)` applied to `x`.
    fn schur_creation(&self, alpha: &[i64], p: u32, x: &FockElement<T>) -> FockElement<T> {
        let mut out = Element::zero();
        // Iterate over partitions as multiplicity vectors via recursion on part size.
        fn rec<T: Scalar>(
            eng: &FockEngine<T>,
            alpha: &[i64],
            remaining: u32,
            max_part: u32,
            x: FockElement<T>,
            out: &mut FockElement<T>,
        ) {
            if remaining == 0 {
                out.add_assign(&x);
                return;
            }
            for part in (1..=max_part.min(remaining)).rev() {
                let mut y = x.clone();
                for k in 1..=remaining / part {
                    y = eng.lattice_mode(alpha, -(part as i64), &y);
                    let scale = inv_factorial::<T>(k) / pow_int::<T>(part as i64, k);
                    rec(eng, alpha, remaining - k * part, part - 1, y.scaled(&scale), out);
                }
            }
        }
        rec(self, alpha, p, p, x.clone(), &mut out);
        out
    }

    /// `u(m)v` on basis states.
    pub fn product(&self, u: &FockState, m: i64, v: &FockState) -> FockElement<T> {
        let key = (u.clone(), m, v.clone());
        if let Some(hit) = self.memo.lock().get(&key) {
            return hit.clone();
        }
        let result = self.product_uncached(u, m, v);
        self.memo.lock().insert(key, result.clone());
        result
    }

    fn vanishing_bound(&self, w: &FockState, v: &FockState) -> i64 {
        let sum: Vec<i64> = w.alpha.iter().zip(&v.alpha).map(|(a, b)| a + b).collect();
        self.degree(w) + self.degree(v) - 1 - self.exp_degree(&sum)
    }

    fn product_uncached(&self, u: &FockState, m: i64, v: &FockState) -> FockElement<T> {
        if m > self.vanishing_bound(u, v) {
            return Element::zero();
        }
        if u.modes.is_empty() {
            return self.exp_product(&u.alpha, m, v);
        }
        let Mode { n, color } = u.modes[0];
        let n = n as i64;
        let w = u.without(0);
        let mut out = Element::zero();

        // Σ_j C(n+j-1, j) h(-n-j) (w(m+j) v)
        let top = self.vanishing_bound(&w, v);
        let mut j = 0i64;
        while m + j <= top {
            let inner = self.product(&w, m + j, v);
            if !inner.is_zero() {
                let c = binomial::<T>(n + j - 1, j);
                out.add_scaled(&self.create(color, (n + j) as u32, &inner), &c);
            }
            j += 1;
        }

        // -(-1)^n Σ_j C(n+j-1, j) w(m-n-j) (h(j) v)
        let outer_sign = -sign::<T>(n);
        for j in 0..=v.fock_degree() {
            let hv = self.mode_on_state(color, j, v);
            if hv.is_zero() {
                continue;
            }
            let c = outer_sign.clone() * binomial::<T>(n + j - 1, j);
            for (s, coeff) in hv.iter() {
                let inner = self.product(&w, m - n - j, s);
                out.add_scaled(&inner, &(c.clone() * coeff.clone()));
            }
        }
        out
    }

    pub fn product_elements(&self, a: &FockElement<T>, m: i64, b: &FockElement<T>) -> FockElement<T> {
        let mut out = Element::zero();
        for (sa, ca) in a.iter() {
            for (sb, cb) in b.iter() {
                out.add_scaled(&self.product(sa, m, sb), &(ca.clone() * cb.clone()));
            }
        }
        out
    }

    /// All monomials of a given Fock degree on `e^α`, in decreasing mode order.
    pub fn monomials(&self, alpha: &[i64], fock_degree: i64) -> Vec<FockState> {
        let mut out = Vec::new();
        if fock_degree < 0 {
            return out;
        }
        let colors = self.rank();
        let top = Mode { n: fock_degree as u32, color: colors.saturating_sub(1) };
        let mut current = Vec::new();
        colored_partitions(fock_degree as u32, top, colors, &mut current, &mut |modes| {
            out.push(FockState { alpha: alpha.to_vec(), modes: modes.to_vec() })
        });
        out
    }
}

/// Which family a [`FockModel`] was built from.
#[derive(Clone, Debug)]
pub enum FockKind<T> {
    /// Rank-one Heisenberg algebra with `D* = ω_k(2)`.
    Heisenberg { k: T },
    /// Lattice algebra `V_Λ` with `<a,b> = -N(a,b)` and `D* = ω(2)`.
    Lattice { generators: Vec<String>, locality: Vec<Vec<i64>> },
}

/// A vertex algebra realized on a Fock space: the Heisenberg algebra or a
/// lattice algebra. The model is exact and infinite; cutoffs only bound
/// block enumeration.
pub struct FockModel<T: Scalar> {
    pub(crate) engine: FockEngine<T>,
    pub(crate) kind: FockKind<T>,
    pub(crate) cutoffs: Cutoffs,
    pub(crate) omega: FockElement<T>,
    pub(crate) weights: Vec<Weight>,
    pub(crate) positive_definite: bool,
}

impl<T: Scalar> FockModel<T> {
    pub fn engine(&self) -> &FockEngine<T> {
        &self.engine
    }

    pub fn kind(&self) -> &FockKind<T> {
        &self.kind
    }

    /// The Virasoro element whose mode 2 is `D*`.
    pub fn omega(&self) -> &FockElement<T> {
        &self.omega
    }

    pub fn rank(&self) -> usize {
        self.engine.rank()
    }

    fn is_lattice(&self) -> bool {
        matches!(self.kind, FockKind::Lattice { .. })
    }

    fn valid_weight(&self, w: &Weight) -> bool {
        w.rank() == self.rank() && (self.is_lattice() || w.is_zero())
    }
}

impl<T: Scalar> VertexAlgebra<T> for FockModel<T> {
    type State = FockState;

    fn describe(&self) -> String {
        match &self.kind {
            FockKind::Heisenberg { k } => format!("heisenberg(k={})", k.to_exact_string()),
            FockKind::Lattice { locality, .. } => format!("lattice(N={locality:?})"),
        }
    }

    fn cutoffs(&self) -> Cutoffs {
        self.cutoffs
    }

    fn weights(&self) -> Vec<Weight> {
        self.weights.clone()
    }

    fn min_degree(&self, w: &Weight) -> Option<i64> {
        self.valid_weight(w).then(|| self.engine.exp_degree(&w.0))
    }

    fn basis(&self, key: &BlockKey) -> Vec<FockState> {
        if !self.valid_weight(&key.weight) {
            return Vec::new();
        }
        let fd = key.degree - self.engine.exp_degree(&key.weight.0);
        self.engine.monomials(&key.weight.0, fd)
    }

    fn basis_complete(&self, _key: &BlockKey) -> bool {
        true
    }

    fn key_of(&self, s: &FockState) -> BlockKey {
        BlockKey::new(self.engine.weight(s), self.engine.degree(s))
    }

    fn unit(&self) -> FockState {
        FockState::vacuum(self.rank())
    }

    fn product_states(&self, a: &FockState, n: i64, b: &FockState) -> Result<FockElement<T>> {
        Ok(self.engine.product(a, n, b))
    }

    fn d_state(&self, a: &FockState) -> Result<FockElement<T>> {
        Ok(self.engine.d_state(a))
    }

    fn dstar_state(&self, a: &FockState) -> Result<FockElement<T>> {
        Ok(self.engine.product_elements(&self.omega, 2, &Element::basis(a.clone())))
    }

    fn generators(&self) -> Vec<FockElement<T>> {
        let r = self.rank();
        let mut out: Vec<FockElement<T>> =
            (0..r).map(|i| Element::basis(FockState::monomial(r, &[(1, i)]))).collect();
        if self.is_lattice() {
            for i in 0..r {
                let w = Weight::unit_vector(r, i);
                out.push(Element::basis(FockState::exponential(w.0.clone())));
                out.push(Element::basis(FockState::exponential(w.neg().0)));
            }
        }
        out
    }

    fn degree_zero_support(&self) -> Option<Vec<Weight>> {
        // Positive-definite even lattices have deg e^α >= 1 for α != 0.
        (!self.is_lattice() || self.positive_definite).then(|| vec![Weight::zero(self.rank())])
    }

    fn conformal_vector(&self) -> Option<FockElement<T>> {
        Some(self.omega.clone())
    }
}

fn pow_int<T: Scalar>(base: i64, k: u32) -> T {
    let mut acc = T::one();
    for _ in 0..k {
        acc = acc * T::from_int(base);
    }
    acc
}

/// Enumerates multisets of modes summing to `remaining`, each mode `<= max`,
/// emitted in decreasing order (largest first).
fn colored_partitions(
    remaining: u32,
    max: Mode,
    colors: usize,
    current: &mut Vec<Mode>,
    emit: &mut impl FnMut(&[Mode]),
) {
    if remaining == 0 {
        emit(current);
        return;
    }
    if colors == 0 {
        return;
    }
    let mut n = max.n.min(remaining);
    while n >= 1 {
        let top_color = if n == max.n { max.color } else { colors - 1 };
        for color in (0..=top_color).rev() {
            let m = Mode { n, color };
            current.push(m);
            colored_partitions(remaining - n, m, colors, current, emit);
            current.pop();
        }
        n -= 1;
    }
}
