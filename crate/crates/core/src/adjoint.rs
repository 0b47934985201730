//! The adjoint anti-involution on mode operators, realized as a finite
//! rewriting of mode words that act on model elements.

use crate::element::{BlockKey, Element};
use crate::error::{Result, VaError};
use crate::model::{
    block_of, d, delta, divided_dstar, dstar, operator_matrix, ord, product,
    product_vanishing_bound, BlockBasis, Elem, VertexAlgebra,
};
use crate::scalar::{binomial, sign, Scalar, StateKey};
use crate::verify::{states_within, Report, Sampler, VerifyOptions};

/// `Σ c_j a_j(m_j)` as `(c_j, a_j, m_j)` triples.
pub type ModeSum<S, T> = Vec<(T, Element<S, T>, i64)>;

/// One operator factor of a mode word.
#[derive(Clone, Debug, PartialEq)]
pub enum ModeFactor<S: StateKey, T: Scalar> {
    /// `Σ c_j a_j(m_j)` with each `a_j` homogeneous.
    Sum(ModeSum<S, T>),
    D,
    Dstar,
    Delta,
}

/// A product of factors; the last factor acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeWord<S: StateKey, T: Scalar> {
    pub factors: Vec<ModeFactor<S, T>>,
}

impl<S: StateKey, T: Scalar> ModeWord<S, T> {
    pub fn empty() -> Self {
        ModeWord { factors: Vec::new() }
    }

    pub fn mode(a: Element<S, T>, m: i64) -> Self {
        ModeWord { factors: vec![ModeFactor::Sum(vec![(T::one(), a, m)])] }
    }

    pub fn single(f: ModeFactor<S, T>) -> Self {
        ModeWord { factors: vec![f] }
    }

    /// `self · other`: `other` acts first.
    pub fn then_after(mut self, other: &Self) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Which sign the adjoint uses; `Corrupted` flips it and exists only as a
/// negative control for the verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjointSign {
    Standard,
    Corrupted,
}

fn adjoint_terms<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    m: i64,
    convention: AdjointSign,
) -> Result<ModeSum<M::State, T>> {
    if a.is_zero() {
        return Ok(Vec::new());
    }
    let deg = block_of(model, a)?.degree;
    let k = ord(model, a)?;
    let mut s = sign::<T>(deg);
    if convention == AdjointSign::Corrupted {
        s = -s;
    }
    let mut out = Vec::new();
    for i in 0..=k {
        let ai = divided_dstar(model, i, a)?;
        if !ai.is_zero() {
            out.push((s.clone(), ai, 2 * deg - m - 2 - i as i64));
        }
    }
    Ok(out)
}

/// `a(m)* = (-1)^d Σ_{i=0}^{ord a} (D*^{(i)} a)(2d - m - 2 - i)` for `a`
/// homogeneous of degree `d`. Fails with `NotHomogeneous` on mixed input.
pub fn adjoint_mode<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    m: i64,
) -> Result<ModeWord<M::State, T>> {
    adjoint_mode_with(model, a, m, AdjointSign::Standard)
}

pub fn adjoint_mode_with<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    m: i64,
    convention: AdjointSign,
) -> Result<ModeWord<M::State, T>> {
    Ok(ModeWord::single(ModeFactor::Sum(adjoint_terms(model, a, m, convention)?)))
}

fn adjoint_factor<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    f: &ModeFactor<M::State, T>,
    convention: AdjointSign,
) -> Result<ModeFactor<M::State, T>> {
    Ok(match f {
        ModeFactor::D => ModeFactor::Dstar,
        ModeFactor::Dstar => ModeFactor::D,
        ModeFactor::Delta => ModeFactor::Delta,
        ModeFactor::Sum(terms) => {
            let mut out = Vec::new();
            for (c, a, m) in terms {
                for (c2, b, n) in adjoint_terms(model, a, *m, convention)? {
                    out.push((c.clone() * c2, b, n));
                }
            }
            ModeFactor::Sum(out)
        }
    })
}

/// Reverses the word and replaces each factor by its adjoint.
pub fn adjoint_word<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    w: &ModeWord<M::State, T>,
) -> Result<ModeWord<M::State, T>> {
    adjoint_word_with(model, w, AdjointSign::Standard)
}

pub fn adjoint_word_with<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    w: &ModeWord<M::State, T>,
    convention: AdjointSign,
) -> Result<ModeWord<M::State, T>> {
    let factors = w
        .factors
        .iter()
        .rev()
        .map(|f| adjoint_factor(model, f, convention))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModeWord { factors })
}

/// Evaluates a word on an element.
pub fn apply_word<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    w: &ModeWord<M::State, T>,
    x: &Elem<M, T>,
) -> Result<Elem<M, T>> {
    let mut cur = x.clone();
    for f in w.factors.iter().rev() {
        cur = match f {
            ModeFactor::D => d(model, &cur)?,
            ModeFactor::Dstar => dstar(model, &cur)?,
            ModeFactor::Delta => delta(model, &cur),
            ModeFactor::Sum(terms) => {
                let mut out = Element::zero();
                for (c, a, m) in terms {
                    out.add_scaled(&product(model, a, *m, &cur)?, c);
                }
                out
            }
        };
    }
    Ok(cur)
}

/// `a(m)* x`.
pub fn apply_adjoint<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    m: i64,
    x: &Elem<M, T>,
) -> Result<Elem<M, T>> {
    apply_word(model, &adjoint_mode(model, a, m)?, x)
}

/// Checks `a(m)** = a(m)`, `D** = D` and `δ** = δ` on every basis state
/// within the cutoff.
pub fn verify_involution<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, opts: VerifyOptions) -> Report {
    let mut rep = Report::new("adjoint-involution", model.describe()).with_seed(opts.seed);
    let states = states_within(model, opts.cutoff);
    let elems: Vec<Elem<M, T>> = states.iter().cloned().map(Element::basis).collect();
    for f in [ModeFactor::D, ModeFactor::Dstar, ModeFactor::Delta] {
        let w = ModeWord::single(f);
        let r = adjoint_word(model, &w).and_then(|w1| adjoint_word(model, &w1));
        if let Some(ww) = rep.check_result(r, || "operator duals".into()) {
            rep.check(ww == w, || format!("{:?}** != itself", w.factors[0]));
        }
    }
    let run = |rep: &mut Report, a: &Elem<M, T>, m: i64, x: &Elem<M, T>| {
        let r = (|| -> Result<(Elem<M, T>, Elem<M, T>)> {
            let w = ModeWord::mode(a.clone(), m);
            let ww = adjoint_word(model, &adjoint_word(model, &w)?)?;
            Ok((apply_word(model, &ww, x)?, product(model, a, m, x)?))
        })();
        if let Some((lhs, rhs)) = rep.check_result(r, || format!("a({m})** evaluation")) {
            rep.check(lhs == rhs, || format!("a({m})** != a({m}) for a = {:?}, on {:?}", a, x));
        }
    };
    for a in &elems {
        for m in -opts.window..=opts.window {
            for x in &elems {
                run(&mut rep, a, m, x);
            }
        }
    }
    let mut sampler = Sampler::new(model, opts.cutoff, opts.seed);
    if !sampler.is_empty() {
        for _ in 0..opts.samples {
            let a = sampler.nonzero_element();
            let x = sampler.element();
            let m = sampler.mode(opts.window + 1);
            run(&mut rep, &a, m, &x);
        }
    }
    rep
}

#[allow(clippy::too_many_arguments)]
fn antihom_pair<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    a: &Elem<M, T>,
    b: &Elem<M, T>,
    m: i64,
    n: i64,
    x: &Elem<M, T>,
    convention: AdjointSign,
    rep: &mut Report,
) -> Result<()> {
    let adj = |e: &Elem<M, T>, k: i64| adjoint_mode_with(model, e, k, convention);
    let bn = adj(b, n)?;
    let am = adj(a, m)?;
    let lhs = apply_word(model, &bn, &apply_word(model, &am, x)?)?
        .minus(&apply_word(model, &am, &apply_word(model, &bn, x)?)?);
    let mut rhs = Element::zero();
    if let Some(top) = product_vanishing_bound(model, a, b) {
        for s in 0..=top.max(-1) {
            let ab = product(model, a, s, b)?;
            if !ab.is_zero() {
                rhs.add_scaled(&apply_word(model, &adj(&ab, m + n - s)?, x)?, &binomial::<T>(m, s));
            }
        }
    }
    rep.check(lhs == rhs, || format!("[b({n})*, a({m})*] identity fails: a = {a:?}, b = {b:?}, x = {x:?}"));

    // [a(m)*, D*] = -m a(m-1)*
    let commutator = apply_word(model, &am, &dstar(model, x)?)?.minus(&dstar(model, &apply_word(model, &am, x)?)?);
    let rhs = apply_word(model, &adj(a, m - 1)?, x)?.scaled(&T::from_int(-m));
    rep.check(commutator == rhs, || format!("[a({m})*, D*] != -m a({})* for a = {a:?}, x = {x:?}", m - 1));
    Ok(())
}

/// Both anti-homomorphism identities,
/// `[b(n)*, a(m)*] = Σ_s C(m,s) (a(s)b)(m+n-s)*` and `[a(m)*, D*] = -m a(m-1)*`,
/// as operator equalities on block bases and random elements.
pub fn verify_antihom<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, opts: VerifyOptions) -> Report {
    verify_antihom_with(model, opts, AdjointSign::Standard)
}

pub fn verify_antihom_with<T: Scalar, M: VertexAlgebra<T> + ?Sized>(
    model: &M,
    opts: VerifyOptions,
    convention: AdjointSign,
) -> Report {
    let suite = match convention {
        AdjointSign::Standard => "adjoint-antihom",
        AdjointSign::Corrupted => "adjoint-antihom (corrupted sign)",
    };
    let mut rep = Report::new(suite, model.describe()).with_seed(opts.seed);
    let elems: Vec<Elem<M, T>> = states_within(model, opts.cutoff).into_iter().map(Element::basis).collect();
    let gens = model.generators();
    // Operator identities: a, b over the generators and the basis of the
    // lowest blocks; x over every basis state.
    let mut ops: Vec<Elem<M, T>> = gens.clone();
    for e in &elems {
        if !ops.contains(e) && block_of(model, e).map(|k| k.degree <= 1).unwrap_or(false) {
            ops.push(e.clone());
        }
    }
    let w = opts.window;
    for a in &ops {
        for b in &ops {
            for m in -w..=w {
                for n in -w..=w {
                    for x in &elems {
                        let r = antihom_pair(model, a, b, m, n, x, convention, &mut rep);
                        rep.check_result(r, || "antihom evaluation".into());
                    }
                }
            }
        }
    }
    let mut sampler = Sampler::new(model, opts.cutoff, opts.seed);
    if !sampler.is_empty() {
        for _ in 0..opts.samples {
            let a = sampler.nonzero_element();
            let b = sampler.nonzero_element();
            let x = sampler.element();
            let (m, n) = (sampler.mode(w + 1), sampler.mode(w + 1));
            let r = antihom_pair(model, &a, &b, m, n, &x, convention, &mut rep);
            rep.check_result(r, || "antihom evaluation (random)".into());
        }
    }
    rep
}

/// Whether `x` lies in `D* A` of its block.
pub fn in_dstar_image<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, x: &Elem<M, T>) -> Result<bool> {
    if x.is_zero() {
        return Ok(true);
    }
    let key = block_of(model, x)?;
    let target = BlockBasis::of(model, &key);
    let source_key = BlockKey::new(key.weight.clone(), key.degree + 1);
    if !model.basis_complete(&source_key) {
        return Err(VaError::cutoff("D* preimage block", &source_key));
    }
    let source = BlockBasis::of(model, &source_key);
    let mat = operator_matrix(&source, &target, |s| model.dstar_state(s))?;
    Ok(mat.solve(&target.coords(x)?).is_some())
}

/// For basis `a, b` within the cutoff: `a(m)* b ∈ D*A` whenever `m >= 0` or
/// `m < -ord b - 1`, over every `m` whose result block is nonzero and of
/// degree at most the cutoff.
pub fn verify_adjoint_dstar_image<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, cutoff: i64) -> Report {
    let mut rep = Report::new("adjoint-dstar-image", model.describe());
    let states = states_within(model, cutoff);
    for sa in &states {
        let a: Elem<M, T> = Element::basis(sa.clone());
        let ka = model.key_of(sa);
        for sb in &states {
            let b: Elem<M, T> = Element::basis(sb.clone());
            let kb = model.key_of(sb);
            let r = (|| -> Result<()> {
                let k = ord(model, &b)? as i64;
                let w = ka.weight.add(&kb.weight);
                let Some(lo) = model.min_degree(&w) else { return Ok(()) };
                // deg a(m)*b = deg b + m + 1 - deg a.
                let m_of = |deg: i64| deg - kb.degree - 1 + ka.degree;
                let low: Vec<i64> = (m_of(lo)..=(-k - 2).min(m_of(cutoff))).collect();
                let high: Vec<i64> = (0.max(m_of(lo))..=m_of(cutoff)).collect();
                for m in low.into_iter().chain(high) {
                    let x = apply_adjoint(model, &a, m, &b)?;
                    let ok = in_dstar_image(model, &x)?;
                    rep.check(ok, || {
                        format!("a({m})* b not in D*A for a = {}, b = {}", model.show_state(sa), model.show_state(sb))
                    });
                }
                Ok(())
            })();
            rep.check_result(r, || "D*-image evaluation".into());
        }
    }
    rep
}
