//! Machine-readable reports behind the command-line tool.
//!
//! Every report is built from ordered maps and sorted block keys, so the
//! same model and seed always serialize to the same bytes.

use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::adjoint::{verify_antihom, verify_involution, verify_adjoint_dstar_image};
use crate::config::{FunctionalSource, ModelVisitor};
use crate::element::{BlockKey, Weight};
use crate::error::{Result, VaError};
use crate::forms::{
    gram_block, i0_basis, pairing_rank, quotient_model, radical, verify_e_membership, verify_rad0,
    verify_radical_zero, verify_symmetry_and_bijection, Form, GramBlock, RadicalKind,
};
use crate::model::VertexAlgebra;
use crate::scalar::Scalar;
use crate::verify::{
    verify_assoc, verify_axioms, verify_dstar_surjective_negative, verify_quasisym, verify_sl2, verify_virasoro, Report,
    VerifyOptions,
};
use crate::Rational;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DimEntry {
    pub weight: Weight,
    pub degree: i64,
    pub dimension: usize,
}

/// Dimensions of all blocks inside the cutoffs, in block order.
pub fn dims<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M) -> Vec<DimEntry> {
    model
        .blocks()
        .into_iter()
        .map(|k| DimEntry { dimension: model.basis(&k).len(), weight: k.weight, degree: k.degree })
        .collect()
}

/// `weight,degree,dimension` rows; weight entries are separated by `;`.
pub fn dims_csv(rows: &[DimEntry]) -> String {
    let mut out = String::from("weight,degree,dimension\n");
    for r in rows {
        let w: Vec<String> = r.weight.0.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("{},{},{}\n", w.join(";"), r.degree, r.dimension));
    }
    out
}

fn check_weight<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, w: &Weight) -> Result<()> {
    let rank = model.unit_element().states().next().map(|s| model.key_of(s).weight.rank()).unwrap_or(w.rank());
    if w.rank() != rank {
        return Err(VaError::Config(format!("weight {w:?} has rank {}, model has rank {rank}", w.rank())));
    }
    Ok(())
}

fn require_block<T: Scalar, M: VertexAlgebra<T> + ?Sized>(model: &M, key: &BlockKey) -> Result<()> {
    if model.cutoffs().contains(key) {
        Ok(())
    } else {
        Err(VaError::cutoff("Gram block", key))
    }
}

fn gram_json(g: &GramBlock<Rational>) -> Value {
    json!({
        "rows": g.rows,
        "cols": g.cols,
        "value_dim": g.value_dim,
        "gram": g.entry_strings(),
        "symmetric": g.is_symmetric(),
    })
}

/// Gram block between `(weight, degree)` and `(partner, degree)`.
pub fn gram_report<M: VertexAlgebra<Rational> + ?Sized>(
    model: &M,
    form: &Form<M::State, Rational>,
    weight: &Weight,
    partner: &Weight,
    degree: i64,
) -> Result<Value> {
    check_weight(model, weight)?;
    check_weight(model, partner)?;
    let rows = BlockKey::new(weight.clone(), degree);
    let cols = BlockKey::new(partner.clone(), degree);
    require_block(model, &rows)?;
    require_block(model, &cols)?;
    let g = gram_block(model, form, &rows, &cols)?;
    let mut v = gram_json(&g);
    v["model"] = json!(model.describe());
    Ok(v)
}

/// Every Gram block of degree `degree` whose weight sum carries values,
/// with the rank of the whole pairing.
pub fn degree_gram_report<M: VertexAlgebra<Rational> + ?Sized>(
    model: &M,
    form: &Form<M::State, Rational>,
    degree: i64,
) -> Result<Value> {
    let keys: Vec<BlockKey> = model.blocks().into_iter().filter(|k| k.degree == degree).collect();
    let mut blocks = Vec::new();
    for r in &keys {
        for c in &keys {
            if form.supported_on(&r.weight.add(&c.weight)) {
                blocks.push(gram_json(&gram_block(model, form, r, c)?));
            }
        }
    }
    Ok(json!({
        "model": model.describe(),
        "degree": degree,
        "rank": pairing_rank(model, form, degree)?,
        "blocks": blocks,
    }))
}

/// Per-block radical records. The `gram` rows are the block basis; the
/// columns run over the basis of each scanned partner and each value
/// coordinate, so `radical_dim = rows - rank`.
pub fn radical_report<M: VertexAlgebra<Rational> + ?Sized>(
    model: &M,
    form: &Form<M::State, Rational>,
) -> Result<Value> {
    let rad = radical(model, form)?;
    let mut blocks = Vec::new();
    for b in &rad.blocks {
        let mut rows: Vec<Vec<String>> = vec![Vec::new(); b.block_dim];
        for mu in &b.partners {
            let g = gram_block(model, form, &b.key, &BlockKey::new(mu.clone(), b.key.degree))?;
            for (i, row) in g.entries.iter().enumerate() {
                rows[i].extend(row.iter().flatten().map(|x| x.to_exact_string()));
            }
        }
        blocks.push(json!({
            "block": b.key,
            "gram": rows,
            "block_dim": b.block_dim,
            "radical_dim": b.dim(),
            "partners": b.partners,
            "exactness": b.exactness.as_str(),
        }));
    }
    let kind = match rad.kind() {
        RadicalKind::Zero => "zero",
        RadicalKind::Full => "full",
        RadicalKind::Proper => "proper",
    };
    Ok(json!({ "model": model.describe(), "kind": kind, "blocks": blocks }))
}

/// Names accepted by `--suite`.
pub const SUITES: [&str; 6] = ["axioms", "sl2", "adjoint", "forms", "rad0", "all"];

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub cutoff: i64,
    pub passed: bool,
    pub reports: Vec<Report>,
}

/// Settings of one verification run. `cutoff` defaults to the model's
/// degree cutoff.
#[derive(Clone, Debug)]
pub struct VerifyRun {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub cutoff: Option<i64>,
    pub functional: FunctionalSource,
}

impl ModelVisitor for &VerifyRun {
    type Output = Result<VerifyOutcome>;

    fn visit<M: VertexAlgebra<Rational>>(self, model: &Arc<M>) -> Result<VerifyOutcome> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(VaError::Config(format!("unknown suite {:?}; expected one of {SUITES:?}", self.suite)));
        }
        let cutoff = self.cutoff.unwrap_or(model.cutoffs().max_degree);
        let opts = VerifyOptions::new(cutoff, self.samples, self.seed);
        let m = model.as_ref();
        let all = self.suite == "all";
        let mut reports = Vec::new();
        if all || self.suite == "axioms" {
            reports.push(verify_axioms(m, opts));
            reports.push(verify_assoc(m, opts));
            reports.push(verify_quasisym(m, opts));
        }
        if all || self.suite == "sl2" {
            reports.push(verify_sl2(m, cutoff));
            for w in m.weights() {
                reports.push(verify_dstar_surjective_negative(m, &w, cutoff));
            }
            if let Some(omega) = m.conformal_vector() {
                reports.push(verify_virasoro(m, &omega, cutoff).0);
            }
        }
        if all || self.suite == "adjoint" {
            reports.push(verify_involution(m, opts));
            reports.push(verify_antihom(m, opts));
            reports.push(verify_adjoint_dstar_image(m, cutoff));
        }
        if all || self.suite == "forms" {
            let form = self.functional.form(m)?;
            reports.push(verify_symmetry_and_bijection(m, &form, opts));
            reports.push(verify_e_membership(m));
        }
        if all || self.suite == "rad0" {
            let form = Form::Canonical(i0_basis(m)?);
            let rad = radical(m, &form)?;
            let q = quotient_model(model.clone(), &rad)?;
            let mut rep = verify_radical_zero(&q);
            rep.note(format!("quotient by a {:?} radical", rad.kind()).to_lowercase());
            reports.push(rep);
            reports.push(verify_rad0(&q, opts));
        }
        for r in &mut reports {
            r.seed = Some(self.seed);
        }
        Ok(VerifyOutcome {
            suite: self.suite.clone(),
            seed: self.seed,
            samples: self.samples,
            cutoff,
            passed: reports.iter().all(|r| r.passed),
            reports,
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<X: Serialize>(x: &X) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ModelConfig;

    fn heisenberg(k: &str, d: i64) -> crate::config::BuiltModel {
        ModelConfig::from_json(&format!(r#"{{"type":"heisenberg","k":"{k}","max_degree":{d}}}"#))
            .unwrap()
            .build()
            .unwrap()
    }

    #[test]
    fn csv_lists_every_block() {
        let rows = vec![
            DimEntry { weight: Weight(vec![0]), degree: 0, dimension: 1 },
            DimEntry { weight: Weight(vec![1, -1]), degree: 2, dimension: 3 },
        ];
        assert_eq!(dims_csv(&rows), "weight,degree,dimension\n0,0,1\n1;-1,2,3\n");
    }

    #[test]
    fn unknown_suite_is_a_config_error() {
        let run = VerifyRun {
            suite: "everything".into(),
            seed: 0,
            samples: 0,
            cutoff: None,
            functional: FunctionalSource::Canonical,
        };
        assert!(matches!(heisenberg("0", 2).visit(&run), Err(VaError::Config(_))));
    }

    #[test]
    fn seed_is_echoed() {
        let run = VerifyRun { suite: "sl2".into(), seed: 42, samples: 0, cutoff: None, functional: FunctionalSource::Canonical };
        let out = heisenberg("1", 2).visit(&run).unwrap();
        assert!(out.passed);
        assert_eq!(out.seed, 42);
        assert!(out.reports.iter().all(|r| r.seed == Some(42)));
        let charge = out.reports.iter().find(|r| r.suite == "virasoro").unwrap();
        assert_eq!(charge.notes, vec!["central charge -11".to_string()]);
    }
}
