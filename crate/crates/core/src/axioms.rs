//! Numerical checks that a transport law defines a linear transport:
//! linearity, multiplicativity over tensor products, commutation with
//! contractions, composition, identity, fixing scalars, the inverse pair
//! relation between `H` and `H_inv`, and the vanishing of the induced
//! derivation on transported fields.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::law::{Domain, TransportLaw};
use crate::linalg::Matrix;
use crate::tensor::{contract, tensor_product, TensorComponents};
use crate::transport::{
    derivations_of_transported, transport_matrix, transport_tensor, TransportMatrix,
};

/// Where and with what tensors to probe a law.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSpec {
    /// `(r, s, t)` triples; the transport is checked from `s` to `t` and the
    /// composition through `t` to `r`.
    pub triples: Vec<(f64, f64, f64)>,
    pub tensors: Vec<TensorComponents>,
    pub step: f64,
}

impl ProbeSpec {
    /// `count` random triples in `domain` and two random tensors of each of
    /// the types (0,0), (1,0), (0,1), (1,1) and (2,1).
    pub fn random(domain: Domain, dim: usize, count: usize, seed: u64, step: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| {
            if domain.length() > 0.0 {
                rng.gen_range(domain.min..=domain.max)
            } else {
                domain.min
            }
        };
        let triples = (0..count)
            .map(|_| (pick(&mut rng), pick(&mut rng), pick(&mut rng)))
            .collect();
        // two of each type so that linearity compares distinct tensors
        let tensors = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]
            .iter()
            .flat_map(|&(p, q)| [(p, q), (p, q)])
            .map(|(p, q)| random_tensor(&mut rng, p, q, dim))
            .collect();
        Self {
            triples,
            tensors,
            step,
        }
    }
}

pub fn random_tensor<R: Rng>(rng: &mut R, p: usize, q: usize, dim: usize) -> TensorComponents {
    if p + q == 0 {
        return TensorComponents::scalar(rng.gen_range(-1.0..1.0));
    }
    let len = dim.pow((p + q) as u32);
    let values = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
    TensorComponents::new(p, q, dim, values).expect("length matches")
}

/// Largest residual observed for one axiom.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AxiomResidual {
    pub name: String,
    pub residual: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AxiomReport {
    pub tol: f64,
    pub axioms: Vec<AxiomResidual>,
    pub passed: bool,
    /// Errors raised while probing (e.g. a blow-up); any error fails the report.
    pub errors: Vec<String>,
}

impl AxiomReport {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.axioms
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.residual)
    }

    pub fn max_residual(&self) -> f64 {
        self.axioms.iter().fold(0.0, |m, a| m.max(a.residual))
    }
}

pub const LINEARITY: &str = "linearity";
pub const PRODUCT: &str = "tensor_product";
pub const CONTRACTION: &str = "contraction";
pub const COMPOSITION: &str = "composition";
pub const IDENTITY: &str = "identity";
pub const SCALARS: &str = "scalar_fixing";
pub const INVERSE_PAIR: &str = "inverse_pair";
pub const DERIVATION: &str = "transport_derivation";

/// Names of all checked axioms, in report order.
pub const AXIOMS: [&str; 8] = [
    LINEARITY,
    PRODUCT,
    CONTRACTION,
    COMPOSITION,
    IDENTITY,
    SCALARS,
    INVERSE_PAIR,
    DERIVATION,
];

fn rel_diff(a: &TensorComponents, b: &TensorComponents) -> f64 {
    match a.max_diff(b) {
        Ok(d) => d / b.max_abs().max(1.0),
        Err(_) => f64::INFINITY,
    }
}

fn rel_mat(a: &Matrix, b: &Matrix) -> f64 {
    a.max_diff(b) / b.max_abs().max(1.0)
}

#[derive(Default)]
struct Tally {
    values: [f64; 8],
    errors: Vec<String>,
}

impl Tally {
    fn record(&mut self, name: &str, r: f64) {
        let k = AXIOMS.iter().position(|a| *a == name).expect("known axiom");
        // NaN must fail, so fold it into infinity
        let r = if r.is_nan() { f64::INFINITY } else { r };
        self.values[k] = self.values[k].max(r);
    }

    fn check<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(alloc::format!("{name}: {e}"));
                self.record(name, f64::INFINITY);
                None
            }
        }
    }
}

/// `max |H(r,t) H(t,s) - H(r,s)|` (relative) over the triples.
pub fn composition_residual(
    law: &TransportLaw,
    triples: &[(f64, f64, f64)],
    step: f64,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(r, s, t) in triples {
        let h_ts = transport_matrix(law, s, t, step)?;
        let h_rt = transport_matrix(law, t, r, step)?;
        let h_rs = transport_matrix(law, s, r, step)?;
        worst = worst.max(rel_mat(&(&h_rt.h * &h_ts.h), &h_rs.h));
    }
    Ok(worst)
}

/// Runs every axiom check; failures are reported, never raised.
pub fn verify_axioms(law: &TransportLaw, probes: &ProbeSpec, tol: f64) -> AxiomReport {
    let mut tally = Tally::default();
    let step = probes.step;
    let n = law.dim();
    let tensors: Vec<&TensorComponents> = probes
        .tensors
        .iter()
        .filter(|t| t.is_scalar() || t.dim() == n)
        .collect();
    if tensors.len() != probes.tensors.len() {
        tally
            .errors
            .push("probe tensors with mismatched dimension were skipped".into());
    }

    for &(r, s, t) in &probes.triples {
        let Some(h_ts) = tally.check(COMPOSITION, transport_matrix(law, s, t, step)) else {
            continue;
        };

        // identity
        if let Some(id) = tally.check(IDENTITY, transport_matrix(law, s, s, step)) {
            let e = Matrix::identity(n);
            tally.record(IDENTITY, id.h.max_diff(&e).max(id.h_inv.max_diff(&e)));
        }

        // composition through t
        let h_rt = tally.check(COMPOSITION, transport_matrix(law, t, r, step));
        let h_rs = tally.check(COMPOSITION, transport_matrix(law, s, r, step));
        if let (Some(h_rt), Some(h_rs)) = (h_rt, h_rs) {
            tally.record(COMPOSITION, rel_mat(&(&h_rt.h * &h_ts.h), &h_rs.h));
        }

        // inverse pair
        let e = Matrix::identity(n);
        tally.record(
            INVERSE_PAIR,
            (&h_ts.h * &h_ts.h_inv)
                .max_diff(&e)
                .max((&h_ts.h_inv * &h_ts.h).max_diff(&e)),
        );

        check_tensor_axioms(&mut tally, &h_ts, &tensors);

        let low_rank: Vec<TensorComponents> = tensors
            .iter()
            .filter(|t| t.rank() <= 2)
            .map(|t| (*t).clone())
            .collect();
        if let Some(ds) = tally.check(
            DERIVATION,
            derivations_of_transported(law, &low_rank, s, t, step),
        ) {
            for (d, t0) in ds.iter().zip(&low_rank) {
                tally.record(DERIVATION, d.max_abs() / t0.max_abs().max(1.0));
            }
        }
    }

    let axioms: Vec<AxiomResidual> = AXIOMS
        .iter()
        .zip(tally.values.iter())
        .map(|(name, &residual)| AxiomResidual {
            name: (*name).into(),
            residual,
            passed: residual <= tol,
        })
        .collect();
    let passed = tally.errors.is_empty() && axioms.iter().all(|a| a.passed);
    AxiomReport {
        tol,
        axioms,
        passed,
        errors: tally.errors,
    }
}

fn check_tensor_axioms(tally: &mut Tally, tm: &TransportMatrix, tensors: &[&TensorComponents]) {
    let apply = |t: &TensorComponents| transport_tensor(tm, t);

    for t in tensors {
        // scalars
        if t.is_scalar() {
            if let Some(out) = tally.check(SCALARS, apply(t)) {
                tally.record(SCALARS, rel_diff(&out, t));
            }
        }

        // contraction commutes with transport on every slot pair
        for a in 0..t.contravariant_rank() {
            for b in 0..t.covariant_rank() {
                let lhs = contract(t, a, b).and_then(|c| apply(&c));
                let rhs = apply(t).and_then(|st| contract(&st, a, b));
                if let (Some(l), Some(r)) =
                    (tally.check(CONTRACTION, lhs), tally.check(CONTRACTION, rhs))
                {
                    tally.record(CONTRACTION, rel_diff(&l, &r));
                }
            }
        }
    }

    // linearity and multiplicativity over pairs
    for (i, a) in tensors.iter().enumerate() {
        for b in tensors.iter().skip(i) {
            if a.same_type(b) {
                let (ka, kb) = (0.75, -1.25);
                let lhs = a.linear_combination(ka, b, kb).and_then(|c| apply(&c));
                let rhs = apply(a)
                    .and_then(|sa| apply(b).and_then(|sb| sa.linear_combination(ka, &sb, kb)));
                if let (Some(l), Some(r)) =
                    (tally.check(LINEARITY, lhs), tally.check(LINEARITY, rhs))
                {
                    tally.record(LINEARITY, rel_diff(&l, &r));
                }
            }
            if a.rank() + b.rank() <= 4 {
                let lhs = tensor_product(a, b).and_then(|p| apply(&p));
                let rhs = apply(a).and_then(|sa| apply(b).and_then(|sb| tensor_product(&sa, &sb)));
                if let (Some(l), Some(r)) = (tally.check(PRODUCT, lhs), tally.check(PRODUCT, rhs)) {
                    tally.record(PRODUCT, rel_diff(&l, &r));
                }
            }
        }
    }
}
