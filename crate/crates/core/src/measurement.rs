//! Weak two-outcome measurements and the Kraus channels built from them.
//!
//! A weak measurement of an involution `V` with strength `ε` has measurement
//! operators `P_V(±ε) = α₊(±ε) P₊ + α₋(±ε) P₋` with `P± = (1 ± V)/2` and
//! `α±(ε) = √((1 ± tanh ε)/2)`. The induced non-selective channel equals
//! `(1 − ζ)·(strong measurement) + ζ·(identity)` with `ζ = sech ε`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Factor, Operator};
use crate::pauli::{Pauli, StabilizerCode};

/// Sum-rule tolerance checked when a [`KrausSet`] is built.
pub const SUM_RULE_TOL: f64 = 1e-12;

/// Measurement strength: a finite `ε ≥ 0` or the projective limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strength {
    Weak(f64),
    Strong,
}

impl Strength {
    /// Finite strengths must be non-negative; `+∞` maps to [`Strength::Strong`].
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "measurement strength must be >= 0, got {epsilon}"
            )));
        }
        if epsilon.is_infinite() {
            Ok(Strength::Strong)
        } else {
            Ok(Strength::Weak(epsilon))
        }
    }

    pub fn none() -> Self {
        Strength::Weak(0.0)
    }

    /// `ε`, infinite for the strong marker.
    pub fn epsilon(self) -> f64 {
        match self {
            Strength::Weak(e) => e,
            Strength::Strong => f64::INFINITY,
        }
    }

    /// `ζ = sech ε`, exactly zero for the strong marker.
    pub fn zeta(self) -> f64 {
        match self {
            Strength::Weak(e) => 1.0 / e.cosh(),
            Strength::Strong => 0.0,
        }
    }

    pub fn is_strong(self) -> bool {
        matches!(self, Strength::Strong)
    }

    /// `(α₊, α₋)` for the branch `sign`.
    pub fn alphas(self, sign: Sign) -> (f64, f64) {
        match self {
            Strength::Strong => match sign {
                Sign::Plus => (1.0, 0.0),
                Sign::Minus => (0.0, 1.0),
            },
            Strength::Weak(e) => {
                let e = match sign {
                    Sign::Plus => e,
                    Sign::Minus => -e,
                };
                // (1 ± tanh ε)/2 = 1/(1 + e^{∓2ε}), without cancellation at large |ε|.
                let plus = (1.0 / (1.0 + (-2.0 * e).exp())).sqrt();
                let minus = (1.0 / (1.0 + (2.0 * e).exp())).sqrt();
                (plus, minus)
            }
        }
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strength::Weak(e) => write!(f, "{e}"),
            Strength::Strong => write!(f, "inf"),
        }
    }
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum StrengthRepr {
    Number(f64),
    Text(String),
}

impl Serialize for Strength {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Strength::Weak(e) => StrengthRepr::Number(*e),
            Strength::Strong => StrengthRepr::Text("strong".into()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Strength {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match StrengthRepr::deserialize(deserializer)? {
            StrengthRepr::Number(e) => Strength::new(e).map_err(serde::de::Error::custom),
            StrengthRepr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl std::str::FromStr for Strength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "strong" | "inf" | "infinity" => Ok(Strength::Strong),
            other => other
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad strength {s:?}: {e}")))
                .and_then(Strength::new),
        }
    }
}

/// Outcome branch of a two-outcome measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `P_V(±ε)` as a dense system operator.
pub fn weak_projector(v: &Pauli, strength: Strength, sign: Sign) -> Result<Operator> {
    if !v.is_hermitian() {
        return Err(Error::InvalidArgument(format!("{v} is not an involution")));
    }
    let vm = v.to_matrix()?;
    let (ap, am) = strength.alphas(sign);
    // α₊(1 + V)/2 + α₋(1 − V)/2
    let dim = vm.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let m = &id * Complex64::new(0.5 * (ap + am), 0.0) + vm.matrix() * Complex64::new(0.5 * (ap - am), 0.0);
    vm.with_matrix(m)
}

/// Which protocol a Kraus set implements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KrausLabel {
    Single,
    Generators,
    Group,
}

/// Measurement operators acting on the system factors; extended by the identity
/// on any trailing factors of the state they are applied to.
#[derive(Debug, Clone)]
pub struct KrausSet {
    operators: Vec<Operator>,
    label: KrausLabel,
}

impl KrausSet {
    /// Checks `Σ K†K = 1` to [`SUM_RULE_TOL`].
    pub fn new(operators: Vec<Operator>, label: KrausLabel) -> Result<Self> {
        let defect = sum_rule_defect(&operators)?;
        if defect > SUM_RULE_TOL {
            return Err(Error::SumRule(defect));
        }
        Ok(KrausSet { operators, label })
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn label(&self) -> KrausLabel {
        self.label
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Largest entry of `Σ K†K − 1`.
    pub fn sum_rule_defect(&self) -> f64 {
        sum_rule_defect(&self.operators).expect("validated on construction")
    }

    /// The same channel on a larger space: every operator tensored with the
    /// identity on `trailing`.
    pub fn extend(&self, trailing: &[Factor]) -> Result<KrausSet> {
        if trailing.is_empty() {
            return Ok(self.clone());
        }
        let operators = self
            .operators
            .iter()
            .map(|k| k.extend_identity(trailing))
            .collect::<Result<_>>()?;
        Ok(KrausSet {
            operators,
            label: self.label,
        })
    }

    fn system_factor_count(&self, a: &Operator) -> Result<usize> {
        let sys = self.operators[0].factors();
        if a.factors().len() < sys.len() || a.factors()[..sys.len()] != *sys {
            return Err(Error::DimensionMismatch {
                expected: self.operators[0].dim(),
                found: a.dim(),
            });
        }
        Ok(sys.len())
    }

    /// `Σ_b K_b A K_b†` for an arbitrary (not necessarily positive) operator.
    pub fn apply_operator(&self, a: &Operator) -> Result<Operator> {
        let m = self.system_factor_count(a)?;
        let targets: Vec<usize> = (0..m).collect();
        let mut acc = DMatrix::<Complex64>::zeros(a.dim(), a.dim());
        for k in &self.operators {
            let term = if m == a.factors().len() {
                k.matrix() * a.matrix() * k.matrix().adjoint()
            } else {
                a.conjugate_local(&targets, k.matrix())?.into_matrix()
            };
            acc += term;
        }
        a.with_matrix(acc)
    }

    /// Applies the channel to a state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_operator(rho.operator())?;
        DensityMatrix::from_channel_output(out)
    }
}

/// Products `Π_i P_{V_i}((−1)^{b_i} ε)` over every sign pattern `b`, where bit `i`
/// of `b` selects the branch of `measured[i]`.
pub fn kraus_set_product(measured: &[Pauli], strength: Strength, label: KrausLabel) -> Result<KrausSet> {
    if measured.is_empty() {
        return Err(Error::InvalidArgument("nothing to measure".into()));
    }
    if measured.len() > 24 {
        return Err(Error::InvalidArgument(format!(
            "2^{} Kraus operators is too many to build densely",
            measured.len()
        )));
    }
    KrausSet::new(product_operators(measured, strength, false)?, label)
}

/// The unchecked operator list behind [`kraus_set_product`]. With `sign_bug`
/// the minus branch of the last measured operator is built with the plus sign,
/// a deliberately broken channel used to exercise the verification suites.
pub(crate) fn product_operators(measured: &[Pauli], strength: Strength, sign_bug: bool) -> Result<Vec<Operator>> {
    let last = measured.len().saturating_sub(1);
    let branches: Vec<[Operator; 2]> = measured
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let minus = if sign_bug && i == last { Sign::Plus } else { Sign::Minus };
            Ok([weak_projector(v, strength, Sign::Plus)?, weak_projector(v, strength, minus)?])
        })
        .collect::<Result<_>>()?;
    let mut ops = Vec::with_capacity(1 << measured.len());
    for b in 0..(1usize << measured.len()) {
        let mut k = branches[0][b & 1].clone();
        for (i, pair) in branches.iter().enumerate().skip(1) {
            k = k.mul(&pair[(b >> i) & 1])?;
        }
        ops.push(k);
    }
    Ok(ops)
}

/// Largest entry of `Σ K†K − 1` for a list of operators on a common space.
pub fn sum_rule_defect(operators: &[Operator]) -> Result<f64> {
    let first = operators
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
    let dim = first.dim();
    let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
    for k in operators {
        if k.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k.dim(),
            });
        }
        sum += k.matrix().adjoint() * k.matrix();
    }
    Ok((sum - DMatrix::<Complex64>::identity(dim, dim))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Weak measurement of a single involution `v`.
pub fn kraus_set_single(v: &Pauli, strength: Strength) -> Result<KrausSet> {
    KrausSet::new(
        vec![
            weak_projector(v, strength, Sign::Plus)?,
            weak_projector(v, strength, Sign::Minus)?,
        ],
        KrausLabel::Single,
    )
}

/// Weak stabilizer-generator measurement: `2^qbar` operators indexed by sign bits.
pub fn kraus_set_generators(code: &StabilizerCode, strength: Strength) -> Result<KrausSet> {
    if code.qbar() == 0 {
        return identity_set(code, KrausLabel::Generators);
    }
    kraus_set_product(code.generators(), strength, KrausLabel::Generators)
}

/// Weak stabilizer-group measurement over the `Q` non-identity group elements.
///
/// Measuring the identity element contributes the scalar pair `α₊(ε)`, `α₊(−ε)`
/// whose squares sum to one, so it is left out.
pub fn kraus_set_group(code: &StabilizerCode, strength: Strength) -> Result<KrausSet> {
    if code.qbar() == 0 {
        return identity_set(code, KrausLabel::Group);
    }
    kraus_set_product(code.nontrivial_elements(), strength, KrausLabel::Group)
}

fn identity_set(code: &StabilizerCode, label: KrausLabel) -> Result<KrausSet> {
    let id = Pauli::identity(code.n())?.to_matrix()?;
    KrausSet::new(vec![id], label)
}

/// `Σ_{r=±} P_V(rε) ρ P_V(rε)` with `v` acting on the leading system qubits of `rho`.
pub fn apply_weak_single(rho: &DensityMatrix, v: &Pauli, strength: Strength) -> Result<DensityMatrix> {
    kraus_set_single(v, strength)?.apply(rho)
}
