//! A many-body weak measurement built from two-qubit gates, a cat-state
//! register and one single-qubit weak measurement.
//!
//! Qubit layout of the simulated register: `[ancilla | cat_0 … cat_{k−1} | data…]`,
//! where `k` is the weight of the measured Pauli `V̂` and the data factors may end
//! with a bath.
//!
//! The circuit:
//!
//! 1. prepare `|0⟩ ⊗ |Ψ_cat,+⟩ ⊗ ρ`;
//! 2. apply `CV_i` from cat qubit `i` to the `i`-th support qubit of `V̂`
//!    (`CY` is realised as `C(XZ)`; the resulting global phase is removed by a
//!    single-qubit phase gate on cat qubit 0);
//! 3. apply `W` (Hadamard) to every cat qubit, then `CX` from each cat qubit onto
//!    the ancilla, which now holds the `V̂` parity;
//! 4. weakly measure `Z` on the ancilla;
//! 5. undo step 3 and step 2, which returns ancilla and cat to their initial
//!    product state, and trace them out.
//!
//! Without step 5's gate reversal, tracing out the cat register removes every
//! coherence between the `V̂ = ±1` branches, so the data always sees the
//! projective measurement irrespective of `ε`; [`simulate_weak_many_body_literal`]
//! exposes that variant for comparison.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{dense_cap, trace_distance, DensityMatrix, Factor, Operator};
use crate::measurement::{kraus_set_single, Strength};
use crate::pauli::{Pauli, PauliKind};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mat2(entries: [Complex64; 4]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &entries)
}

fn pauli2(kind: PauliKind) -> DMatrix<Complex64> {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match kind {
        PauliKind::I => mat2([o, z, z, o]),
        PauliKind::X => mat2([z, o, o, z]),
        PauliKind::Y => mat2([z, c(0.0, -1.0), c(0.0, 1.0), z]),
        PauliKind::Z => mat2([o, z, z, -o]),
    }
}

/// Sign of a cat state `(|0…0⟩ ± |1…1⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CatSign {
    Plus,
    Minus,
}

/// A `k`-qubit cat state, tracked as a state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CatRegister {
    k: usize,
    state: DVector<Complex64>,
}

/// `(|0…0⟩ ± |1…1⟩)/√2` on `k` qubits.
pub fn make_cat_state(k: usize, sign: CatSign) -> Result<CatRegister> {
    if k == 0 {
        return Err(Error::InvalidArgument("cat register needs at least one qubit".into()));
    }
    let cap = dense_cap();
    if k > cap {
        return Err(Error::DenseCap { qubits: k, cap });
    }
    let dim = 1usize << k;
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let mut state = DVector::zeros(dim);
    state[0] = c(amp, 0.0);
    state[dim - 1] = match sign {
        CatSign::Plus => c(amp, 0.0),
        CatSign::Minus => c(-amp, 0.0),
    };
    Ok(CatRegister { k, state })
}

impl CatRegister {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn state(&self) -> &DVector<Complex64> {
        &self.state
    }

    /// Applies `Z` to qubit `qubit` (qubit 0 is the most significant).
    pub fn apply_z(&mut self, qubit: usize) -> Result<()> {
        if qubit >= self.k {
            return Err(Error::InvalidArgument(format!("cat qubit {qubit} out of range")));
        }
        let bit = 1usize << (self.k - 1 - qubit);
        for (i, amp) in self.state.iter_mut().enumerate() {
            if i & bit != 0 {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &CatRegister) -> Result<Complex64> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.k,
                found: 1 << other.k,
            });
        }
        Ok(self.state.dotc(&other.state))
    }

    /// The cat sign, if the register is (up to phase) one of the two cat states.
    pub fn sign(&self) -> Option<CatSign> {
        [CatSign::Plus, CatSign::Minus].into_iter().find(|&s| {
            let reference = make_cat_state(self.k, s).expect("same k");
            (reference.overlap(self).expect("same k").norm() - 1.0).abs() < 1e-12
        })
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        DensityMatrix::pure(vec![Factor::System(2); self.k], &self.state)
    }
}

/// Controlled operation applied to the target when the control is `|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ControlledKind {
    X,
    Z,
    /// `C(XZ)`, standing in for controlled-`Y` (`XZ = −iY`).
    XZ,
}

impl ControlledKind {
    /// The gate used for a data-qubit Pauli `kind`.
    pub fn for_pauli(kind: PauliKind) -> Result<Self> {
        match kind {
            PauliKind::X => Ok(ControlledKind::X),
            PauliKind::Z => Ok(ControlledKind::Z),
            PauliKind::Y => Ok(ControlledKind::XZ),
            PauliKind::I => Err(Error::InvalidArgument("no controlled identity gate".into())),
        }
    }

    fn target_matrix(self) -> DMatrix<Complex64> {
        match self {
            ControlledKind::X => pauli2(PauliKind::X),
            ControlledKind::Z => pauli2(PauliKind::Z),
            ControlledKind::XZ => pauli2(PauliKind::X) * pauli2(PauliKind::Z),
        }
    }
}

/// One- and two-qubit gates; the only unitaries the construction uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    /// Hadamard.
    W(usize),
    /// `diag(1, phase)`.
    Phase { qubit: usize, phase: Complex64 },
    Controlled {
        control: usize,
        target: usize,
        kind: ControlledKind,
    },
}

impl Gate {
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::W(q) | Gate::Phase { qubit: q, .. } => vec![q],
            Gate::Controlled { control, target, .. } => vec![control, target],
        }
    }

    /// Gate matrix on [`Gate::targets`] (first target most significant).
    pub fn matrix(&self) -> DMatrix<Complex64> {
        match *self {
            Gate::W(_) => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                mat2([c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
            }
            Gate::Phase { phase, .. } => mat2([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), phase]),
            Gate::Controlled { kind, .. } => {
                let mut m = DMatrix::<Complex64>::zeros(4, 4);
                m[(0, 0)] = c(1.0, 0.0);
                m[(1, 1)] = c(1.0, 0.0);
                m.view_mut((2, 2), (2, 2)).copy_from(&kind.target_matrix());
                m
            }
        }
    }
}

/// `U A U†` for one gate, or `U† A U` when `inverse` is set.
pub fn apply_gate(op: &Operator, gate: &Gate, inverse: bool) -> Result<Operator> {
    let targets = gate.targets();
    let nf = op.factors().len();
    for &t in &targets {
        if t >= nf || op.factors()[t] != Factor::System(2) {
            return Err(Error::InvalidArgument(format!("gate target {t} is not a qubit factor")));
        }
    }
    if targets.len() == 2 && targets[0] == targets[1] {
        return Err(Error::InvalidArgument("control and target coincide".into()));
    }
    let u = gate.matrix();
    let u = if inverse { u.adjoint() } else { u };
    op.conjugate_local(&targets, &u)
}

/// Applies a controlled-`V` (`kind` = X, Y via `C(XZ)`, or Z) between two qubit factors.
pub fn apply_controlled_pauli(op: &Operator, kind: PauliKind, control: usize, target: usize) -> Result<Operator> {
    let gate = Gate::Controlled {
        control,
        target,
        kind: ControlledKind::for_pauli(kind)?,
    };
    apply_gate(op, &gate, false)
}

/// One row of the two-qubit conjugation table: `gate (input) gate† = output`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRule {
    pub gate: String,
    pub input: String,
    pub output: String,
}

/// How the construction's gates act on `1 ⊗ X` and `1 ⊗ Z` (and `W` on `X`, `Z`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateTable {
    pub rules: Vec<GateRule>,
}

impl GateTable {
    pub fn standard() -> Self {
        let rule = |gate: &str, input: &str, output: &str| GateRule {
            gate: gate.into(),
            input: input.into(),
            output: output.into(),
        };
        GateTable {
            rules: vec![
                rule("CZ", "IX", "ZX"),
                rule("CZ", "IZ", "IZ"),
                rule("CX", "IX", "IX"),
                rule("CX", "IZ", "ZZ"),
                rule("CY", "IX", "ZX"),
                rule("CY", "IZ", "ZZ"),
                rule("W", "X", "Z"),
                rule("W", "Z", "X"),
            ],
        }
    }

    fn gate(name: &str) -> Result<Gate> {
        let controlled = |kind| Gate::Controlled {
            control: 0,
            target: 1,
            kind,
        };
        match name {
            "CZ" => Ok(controlled(ControlledKind::Z)),
            "CX" => Ok(controlled(ControlledKind::X)),
            "CY" => Ok(controlled(ControlledKind::XZ)),
            "W" => Ok(Gate::W(0)),
            other => Err(Error::Parse(format!("unknown gate {other:?}"))),
        }
    }

    /// Largest entrywise mismatch between each rule and dense conjugation.
    pub fn verify(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for r in &self.rules {
            let gate = Self::gate(&r.gate)?;
            let input: Pauli = r.input.parse()?;
            let output: Pauli = r.output.parse()?;
            let conj = apply_gate(&input.to_matrix()?, &gate, false)?;
            worst = worst.max(conj.max_abs_diff(&output.to_matrix()?)?);
        }
        Ok(worst)
    }
}

/// Gate sequence and bookkeeping for one measured Pauli.
struct Construction {
    k: usize,
    /// Steps 2–3: controlled Paulis, phase fix, `W` layer, parity copy.
    encode: Vec<Gate>,
    joint_factors: Vec<Factor>,
}

impl Construction {
    fn new(v_hat: &Pauli, data_factors: &[Factor]) -> Result<Self> {
        if !v_hat.is_hermitian() {
            return Err(Error::InvalidArgument(format!("{v_hat} is not an involution")));
        }
        let n = v_hat.num_qubits();
        if data_factors.len() < n || data_factors[..n].iter().any(|&f| f != Factor::System(2)) {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: data_factors.iter().map(|f| f.dim()).product(),
            });
        }
        let support = v_hat.support();
        let k = support.len();
        if k == 0 {
            return Err(Error::InvalidArgument("measured Pauli is the identity".into()));
        }
        let mut joint_factors = vec![Factor::System(2); 1 + k];
        joint_factors.extend_from_slice(data_factors);
        let data_dim: usize = data_factors.iter().map(|f| f.dim()).product();
        let qubits = 1 + k + (usize::BITS - data_dim.saturating_sub(1).leading_zeros()) as usize;
        let cap = dense_cap();
        if qubits > cap {
            return Err(Error::DenseCap { qubits, cap });
        }

        let cat = |i: usize| 1 + i;
        let data = |q: usize| 1 + k + q;
        let mut encode = Vec::new();
        let mut y_count = 0;
        for (i, &q) in support.iter().enumerate() {
            let kind = v_hat.kind(q);
            if kind == PauliKind::Y {
                y_count += 1;
            }
            encode.push(Gate::Controlled {
                control: cat(i),
                target: data(q),
                kind: ControlledKind::for_pauli(kind)?,
            });
        }
        // With every control set the gates apply Π V_i = (−i)^{#Y} · (±1) · V̂.
        let global = Complex64::new(0.0, -1.0).powi(y_count) * v_hat.phase().to_complex();
        if (global - c(1.0, 0.0)).norm() > 1e-15 {
            encode.push(Gate::Phase {
                qubit: cat(0),
                phase: global.inv(),
            });
        }
        for i in 0..k {
            encode.push(Gate::W(cat(i)));
        }
        for i in 0..k {
            encode.push(Gate::Controlled {
                control: cat(i),
                target: 0,
                kind: ControlledKind::X,
            });
        }
        Ok(Construction {
            k,
            encode,
            joint_factors,
        })
    }

    fn prepare(&self, rho: &DensityMatrix) -> Result<Operator> {
        let anc = DensityMatrix::basis(vec![Factor::System(2)], 0)?;
        let cat = make_cat_state(self.k, CatSign::Plus)?.density_matrix()?;
        let joint = anc.tensor(&cat)?.tensor(rho)?;
        joint.into_operator().relabel(self.joint_factors.clone())
    }

    fn measure_ancilla(&self, op: &Operator, strength: Strength) -> Result<Operator> {
        let z = "Z".parse::<Pauli>()?;
        let ks = kraus_set_single(&z, strength)?;
        let mut acc = DMatrix::<Complex64>::zeros(op.dim(), op.dim());
        for k in ks.operators() {
            acc += op.conjugate_local(&[0], k.matrix())?.matrix();
        }
        op.with_matrix(acc)
    }

    fn run(&self, rho: &DensityMatrix, strength: Strength, uncompute: bool) -> Result<(Operator, DensityMatrix)> {
        let mut op = self.prepare(rho)?;
        for g in &self.encode {
            op = apply_gate(&op, g, false)?;
        }
        op = self.measure_ancilla(&op, strength)?;
        if uncompute {
            for g in self.encode.iter().rev() {
                op = apply_gate(&op, g, true)?;
            }
        }
        let traced: Vec<usize> = (0..=self.k).collect();
        let data = op.trace_out(&traced)?;
        Ok((op, DensityMatrix::new(data)?))
    }
}

/// Weak measurement of `v_hat` on the leading qubits of `rho` realised by the
/// gate construction; equals [`crate::measurement::apply_weak_single`].
pub fn simulate_weak_many_body(rho: &DensityMatrix, v_hat: &Pauli, strength: Strength) -> Result<DensityMatrix> {
    Construction::new(v_hat, rho.factors())?
        .run(rho, strength, true)
        .map(|(_, out)| out)
}

/// Same as [`simulate_weak_many_body`] but also returns the ancilla+cat reduced
/// state before tracing, for inspection.
pub fn simulate_weak_many_body_with_register(
    rho: &DensityMatrix,
    v_hat: &Pauli,
    strength: Strength,
) -> Result<(DensityMatrix, DensityMatrix)> {
    let construction = Construction::new(v_hat, rho.factors())?;
    let (joint, out) = construction.run(rho, strength, true)?;
    let data_factors: Vec<usize> = (construction.k + 1..joint.factors().len()).collect();
    let register = DensityMatrix::new(joint.trace_out(&data_factors)?)?;
    Ok((out, register))
}

/// The circuit without reversing the gates before the ancilla and cat are traced
/// out. The outcome is the projective measurement of `v_hat` for every `ε > 0`.
pub fn simulate_weak_many_body_literal(rho: &DensityMatrix, v_hat: &Pauli, strength: Strength) -> Result<DensityMatrix> {
    Construction::new(v_hat, rho.factors())?
        .run(rho, strength, false)
        .map(|(_, out)| out)
}

/// Trace distance between the gate construction and the direct channel.
pub fn equivalence_residual(rho: &DensityMatrix, v_hat: &Pauli, strength: Strength) -> Result<f64> {
    let simulated = simulate_weak_many_body(rho, v_hat, strength)?;
    let direct = crate::measurement::apply_weak_single(rho, v_hat, strength)?;
    trace_distance(&simulated, &direct)
}
