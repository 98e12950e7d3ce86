//! Measurement-interleaved evolution, the ideal reference and the deviation
//! between them.
//!
//! A protocol run applies `M` rounds of "evolve by `τ/M` under `H = H₀ + H_SB`,
//! then apply the measurement channel" to a joint system ⊗ bath state. The
//! reference is evolution under `H₀ = H_S ⊗ 1 + 1 ⊗ H_B` alone, and the
//! figure of merit is the trace distance of the two bath-traced states.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_exact, bound_strong, BoundInputs, BoundVariant};
use crate::error::{Error, Result};
use crate::hilbert::{trace_distance, DensityMatrix, Factor, Operator, Propagator, HERMITIAN_TOL};
use crate::measurement::{kraus_set_generators, kraus_set_group, KrausSet, Strength};
use crate::pauli::{LogicalKind, Pauli, PauliKind, StabilizerCode};

/// Which measurement channel follows each evolution slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Weak measurement of every non-identity stabilizer element.
    Group,
    /// Weak measurement of the generators only.
    Generators,
    /// Projective generator measurement regardless of the configured strength.
    Strong,
    /// No measurement: unprotected evolution.
    None,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Group, Variant::Generators, Variant::Strong, Variant::None];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Group => "group",
            Variant::Generators => "generators",
            Variant::Strong => "strong",
            Variant::None => "none",
        }
    }

    /// The bound surface that applies to this variant, if any.
    pub fn bound_variant(self) -> Option<BoundVariant> {
        match self {
            Variant::Group => Some(BoundVariant::Group),
            Variant::Generators => Some(BoundVariant::Generators),
            Variant::Strong => Some(BoundVariant::Strong),
            Variant::None => None,
        }
    }

    /// Strength actually used by the channel (`ε = 0` when nothing is measured).
    pub fn effective_strength(self, strength: Strength) -> Strength {
        match self {
            Variant::Strong => Strength::Strong,
            Variant::None => Strength::none(),
            _ => strength,
        }
    }

    /// The variant's Kraus set over `code`, or `None` for [`Variant::None`].
    pub fn kraus_set(self, code: &StabilizerCode, strength: Strength) -> Result<Option<KrausSet>> {
        match self {
            Variant::Group => kraus_set_group(code, strength).map(Some),
            Variant::Generators => kraus_set_generators(code, strength).map(Some),
            Variant::Strong => kraus_set_generators(code, Strength::Strong).map(Some),
            Variant::None => Ok(None),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown variant {s:?}")))
    }
}

/// Random Hermitian matrix with entries uniform in the unit square.
pub(crate) fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let a = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

fn joint_factors(n: usize, bath_dim: usize) -> Vec<Factor> {
    let mut f = vec![Factor::System(2); n];
    f.push(Factor::Bath(bath_dim));
    f
}

fn rescale(op: Operator, target_norm: f64) -> Result<Operator> {
    let norm = op.spectral_norm();
    if target_norm == 0.0 {
        return Ok(op.scale(Complex64::new(0.0, 0.0)));
    }
    if norm == 0.0 {
        return Err(Error::ZeroOperator);
    }
    Ok(op.scale(Complex64::new(target_norm / norm, 0.0)))
}

/// `H_SB = Σ_i Σ_α σ_i^α ⊗ B_i^α` with seeded random Hermitian `B_i^α`, rescaled so
/// that `2‖H_SB‖ = j1_target`.
pub fn build_one_local_coupling(n: usize, bath_dim: usize, seed: u64, j1_target: f64) -> Result<Operator> {
    if bath_dim < 2 {
        return Err(Error::InvalidArgument(format!("bath dimension must be >= 2, got {bath_dim}")));
    }
    if !(j1_target.is_finite() && j1_target >= 0.0) {
        return Err(Error::InvalidArgument(format!("J1 must be finite and >= 0, got {j1_target}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors = joint_factors(n, bath_dim);
    let mut h = Operator::zeros(factors.clone())?;
    for i in 0..n {
        for kind in [PauliKind::X, PauliKind::Y, PauliKind::Z] {
            let sigma = Pauli::single(n, i, kind)?.to_matrix()?;
            let b = Operator::new(vec![Factor::Bath(bath_dim)], random_hermitian(bath_dim, &mut rng))?;
            h = h.add(&sigma.tensor(&b)?)?;
        }
    }
    rescale(h, j1_target / 2.0)
}

/// Seeded random bath Hamiltonian with `‖H_B‖ = norm`.
pub fn build_bath_hamiltonian(bath_dim: usize, seed: u64, norm: f64) -> Result<Operator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // A separate stream keeps H_B independent of the coupling draws.
    rng.set_stream(1);
    let h = Operator::new(vec![Factor::Bath(bath_dim)], random_hermitian(bath_dim, &mut rng))?;
    rescale(h, norm)
}

/// `H = H_S ⊗ 1 + 1 ⊗ H_B + H_SB` together with the bound scales `J₀`, `J₁`.
#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    h_s: Operator,
    h_b: Operator,
    h_sb: Operator,
    j0: f64,
    j1: f64,
}

impl HamiltonianModel {
    /// Validates the parts and sets `J₀ = 2‖H₀‖`, `J₁ = 2‖H_SB‖`.
    pub fn new(code: &StabilizerCode, h_s: Operator, h_b: Operator, h_sb: Operator) -> Result<Self> {
        for part in [&h_s, &h_b, &h_sb] {
            part.check_hermitian()?;
        }
        let n = code.n();
        if h_s.factors() != vec![Factor::System(2); n].as_slice() {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: h_s.dim(),
            });
        }
        if h_b.factors().len() != 1 || !h_b.factors()[0].is_bath() {
            return Err(Error::MissingBath);
        }
        let joint: Vec<Factor> = h_s.factors().iter().chain(h_b.factors()).cloned().collect();
        if h_sb.factors() != joint.as_slice() {
            return Err(Error::DimensionMismatch {
                expected: joint.iter().map(|f| f.dim()).product(),
                found: h_sb.dim(),
            });
        }
        for s in code.nontrivial_elements() {
            let sm = s.to_matrix()?;
            let comm = h_s.mul(&sm)?.sub(&sm.mul(&h_s)?)?;
            if comm.max_abs() > HERMITIAN_TOL {
                return Err(Error::InvalidArgument(format!(
                    "H_S does not commute with stabilizer {s} (residual {:.3e})",
                    comm.max_abs()
                )));
            }
        }
        let mut model = HamiltonianModel {
            h_s,
            h_b,
            h_sb,
            j0: 0.0,
            j1: 0.0,
        };
        model.j0 = 2.0 * model.h0()?.spectral_norm();
        model.j1 = 2.0 * model.h_sb.spectral_norm();
        Ok(model)
    }

    /// Default model over the detection code: `H_S = (J₀/4) X̃₁`, seeded random
    /// `H_B` with `‖H_B‖ = J₀/4` and a seeded one-local coupling with `2‖H_SB‖ = J₁`.
    pub fn default_model(code: &StabilizerCode, bath_dim: usize, seed: u64, j0: f64, j1: f64) -> Result<Self> {
        if !(j0.is_finite() && j0 >= 0.0) {
            return Err(Error::InvalidArgument(format!("J0 must be finite and >= 0, got {j0}")));
        }
        let x1 = code.logical_operator(LogicalKind::X, 1)?.to_matrix()?;
        let h_s = x1.scale(Complex64::new(j0 / 4.0, 0.0));
        let h_b = build_bath_hamiltonian(bath_dim, seed, j0 / 4.0)?;
        let h_sb = build_one_local_coupling(code.n(), bath_dim, seed, j1)?;
        let model = HamiltonianModel::new(code, h_s, h_b, h_sb)?;
        let scale = j0.max(j1).max(1.0);
        if (model.j0 - j0).abs() > 1e-12 * scale || (model.j1 - j1).abs() > 1e-12 * scale {
            return Err(Error::Numerical(format!(
                "model scales J0 = {}, J1 = {} miss targets {j0}, {j1}",
                model.j0, model.j1
            )));
        }
        Ok(model)
    }

    pub fn h_s(&self) -> &Operator {
        &self.h_s
    }

    pub fn h_b(&self) -> &Operator {
        &self.h_b
    }

    pub fn h_sb(&self) -> &Operator {
        &self.h_sb
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    pub fn j1(&self) -> f64 {
        self.j1
    }

    pub fn bath_factor(&self) -> Factor {
        self.h_b.factors()[0]
    }

    /// `J₀ > J₁`, the scale ordering the bounds are stated under.
    pub fn scales_ordered(&self) -> bool {
        self.j0 > self.j1
    }

    /// `H₀ = H_S ⊗ 1 + 1 ⊗ H_B`.
    pub fn h0(&self) -> Result<Operator> {
        let hs = self.h_s.extend_identity(self.h_b.factors())?;
        let hb = Operator::identity(self.h_s.factors().to_vec())?.tensor(&self.h_b)?;
        hs.add(&hb)
    }

    /// `H₀ + H_SB`.
    pub fn h_total(&self) -> Result<Operator> {
        self.h0()?.add(&self.h_sb)
    }
}

/// One protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolConfig {
    pub code: StabilizerCode,
    pub strength: Strength,
    pub tau: f64,
    pub m: usize,
    pub variant: Variant,
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::InvalidArgument(format!("tau must be finite and >= 0, got {}", self.tau)));
        }
        if self.m == 0 {
            return Err(Error::InvalidArgument("M must be at least 1".into()));
        }
        Ok(())
    }

    /// The matching closed-form bound for `model`, `None` for [`Variant::None`].
    pub fn bound(&self, model: &HamiltonianModel) -> Result<Option<f64>> {
        let qbar = self.code.qbar();
        if qbar == 0 {
            return Err(Error::InvalidCode("bounds need at least one generator".into()));
        }
        let zeta = self.variant.effective_strength(self.strength).zeta();
        let (j0, j1) = (model.j0(), model.j1());
        let value = match self.variant {
            Variant::Group => bound_exact(&BoundInputs::group(j0, j1, self.tau, self.m, qbar, zeta))?,
            Variant::Generators => bound_exact(&BoundInputs::generators(j0, j1, self.tau, self.m, qbar, zeta))?,
            Variant::Strong => bound_strong(&BoundInputs::group(j0, j1, self.tau, self.m, qbar, 0.0))?,
            Variant::None => return Ok(None),
        };
        Ok(Some(value))
    }
}

/// `(P U(τ/M))^M ρ` with the channel (if any) already extended to the joint space.
pub fn run_with(
    rho_sb: &DensityMatrix,
    propagator: &Propagator,
    channel: Option<&KrausSet>,
    tau: f64,
    m: usize,
) -> Result<DensityMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let u = propagator.unitary(tau / m as f64);
    if u.nrows() != rho_sb.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.nrows(),
            found: rho_sb.dim(),
        });
    }
    let ud = u.adjoint();
    let mut rho = rho_sb.clone();
    for _ in 0..m {
        let evolved = rho.operator().with_matrix(&u * rho.matrix() * &ud)?;
        rho = DensityMatrix::from_channel_output(evolved)?;
        if let Some(k) = channel {
            rho = k.apply(&rho)?;
        }
    }
    Ok(rho)
}

/// Runs the protocol of `cfg` on `rho_sb` under `model`.
pub fn run_protocol(rho_sb: &DensityMatrix, model: &HamiltonianModel, cfg: &ProtocolConfig) -> Result<DensityMatrix> {
    cfg.validate()?;
    let propagator = Propagator::new(&model.h_total()?)?;
    let channel = match cfg.variant.kraus_set(&cfg.code, cfg.strength)? {
        Some(k) => Some(k.extend(model.h_b.factors())?),
        None => None,
    };
    run_with(rho_sb, &propagator, channel.as_ref(), cfg.tau, cfg.m)
}

/// Uncoupled, unprotected reference: evolution under `H₀` for time `tau`.
pub fn ideal_evolve(rho_sb: &DensityMatrix, model: &HamiltonianModel, tau: f64) -> Result<DensityMatrix> {
    rho_sb.evolve(&model.h0()?, tau)
}

/// Trace distance between the bath-traced states.
pub fn deviation(real: &DensityMatrix, ideal: &DensityMatrix) -> Result<f64> {
    trace_distance(&real.partial_trace_bath()?, &ideal.partial_trace_bath()?)
}

/// Splits `h` into components `H_r` with `Ω_s H_r Ω_s = (−1)^{r_s} H_r`, built by
/// repeatedly halving `H ± Ω H Ω`. Keys list `r_s` in the order of `omegas`.
pub fn decompose_hamiltonian(h: &Operator, omegas: &[Operator]) -> Result<BTreeMap<Vec<bool>, Operator>> {
    let dim = h.dim();
    let id = DMatrix::<Complex64>::identity(dim, dim);
    for (i, w) in omegas.iter().enumerate() {
        if w.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: w.dim(),
            });
        }
        let sq = (w.matrix() * w.matrix() - &id).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if sq > HERMITIAN_TOL {
            return Err(Error::InvalidArgument(format!("operator {i} does not square to the identity")));
        }
        for v in &omegas[..i] {
            let comm = (w.matrix() * v.matrix() - v.matrix() * w.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if comm > HERMITIAN_TOL {
                return Err(Error::InvalidArgument("decomposition operators must commute".into()));
            }
        }
    }
    let half = Complex64::new(0.5, 0.0);
    let mut parts = BTreeMap::new();
    parts.insert(Vec::new(), h.clone());
    for w in omegas {
        let mut next = BTreeMap::new();
        for (key, part) in parts {
            let conj = w.matrix() * part.matrix() * w.matrix();
            let mut even = key.clone();
            even.push(false);
            let mut odd = key;
            odd.push(true);
            next.insert(even, part.with_matrix((part.matrix() + &conj) * half)?);
            next.insert(odd, part.with_matrix((part.matrix() - &conj) * half)?);
        }
        parts = next;
    }
    Ok(parts)
}

/// [`decompose_hamiltonian`] over Pauli involutions acting on the leading
/// system qubits of `h`.
pub fn decompose_by_paulis(h: &Operator, paulis: &[Pauli]) -> Result<BTreeMap<Vec<bool>, Operator>> {
    let omegas = paulis
        .iter()
        .map(|p| {
            if !p.is_hermitian() {
                return Err(Error::InvalidArgument(format!("{p} is not an involution")));
            }
            let n = p.num_qubits();
            if h.factors().len() < n {
                return Err(Error::DimensionMismatch {
                    expected: 1 << n,
                    found: h.dim(),
                });
            }
            p.to_matrix()?.extend_identity(&h.factors()[n..])
        })
        .collect::<Result<Vec<_>>>()?;
    decompose_hamiltonian(h, &omegas)
}

/// Relative consistency required of the fitted scalar.
pub const SCALAR_FIT_TOL: f64 = 1e-10;

/// Fits `c` in `channel^j(L) = c·L` for `L = −i[coupling, ρ]`.
///
/// The scalar is read off the largest-magnitude entry of `L` and then checked
/// against every entry; a mismatch above [`SCALAR_FIT_TOL`] (relative to the
/// largest entry) is reported as [`Error::NotScalar`].
pub fn suppression_factor(rho: &DensityMatrix, coupling: &Operator, channel: &KrausSet, j: usize) -> Result<f64> {
    let l = coupling.liouvillian(rho.operator())?;
    let scale = l.max_abs();
    if scale < 1e-14 {
        return Err(Error::ZeroOperator);
    }
    let mut out = l.clone();
    for _ in 0..j {
        out = channel.apply_operator(&out)?;
    }
    let (idx, _) = l
        .matrix()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("operator is non-empty");
    let ratio = out.matrix().as_slice()[idx] / l.matrix().as_slice()[idx];
    let residual = out
        .matrix()
        .iter()
        .zip(l.matrix().iter())
        .map(|(o, x)| (o - ratio * x).norm())
        .fold(ratio.im.abs() * scale, f64::max)
        / scale;
    if residual > SCALAR_FIT_TOL {
        return Err(Error::NotScalar(residual));
    }
    Ok(ratio.re)
}

/// Suppression of the one-error coupling `E ⊗ B` on a codeword `ρ_S ⊗ ρ_B`
/// after `j` applications of the variant's channel over `code`.
pub fn error_suppression(
    rho: &DensityMatrix,
    error: &Pauli,
    bath_op: &Operator,
    code: &StabilizerCode,
    strength: Strength,
    j: usize,
    variant: Variant,
) -> Result<f64> {
    let channel = variant
        .kraus_set(code, strength)?
        .ok_or_else(|| Error::InvalidArgument("variant none has no channel".into()))?
        .extend(bath_op.factors())?;
    let coupling = error.to_matrix()?.tensor(bath_op)?;
    suppression_factor(rho, &coupling, &channel, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{encode_codeword, LogicalState};

    fn code4() -> StabilizerCode {
        StabilizerCode::detection_code(4).unwrap()
    }

    fn initial(code: &StabilizerCode, bits: &str) -> DensityMatrix {
        let sys = encode_codeword(code, &LogicalState::Bits(bits.into())).unwrap();
        let bath = DensityMatrix::maximally_mixed(vec![Factor::Bath(2)]).unwrap();
        sys.tensor(&bath).unwrap()
    }

    fn cfg(code: &StabilizerCode, variant: Variant, strength: Strength, m: usize) -> ProtocolConfig {
        ProtocolConfig {
            code: code.clone(),
            strength,
            tau: 1.0,
            m,
            variant,
        }
    }

    #[test]
    fn coupling_is_normalised_and_deterministic() {
        let a = build_one_local_coupling(4, 2, 7, 0.1).unwrap();
        let b = build_one_local_coupling(4, 2, 7, 0.1).unwrap();
        assert_eq!(a, b);
        assert!(a.hermiticity_defect() < 1e-15);
        assert!((2.0 * a.spectral_norm() - 0.1).abs() < 1e-12);
        let c = build_one_local_coupling(4, 2, 8, 0.1).unwrap();
        assert_ne!(a, c);
        assert!(build_one_local_coupling(4, 1, 7, 0.1).is_err());
    }

    #[test]
    fn default_model_scales() {
        let code = code4();
        let model = HamiltonianModel::default_model(&code, 2, 3, 1.0, 0.1).unwrap();
        assert!((model.j0() - 1.0).abs() < 1e-12);
        assert!((model.j1() - 0.1).abs() < 1e-12);
        assert!(model.scales_ordered());
        let flipped = HamiltonianModel::default_model(&code, 2, 3, 0.1, 1.0).unwrap();
        assert!(!flipped.scales_ordered());
    }

    #[test]
    fn non_commuting_system_hamiltonian_is_rejected() {
        let code = code4();
        let h_s = Pauli::single(4, 0, PauliKind::X).unwrap().to_matrix().unwrap();
        let h_b = Operator::zeros(vec![Factor::Bath(2)]).unwrap();
        let h_sb = Operator::zeros(joint_factors(4, 2)).unwrap();
        assert!(HamiltonianModel::new(&code, h_s, h_b, h_sb).is_err());
    }

    #[test]
    fn uncoupled_codeword_is_preserved() {
        let code = code4();
        let model = HamiltonianModel::default_model(&code, 2, 1, 1.0, 0.0).unwrap();
        let rho = initial(&code, "0110");
        let ideal = ideal_evolve(&rho, &model, 1.0).unwrap();
        for variant in Variant::ALL {
            for s in [Strength::Weak(0.5), Strength::Strong] {
                let out = run_protocol(&rho, &model, &cfg(&code, variant, s, 5)).unwrap();
                assert!(deviation(&out, &ideal).unwrap() < 1e-12, "{variant}");
            }
        }
    }

    #[test]
    fn zero_strength_matches_no_measurement() {
        let code = code4();
        let model = HamiltonianModel::default_model(&code, 2, 1, 1.0, 0.1).unwrap();
        let rho = initial(&code, "0000");
        let none = run_protocol(&rho, &model, &cfg(&code, Variant::None, Strength::none(), 1)).unwrap();
        for variant in [Variant::Group, Variant::Generators] {
            for m in [1, 3, 8] {
                let out = run_protocol(&rho, &model, &cfg(&code, variant, Strength::none(), m)).unwrap();
                assert!(out.operator().max_abs_diff(none.operator()).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn strong_variant_equals_projective_group() {
        let code = code4();
        let model = HamiltonianModel::default_model(&code, 2, 2, 1.0, 0.1).unwrap();
        let rho = initial(&code, "0000");
        let strong = run_protocol(&rho, &model, &cfg(&code, Variant::Strong, Strength::Weak(1.0), 6)).unwrap();
        let group = run_protocol(&rho, &model, &cfg(&code, Variant::Group, Strength::Strong, 6)).unwrap();
        assert!(strong.operator().max_abs_diff(group.operator()).unwrap() < 1e-12);
    }

    #[test]
    fn ideal_evolution_properties() {
        let code = code4();
        let model = HamiltonianModel::default_model(&code, 2, 4, 1.0, 0.1).unwrap();
        let rho = initial(&code, "0000");
        let same = ideal_evolve(&rho, &model, 0.0).unwrap();
        assert!(same.operator().max_abs_diff(rho.operator()).unwrap() < 1e-14);

        // H_S and H_B act on different factors, so their flows commute.
        let hs = model.h_s().extend_identity(model.h_b().factors()).unwrap();
        let hb = Operator::identity(vec![Factor::System(2); 4]).unwrap().tensor(model.h_b()).unwrap();
        let split = rho.evolve(&hs, 0.7).unwrap().evolve(&hb, 0.7).unwrap();
        let joint = ideal_evolve(&rho, &model, 0.7).unwrap();
        assert!(split.operator().max_abs_diff(joint.operator()).unwrap() < 1e-12);

        let sys = joint.partial_trace_bath().unwrap();
        for s in code.nontrivial_elements() {
            let e = sys.expectation(&s.to_matrix().unwrap()).unwrap();
            assert!((e.re - 1.0).abs() < 1e-12 && e.im.abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_of_single_flip() {
        let x1 = Pauli::single(4, 0, PauliKind::X).unwrap();
        let parts = decompose_by_paulis(&x1.to_matrix().unwrap(), code4().generators()).unwrap();
        assert_eq!(parts.len(), 4);
        for (key, part) in &parts {
            let nonzero = part.max_abs() > 1e-14;
            assert_eq!(nonzero, key == &vec![false, true], "{key:?}");
        }
    }

    #[test]
    fn decomposition_sums_and_symmetries() {
        let code = code4();
        let model = HamiltonianModel::default_model(&code, 2, 5, 1.0, 0.3).unwrap();
        let h = model.h_total().unwrap();
        let parts = decompose_by_paulis(&h, code.generators()).unwrap();
        let mut sum = Operator::zeros(h.factors().to_vec()).unwrap();
        for (key, part) in &parts {
            sum = sum.add(part).unwrap();
            assert!(part.spectral_norm() <= h.spectral_norm() + 1e-12);
            for (g, &odd) in code.generators().iter().zip(key) {
                let w = g.to_matrix().unwrap().extend_identity(&[Factor::Bath(2)]).unwrap();
                let conj = w.mul(part).unwrap().mul(&w).unwrap();
                let expect = if odd { part.scale(Complex64::new(-1.0, 0.0)) } else { part.clone() };
                assert!(conj.max_abs_diff(&expect).unwrap() < 1e-13);
            }
        }
        assert!(sum.max_abs_diff(&h).unwrap() < 1e-13);

        let commuting = model.h_s().clone();
        let parts = decompose_by_paulis(&commuting, code.generators()).unwrap();
        for (key, part) in parts {
            assert_eq!(part.max_abs() > 1e-14, key.iter().all(|r| !r));
        }
    }

    #[test]
    fn decomposition_rejects_bad_operators() {
        let h = Pauli::single(2, 0, PauliKind::X).unwrap().to_matrix().unwrap();
        let not_involution = h.scale(Complex64::new(2.0, 0.0));
        assert!(decompose_hamiltonian(&h, &[not_involution]).is_err());
        let x = h.clone();
        let z = Pauli::single(2, 0, PauliKind::Z).unwrap().to_matrix().unwrap();
        assert!(decompose_hamiltonian(&h, &[x, z]).is_err());
    }

    #[test]
    fn suppression_examples() {
        let code = code4();
        let rho = initial(&code, "0000");
        let bath_op = Operator::new(
            vec![Factor::Bath(2)],
            DMatrix::from_row_slice(2, 2, &[
                Complex64::new(0.3, 0.0), Complex64::new(0.1, -0.4),
                Complex64::new(0.1, 0.4), Complex64::new(-0.2, 0.0),
            ]),
        )
        .unwrap();
        let x1 = Pauli::single(4, 0, PauliKind::X).unwrap();
        let s = Strength::Weak(0.8);
        let z = s.zeta();
        let g = error_suppression(&rho, &x1, &bath_op, &code, s, 1, Variant::Group).unwrap();
        assert!((g - z * z).abs() < 1e-12);
        let g3 = error_suppression(&rho, &x1, &bath_op, &code, s, 3, Variant::Group).unwrap();
        assert!((g3 - z.powi(6)).abs() < 1e-12);
        let r = error_suppression(&rho, &x1, &bath_op, &code, s, 1, Variant::Generators).unwrap();
        assert!((r - z).abs() < 1e-12);
        let one = error_suppression(&rho, &x1, &bath_op, &code, Strength::none(), 2, Variant::Group).unwrap();
        assert!((one - 1.0).abs() < 1e-12);

        let zero_bath = Operator::zeros(vec![Factor::Bath(2)]).unwrap();
        assert_eq!(
            error_suppression(&rho, &x1, &zero_bath, &code, s, 1, Variant::Group),
            Err(Error::ZeroOperator)
        );
    }

    #[test]
    fn variant_parsing() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("bogus".parse::<Variant>().is_err());
    }
}
