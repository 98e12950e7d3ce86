//! Pauli operators in symplectic form and stabilizer codes built from them.
//!
//! A [`Pauli`] on `n` qubits is stored as two bit masks (`x`, `z`) plus a phase
//! `i^k`. Bit `j` of each mask refers to qubit `j`, which is also the `j`-th
//! character of the text form and the `j`-th (leftmost first) Kronecker factor of
//! the dense matrix. A qubit with both bits set carries `Y`, not `XZ`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{self, Factor, Operator};

/// Widest register the bit-mask representation supports.
pub const MAX_QUBITS: usize = 64;

/// Largest number of generators whose group is enumerated eagerly.
pub const MAX_GENERATORS: usize = 20;

/// A fourth root of unity `i^k`, stored as `k mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i32) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase::from_exponent(-(self.0 as i32))
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Single-qubit Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliKind {
    I,
    X,
    Y,
    Z,
}

impl PauliKind {
    fn bits(self) -> (bool, bool) {
        match self {
            PauliKind::I => (false, false),
            PauliKind::X => (true, false),
            PauliKind::Y => (true, true),
            PauliKind::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliKind::I,
            (true, false) => PauliKind::X,
            (true, true) => PauliKind::Y,
            (false, true) => PauliKind::Z,
        }
    }

    fn symbol(self) -> char {
        match self {
            PauliKind::I => 'I',
            PauliKind::X => 'X',
            PauliKind::Y => 'Y',
            PauliKind::Z => 'Z',
        }
    }
}

/// An `n`-qubit Pauli operator with phase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pauli {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_width(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::InvalidArgument(format!(
            "{n} qubits exceeds the {MAX_QUBITS}-qubit Pauli width"
        )));
    }
    Ok(())
}

impl Pauli {
    pub fn identity(n: usize) -> Result<Self> {
        check_width(n)?;
        Ok(Pauli {
            n,
            x: 0,
            z: 0,
            phase: Phase::ONE,
        })
    }

    /// Builds a Pauli from raw masks; bits above `n` are rejected.
    pub fn from_bits(n: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        check_width(n)?;
        if (x | z) & !mask(n) != 0 {
            return Err(Error::InvalidArgument(format!(
                "bit masks exceed {n} qubits"
            )));
        }
        Ok(Pauli { n, x, z, phase })
    }

    /// `sigma^kind` acting on qubit `qubit` (0-based) of an `n`-qubit register.
    pub fn single(n: usize, qubit: usize, kind: PauliKind) -> Result<Self> {
        check_width(n)?;
        if qubit >= n {
            return Err(Error::InvalidArgument(format!(
                "qubit {qubit} out of range for {n} qubits"
            )));
        }
        let (bx, bz) = kind.bits();
        Ok(Pauli {
            n,
            x: (bx as u64) << qubit,
            z: (bz as u64) << qubit,
            phase: Phase::ONE,
        })
    }

    /// The same single-qubit Pauli on every qubit, e.g. `X^{⊗n}`.
    pub fn uniform(n: usize, kind: PauliKind) -> Result<Self> {
        check_width(n)?;
        let (bx, bz) = kind.bits();
        let m = mask(n);
        Ok(Pauli {
            n,
            x: if bx { m } else { 0 },
            z: if bz { m } else { 0 },
            phase: Phase::ONE,
        })
    }

    pub fn from_kinds(kinds: &[PauliKind], phase: Phase) -> Result<Self> {
        check_width(kinds.len())?;
        let (mut x, mut z) = (0u64, 0u64);
        for (j, k) in kinds.iter().enumerate() {
            let (bx, bz) = k.bits();
            x |= (bx as u64) << j;
            z |= (bz as u64) << j;
        }
        Ok(Pauli {
            n: kinds.len(),
            x,
            z,
            phase,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn kind(&self, qubit: usize) -> PauliKind {
        PauliKind::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn kinds(&self) -> Vec<PauliKind> {
        (0..self.n).map(|j| self.kind(j)).collect()
    }

    /// Qubits on which the operator acts non-trivially, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| (self.x | self.z) >> j & 1 == 1).collect()
    }

    /// Number of non-identity tensor factors (the operator's locality).
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// True when the tensor part is the identity, whatever the phase.
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Hermitian Paulis have a real phase.
    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Tensor part equality, ignoring phase.
    pub fn same_tensor(&self, other: &Pauli) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    fn check_same_n(&self, other: &Pauli) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &Pauli) -> Result<Pauli> {
        self.check_same_n(other)?;
        // Exponent of i picked up when commuting single-qubit factors into canonical form.
        let mut k: i32 = 0;
        for j in 0..self.n {
            let (x1, z1) = ((self.x >> j & 1) as i32, (self.z >> j & 1) as i32);
            let (x2, z2) = ((other.x >> j & 1) as i32, (other.z >> j & 1) as i32);
            k += match (x1, z1) {
                (0, 0) => 0,
                (1, 1) => z2 - x2,
                (1, 0) => z2 * (2 * x2 - 1),
                _ => x2 * (1 - 2 * z2),
            };
        }
        Ok(Pauli {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: self.phase * other.phase * Phase::from_exponent(k),
        })
    }

    /// Symplectic form `Σ (a.x·b.z + a.z·b.x) mod 2`.
    pub fn symplectic_product(&self, other: &Pauli) -> Result<bool> {
        self.check_same_n(other)?;
        let ones = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(ones % 2 == 1)
    }

    pub fn commutes(&self, other: &Pauli) -> Result<bool> {
        Ok(!self.symplectic_product(other)?)
    }

    /// Dense `2^n × 2^n` matrix, with qubit 0 as the most significant index bit.
    pub fn to_matrix(&self) -> Result<Operator> {
        let cap = hilbert::dense_cap();
        if self.n > cap {
            return Err(Error::DenseCap {
                qubits: self.n,
                cap,
            });
        }
        let dim = 1usize << self.n;
        // Map qubit-indexed masks to basis-index bit positions.
        let to_index = |m: u64| -> usize {
            (0..self.n).fold(0usize, |acc, j| {
                acc | (((m >> j & 1) as usize) << (self.n - 1 - j))
            })
        };
        let xi = to_index(self.x);
        let zi = to_index(self.z);
        let ys = (self.x & self.z).count_ones() as i32;
        let base = self.phase * Phase::from_exponent(ys);
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for col in 0..dim {
            let sign = if (zi & col).count_ones() % 2 == 1 {
                Phase::MINUS_ONE
            } else {
                Phase::ONE
            };
            m[(col ^ xi, col)] = (base * sign).to_complex();
        }
        Operator::new(vec![Factor::System(2); self.n], m)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase.0 {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for j in 0..self.n {
            write!(f, "{}", self.kind(j).symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Pauli {
    type Err = Error;

    /// Parses `[+|-|+i|-i|i]` followed by letters from `IXYZ`. The Unicode minus
    /// sign is accepted in place of `-`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars().peekable();
        let mut k = 0i32;
        match chars.peek() {
            Some('+') => {
                chars.next();
            }
            Some('-') | Some('\u{2212}') => {
                chars.next();
                k += 2;
            }
            _ => {}
        }
        if chars.peek() == Some(&'i') {
            chars.next();
            k += 1;
        }
        let mut kinds = Vec::new();
        for c in chars {
            kinds.push(match c {
                'I' => PauliKind::I,
                'X' => PauliKind::X,
                'Y' => PauliKind::Y,
                'Z' => PauliKind::Z,
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {other:?} in Pauli string {s:?}"
                    )))
                }
            });
        }
        if kinds.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string {s:?}")));
        }
        Pauli::from_kinds(&kinds, Phase::from_exponent(k))
    }
}

impl Serialize for Pauli {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Pauli {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rank over GF(2) of the symplectic rows `(x | z)` of `paulis`.
pub fn symplectic_rank(paulis: &[Pauli]) -> usize {
    let mut rows: Vec<u128> = paulis
        .iter()
        .map(|p| (p.x as u128) | ((p.z as u128) << 64))
        .collect();
    let mut rank = 0;
    for bit in 0..128 {
        let pivot = (rank..rows.len()).find(|&r| rows[r] >> bit & 1 == 1);
        if let Some(p) = pivot {
            rows.swap(rank, p);
            let pivot_row = rows[rank];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && *row >> bit & 1 == 1 {
                    *row ^= pivot_row;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Which part of a code to scan in [`StabilizerCode::anticommuting_count`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Group,
    Generators,
}

/// Logical operator family of the detection code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogicalKind {
    X,
    Z,
}

/// An `[[n, k]]` stabilizer code with its generators and fully enumerated group.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerCode {
    n: usize,
    generators: Vec<Pauli>,
    group: Vec<Pauli>,
}

impl StabilizerCode {
    /// Validates the generators and enumerates the group.
    pub fn new(n: usize, generators: Vec<Pauli>) -> Result<Self> {
        check_width(n)?;
        for g in &generators {
            if g.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.n,
                });
            }
        }
        let group = if generators.is_empty() {
            vec![Pauli::identity(n)?]
        } else {
            enumerate_group(&generators)?
        };
        Ok(StabilizerCode {
            n,
            generators,
            group,
        })
    }

    /// The `[[n, n-2, 2]]` code generated by `X^{⊗n}` and `Z^{⊗n}`.
    pub fn detection_code(n: usize) -> Result<Self> {
        if n < 2 || n % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "detection code needs an even n >= 2, got {n}"
            )));
        }
        StabilizerCode::new(
            n,
            vec![
                Pauli::uniform(n, PauliKind::X)?,
                Pauli::uniform(n, PauliKind::Z)?,
            ],
        )
    }

    /// Samples a code with `qbar` random commuting, independent generators.
    pub fn random<R: Rng + ?Sized>(n: usize, qbar: usize, rng: &mut R) -> Result<Self> {
        if qbar > n {
            return Err(Error::InvalidArgument(format!(
                "cannot fit {qbar} independent commuting generators on {n} qubits"
            )));
        }
        check_width(n)?;
        let m = mask(n);
        let mut generators: Vec<Pauli> = Vec::with_capacity(qbar);
        let mut attempts = 0usize;
        while generators.len() < qbar {
            attempts += 1;
            if attempts > 100_000 {
                return Err(Error::Numerical("random code sampling did not converge".into()));
            }
            let candidate = Pauli {
                n,
                x: rng.gen::<u64>() & m,
                z: rng.gen::<u64>() & m,
                phase: if rng.gen::<bool>() {
                    Phase::ONE
                } else {
                    Phase::MINUS_ONE
                },
            };
            if candidate.is_identity_up_to_phase() {
                continue;
            }
            if !generators.iter().all(|g| g.commutes(&candidate).unwrap_or(false)) {
                continue;
            }
            let mut trial = generators.clone();
            trial.push(candidate);
            if symplectic_rank(&trial) == trial.len() {
                generators = trial;
            }
        }
        StabilizerCode::new(n, generators)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of encoded qubits.
    pub fn k(&self) -> usize {
        self.n - self.generators.len()
    }

    /// Number of generators, `n - k`.
    pub fn qbar(&self) -> usize {
        self.generators.len()
    }

    /// Number of non-identity group elements, `2^qbar - 1`.
    pub fn q_cap(&self) -> usize {
        self.group.len() - 1
    }

    pub fn generators(&self) -> &[Pauli] {
        &self.generators
    }

    /// All group elements; index `i` is the product of generators selected by the bits of `i`.
    pub fn group(&self) -> &[Pauli] {
        &self.group
    }

    /// Group elements other than the identity.
    pub fn nontrivial_elements(&self) -> &[Pauli] {
        &self.group[1..]
    }

    pub fn anticommuting_count(&self, p: &Pauli, scope: Scope) -> Result<usize> {
        let set = match scope {
            Scope::Group => &self.group[..],
            Scope::Generators => &self.generators[..],
        };
        let mut count = 0;
        for s in set {
            if s.symplectic_product(p)? {
                count += 1;
            }
        }
        Ok(count)
    }

    /// True when `p` commutes with every generator.
    pub fn in_normalizer(&self, p: &Pauli) -> Result<bool> {
        Ok(self.anticommuting_count(p, Scope::Generators)? == 0)
    }

    /// True when `p` equals a group element up to phase.
    pub fn contains_up_to_phase(&self, p: &Pauli) -> bool {
        self.group.iter().any(|s| s.same_tensor(p))
    }

    pub(crate) fn is_detection_code(&self) -> bool {
        self.n >= 2
            && self.generators.len() == 2
            && self.generators[0].same_tensor(&Pauli::uniform(self.n, PauliKind::X).unwrap())
            && self.generators[1].same_tensor(&Pauli::uniform(self.n, PauliKind::Z).unwrap())
    }

    /// Encoded `X̃_j = σ_1^x σ_{j+1}^x` or `Z̃_j = σ_{j+1}^z σ_n^z` of the detection
    /// code, with `j` running from 1 to `n - 2`.
    pub fn logical_operator(&self, kind: LogicalKind, j: usize) -> Result<Pauli> {
        if !self.is_detection_code() {
            return Err(Error::InvalidCode(
                "logical operators are defined for the [[n, n-2, 2]] detection code".into(),
            ));
        }
        if j == 0 || j + 2 > self.n {
            return Err(Error::InvalidArgument(format!(
                "logical index {j} outside 1..={}",
                self.n - 2
            )));
        }
        let n = self.n;
        match kind {
            LogicalKind::X => Pauli::single(n, 0, PauliKind::X)?
                .multiply(&Pauli::single(n, j, PauliKind::X)?),
            LogicalKind::Z => Pauli::single(n, j, PauliKind::Z)?
                .multiply(&Pauli::single(n, n - 1, PauliKind::Z)?),
        }
    }
}

/// All `2^qbar` products of `generators`, identity first.
///
/// Element `i` is the product of the generators whose index bit is set in `i`.
/// An empty generator list yields the zero-qubit identity.
pub fn enumerate_group(generators: &[Pauli]) -> Result<Vec<Pauli>> {
    let n = match generators.first() {
        Some(g) => g.n,
        None => return Ok(vec![Pauli::identity(0)?]),
    };
    if generators.len() > MAX_GENERATORS {
        return Err(Error::InvalidCode(format!(
            "{} generators exceeds the enumeration cap of {MAX_GENERATORS}",
            generators.len()
        )));
    }
    for (a, g) in generators.iter().enumerate() {
        if g.n != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.n,
            });
        }
        if !g.is_hermitian() {
            return Err(Error::InvalidCode(format!("generator {g} is not Hermitian")));
        }
        if g.is_identity_up_to_phase() {
            return Err(Error::InvalidCode(format!("generator {g} is the identity")));
        }
        for h in &generators[a + 1..] {
            if !g.commutes(h)? {
                return Err(Error::InvalidCode(format!("generators {g} and {h} anticommute")));
            }
        }
    }
    if symplectic_rank(generators) != generators.len() {
        return Err(Error::InvalidCode("generators are not independent".into()));
    }
    let size = 1usize << generators.len();
    let mut group = Vec::with_capacity(size);
    group.push(Pauli::identity(n)?);
    for i in 1..size {
        let low = i.trailing_zeros() as usize;
        // Reuse the element with the lowest set bit cleared.
        let prev = &group[i & (i - 1)];
        let elem = prev.multiply(&generators[low])?;
        group.push(elem);
    }
    Ok(group)
}

/// Every Pauli (phase +1) on `n` qubits with weight between 1 and `max_weight`.
pub fn paulis_up_to_weight(n: usize, max_weight: usize) -> Result<Vec<Pauli>> {
    check_width(n)?;
    let mut out = Vec::new();
    let kinds = [PauliKind::X, PauliKind::Y, PauliKind::Z];
    fn rec(
        n: usize,
        start: usize,
        left: usize,
        current: &mut Vec<(usize, PauliKind)>,
        kinds: &[PauliKind; 3],
        out: &mut Vec<Pauli>,
    ) {
        if !current.is_empty() {
            let mut all = vec![PauliKind::I; n];
            for &(q, k) in current.iter() {
                all[q] = k;
            }
            out.push(Pauli::from_kinds(&all, Phase::ONE).expect("width checked"));
        }
        if left == 0 {
            return;
        }
        for q in start..n {
            for &k in kinds {
                current.push((q, k));
                rec(n, q + 1, left - 1, current, kinds, out);
                current.pop();
            }
        }
    }
    rec(n, 0, max_weight, &mut Vec::new(), &kinds, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Pauli {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("-iY"));
        assert_eq!(p("Z").multiply(&p("X")).unwrap(), p("+iY"));
    }

    #[test]
    fn identity_is_neutral() {
        let a = p("-iXZIY");
        assert_eq!(a.multiply(&p("IIII")).unwrap(), a);
        assert_eq!(p("IIII").multiply(&a).unwrap(), a);
    }

    #[test]
    fn xxxx_times_zzzz() {
        // Per-qubit X·Z = -iY, and (-i)^4 = 1.
        assert_eq!(p("XXXX").multiply(&p("ZZZZ")).unwrap(), p("YYYY"));
    }

    #[test]
    fn mismatched_widths_are_rejected() {
        assert!(matches!(
            p("XX").multiply(&p("X")),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(p("XX").commutes(&p("Z")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(!p("XIII").commutes(&p("ZZZZ")).unwrap());
    }

    #[test]
    fn parse_and_display() {
        let q = p("\u{2212}iXZIY");
        assert_eq!(q.phase(), Phase::MINUS_I);
        assert_eq!(q.to_string(), "-iXZIY");
        assert_eq!(p("+XY").to_string(), "XY");
        assert_eq!(p("-ZZ").to_string(), "-ZZ");
        assert_eq!(p("iX").phase(), Phase::I);
        assert!("XQ".parse::<Pauli>().is_err());
        assert!("".parse::<Pauli>().is_err());
        assert_eq!(q.weight(), 3);
        assert_eq!(q.support(), vec![0, 1, 3]);
    }

    #[test]
    fn group_of_detection_code() {
        let code = StabilizerCode::detection_code(4).unwrap();
        let strs: Vec<String> = code.group().iter().map(|g| g.to_string()).collect();
        assert_eq!(strs, ["IIII", "XXXX", "ZZZZ", "YYYY"]);
        assert_eq!(code.qbar(), 2);
        assert_eq!(code.q_cap(), 3);
        assert_eq!(code.k(), 2);
    }

    #[test]
    fn smallest_detection_code_carries_minus_yy() {
        // XX·ZZ = (-i)^2 YY: the n = 2 stabilizer of the Bell state holds -YY.
        let code = StabilizerCode::detection_code(2).unwrap();
        let strs: Vec<String> = code.group().iter().map(|g| g.to_string()).collect();
        assert_eq!(strs, ["II", "XX", "ZZ", "-YY"]);
        assert_eq!(code.k(), 0);
    }

    #[test]
    fn odd_detection_code_is_rejected() {
        assert!(StabilizerCode::detection_code(3).is_err());
        assert!(StabilizerCode::detection_code(0).is_err());
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(enumerate_group(&[]).unwrap().len(), 1);
        let g = enumerate_group(&[p("XX")]).unwrap();
        assert_eq!(g, vec![p("II"), p("XX")]);
    }

    #[test]
    fn invalid_generator_sets() {
        assert!(matches!(
            StabilizerCode::new(2, vec![p("XI"), p("ZI")]),
            Err(Error::InvalidCode(_))
        ));
        assert!(matches!(
            StabilizerCode::new(2, vec![p("XX"), p("ZZ"), p("YY")]),
            Err(Error::InvalidCode(_))
        ));
        assert!(matches!(
            StabilizerCode::new(2, vec![p("II")]),
            Err(Error::InvalidCode(_))
        ));
        assert!(matches!(
            StabilizerCode::new(2, vec![p("iXX")]),
            Err(Error::InvalidCode(_))
        ));
    }

    #[test]
    fn anticommuting_counts() {
        let code = StabilizerCode::detection_code(4).unwrap();
        let x1 = p("XIII");
        assert_eq!(code.anticommuting_count(&x1, Scope::Group).unwrap(), 2);
        assert_eq!(code.anticommuting_count(&x1, Scope::Generators).unwrap(), 1);
        let id = p("IIII");
        assert_eq!(code.anticommuting_count(&id, Scope::Group).unwrap(), 0);
    }

    #[test]
    fn logical_operators_of_detection_code() {
        let code = StabilizerCode::detection_code(4).unwrap();
        assert_eq!(code.logical_operator(LogicalKind::X, 1).unwrap(), p("XXII"));
        assert_eq!(code.logical_operator(LogicalKind::Z, 2).unwrap(), p("IIZZ"));
        for kind in [LogicalKind::X, LogicalKind::Z] {
            for j in 1..=2 {
                let l = code.logical_operator(kind, j).unwrap();
                assert!(l.commutes(&p("XXXX")).unwrap());
                assert!(l.commutes(&p("ZZZZ")).unwrap());
                assert!(!code.contains_up_to_phase(&l));
            }
        }
        assert!(code.logical_operator(LogicalKind::X, 0).is_err());
        assert!(code.logical_operator(LogicalKind::X, 3).is_err());
        let other = StabilizerCode::new(2, vec![p("XX")]).unwrap();
        assert!(other.logical_operator(LogicalKind::X, 1).is_err());
    }

    #[test]
    fn small_matrices() {
        let x = p("X").to_matrix().unwrap();
        assert_eq!(x.matrix()[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(x.matrix()[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(x.matrix()[(0, 0)], Complex64::new(0.0, 0.0));
        let my = p("-iY").to_matrix().unwrap();
        assert_eq!(my.matrix()[(0, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(my.matrix()[(1, 0)], Complex64::new(1.0, 0.0));
        let xxxx = p("XXXX").to_matrix().unwrap();
        assert!(xxxx.matrix().trace().norm() < 1e-15);
        let sq = xxxx.matrix() * xxxx.matrix();
        assert!((sq - DMatrix::<Complex64>::identity(16, 16)).norm() < 1e-15);
    }

    #[test]
    fn weight_enumeration_counts() {
        // 3n + 9 n(n-1)/2 Paulis of weight one or two.
        let all = paulis_up_to_weight(5, 2).unwrap();
        assert_eq!(all.len(), 15 + 90);
        assert!(all.iter().all(|q| (1..=2).contains(&q.weight())));
    }

    #[test]
    fn random_codes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            for qbar in 0..=n {
                let code = StabilizerCode::random(n, qbar, &mut rng).unwrap();
                assert_eq!(code.group().len(), 1 << qbar);
                assert_eq!(code.k(), n - qbar);
            }
        }
    }
}
