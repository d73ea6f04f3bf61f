//! Dense qubit-space oracle: basis vectors, fermionic creation and
//! annihilation matrices, and the matrix forms of the logic gates.
//!
//! Basis states of `N` cells are packed into an integer index with cell 1 as
//! the least significant bit. The creation/annihilation operator of cell `k`
//! carries the third Pauli matrix on every cell after `k`, so
//! `a_k |n> = (-1)^(n_{k+1} + ... + n_N) |n - e_k>`.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);

/// Basis element `|n_1, ..., n_N>` of `N` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    pub bits: usize,
    pub n_cells: usize,
}

impl BasisIndex {
    pub fn new(bits: usize, n_cells: usize) -> Self {
        assert!(bits < (1 << n_cells), "basis index outside 2^N");
        Self { bits, n_cells }
    }

    /// From the occupation list `[n_1, ..., n_N]`.
    pub fn from_cells(cells: &[u8]) -> Self {
        let bits = cells
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as usize & 1) << i));
        Self::new(bits, cells.len())
    }

    /// Occupation of cell `k` (1-based).
    pub fn cell(&self, k: usize) -> u8 {
        ((self.bits >> (k - 1)) & 1) as u8
    }

    pub fn cells(&self) -> Vec<u8> {
        (1..=self.n_cells).map(|k| self.cell(k)).collect()
    }
}

/// `<n|m>` under the reversed dual tensor order; the Kronecker delta.
pub fn dual_pairing(bra: BasisIndex, ket: BasisIndex) -> Result<C64> {
    if bra.n_cells != ket.n_cells {
        return Err(Error::Arity(format!(
            "pairing a {}-cell bra with a {}-cell ket",
            bra.n_cells, ket.n_cells
        )));
    }
    Ok(if bra.bits == ket.bits { ONE } else { ZERO })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub n_cells: usize,
    pub amplitudes: DVector<C64>,
}

impl FockVector {
    pub fn basis(b: BasisIndex) -> Self {
        let mut v = DVector::zeros(1 << b.n_cells);
        v[b.bits] = ONE;
        Self {
            n_cells: b.n_cells,
            amplitudes: v,
        }
    }

    pub fn from_amplitudes(n_cells: usize, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), 1 << n_cells, "dimension must be 2^N");
        Self {
            n_cells,
            amplitudes: DVector::from_vec(amps),
        }
    }

    /// Hermitian inner product, antilinear in `self`.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn max_deviation(&self, other: &FockVector) -> f64 {
        (&self.amplitudes - &other.amplitudes)
            .iter()
            .fold(0.0, |a, c| a.max(c.norm()))
    }
}

/// Dense operator `F_{n_in} -> F_{n_out}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub n_in: usize,
    pub n_out: usize,
    pub entries: DMatrix<C64>,
}

impl FockOperator {
    pub fn new(n_in: usize, n_out: usize, entries: DMatrix<C64>) -> Self {
        assert_eq!(entries.nrows(), 1 << n_out);
        assert_eq!(entries.ncols(), 1 << n_in);
        Self {
            n_in,
            n_out,
            entries,
        }
    }

    pub fn zeros(n_in: usize, n_out: usize) -> Self {
        Self::new(n_in, n_out, DMatrix::zeros(1 << n_out, 1 << n_in))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, n, DMatrix::identity(1 << n, 1 << n))
    }

    /// Builds the operator from its action on basis states: `f(m)` lists
    /// `(n, amplitude)` pairs of the image of `|m>`.
    pub fn from_action(
        n_in: usize,
        n_out: usize,
        f: impl Fn(usize) -> Vec<(usize, C64)>,
    ) -> Self {
        let mut op = Self::zeros(n_in, n_out);
        for m in 0..(1 << n_in) {
            for (n, a) in f(m) {
                op.entries[(n, m)] += a;
            }
        }
        op
    }

    pub fn is_square(&self) -> bool {
        self.n_in == self.n_out
    }

    pub fn dim_in(&self) -> usize {
        1 << self.n_in
    }

    pub fn dim_out(&self) -> usize {
        1 << self.n_out
    }

    /// `self * rhs`, i.e. `rhs` acts first.
    pub fn compose(&self, rhs: &FockOperator) -> Result<FockOperator> {
        if self.n_in != rhs.n_out {
            return Err(Error::Arity(format!(
                "composing {}-input operator after {}-output operator",
                self.n_in, rhs.n_out
            )));
        }
        Ok(FockOperator::new(
            rhs.n_in,
            self.n_out,
            &self.entries * &rhs.entries,
        ))
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.n_cells != self.n_in {
            return Err(Error::Arity(format!(
                "{}-cell vector into {}-input operator",
                v.n_cells, self.n_in
            )));
        }
        Ok(FockVector {
            n_cells: self.n_out,
            amplitudes: &self.entries * &v.amplitudes,
        })
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator::new(self.n_out, self.n_in, self.entries.adjoint())
    }

    pub fn scale(&self, s: C64) -> FockOperator {
        FockOperator::new(self.n_in, self.n_out, self.entries.map(|c| c * s))
    }

    pub fn add(&self, other: &FockOperator) -> FockOperator {
        assert_eq!((self.n_in, self.n_out), (other.n_in, other.n_out));
        FockOperator::new(self.n_in, self.n_out, &self.entries + &other.entries)
    }

    pub fn sub(&self, other: &FockOperator) -> FockOperator {
        self.add(&other.scale(-ONE))
    }

    pub fn max_deviation(&self, other: &FockOperator) -> f64 {
        if (self.n_in, self.n_out) != (other.n_in, other.n_out) {
            return f64::INFINITY;
        }
        (&self.entries - &other.entries)
            .iter()
            .fold(0.0, |a, c| a.max(c.norm()))
    }

    /// `max |U^+ U - 1|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.entries.adjoint() * &self.entries;
        let id = DMatrix::<C64>::identity(p.nrows(), p.ncols());
        (p - id).iter().fold(0.0, |a, c| a.max(c.norm()))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.entries - self.entries.adjoint())
            .iter()
            .fold(0.0, |a, c| a.max(c.norm()))
    }

    /// True when every entry is 0 or 1 and each column holds exactly one 1.
    pub fn is_classical(&self, tol: f64) -> bool {
        (0..self.dim_in()).all(|m| {
            let mut ones = 0;
            for n in 0..self.dim_out() {
                let c = self.entries[(n, m)];
                if (c - ONE).norm() < tol {
                    ones += 1;
                } else if c.norm() >= tol {
                    return false;
                }
            }
            ones == 1
        })
    }

    /// Image of a basis state when it is (up to `tol`) another basis state
    /// with amplitude exactly 1.
    pub fn classical_image(&self, m: usize, tol: f64) -> Option<usize> {
        let mut hit = None;
        for n in 0..self.dim_out() {
            let c = self.entries[(n, m)];
            if (c - ONE).norm() < tol {
                if hit.is_some() {
                    return None;
                }
                hit = Some(n);
            } else if c.norm() >= tol {
                return None;
            }
        }
        hit
    }

    /// Matrix exponential `exp(s * self)` of a Hermitian operator via its
    /// eigendecomposition.
    pub fn exp_hermitian(&self, s: C64) -> Result<FockOperator> {
        let defect = self.hermiticity_defect();
        if defect > 1e-12 {
            return Err(Error::NotHermitian(defect));
        }
        let eig = self.entries.clone().symmetric_eigen();
        let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| (s * l).exp()));
        let u = eig.eigenvectors.clone();
        let out = &u * d * u.adjoint();
        Ok(FockOperator::new(self.n_in, self.n_out, out))
    }
}

impl fmt::Display for FockOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim_out() {
            let row: Vec<String> = (0..self.dim_in())
                .map(|c| crate::grassmann::fmt_complex(self.entries[(r, c)]))
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn check_cell(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::CellOutOfRange { k, n })
    } else {
        Ok(())
    }
}

/// Parity-string sign `(-1)^(n_{k+1} + ... + n_N)`.
#[inline]
pub fn string_sign(bits: usize, k: usize) -> f64 {
    if (bits >> k).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `a_k^+` on `N` cells.
pub fn creation(k: usize, n: usize) -> Result<FockOperator> {
    check_cell(k, n)?;
    let bit = 1 << (k - 1);
    Ok(FockOperator::from_action(n, n, |m| {
        if m & bit != 0 {
            vec![]
        } else {
            vec![(m | bit, C64::new(string_sign(m, k), 0.0))]
        }
    }))
}

/// `a_k^-` on `N` cells.
pub fn annihilation(k: usize, n: usize) -> Result<FockOperator> {
    check_cell(k, n)?;
    let bit = 1 << (k - 1);
    Ok(FockOperator::from_action(n, n, |m| {
        if m & bit == 0 {
            vec![]
        } else {
            vec![(m & !bit, C64::new(string_sign(m, k), 0.0))]
        }
    }))
}

pub fn anticommutator(a: &FockOperator, b: &FockOperator) -> FockOperator {
    FockOperator::new(
        a.n_in,
        a.n_out,
        &a.entries * &b.entries + &b.entries * &a.entries,
    )
}

/// Single-cell `a^+`, `a^-` and the third Pauli matrix.
pub fn single_cell() -> (FockOperator, FockOperator, FockOperator) {
    let plus = creation(1, 1).expect("cell 1 of 1");
    let minus = annihilation(1, 1).expect("cell 1 of 1");
    let pauli = FockOperator::new(
        1,
        1,
        DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    );
    (plus, minus, pauli)
}

#[derive(Debug, Clone)]
pub struct PauliStringReport {
    /// `max |I^2 - 1|`
    pub square: f64,
    /// `max |{I, a^+}|`
    pub with_creation: f64,
    /// `max |{I, a^-}|`
    pub with_annihilation: f64,
    /// `max |{a_i^+, a_j^-} - δ_ij|` and friends over all `i, j <= N`
    pub canonical_relations: f64,
}

impl PauliStringReport {
    pub fn max_deviation(&self) -> f64 {
        self.square
            .max(self.with_creation)
            .max(self.with_annihilation)
            .max(self.canonical_relations)
    }
}

/// Checks `I^2 = 1`, `{I, a^±} = 0` and the canonical anticommutation
/// relations of the `N`-cell operators.
pub fn pauli_string_identity_checks(n: usize) -> Result<PauliStringReport> {
    let (plus, minus, pauli) = single_cell();
    let id = FockOperator::identity(1);
    let zero1 = FockOperator::zeros(1, 1);
    let square = pauli.compose(&pauli)?.max_deviation(&id);
    let with_creation = anticommutator(&pauli, &plus).max_deviation(&zero1);
    let with_annihilation = anticommutator(&pauli, &minus).max_deviation(&zero1);
    Ok(PauliStringReport {
        square,
        with_creation,
        with_annihilation,
        canonical_relations: canonical_relation_defect(n)?,
    })
}

/// Largest deviation from `{a_i^+, a_j^-} = δ_ij`, `{a_i^±, a_j^±} = 0`.
pub fn canonical_relation_defect(n: usize) -> Result<f64> {
    let id = FockOperator::identity(n);
    let zero = FockOperator::zeros(n, n);
    let cre: Vec<_> = (1..=n).map(|k| creation(k, n)).collect::<Result<_>>()?;
    let ann: Vec<_> = (1..=n).map(|k| annihilation(k, n)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { &id } else { &zero };
            worst = worst.max(anticommutator(&cre[i], &ann[j]).max_deviation(want));
            worst = worst.max(anticommutator(&cre[i], &cre[j]).max_deviation(&zero));
            worst = worst.max(anticommutator(&ann[i], &ann[j]).max_deviation(&zero));
        }
    }
    Ok(worst)
}

/// Index of the controlled block `{n_2 = n_3 = 1}` of three-cell gates with
/// target cell 1: `(|0,1,1>, |1,1,1>)` as `(6, 7)`.
pub(crate) const BLOCK: (usize, usize) = (0b110, 0b111);

fn two_to_one(table: impl Fn(bool, bool) -> bool) -> FockOperator {
    FockOperator::from_action(2, 1, |m| {
        let out = table(m & 1 != 0, m & 2 != 0) as usize;
        vec![(out, ONE)]
    })
}

fn with_block(block: [[C64; 2]; 2]) -> FockOperator {
    let mut op = FockOperator::identity(3);
    let (a, b) = BLOCK;
    op.entries[(a, a)] = block[0][0];
    op.entries[(a, b)] = block[0][1];
    op.entries[(b, a)] = block[1][0];
    op.entries[(b, b)] = block[1][1];
    op
}

pub fn not_matrix() -> FockOperator {
    let (plus, minus, _) = single_cell();
    plus.add(&minus)
}

pub fn and_matrix() -> FockOperator {
    two_to_one(|a, b| a && b)
}

pub fn or_matrix() -> FockOperator {
    two_to_one(|a, b| a || b)
}

pub fn xor_matrix() -> FockOperator {
    two_to_one(|a, b| a ^ b)
}

pub fn nand_matrix() -> FockOperator {
    two_to_one(|a, b| !(a && b))
}

/// Toffoli: flips cell 1 when cells 2 and 3 are both set.
pub fn cc_not_matrix() -> FockOperator {
    with_block([[ZERO, ONE], [ONE, ZERO]])
}

/// Deutsch gate `D(φ)`; on the controlled block it acts as
/// `[[i cos φ, sin φ], [sin φ, i cos φ]]`.
pub fn deutsch_matrix(phi: f64) -> FockOperator {
    let ic = C64::new(0.0, phi.cos());
    let s = C64::new(phi.sin(), 0.0);
    with_block([[ic, s], [s, ic]])
}

/// Phase correction `J`: `-i` on the controlled block, identity elsewhere.
pub fn j_matrix() -> FockOperator {
    let mi = C64::new(0.0, -1.0);
    with_block([[mi, ZERO], [ZERO, mi]])
}

/// `D'(φ) = J D(φ)`, a one-parameter group.
pub fn deutsch_prime_matrix(phi: f64) -> FockOperator {
    j_matrix()
        .compose(&deutsch_matrix(phi))
        .expect("three-cell operators compose")
}
