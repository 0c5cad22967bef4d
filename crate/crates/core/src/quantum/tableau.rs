//! Stabilizer-group simulator used as an oracle for the graph rewrite rules.
//!
//! Only stabilizer generators are stored. Deterministic measurement outcomes
//! are found by row reduction, which is adequate for a few hundred qubits.

use std::fmt;

use rand::{Rng, RngExt};

use super::clifford::{Clifford, Pauli, SignedPauli};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A Hermitian Pauli string `±P_0 ⊗ ... ⊗ P_{n-1}`; bits `(1, 1)` mean `Y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    neg: bool,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { n, x: vec![0; words(n)], z: vec![0; words(n)], neg: false }
    }

    pub fn single(n: usize, qubit: usize, pauli: Pauli) -> Self {
        let mut p = Self::identity(n);
        p.set(qubit, pauli);
        p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn set_negative(&mut self, neg: bool) {
        self.neg = neg;
    }

    pub fn get(&self, q: usize) -> Pauli {
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits(self.x[w] >> b & 1 == 1, self.z[w] >> b & 1 == 1)
    }

    pub fn set(&mut self, q: usize, pauli: Pauli) {
        let (w, b) = (q / 64, q % 64);
        let (x, z) = pauli.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        let mut parity = 0;
        for i in 0..self.x.len() {
            parity ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones() & 1;
        }
        parity == 0
    }

    /// `self <- self * other`; both must commute so the product is Hermitian.
    pub fn mul_assign(&mut self, other: &PauliString) {
        let (mut plus, mut minus) = (0u32, 0u32);
        for i in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[i], self.z[i], other.x[i], other.z[i]);
            let (xo1, y1, zo1) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (xo2, y2, zo2) = (x2 & !z2, x2 & z2, !x2 & z2);
            plus += ((xo1 & y2) | (y1 & zo2) | (zo1 & xo2)).count_ones();
            minus += ((y1 & xo2) | (zo1 & y2) | (xo1 & zo2)).count_ones();
            self.x[i] ^= x2;
            self.z[i] ^= z2;
        }
        let phase = (plus + 3 * minus + 2 * (self.neg as u32 + other.neg as u32)) % 4;
        debug_assert!(phase.is_multiple_of(2), "product of anticommuting Paulis");
        self.neg = phase == 2;
    }

    fn xor_bits(&mut self, other: &PauliString) {
        for i in 0..self.x.len() {
            self.x[i] ^= other.x[i];
            self.z[i] ^= other.z[i];
        }
    }

    /// Conjugates qubit `q` by `c`: `P -> c P c†`.
    pub fn conjugate_qubit(&mut self, q: usize, c: Clifford) {
        let image = c.conjugate(SignedPauli::plus(self.get(q)));
        self.set(q, image.pauli);
        self.neg ^= image.neg;
    }

    fn bit(&self, col: usize) -> bool {
        // columns: x_0..x_{n-1}, z_0..z_{n-1}
        let (v, q) = if col < self.n { (&self.x, col) } else { (&self.z, col - self.n) };
        v[q / 64] >> (q % 64) & 1 == 1
    }

    /// Copy keeping only `qubits`, renumbered in the given order.
    pub fn select(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (i, &q) in qubits.iter().enumerate() {
            out.set(i, self.get(q));
        }
        out.neg = self.neg;
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.neg { '-' } else { '+' })?;
        for q in 0..self.n {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureOutcome {
    /// `true` for eigenvalue `-1`.
    pub minus: bool,
    pub deterministic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl StabilizerTableau {
    /// `|0...0>`.
    pub fn zero_state(n: usize) -> Self {
        Self { n, rows: (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect() }
    }

    pub fn from_generators(n: usize, rows: Vec<PauliString>) -> Result<Self> {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("a pure state on {n} qubits needs {n} generators of length {n}")));
        }
        for (i, a) in rows.iter().enumerate() {
            if rows[i + 1..].iter().any(|b| !a.commutes(b)) {
                return Err(Error::InvalidArgument("generators do not commute".into()));
            }
        }
        let t = Self { n, rows };
        if t.rank() != t.rows.len() {
            return Err(Error::InvalidArgument("generators are dependent".into()));
        }
        Ok(t)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.rows
    }

    fn rank(&self) -> usize {
        reduce(self.rows.clone(), &columns(self.n, |_| 0)).len()
    }

    /// Measures `pauli` (sign ignored). A random outcome comes from `choose`.
    pub fn measure(&mut self, pauli: &PauliString, choose: impl FnOnce() -> bool) -> MeasureOutcome {
        let mut observable = pauli.clone();
        observable.neg = false;
        let Some(pivot) = self.rows.iter().position(|r| !r.commutes(&observable)) else {
            let minus = self.expectation_sign(&observable).expect("commuting Pauli of a pure state is in ± the group");
            return MeasureOutcome { minus, deterministic: true };
        };
        let pivot_row = self.rows[pivot].clone();
        for i in 0..self.rows.len() {
            if i != pivot && !self.rows[i].commutes(&observable) {
                self.rows[i].mul_assign(&pivot_row);
            }
        }
        let minus = choose();
        observable.neg = minus;
        self.rows[pivot] = observable;
        MeasureOutcome { minus, deterministic: false }
    }

    /// Measures a single-qubit Pauli with a random outcome from `rng`.
    pub fn measure_qubit<R: Rng>(&mut self, qubit: usize, basis: Pauli, rng: &mut R) -> MeasureOutcome {
        let p = PauliString::single(self.n, qubit, basis);
        self.measure(&p, || rng.random::<bool>())
    }

    /// `Some(true)` if `-P` is a stabilizer, `Some(false)` for `+P`, `None`
    /// if neither.
    pub fn expectation_sign(&self, pauli: &PauliString) -> Option<bool> {
        let order = columns(self.n, |_| 0);
        let reduced = reduce(self.rows.clone(), &order);
        let mut residual = pauli.clone();
        residual.neg = false;
        let mut acc = PauliString::identity(self.n);
        for (col, row) in &reduced {
            if residual.bit(*col) {
                residual.xor_bits(row);
                acc.mul_assign(row);
            }
        }
        residual.is_identity().then_some(acc.neg)
    }

    pub fn conjugate_qubit(&mut self, q: usize, c: Clifford) {
        for r in &mut self.rows {
            r.conjugate_qubit(q, c);
        }
    }

    /// Stabilizer of the `keep` qubits, assuming the others have been
    /// measured so the state factorizes. Qubits are renumbered in `keep`
    /// order.
    pub fn restrict_to(&self, keep: &[usize]) -> Result<StabilizerTableau> {
        let mut live = vec![false; self.n];
        for &q in keep {
            if q >= self.n || std::mem::replace(&mut live[q], true) {
                return Err(Error::InvalidArgument(format!("bad or repeated qubit {q}")));
            }
        }
        let order = columns(self.n, |q| if live[q] { 1 } else { 0 });
        let reduced = reduce(self.rows.clone(), &order);
        let rows: Vec<PauliString> = reduced
            .into_iter()
            .filter(|(col, _)| live[col % self.n])
            .map(|(_, r)| r.select(keep))
            .collect();
        if rows.len() != keep.len() {
            return Err(Error::InvalidArgument(format!(
                "kept qubits are entangled with the rest ({} of {} generators)",
                rows.len(),
                keep.len()
            )));
        }
        Ok(StabilizerTableau { n: keep.len(), rows })
    }

    /// Reduced row echelon form over the symplectic columns, with signs;
    /// equal groups give equal forms.
    pub fn canonical(&self) -> Vec<PauliString> {
        reduce(self.rows.clone(), &columns(self.n, |_| 0)).into_iter().map(|(_, r)| r).collect()
    }

    /// One generator per line in `±{I,X,Y,Z}^n` notation.
    pub fn to_text(&self) -> String {
        self.rows.iter().map(|r| format!("{r}\n")).collect()
    }
}

impl fmt::Display for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Column order for elimination: lower `class` first, then qubit, x before z.
fn columns(n: usize, class: impl Fn(usize) -> u8) -> Vec<usize> {
    let mut cols: Vec<usize> = (0..2 * n).collect();
    cols.sort_by_key(|&c| (class(c % n), c % n, c / n));
    cols
}

/// Fully reduced echelon form; returns `(pivot column, row)` in pivot order.
fn reduce(mut rows: Vec<PauliString>, order: &[usize]) -> Vec<(usize, PauliString)> {
    let mut out: Vec<(usize, PauliString)> = Vec::new();
    for &col in order {
        let Some(i) = rows.iter().position(|r| r.bit(col)) else { continue };
        let pivot = rows.swap_remove(i);
        for r in rows.iter_mut().filter(|r| r.bit(col)) {
            r.mul_assign(&pivot);
        }
        for (_, r) in out.iter_mut().filter(|(_, r)| r.bit(col)) {
            r.mul_assign(&pivot);
        }
        out.push((col, pivot));
    }
    out
}

/// Stabilizer generators `K_v = X_v ∏_{w ~ v} Z_w`; qubit `i` is the `i`-th
/// smallest vertex.
pub fn tableau_from_graph(graph: &Graph<usize>) -> StabilizerTableau {
    let vertices: Vec<usize> = graph.vertices().collect();
    let n = vertices.len();
    let index = |v: usize| vertices.binary_search(&v).expect("vertex of graph");
    let rows = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut r = PauliString::single(n, i, Pauli::X);
            for w in graph.neighbors(v) {
                r.set(index(w), Pauli::Z);
            }
            r
        })
        .collect();
    StabilizerTableau { n, rows }
}

/// Measures a single-qubit Pauli; `forced` fixes a random outcome
/// (`true` for `-1`), otherwise `rng` decides.
pub fn tableau_measure<R: Rng>(
    tableau: &mut StabilizerTableau,
    basis: Pauli,
    qubit: usize,
    forced: Option<bool>,
    rng: &mut R,
) -> MeasureOutcome {
    let p = PauliString::single(tableau.qubits(), qubit, basis);
    tableau.measure(&p, || forced.unwrap_or_else(|| rng.random::<bool>()))
}

pub fn stabilizer_groups_equal(a: &StabilizerTableau, b: &StabilizerTableau) -> bool {
    a.n == b.n && a.canonical() == b.canonical()
}
